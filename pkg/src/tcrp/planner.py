"""Motion planners on RP^n built from scalar pairings and tangent vector fields.

A planner is an ordered list of local rules.  Each rule has an open domain
(a strict sign condition on a bi-homogeneous function of representatives)
and produces a rotation path on that domain.  Dispatch picks the first rule
whose domain contains the pair, which makes the local domains disjoint:
``F_1 = U_1``, ``F_i = U_i minus (U_1 u ... u U_{i-1})``.

Rules evaluate on whole batches of representative pairs (arrays of shape
``(N, n + 1)``); the single-pair API runs a batch of one through the same code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from tcrp.algebra import NonsingularMap, ScalarPairing, coordinate_pairing, division_map, restrict_map
from tcrp.projective import (
    MotionPath,
    ProjectivePoint,
    RotationSegment,
    proj_distance_array,
    rotation_arrays,
)


class CoverageError(RuntimeError):
    """No rule of the planner contains the requested pair."""

    def __init__(self, A, B):
        super().__init__(f"no local rule contains the pair ({A!r}, {B!r})")
        self.pair = (A, B)


@dataclass(frozen=True)
class SegmentBatch:
    u: np.ndarray
    w: np.ndarray
    theta: np.ndarray

    def at(self, s: np.ndarray) -> np.ndarray:
        """Evaluate at local parameters ``s`` of shape (T,); returns (N, T, d)."""
        ang = self.theta[:, None] * s[None, :]
        out = np.einsum("nt,nd->ntd", np.cos(ang), self.u)
        out += np.einsum("nt,nd->ntd", np.sin(ang), self.w)
        return out


@dataclass(frozen=True)
class PathBatch:
    """N motion paths sharing one segment layout and duration split."""

    segments: tuple[SegmentBatch, ...]
    durations: tuple[float, ...]

    def __len__(self):
        return self.segments[0].u.shape[0]

    def path(self, i: int) -> MotionPath:
        segs = tuple(RotationSegment(s.u[i], s.w[i], float(s.theta[i])) for s in self.segments)
        n = self.segments[0].u.shape[1] - 1
        return MotionPath(n, segs, self.durations)

    def starts(self) -> np.ndarray:
        return self.segments[0].u

    def ends(self) -> np.ndarray:
        return self.segments[-1].at(np.array([1.0]))[:, 0, :]

    def point(self, t: float) -> np.ndarray:
        """Representatives at parameter ``t`` for every path, shape (N, d)."""
        edges = np.concatenate([[0.0], np.cumsum(self.durations)])
        edges[-1] = 1.0
        i = min(int(np.searchsorted(edges, t, side="right")) - 1, len(self.segments) - 1)
        seg = self.segments[i]
        ang = seg.theta * min(max((t - edges[i]) / self.durations[i], 0.0), 1.0)
        return np.cos(ang)[:, None] * seg.u + np.sin(ang)[:, None] * seg.w

    def deviation(self, other: PathBatch, ts) -> np.ndarray:
        """Rowwise sup over ``ts`` of the projective distance to ``other``."""
        out = np.zeros(len(self))
        for t in ts:
            np.maximum(out, proj_distance_array(self.point(float(t)), other.point(float(t))), out=out)
        return out

    def sample(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        edges = np.concatenate([[0.0], np.cumsum(self.durations)])
        edges[-1] = 1.0
        k = np.clip(np.searchsorted(edges, ts, side="right") - 1, 0, len(self.segments) - 1)
        N, d = self.segments[0].u.shape
        out = np.empty((N, ts.size, d))
        for i, seg in enumerate(self.segments):
            sel = k == i
            if np.any(sel):
                s = np.clip((ts[sel] - edges[i]) / self.durations[i], 0.0, 1.0)
                out[:, sel, :] = seg.at(s)
        return out


def _as_batch(A: ProjectivePoint, B: ProjectivePoint):
    return A.rep[None, :], B.rep[None, :]


@dataclass(frozen=True)
class LocalRule:
    """An open domain of pairs of lines with a continuous path rule on it.

    ``member(U, V)`` and ``build(U, V)`` act on arrays of unit representatives.
    ``margin(U, V)`` measures how deep inside the domain a pair sits (the
    size of the quantity whose nonvanishing defines the domain).
    """

    label: str
    kind: str
    member: Callable[[np.ndarray, np.ndarray], np.ndarray]
    build: Callable[[np.ndarray, np.ndarray], PathBatch]
    margin: Callable[[np.ndarray, np.ndarray], np.ndarray]
    parameters: dict = field(default_factory=dict)

    def contains(self, A: ProjectivePoint, B: ProjectivePoint) -> bool:
        return bool(self.member(*_as_batch(A, B))[0])

    def produce(self, A: ProjectivePoint, B: ProjectivePoint) -> MotionPath:
        if not self.contains(A, B):
            raise ValueError(f"pair lies outside the domain of rule {self.label}")
        return self.build(*_as_batch(A, B)).path(0)

    def to_record(self, index: int) -> dict:
        return {"index": index, "label": self.label, "kind": self.kind, "parameters": self.parameters}


@dataclass(frozen=True)
class MotionPlanner:
    n: int
    rules: tuple[LocalRule, ...]
    name: str = "planner"

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise ValueError("a planner needs at least one rule")

    def __len__(self):
        return len(self.rules)

    def select_array(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """0-based index of the first rule containing each pair; -1 if none does."""
        U = np.atleast_2d(U)
        V = np.atleast_2d(V)
        idx = np.full(U.shape[0], -1, dtype=np.int64)
        for i, rule in enumerate(self.rules):
            open_rows = np.flatnonzero(idx < 0)
            if open_rows.size == 0:
                break
            hit = rule.member(U[open_rows], V[open_rows])
            idx[open_rows[hit]] = i
        return idx

    def plan_arrays(self, U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, dict[int, tuple[np.ndarray, PathBatch]]]:
        """Dispatch a batch; returns the rule indices and, per rule used, (rows, paths)."""
        idx = self.select_array(U, V)
        if np.any(idx < 0):
            bad = int(np.argmax(idx < 0))
            raise CoverageError(U[bad], V[bad])
        out = {}
        for i in np.unique(idx):
            rows = np.flatnonzero(idx == i)
            out[int(i)] = (rows, self.rules[i].build(U[rows], V[rows]))
        return idx, out

    def select(self, A: ProjectivePoint, B: ProjectivePoint) -> int:
        self._check(A, B)
        i = int(self.select_array(*_as_batch(A, B))[0])
        if i < 0:
            raise CoverageError(A, B)
        return i

    def plan_with_index(self, A: ProjectivePoint, B: ProjectivePoint) -> tuple[int, MotionPath]:
        i = self.select(A, B)
        return i, self.rules[i].build(*_as_batch(A, B)).path(0)

    def plan(self, A: ProjectivePoint, B: ProjectivePoint) -> MotionPath:
        return self.plan_with_index(A, B)[1]

    def _check(self, A, B):
        if A.n != self.n or B.n != self.n:
            raise ValueError(f"planner works on RP^{self.n}, got RP^{A.n} and RP^{B.n}")

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "name": self.name,
            "rules": [r.to_record(i + 1) for i, r in enumerate(self.rules)],
        }


def plan(planner: MotionPlanner, A: ProjectivePoint, B: ProjectivePoint) -> MotionPath:
    return planner.plan(A, B)


# -- rules from scalar pairings -------------------------------------------


def _single(U, W, theta) -> PathBatch:
    return PathBatch((SegmentBatch(U, W, theta),), (1.0,))


def _pairing_member(phi, positive: bool):
    def member(U, V):
        nonzero = np.abs(phi(U, V)) > 0
        if positive:
            return nonzero
        return nonzero & (proj_distance_array(U, V) > 0)

    return member


def _pairing_build(phi, positive: bool):
    def build(U, V):
        val = phi(U, V)
        Vs = np.where((val < 0)[:, None], -V, V)
        if positive:
            same = proj_distance_array(U, V) == 0
            Vs = np.where(same[:, None], U, Vs)
        W, theta = rotation_arrays(U, Vs)
        return _single(U, W, theta)

    return build


def domain_U(phi, A: ProjectivePoint, B: ProjectivePoint) -> bool:
    """Pairs of distinct lines on which ``phi`` does not vanish."""
    return bool(_pairing_member(phi, False)(*_as_batch(A, B))[0])


def domain_Uprime(phi: ScalarPairing, A: ProjectivePoint, B: ProjectivePoint) -> bool:
    """Pairs on which a positive pairing does not vanish; contains the diagonal."""
    if not getattr(phi, "positive", False):
        raise ValueError("U' domains need a pairing with phi(u, u) > 0")
    return bool(_pairing_member(phi, True)(*_as_batch(A, B))[0])


def rule_from_pairing(phi, positive: bool = False, label: str | None = None) -> LocalRule:
    """Rotate A toward B in their plane, oriented by the sign of phi.

    Representatives are chosen with ``phi(u, v) > 0``; that pair is unique up
    to a simultaneous sign change, which leaves the path unchanged.
    """
    if positive and not getattr(phi, "positive", False):
        raise ValueError("positive rule requested for a pairing not tagged positive")
    desc = phi.describe() if hasattr(phi, "describe") else "phi"
    if label is None:
        idx = getattr(phi, "index", "")
        label = f"U'_phi{idx}" if positive else f"U_phi{idx}"
    return LocalRule(
        label=label,
        kind="Uprime" if positive else "U",
        member=_pairing_member(phi, positive),
        build=_pairing_build(phi, positive),
        margin=lambda U, V: np.abs(phi(U, V)),
        parameters={"pairing": desc},
    )


def planner_from_nonsingular(f: NonsingularMap) -> MotionPlanner:
    """One rule per output coordinate: U' for the first, U for the rest."""
    if not f.diagonal_positive:
        raise ValueError(f"{f.name} lacks diagonal positivity; the first rule would not cover the diagonal")
    if f.output_dim < 2:
        raise ValueError("need at least two output coordinates")
    rules = [rule_from_pairing(coordinate_pairing(f, 1), positive=True)]
    rules += [rule_from_pairing(coordinate_pairing(f, j)) for j in range(2, f.output_dim + 1)]
    return MotionPlanner(f.input_dim - 1, tuple(rules), name=f"nonsingular[{f.name}]")


def builtin_planner(n: int) -> MotionPlanner:
    """Planner for RP^n, 1 <= n <= 7, from the smallest division algebra containing R^(n+1)."""
    if not 1 <= n <= 7:
        raise ValueError(f"built-in planners exist for 1 <= n <= 7, got n={n}; use immersion_planner")
    d = next(d for d in (2, 4, 8) if d >= n + 1)
    return planner_from_nonsingular(restrict_map(division_map(d), n + 1))


# -- planners from spanning tangent fields ---------------------------------


@dataclass(frozen=True)
class TangentField:
    """An odd map u -> w(u) with w(u) orthogonal to u (a tangent field on RP^n)."""

    label: str
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, U):
        return self.func(np.atleast_2d(U))


def _veronese_field(n: int, i: int, j: int) -> TangentField:
    # E = e_i e_j^T + e_j e_i^T (or e_i e_i^T); w = (I - u u^T) E u
    def func(U):
        EU = np.zeros_like(U)
        if i == j:
            EU[:, i] = U[:, i]
        else:
            EU[:, i] = U[:, j]
            EU[:, j] = U[:, i]
        return EU - np.sum(U * EU, axis=-1, keepdims=True) * U

    label = f"E{i + 1}{j + 1}"
    return TangentField(label, func)


def veronese_fields(n: int) -> list[TangentField]:
    """Tangent fields from u -> u u^T into symmetric (n+1)x(n+1) matrices.

    One field per element of the standard basis of symmetric matrices, so
    (n+1)(n+2)/2 fields in total; they span the tangent space everywhere.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return [_veronese_field(n, i, j) for i in range(n + 1) for j in range(i, n + 1)]


def _acute_rule() -> LocalRule:
    def inner(U, V):
        return np.sum(U * V, axis=-1)

    return LocalRule(
        "U0",
        "acute",
        _pairing_member(inner, True),
        _pairing_build(inner, True),
        lambda U, V: np.abs(inner(U, V)),
        {"pairing": "<u, v>"},
    )


def _field_rule(i: int, fld: TangentField) -> LocalRule:
    def member(U, V):
        W = fld(U)
        return (np.linalg.norm(W, axis=-1) > 0) & (np.abs(np.sum(W * V, axis=-1)) > 0)

    def margin(U, V):
        W = fld(U)
        wn = np.linalg.norm(W, axis=-1)
        cos = np.abs(np.sum(W * V, axis=-1)) / np.where(wn > 0, wn, 1.0)
        return np.minimum(wn, cos)

    def build(U, V):
        W = fld(U)
        Wn = W / np.linalg.norm(W, axis=-1, keepdims=True)
        Wa, ta = rotation_arrays(U, Wn)
        c = np.sum(Wn * V, axis=-1)
        Vs = np.where((c < 0)[:, None], -V, V)
        Wb, tb = rotation_arrays(Wn, Vs)
        return PathBatch((SegmentBatch(U, Wa, ta), SegmentBatch(Wn, Wb, tb)), (0.5, 0.5))

    return LocalRule(f"U{i}", "field", member, build, margin, {"field": fld.label})


def immersion_planner(n: int, fields: Sequence[TangentField]) -> MotionPlanner:
    """k + 1 rules from k tangent fields spanning every tangent space of RP^n.

    Rule 0 sweeps the acute angle between A and B.  Rule i first turns A a
    quarter turn onto the line of its field vector w_i(A), then sweeps the
    acute angle from that line to B.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rules = [_acute_rule()] + [_field_rule(i + 1, f) for i, f in enumerate(fields)]
    return MotionPlanner(n, tuple(rules), name=f"immersion[{len(fields)} fields]")


def veronese_planner(n: int) -> MotionPlanner:
    p = immersion_planner(n, veronese_fields(n))
    return MotionPlanner(n, p.rules, name="veronese")


def default_planner(n: int) -> MotionPlanner:
    return builtin_planner(n) if n <= 7 else veronese_planner(n)
