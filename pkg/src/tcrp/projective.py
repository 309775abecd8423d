"""Lines through the origin, the projective metric, and planar rotation paths."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

UNIT_TOL = 1e-12
ENDPOINT_TOL = 1e-9
# <u, v> at or below -1 + ANTIPODAL_TOL leaves no unique rotation plane.
ANTIPODAL_TOL = 1e-12
# |v - <u,v>u| below this is treated as v == u (zero-angle segment).
PERP_TOL = 1e-13
CANONICAL_TOL = 1e-12


class DegenerateRotationError(ValueError):
    """Raised when asked to rotate a vector onto its own negative."""


def _unit(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(nrm == 0):
        raise ValueError("zero vector does not span a line")
    return x / nrm


def canonical_array(x: np.ndarray) -> np.ndarray:
    """Flip each row so its first coordinate with |x_i| > 1e-12 is positive."""
    x = np.array(x, dtype=float)
    big = np.abs(x) > CANONICAL_TOL
    first = np.argmax(big, axis=-1)
    lead = np.take_along_axis(x, first[..., None], axis=-1)
    return np.where(lead < 0, -x, x)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of RP^n, held as a unit representative of the line.

    ``rep`` is kept exactly as given (up to normalization); equality and
    hashing go through the canonical representative, so ``[u] == [-u]``.
    """

    n: int
    rep: np.ndarray

    def __post_init__(self):
        rep = np.array(self.rep, dtype=float).ravel()
        if rep.size != self.n + 1:
            raise ValueError(f"RP^{self.n} needs {self.n + 1} coordinates, got {rep.size}")
        if abs(np.linalg.norm(rep) - 1.0) > UNIT_TOL:
            raise ValueError("representative must be a unit vector; use ProjectivePoint.from_vector")
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> ProjectivePoint:
        x = np.asarray(x, dtype=float).ravel()
        if x.size < 2:
            raise ValueError("need at least 2 coordinates")
        return cls(x.size - 1, _unit(x))

    @property
    def dim(self) -> int:
        """Dimension of the ambient vector space, n + 1."""
        return self.n + 1

    def canonical(self) -> np.ndarray:
        return canonical_array(self.rep)

    def __neg__(self) -> ProjectivePoint:
        return ProjectivePoint(self.n, -self.rep)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.canonical(), other.canonical()))

    def __hash__(self):
        return hash((self.n, self.canonical().tobytes()))

    def __repr__(self):
        return f"ProjectivePoint(n={self.n}, rep={np.array2string(self.rep, precision=6)})"


def proj_distance_array(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Angle between lines, rowwise, in [0, pi/2].

    Equal to arccos(|<u, v>|) for unit rows, but computed from the chord
    |u - v| (sign chosen so <u, v> >= 0), which keeps small angles accurate.
    """
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    dot = np.einsum("...i,...i->...", U, V)
    D = U - np.where((dot < 0)[..., None], -V, V)
    chord = np.sqrt(np.einsum("...i,...i->...", D, D))
    return 2.0 * np.arcsin(np.minimum(chord / 2.0, 1.0))


def proj_distance(A: ProjectivePoint, B: ProjectivePoint) -> float:
    if A.n != B.n:
        raise ValueError(f"cannot compare points of RP^{A.n} and RP^{B.n}")
    return float(proj_distance_array(A.rep, B.rep))


def filler_array(U: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to each row of ``U``, chosen deterministically."""
    U = np.atleast_2d(U)
    idx = np.argmin(np.abs(U), axis=-1)
    E = np.zeros_like(U)
    E[np.arange(U.shape[0]), idx] = 1.0
    W = E - np.sum(E * U, axis=-1, keepdims=True) * U
    W = W - np.sum(W * U, axis=-1, keepdims=True) * U
    return W / np.linalg.norm(W, axis=-1, keepdims=True)


def rotation_arrays(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Oriented rotation data from each row of ``U`` to the same row of ``V``.

    Returns ``(W, theta)`` with ``W`` orthonormal to ``U`` and
    ``cos(theta) U + sin(theta) W == V``.  ``theta`` lies in [0, pi).
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    V = np.atleast_2d(np.asarray(V, dtype=float))
    dot = np.einsum("ij,ij->i", U, V)
    if np.any(dot <= -1.0 + ANTIPODAL_TOL):
        bad = int(np.argmax(dot <= -1.0 + ANTIPODAL_TOL))
        raise DegenerateRotationError(f"v = -u has no unique rotation plane (row {bad})")
    P = V - dot[:, None] * U
    P = P - np.einsum("ij,ij->i", P, U)[:, None] * U
    pn = np.sqrt(np.einsum("ij,ij->i", P, P))
    flat = pn <= PERP_TOL
    theta = np.where(flat, 0.0, np.arctan2(pn, dot))
    W = P / np.where(flat, 1.0, pn)[:, None]
    if np.any(flat):
        W[flat] = filler_array(U[flat])
    return W, theta


@dataclass(frozen=True, eq=False)
class RotationSegment:
    """t -> [cos(t theta) u + sin(t theta) w] for t in [0, 1]."""

    u: np.ndarray
    w: np.ndarray
    theta: float

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        w = np.array(self.w, dtype=float)
        if abs(np.linalg.norm(u) - 1) > UNIT_TOL or abs(np.linalg.norm(w) - 1) > UNIT_TOL:
            raise ValueError("rotation segment needs unit vectors")
        if abs(float(u @ w)) > UNIT_TOL:
            raise ValueError("rotation segment needs w orthogonal to u")
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi)")
        u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "theta", float(self.theta))

    def at(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        return np.cos(s * self.theta) * self.u + np.sin(s * self.theta) * self.w

    @property
    def start(self) -> np.ndarray:
        return self.u

    @property
    def end(self) -> np.ndarray:
        return self.at(1.0)

    def to_record(self, duration: float) -> dict:
        return {"u": self.u.tolist(), "w": self.w.tolist(), "theta": self.theta, "duration": duration}


@dataclass(frozen=True, eq=False)
class MotionPath:
    """Concatenation of constant-speed rotation segments in RP^n."""

    n: int
    segments: tuple[RotationSegment, ...]
    durations: tuple[float, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        durs = tuple(float(d) for d in self.durations)
        if not segs or len(segs) != len(durs):
            raise ValueError("need one positive duration per segment")
        if any(d <= 0 for d in durs) or abs(sum(durs) - 1.0) > 1e-12:
            raise ValueError(f"durations must be positive and sum to 1, got {durs}")
        for a, b in zip(segs, segs[1:]):
            if proj_distance_array(a.end, b.start) > ENDPOINT_TOL:
                raise ValueError("consecutive segments do not meet")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "durations", durs)

    @property
    def start(self) -> ProjectivePoint:
        return ProjectivePoint.from_vector(self.segments[0].start)

    @property
    def end(self) -> ProjectivePoint:
        return ProjectivePoint.from_vector(self.segments[-1].end)

    def sample_array(self, ts) -> np.ndarray:
        """Representatives at each parameter in ``ts``, shape ``(len(ts), n + 1)``."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if np.any((ts < 0) | (ts > 1)):
            raise ValueError("path parameter must lie in [0, 1]")
        edges = np.concatenate([[0.0], np.cumsum(self.durations)])
        edges[-1] = 1.0
        k = np.clip(np.searchsorted(edges, ts, side="right") - 1, 0, len(self.segments) - 1)
        out = np.empty((ts.size, self.n + 1))
        for i, seg in enumerate(self.segments):
            sel = k == i
            if np.any(sel):
                s = np.clip((ts[sel] - edges[i]) / self.durations[i], 0.0, 1.0)
                out[sel] = seg.at(s)
        return out

    def sample(self, t: float) -> ProjectivePoint:
        return ProjectivePoint.from_vector(self.sample_array([t])[0])

    def to_record(self, resolution: int = 101) -> dict:
        if resolution < 2:
            raise ValueError("resolution must be at least 2")
        ts = np.linspace(0.0, 1.0, resolution)
        pts = self.sample_array(ts)
        return {
            "n": self.n,
            "segments": [s.to_record(d) for s, d in zip(self.segments, self.durations)],
            "samples": [{"t": float(t), "coords": p.tolist()} for t, p in zip(ts, pts)],
        }


def constant_path(u) -> MotionPath:
    u = _unit(np.asarray(u, dtype=float).ravel())
    w = filler_array(u)[0]
    return MotionPath(u.size - 1, (RotationSegment(u, w, 0.0),), (1.0,))


def rotate_oriented(u, v) -> MotionPath:
    """Rotate ``u`` onto ``v`` in their common plane, sweeping the angle in (0, pi).

    ``u == v`` gives the constant path; ``v == -u`` raises
    :class:`DegenerateRotationError`.
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.size != v.size:
        raise ValueError("dimension mismatch")
    W, theta = rotation_arrays(u[None], v[None])
    return MotionPath(u.size - 1, (RotationSegment(u, W[0], float(theta[0])),), (1.0,))


def concat(p1: MotionPath, p2: MotionPath, weight: float = 0.5) -> MotionPath:
    """Run ``p1`` during the first ``weight`` of the time and ``p2`` after."""
    if not 0.0 < weight < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    if p1.n != p2.n:
        raise ValueError("paths live in different projective spaces")
    if proj_distance_array(p1.segments[-1].end, p2.segments[0].start) > ENDPOINT_TOL:
        raise ValueError("end of the first path is not the start of the second")
    segs = p1.segments + p2.segments
    durs = tuple(d * weight for d in p1.durations) + tuple(d * (1.0 - weight) for d in p2.durations)
    # renormalize away rounding in the sum
    total = sum(durs)
    return MotionPath(p1.n, segs, tuple(d / total for d in durs))
