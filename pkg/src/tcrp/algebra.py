"""Cayley-Dickson arithmetic in dimensions 1, 2, 4, 8 and nonsingular maps.

The multiplication uses the doubling rule

    (q + Q e)(r + R e) = (q r - conj(R) Q) + (R q + Q conj(r)) e

applied recursively down to the reals.  Coordinates are ordered so that the
first half of a vector is ``q`` and the second half is ``Q``; for the
quaternions this gives the basis 1, i, j, k with ``i j = k``.

Everything here works on numpy arrays with a trailing coordinate axis, so a
batch of ``N`` pairs is evaluated in one call.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from tcrp.projective import ProjectivePoint

SUPPORTED_DIMS = (1, 2, 4, 8)

# |f(u, v)| below this on unit vectors counts as a vanishing value.
NONSINGULAR_TOL = 1e-12


class NonsingularityError(ArithmeticError):
    """Raised when a map that should be nonsingular vanishes on unit vectors."""


def _check_dim(d: int) -> None:
    if d not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported Cayley-Dickson dimension {d}; expected one of {SUPPORTED_DIMS}")


def conj_array(x: np.ndarray) -> np.ndarray:
    out = -np.asarray(x, dtype=float)
    out[..., 0] = -out[..., 0]
    return out


def cd_multiply_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cayley-Dickson product of arrays of shape ``(..., d)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x.shape[-1]
    if y.shape[-1] != d:
        raise ValueError(f"dimension mismatch: {d} vs {y.shape[-1]}")
    _check_dim(d)
    return _cd_mul(x, y)


def _cd_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x.shape[-1]
    if d == 1:
        return x * y
    h = d // 2
    q, Q = x[..., :h], x[..., h:]
    r, R = y[..., :h], y[..., h:]
    first = _cd_mul(q, r) - _cd_mul(conj_array(R), Q)
    second = _cd_mul(R, q) + _cd_mul(Q, conj_array(r))
    return np.concatenate([first, second], axis=-1)


@dataclass(frozen=True, eq=False)
class Hypercomplex:
    """An element of the reals, complexes, quaternions or Cayley numbers."""

    dim: int
    coords: tuple[float, ...]

    def __post_init__(self):
        _check_dim(self.dim)
        if len(self.coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @classmethod
    def from_array(cls, a) -> Hypercomplex:
        a = np.asarray(a, dtype=float).ravel()
        return cls(a.size, tuple(a))

    @classmethod
    def unit(cls, dim: int, index: int) -> Hypercomplex:
        c = [0.0] * dim
        c[index] = 1.0
        return cls(dim, tuple(c))

    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __mul__(self, other: Hypercomplex) -> Hypercomplex:
        return cd_multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, Hypercomplex):
            return NotImplemented
        return self.dim == other.dim and self.coords == other.coords

    def __hash__(self):
        return hash((self.dim, self.coords))


def cd_multiply(x: Hypercomplex, y: Hypercomplex) -> Hypercomplex:
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    return Hypercomplex.from_array(cd_multiply_array(x.array(), y.array()))


def conjugate(x: Hypercomplex) -> Hypercomplex:
    return Hypercomplex.from_array(conj_array(x.array()))


@dataclass(frozen=True)
class NonsingularMap:
    """A bi-homogeneous map R^m x R^m -> R^k that vanishes only on zero arguments.

    ``evaluator`` takes two arrays of shape ``(..., input_dim)`` and returns an
    array of shape ``(..., output_dim)``.  ``diagonal_positive`` promises that
    the first coordinate of ``f(u, u)`` is positive for every ``u != 0``.
    Maps flagged ``bilinear`` expose their structure tensor
    ``C[k, i, j] = f(e_i, e_j)[k]``.
    """

    input_dim: int
    output_dim: int
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    diagonal_positive: bool = False
    name: str = "f"
    bilinear: bool = False

    @cached_property
    def structure(self) -> np.ndarray:
        if not self.bilinear:
            raise TypeError(f"{self.name} is not bilinear")
        eye = np.eye(self.input_dim)
        vals = self.evaluator(np.repeat(eye, self.input_dim, axis=0), np.tile(eye, (self.input_dim, 1)))
        return vals.reshape(self.input_dim, self.input_dim, self.output_dim).transpose(2, 0, 1).copy()

    def __call__(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if u.shape[-1] != self.input_dim or v.shape[-1] != self.input_dim:
            raise ValueError(f"{self.name} expects vectors of length {self.input_dim}")
        return self.evaluator(u, v)


def division_map(d: int) -> NonsingularMap:
    """The map ``f(u, v) = u * conj(v)`` on the d-dimensional division algebra."""
    _check_dim(d)

    def evaluate(u, v):
        return _cd_mul(u, conj_array(v))

    return NonsingularMap(d, d, evaluate, diagonal_positive=True, name=f"division_map({d})", bilinear=True)


def restrict_map(f: NonsingularMap, m: int) -> NonsingularMap:
    """Precompose ``f`` with the inclusion of R^m as the first m coordinates."""
    if not 1 <= m <= f.input_dim:
        raise ValueError(f"cannot restrict a map on R^{f.input_dim} to R^{m}")
    if m == f.input_dim:
        return f
    pad = f.input_dim - m

    def widen(x):
        return np.pad(x, [(0, 0)] * (x.ndim - 1) + [(0, pad)])

    def evaluate(u, v):
        return f.evaluator(widen(u), widen(v))

    return NonsingularMap(m, f.output_dim, evaluate, f.diagonal_positive, f"{f.name}|R^{m}", f.bilinear)


@dataclass(frozen=True)
class ScalarPairing:
    """The j-th coordinate (1-based) of a nonsingular map."""

    source: NonsingularMap
    index: int

    @property
    def positive(self) -> bool:
        return self.index == 1 and self.source.diagonal_positive

    @property
    def dim(self) -> int:
        return self.source.input_dim

    def __call__(self, u, v):
        if self.source.bilinear:
            M = self.source.structure[self.index - 1]
            return np.einsum("...j,...j->...", np.asarray(u, dtype=float) @ M, np.asarray(v, dtype=float))
        return self.source(u, v)[..., self.index - 1]

    def describe(self) -> str:
        return f"phi_{self.index} of {self.source.name}"


def coordinate_pairing(f: NonsingularMap, j: int) -> ScalarPairing:
    if not 1 <= j <= f.output_dim:
        raise IndexError(f"coordinate {j} out of range 1..{f.output_dim}")
    return ScalarPairing(f, j)


def axialize(f: NonsingularMap) -> Callable[[ProjectivePoint, ProjectivePoint], ProjectivePoint]:
    """Projectivize ``f``: the pair of lines (A, B) maps to the line through f(u, v)."""

    def g(A: ProjectivePoint, B: ProjectivePoint) -> ProjectivePoint:
        if A.dim != f.input_dim or B.dim != f.input_dim:
            raise ValueError(f"axial map of {f.name} expects lines in R^{f.input_dim}")
        val = f(A.rep, B.rep)
        if np.linalg.norm(val) < NONSINGULAR_TOL:
            raise NonsingularityError(f"{f.name} vanishes at ({A.rep}, {B.rep})")
        return ProjectivePoint.from_vector(val)

    return g
