"""Monte-Carlo lower estimate of a planner's order of instability.

The order of instability is the largest r such that the closures of r local
domains share a point.  We sample center pairs (A, B), look at a cloud of
pairs within projective distance ``delta`` of the center, and count how many
distinct rules the planner dispatches to inside the cloud.  The maximum
count over all centers is a lower estimate.

Most local domains of a first-match planner are lower dimensional (for
instance the pairs with <u, v> == 0 exactly), so uniformly random pairs
would never land in them.  Both the centers and the perturbations are
therefore *sparse*: each coordinate is zero with fixed probability and each
perturbation touches only a random subset of coordinates.  Exact zeros then
survive in floating point and the strict sign tests of the rules see them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tcrp.planner import MotionPlanner
from tcrp.projective import ProjectivePoint, proj_distance_array

CENTER_ZERO_PROB = 0.5
PERTURB_PROB = 0.25
CHUNK_CENTERS = 2048


@dataclass(frozen=True)
class InstabilityEstimate:
    order: int
    witness: tuple[ProjectivePoint, ProjectivePoint]
    rules_seen: tuple[int, ...]
    samples: int
    delta: float

    def to_record(self) -> dict:
        A, B = self.witness
        return {
            "estimate": self.order,
            "witness": {"a": A.rep.tolist(), "b": B.rep.tolist()},
            "rules_seen": [i + 1 for i in self.rules_seen],
            "samples": self.samples,
            "delta": self.delta,
        }


def _sparse_units(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    X = rng.standard_normal((count, dim))
    X[rng.random((count, dim)) < CENTER_ZERO_PROB] = 0.0
    empty = ~np.any(X != 0, axis=1)
    X[empty, rng.integers(0, dim, size=int(empty.sum()))] = 1.0
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _perturb(rng: np.random.Generator, X: np.ndarray, neighbors: int, eta: float) -> np.ndarray:
    C, d = X.shape
    P = rng.uniform(-eta, eta, size=(C, neighbors, d))
    P[rng.random((C, neighbors, d)) >= PERTURB_PROB] = 0.0
    Y = X[:, None, :] + P
    return Y / np.linalg.norm(Y, axis=-1, keepdims=True)


def _distinct_per_row(idx: np.ndarray) -> np.ndarray:
    s = np.sort(idx, axis=1)
    distinct = 1 + np.count_nonzero(np.diff(s, axis=1), axis=1)
    return distinct - (s[:, 0] < 0)


def estimate_instability(
    planner: MotionPlanner,
    samples: int,
    delta: float,
    seed: int = 0,
    neighbors: int = 16,
) -> InstabilityEstimate:
    """Sample ``samples`` perturbed pairs in clouds of ``neighbors`` around centers.

    Chunks of centers are drawn from generators keyed by (seed, chunk), so a
    larger ``samples`` only adds centers and the estimate never decreases.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if samples < 1 or neighbors < 1:
        raise ValueError("samples and neighbors must be positive")
    d = planner.n + 1
    # perturbation norm <= delta / 2 keeps every cloud point within delta
    eta = delta / (2.0 * math.sqrt(d))
    n_centers = -(-samples // neighbors)

    best = (-1, None, ())
    for chunk in range(-(-n_centers // CHUNK_CENTERS)):
        rng = np.random.default_rng([seed, chunk])
        take = min(CHUNK_CENTERS, n_centers - chunk * CHUNK_CENTERS)
        U0 = _sparse_units(rng, CHUNK_CENTERS, d)
        V0 = _sparse_units(rng, CHUNK_CENTERS, d)
        U = _perturb(rng, U0, neighbors, eta)
        V = _perturb(rng, V0, neighbors, eta)
        U0, V0, U, V = U0[:take], V0[:take], U[:take], V[:take]

        cloud_u = np.concatenate([U0[:, None, :], U], axis=1).reshape(-1, d)
        cloud_v = np.concatenate([V0[:, None, :], V], axis=1).reshape(-1, d)
        near = np.maximum(
            proj_distance_array(cloud_u, np.repeat(U0, neighbors + 1, axis=0)),
            proj_distance_array(cloud_v, np.repeat(V0, neighbors + 1, axis=0)),
        ) <= delta
        idx = planner.select_array(cloud_u, cloud_v)
        idx = np.where(near, idx, -1).reshape(take, neighbors + 1)
        counts = _distinct_per_row(idx)
        j = int(np.argmax(counts))
        if counts[j] > best[0]:
            seen = tuple(int(i) for i in np.unique(idx[j]) if i >= 0)
            best = (int(counts[j]), (U0[j], V0[j]), seen)

    order, (a, b), seen = best
    witness = (ProjectivePoint(planner.n, a), ProjectivePoint(planner.n, b))
    return InstabilityEstimate(order, witness, seen, samples, delta)


def instability_order_estimate(planner: MotionPlanner, samples: int, delta: float, seed: int = 0) -> int:
    return estimate_instability(planner, samples, delta, seed=seed).order
