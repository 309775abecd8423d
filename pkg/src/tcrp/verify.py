"""Seeded property suites behind ``tcrp verify``."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from tcrp import bounds
from tcrp.algebra import division_map, restrict_map
from tcrp.planner import MotionPlanner, builtin_planner, veronese_planner
from tcrp.projective import proj_distance_array

SUITES = ("nonsingular", "planner", "bounds")

BIHOM_TOL = 1e-9
NORM_TOL = 1e-9
NONVANISH_MIN = 1e-6
ENDPOINT_TOL = 1e-9
FLIP_TOL = 1e-12
CONT_MARGIN = 0.1
CONT_STEP = 1e-6
CONT_TOL = 1e-3
PATH_TS = np.linspace(0.0, 1.0, 11)


@dataclass
class Check:
    name: str
    passed: bool
    count: int
    failures: int = 0
    detail: dict = field(default_factory=dict)


def random_units(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    X = rng.standard_normal((count, dim))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _maps():
    for d in (1, 2, 4, 8):
        base = division_map(d)
        for m in range(1, d + 1):
            yield d, m, restrict_map(base, m)


def nonsingular_suite(seed: int, samples: int) -> list[Check]:
    checks = []
    for d, m, f in _maps():
        rng = np.random.default_rng([seed, d, m])
        U = random_units(rng, samples, m)
        V = random_units(rng, samples, m)
        lam = rng.uniform(-2, 2, (samples, 1))
        mu = rng.uniform(-2, 2, (samples, 1))
        F = f(U, V)
        G = f(lam * U, mu * V)
        lm = (lam * mu)[:, 0]
        fn = np.linalg.norm(F, axis=1)
        bihom = np.linalg.norm(G - lm[:, None] * F, axis=1) / (1 + np.abs(lm) * fn)
        diag = f(U, U)[:, 0]
        tag = f"d={d},m={m}"
        checks += [
            Check(f"bihomogeneity[{tag}]", bool(np.all(bihom <= BIHOM_TOL)), samples,
                  int(np.sum(bihom > BIHOM_TOL)), {"max_rel_err": float(bihom.max())}),
            Check(f"nonvanishing[{tag}]", bool(fn.min() >= NONVANISH_MIN), samples,
                  int(np.sum(fn < NONVANISH_MIN)), {"min_norm": float(fn.min())}),
            Check(f"norm_multiplicative[{tag}]", bool(np.all(np.abs(fn - 1) <= NORM_TOL)), samples,
                  int(np.sum(np.abs(fn - 1) > NORM_TOL)), {"max_err": float(np.abs(fn - 1).max())}),
            Check(f"diagonal_positive[{tag}]", bool(f.diagonal_positive and np.all(diag >= 1 - NORM_TOL)),
                  samples, int(np.sum(diag < 1 - NORM_TOL)), {"min_first_coord": float(diag.min())}),
        ]
    return checks


def planner_checks(planner: MotionPlanner, seed: int, samples: int) -> list[Check]:
    d = planner.n + 1
    rng = np.random.default_rng([seed, d, len(planner)])
    U = random_units(rng, samples, d)
    V = random_units(rng, samples, d)
    tag = f"{planner.name},n={planner.n}"

    idx = planner.select_array(U, V)
    uncovered = int(np.sum(idx < 0))
    checks = [Check(f"coverage[{tag}]", uncovered == 0, samples, uncovered)]
    if uncovered:
        return checks

    _, batches = planner.plan_arrays(U, V)
    flipped_idx = planner.select_array(-U, V)
    end_err = 0.0
    flip_dev = 0.0
    for i, (rows, paths) in batches.items():
        end_err = max(end_err,
                      float(proj_distance_array(paths.starts(), U[rows]).max()),
                      float(proj_distance_array(paths.ends(), V[rows]).max()))
        flipped = planner.rules[i].build(-U[rows], V[rows])
        flip_dev = max(flip_dev, float(paths.deviation(flipped, PATH_TS).max()))
    flip_bad = int(np.sum(flipped_idx != idx))
    checks.append(Check(f"endpoints[{tag}]", end_err <= ENDPOINT_TOL, samples, 0 if end_err <= ENDPOINT_TOL else 1,
                        {"max_err": end_err}))
    checks.append(Check(f"flip_invariance[{tag}]", flip_bad == 0 and flip_dev <= FLIP_TOL, samples, flip_bad,
                        {"max_path_dev": flip_dev}))

    worst = 0.0
    tested = 0
    for rule in planner.rules:
        inside = rule.member(U, V) & (rule.margin(U, V) >= CONT_MARGIN)
        if not np.any(inside):
            continue
        Ur, Vr = U[inside], V[inside]
        Up = Ur + CONT_STEP * random_units(rng, len(Ur), d)
        Vp = Vr + CONT_STEP * random_units(rng, len(Vr), d)
        Up /= np.linalg.norm(Up, axis=1, keepdims=True)
        Vp /= np.linalg.norm(Vp, axis=1, keepdims=True)
        dev = rule.build(Ur, Vr).deviation(rule.build(Up, Vp), PATH_TS)
        worst = max(worst, float(dev.max()))
        tested += len(Ur)
    checks.append(Check(f"continuity[{tag}]", worst <= CONT_TOL, tested, 0 if worst <= CONT_TOL else 1,
                        {"max_path_dev": worst}))
    return checks


def planner_suite(seed: int, samples: int) -> list[Check]:
    checks = []
    for n in range(1, 8):
        p = builtin_planner(n)
        want = bounds.table_value(n)
        checks.append(Check(f"rule_count[builtin,n={n}]", len(p) == want, 1, int(len(p) != want),
                            {"rules": len(p), "table": want}))
        checks += planner_checks(p, seed, samples)
    for n in range(1, 6):
        checks += planner_checks(veronese_planner(n), seed, samples)
    return checks


def bounds_suite(seed: int = 0, samples: int = 0) -> list[Check]:
    # seed and samples are accepted for a uniform interface; this suite is exact
    agree = [n for n in range(1, 65) if bounds.zd_cuplength_rp_poly(n) != bounds.zd_cuplength_rp_binomial(n)]
    reports = [bounds.bounds_report(n, check=False) for n in range(1, bounds.TABLE_MAX_N + 1)]
    sandwich_bad = [r.n for r in reports if not r.sandwich_ok()]
    tight_lower = sorted(r.n for r in reports if r.tight_lower)
    tight_milgram = sorted(r.n for r in reports if r.upper_milgram == r.table_value)
    zd = [bounds.zd_cuplength_rp(n) for n in range(1, 65)]
    mono = all(a <= b for a, b in zip(zd, zd[1:]))
    pow2 = all(bounds.lower_bound_pow2(n) <= bounds.lower_bound_zdcl(n) for n in range(1, 65))
    cp_bad = []
    for n in range(1, 11):
        res = bounds.zd_cuplength_cp_details(n)
        if res.cup_length != 2 * n or res.cup_length != bounds.upper_bound_connectivity(2 * n, 1) - 1:
            cp_bad.append(n)
    return [
        Check("zd_oracle_agreement[n<=64]", not agree, 64, len(agree), {"mismatches": agree}),
        Check("table_sandwich[n<=23]", not sandwich_bad, len(reports), len(sandwich_bad), {"violations": sandwich_bad}),
        Check("tight_lower_set", tight_lower == [1, 2, 3, 4, 5, 6, 7, 8, 9, 16, 17], len(reports), 0,
              {"n": tight_lower}),
        Check("tight_milgram_set", tight_milgram == [1, 3, 5, 7, 13, 15, 21, 23], len(reports), 0,
              {"n": tight_milgram}),
        Check("zd_monotone[n<=64]", mono, 64, int(not mono)),
        Check("pow2_below_zdcl[n<=64]", pow2, 64, int(not pow2)),
        Check("cp_cuplength[n<=10]", not cp_bad, 10, len(cp_bad), {"failures": cp_bad}),
    ]


def run_suite(name: str, seed: int, samples: int) -> list[Check]:
    if name == "nonsingular":
        return nonsingular_suite(seed, samples)
    if name == "planner":
        return planner_suite(seed, samples)
    if name == "bounds":
        return bounds_suite(seed, samples)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")


def report(name: str, seed: int, samples: int) -> dict:
    checks = run_suite(name, seed, samples)
    return {
        "suite": name,
        "seed": seed,
        "samples": samples,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
