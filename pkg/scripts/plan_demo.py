#!/usr/bin/env python3
"""Plan a few motions in RP^3 and report which rule handles each pair."""
import numpy as np

from tcrp.planner import builtin_planner
from tcrp.projective import ProjectivePoint, proj_distance

rng = np.random.default_rng(0)
planner = builtin_planner(3)
for _ in range(6):
    A = ProjectivePoint.from_vector(rng.standard_normal(4))
    B = ProjectivePoint.from_vector(rng.standard_normal(4))
    i, path = planner.plan_with_index(A, B)
    length = sum(s.theta for s in path.segments)
    print(f"rule {planner.rules[i].label:<8} d(A,B)={proj_distance(A, B):.4f}  swept angle={length:.4f}")
