"""Prove small exact values with the branch-and-bound solver."""

from flagcodes.flags import min_distance
from flagcodes.search import solve_flag_code

CASES = [
    (3, 2, 2, None),
    (3, 3, 2, None),
    (4, 2, 2, None),
    (4, 2, 3, None),
    (4, 2, 4, None),
    (5, 2, 3, (1, 2)),
]

for v, q, d, T in CASES:
    rep = solve_flag_code(v, q, d, T, time_limit=600)
    label = f"A_{q}({v},{d}" + (f";{set(T)})" if T else ")")
    dist = min_distance(rep.best_code)[0] if rep.best_code is not None else None
    print(f"{label:18s} = {rep.best_value:4d}  [{rep.status}, {rep.nodes_explored} nodes, "
          f"{rep.wall_time:.2f}s, witness distance {dist}]")
