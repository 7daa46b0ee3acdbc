"""Shrink the search with a prescribed group and export the model."""

import tempfile
from pathlib import Path

from flagcodes.linalg import MatrixFq
from flagcodes.search import GroupAction, export_ilp, kramer_mesner, parse_lp, solve

singer = GroupAction([MatrixFq.from_text("0,1,0,0,0;0,0,1,0,0;0,0,0,1,0;0,0,0,0,1;1,0,1,1,1", 2)])
hyperplane = GroupAction([MatrixFq.from_text("1,0,0,0,0;0,0,1,0,0;0,0,0,1,0;0,0,0,0,1;0,1,1,0,0", 2)])

for name, group in [("order 31", singer), ("order 15", hyperplane)]:
    km = kramer_mesner(group, 5, 2, 2)
    print(f"{name}: {km.ncols} orbit columns, {km.nrows} rows (d=2)")

km = kramer_mesner(singer, 5, 2, 4)
rep = solve(km)
print(f"\nd=4 under the Singer group: {rep.best_value} flags, {rep.status}")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "model.lp"
    export_ilp(km, path)
    back = parse_lp(path.read_text())
    print(f"LP file: {len(path.read_text().splitlines())} lines, re-read optimum {solve(back).best_value}")
