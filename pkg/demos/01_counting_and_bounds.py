"""Count flags, list the minimal reduction vectors and compare upper bounds."""

from flagcodes import bounds
from flagcodes.flags import count_flags
from flagcodes.qcombin import count_flags_symbolic
from flagcodes.reduction import closure, compute_R

print("full flags over F_2")
for v in range(2, 8):
    print(f"  v={v}: {count_flags(v, 2)}")
print("symbolic count for v=4:", count_flags_symbolic(4))

print("\nminimal reduction vectors for v=5, d=5")
for r in compute_R(5, 5):
    print(f"  {r} closes to {closure(r, 5)}")

print("\nanticode bound for (5,2), every q:")
best = bounds.best_anticode_bound(5, 2, 2)
print(" ", best.symbolic.mixed_str(), f"= {best.value_at_q} at q=2")

print("\nall upper bounds for A_2(6,6)")
for kind, res in bounds.all_upper_bounds(6, 6, 2).items():
    print(f"  {kind:10s} {res.value_at_q}")

print("\nnon-full type {2,3,4} in F_2^6, d=5")
print("  anticode:", bounds.best_anticode_bound(6, 5, 2, (2, 3, 4)).value_at_q)
print("  best:    ", bounds.best_upper_bound(6, 5, 2, (2, 3, 4)).value_at_q)

print("\nbinary table")
print(bounds.render_table(bounds.bounds_table(range(2, 8), 2)))
