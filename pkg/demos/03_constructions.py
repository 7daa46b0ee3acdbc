"""Build the explicit codes and check each with the pairwise distance checker."""

from flagcodes.constructions import (
    cartesian_code_5_2, cartesian_code_5_3, fixture_155, gabidulin_mrd, lift, partial_spread_flag_code,
    seed_search_singer, spread_code,
)
from flagcodes.flags import min_distance
from flagcodes.linalg import injection_distance


def show(name, code):
    print(f"{name:28s} size {len(code):4d}  distance {min_distance(code.words)[0]}")


mrd = gabidulin_mrd(2, 3, 2, 2)
print(f"Gabidulin 2x3, d'=2: {len(mrd)} words, rank distance {mrd.computed_min_distance()}")
a, b = mrd.words[1], mrd.words[2]
print(f"  rank distance {(a - b).rank()} equals lifted distance {injection_distance(lift(a), lift(b))}")

show("spread code k=2", spread_code(2, 2))
show("spread code k=3", spread_code(3, 2))
show("partial spread code k=2", partial_spread_flag_code(2, 2))
code, power = seed_search_singer(4, 2, 3)
show(f"Singer orbit (sigma^{power}) v=4", code)
show("fixture: 5 Singer orbits", fixture_155())
show("Cartesian (line, plane)", cartesian_code_5_2(2))
show("Cartesian full type", cartesian_code_5_3(2))
