import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagcodes.flags import min_distance
from flagcodes.linalg import lattice
from flagcodes.search import (
    BudgetExceeded, GroupAction, InfeasibleSolution, PackingSystem, build_conflict_graph, clique_families,
    companion_matrix, expand_solution, export_ilp, flag_orbit_indices, flag_symmetries,
    general_linear_generators, generate_clique_family, kramer_mesner, lp_text, matrix_order_is, parse_lp,
    singer_generator, singer_polynomial, solve, solve_flag_code, system_from_graph, transfer_solution,
    DistanceConditionViolated,
)


def _brute_force_packing(system: PackingSystem) -> int:
    best = 0
    n = system.ncols
    for mask in range(1 << n):
        x = [j for j in range(n) if mask >> j & 1]
        if system.is_feasible(x):
            best = max(best, sum(system.weights[j] for j in x))
    return best


@pytest.mark.parametrize("v,q", [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (2, 4)])
def test_singer_cycle_has_full_order(v, q):
    g = singer_generator(v, q)
    n = (q**v - 1) // (q - 1)
    poly = singer_polynomial(v, q)
    assert g == companion_matrix(poly, q)
    assert matrix_order_is(g, q**v - 1)
    assert GroupAction([g]).projective_order == n


def test_clique_family_counts_at_4_2():
    fams = {f.r: len(f) for f in clique_families(4, 2, 2)}
    assert fams == {(0, 2, 1): 105, (1, 0, 1): 105, (1, 2, 0): 105}
    fams = {f.r: len(f) for f in clique_families(4, 2, 3)}
    assert fams == {(0, 0, 1): 15, (0, 2, 0): 35, (1, 0, 0): 15}
    with pytest.raises(DistanceConditionViolated):
        generate_clique_family(4, 2, 2, None, (0, 0, 0))


def test_plain_system_sizes():
    km = kramer_mesner(None, 4, 2, 2)
    assert (km.ncols, km.nrows) == (315, 315)
    km = kramer_mesner(None, 4, 2, 3)
    assert (km.ncols, km.nrows) == (315, 65)


@pytest.mark.parametrize("v,d", [(4, 2), (4, 3), (3, 2)])
def test_kramer_mesner_rows_do_not_depend_on_representative(v, d):
    group = GroupAction([singer_generator(v, 2)])
    km = kramer_mesner(group, v, 2, d)
    col_of, _ = flag_orbit_indices(group, v, 2)
    L = lattice(v, 2)
    perm = L.perm(group.generators[0])
    rng = random.Random(v * 10 + d)
    km_rows = {tuple(sorted(r.items())) for r in km.rows}
    for fam in clique_families(v, 2, d):
        kpos = {k: i for i, k in enumerate(fam.keys)}
        for c in rng.sample(range(len(fam)), min(20, len(fam))):
            row = tuple(sorted(Counter(col_of[p] for p in fam.members[c]).items()))
            assert row in km_rows
            # walk to a random member of the clique orbit
            key = fam.keys[c]
            for _ in range(rng.randrange(1, 40)):
                key = tuple(perm[u][i] for u, i in zip(fam.key_dims, key))
            other = tuple(sorted(Counter(col_of[p] for p in fam.members[kpos[key]]).items()))
            assert other == row


def test_reduced_weights_are_orbit_lengths():
    km = kramer_mesner(GroupAction([singer_generator(5, 2)]), 5, 2, 4)
    assert km.weights == [len(o) for o in km.flag_orbits]
    assert sum(km.weights) == 9765
    rep = solve(km)
    assert rep.status == "optimal" and rep.best_value == 155
    assert min_distance(rep.best_code)[0] >= 4


def test_forced_zero_columns():
    system = PackingSystem(weights=[5, 1, 1], rows=[{0: 2, 1: 1}, {1: 1, 2: 1}])
    assert system.forced_zero() == {0}
    rep = solve(system)
    assert rep.best_value == 1 and 0 not in rep.best_x


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 11), st.integers(0, 10**6))
def test_solver_matches_brute_force_on_random_systems(n, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(rng.randint(0, 8)):
        size = rng.randint(1, n)
        rows.append({j: rng.choice([1, 1, 1, 2]) for j in rng.sample(range(n), size)})
    system = PackingSystem(weights=[rng.randint(1, 5) for _ in range(n)], rows=rows)
    rep = solve(system)
    assert rep.status == "optimal"
    assert rep.best_value == _brute_force_packing(system)
    assert system.is_feasible(rep.best_x)
    assert rep.best_value == sum(system.weights[j] for j in rep.best_x)


def test_system_from_graph_covers_edges():
    G = build_conflict_graph(3, 2, 2)
    edges = list(G.edges())
    system = system_from_graph(G.n, edges)
    pairs = set()
    for row in system.rows:
        cols = sorted(row)
        pairs.update((a, b) for i, a in enumerate(cols) for b in cols[i + 1:])
    assert set(edges) <= pairs
    adj = G.adjacency()
    assert all(adj[a, b] for a, b in pairs)
    assert solve(system).best_value == 7


def test_orbital_branching_agrees_with_plain_search():
    for v, q, d, T in [(3, 2, 2, None), (3, 3, 2, None), (4, 2, 3, None), (4, 2, 2, (1, 2)),
                       (4, 2, 3, (1, 2)), (4, 2, 2, (1, 3))]:
        plain = solve_flag_code(v, q, d, T, warm_start=False, use_symmetry=False, time_limit=60)
        orbital = solve_flag_code(v, q, d, T, warm_start=False, use_symmetry=True, time_limit=60)
        warm = solve_flag_code(v, q, d, T, time_limit=60)
        assert plain.status == orbital.status == warm.status == "optimal"
        assert plain.best_value == orbital.best_value == warm.best_value


def test_flag_symmetries_preserve_rows():
    system = kramer_mesner(None, 3, 2, 2)
    rows = {frozenset(r) for r in system.rows}
    for perm in flag_symmetries(system):
        assert sorted(perm) == list(range(system.ncols))
        assert {frozenset(perm[j] for j in r) for r in system.rows} == rows
    assert len(general_linear_generators(3, 3)) == 4


def test_transfer_solution_keeps_feasibility():
    reduced = kramer_mesner(GroupAction([singer_generator(4, 2)]), 4, 2, 2)
    full = kramer_mesner(None, 4, 2, 2)
    rep = solve(reduced)
    x = transfer_solution(reduced, rep.best_x, full)
    assert full.is_feasible(x)
    assert len(x) == rep.best_value == 105
    with pytest.raises(InfeasibleSolution):
        solve(full, initial=list(range(full.ncols)))


def test_degenerate_distance_gives_one_flag():
    rep = solve_flag_code(3, 2, 3)
    assert rep.status == "optimal" and rep.best_value == 1


def test_budget_reporting():
    system = kramer_mesner(None, 4, 2, 2)
    rep = solve(system, node_limit=5)
    assert rep.status == "feasible_aborted"
    assert rep.best_value <= rep.upper_bound
    assert system.is_feasible(rep.best_x)
    with pytest.raises(BudgetExceeded):
        solve(system, node_limit=5, raise_on_budget=True)


def test_lp_round_trip(tmp_path):
    km = kramer_mesner(GroupAction([singer_generator(4, 2)]), 4, 2, 3)
    back = parse_lp(lp_text(km))
    assert back.weights == km.weights
    assert back.rows == km.rows
    assert np.array_equal(back.dense(), km.dense())
    path = tmp_path / "m.lp"
    export_ilp(km, path)
    assert parse_lp(path.read_text()).rows == km.rows
    export_ilp(km, tmp_path / "m.json", "json")
    assert '"lengths"' in (tmp_path / "m.json").read_text()
    assert solve(back).best_value == solve(km).best_value == 15


def test_expand_solution_checks_distance():
    km = kramer_mesner(None, 3, 2, 2)
    with pytest.raises(InfeasibleSolution):
        expand_solution(km, [0, 1, 2])
