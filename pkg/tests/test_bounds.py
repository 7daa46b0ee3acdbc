import pytest

from flagcodes import bounds
from flagcodes.flags import count_flags, distance_matrix, enumerate_flags, max_distance
from flagcodes.qcombin import gaussian_int

# code sizes realised by the constructions and exact searches of this package
REALISED_Q2 = {(3, 2): 7, (4, 2): 105, (4, 3): 15, (4, 4): 5, (5, 4): 155, (5, 6): 9}


def test_upper_bounds_dominate_realised_codes():
    for (v, d), size in REALISED_Q2.items():
        for res in bounds.all_upper_bounds(v, d, 2).values():
            assert res.value_at_q >= size, (v, d, res)


@pytest.mark.parametrize("v", [3, 4, 5])
def test_best_bound_is_monotone_in_d(v):
    values = [bounds.best_upper_bound(v, d, 2).value_at_q for d in range(1, max_distance(v) + 1)]
    assert values[0] == count_flags(v, 2)
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_anticode_candidates_cover_r_set():
    cands = bounds.anticode_candidates(4, 2)
    assert {r for r, _ in cands} == {(0, 2, 1), (1, 0, 1), (1, 2, 0)}
    assert min(expr(2) for _, expr in cands) == 105


@pytest.mark.parametrize("v,q", [(3, 2), (3, 3), (4, 2)])
def test_ball_sizes_against_distance_matrix(v, q):
    flags = enumerate_flags(v, q)
    D = distance_matrix(flags)
    for radius in range(max_distance(v) + 1):
        expected = int((D[0] <= radius).sum())
        assert bounds.ball_size(v, q, None, radius) == expected
        assert bounds.ball_size(v, q, None, radius, center=flags[-1]) == expected


def test_sphere_bounds():
    n = count_flags(4, 2)
    pack = bounds.sphere_packing_bound(4, 3, 2)
    cover = bounds.sphere_covering_bound(4, 3, 2)
    assert pack.value_at_q == n // bounds.ball_size(4, 2, None, 1)
    assert cover.value_at_q == -(-n // bounds.ball_size(4, 2, None, 2))
    assert cover.value_at_q <= 15 <= pack.value_at_q


def test_cdc_values():
    assert bounds.cdc_value(6, 3, 3, 2).value == 9
    assert bounds.cdc_value(5, 2, 2, 2).value == 9
    assert bounds.cdc_value(4, 1, 2, 2).value == gaussian_int(4, 2, 2)
    assert bounds.cdc_value(7, 2, 2, 2).value == 41
    assert bounds.cdc_value(7, 3, 3, 2).value == 17
    with pytest.raises(bounds.InvalidParams):
        bounds.cdc_value(4, 0, 2, 2)


def test_cdc_bound_requires_distance_condition():
    assert bounds.cdc_bound(5, 6, 2).value_at_q == 9
    assert bounds.cdc_bound(6, 9, 2).value_at_q == 9


def test_johnson_recursion():
    assert bounds.johnson_bound(6, 6, 2).value_at_q == 63 * 9
    assert bounds.johnson_bound(4, 2, 2).value_at_q == 15 * 7


def test_beta_matches_leading_degree_for_anticode_cases():
    # where the best anticode bound is a polynomial its degree can not beat beta
    for v, d in [(4, 2), (5, 2), (5, 3), (5, 5), (6, 7), (6, 8)]:
        best = bounds.best_anticode_bound(v, d, 2)
        assert best.symbolic.as_polynomial().degree >= bounds.beta_exponent(v, d)


def test_non_full_bounds():
    assert bounds.best_upper_bound(6, 5, 2, (2, 3, 4)).value_at_q == 189
    assert bounds.best_anticode_bound(6, 5, 2, (2, 3, 4)).value_at_q == 217
    assert bounds.best_upper_bound(7, 3, 2, (3, 4)).value_at_q == 3429


def test_cartesian_anticode_is_weaker():
    flag = bounds.best_anticode_bound(5, 2, 2, (2, 3)).value_at_q
    cart = bounds.best_cartesian_anticode_bound(5, 2, 2, (2, 3)).value_at_q
    assert cart >= flag
    assert cart >= 512


def test_table_with_cache_and_render():
    cache = bounds.parse_results_cache("# v d q T size source\n5 2 2 full 3069 singer-search\n")
    assert cache[0]["size"] == 3069 and cache[0]["T"] == (1, 2, 3, 4)
    rows = bounds.bounds_table(range(2, 6), 2, cache)
    cell = rows[3][1]
    assert (cell.v, cell.d, cell.upper.value_at_q, cell.lower) == (5, 2, 3255, 3069)
    text = bounds.render_table(rows, "text")
    assert "3069" in text and "3255" in text
    csv = bounds.render_table(rows, "csv")
    assert csv.splitlines()[0].startswith("v,")
    with pytest.raises(ValueError):
        bounds.parse_results_cache("5 2")


def test_best_method_table_is_at_least_as_tight():
    rec = bounds.bounds_table(range(2, 7), 2)
    best = bounds.bounds_table(range(2, 7), 2, method="best")
    for r1, r2 in zip(rec, best):
        for a, b in zip(r1, r2):
            assert b.upper.value_at_q <= a.upper.value_at_q
