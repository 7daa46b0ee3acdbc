from itertools import combinations

import pytest

from flagcodes.constructions import (
    CartesianCode, ExtensionField, InvalidParams, cartesian_code_5_2, cartesian_code_5_3, gabidulin_mrd,
    group_orbit_code, lift, max_distance_completion, mrd_cosets, mrd_size, partial_spread_flag_code,
    seed_search_singer, singer_orbit_code, spread_code, spread_subspaces,
)
from flagcodes.flags import enumerate_flags, max_distance, min_distance
from flagcodes.linalg import injection_distance, intersection_dim
from flagcodes.search import GroupAction, TooLarge, singer_generator


@pytest.mark.parametrize("q,N", [(2, 3), (3, 2), (2, 4)])
def test_extension_field(q, N):
    E = ExtensionField(q, N)
    els = E.elements()
    assert len(set(els)) == q**N
    one = E.power_of_a(0)
    for a in els[1:]:
        assert E.mul(a, E.power_of_a(-E.log[a])) == one
        assert E.frobenius(a, N) == a
    a, b = els[3], els[-1]
    assert E.frobenius(E.add(a, b)) == E.add(E.frobenius(a), E.frobenius(b))


@pytest.mark.parametrize("m,n,dp,q", [(2, 2, 2, 2), (2, 3, 2, 2), (3, 2, 2, 2), (3, 3, 2, 2),
                                      (2, 2, 1, 2), (2, 2, 2, 3), (3, 3, 3, 2)])
def test_gabidulin_codes_are_mrd(m, n, dp, q):
    code = gabidulin_mrd(m, n, dp, q)
    assert len(code) == mrd_size(m, n, dp, q)
    assert all(M.shape == (m, n) for M in code.words)
    assert code.computed_min_distance() == dp


def test_gabidulin_rejects_bad_distance():
    with pytest.raises(InvalidParams):
        gabidulin_mrd(2, 3, 3, 2)


def test_lifting_is_an_isometry():
    code = gabidulin_mrd(3, 3, 2, 2)
    words = code.words[:40]
    for a, b in combinations(words, 2):
        assert injection_distance(lift(a), lift(b)) == (a - b).rank()


def test_cosets_partition_the_matrix_space():
    code = gabidulin_mrd(2, 3, 2, 2)
    cosets = mrd_cosets(code)
    assert len(cosets) == 2 ** 6 // len(code)
    flat = [M.flat() for c in cosets for M in c]
    assert len(set(flat)) == 2 ** 6


@pytest.mark.parametrize("k,q", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_spreads(k, q):
    S = spread_subspaces(k, q)
    assert len(S) == q**k + 1
    assert all(intersection_dim(a, b) == 0 for a, b in combinations(S, 2))
    code = spread_code(k, q)
    assert len(code) == q**k + 1
    assert min_distance(code)[0] == max_distance(2 * k) == k * k


@pytest.mark.parametrize("k,q", [(2, 2), (2, 3), (3, 2)])
def test_partial_spread_codes_reach_maximum_distance(k, q):
    code = partial_spread_flag_code(k, q)
    assert len(code) == q ** (k + 1) + 1
    assert min_distance(code)[0] == max_distance(2 * k + 1)


def test_max_distance_completion_keeps_nesting():
    S = spread_subspaces(2, 2)
    tops = max_distance_completion(S, 3)
    assert len(tops) == len(S)


def test_singer_orbits():
    seed = enumerate_flags(3, 2)[0]
    code, dist = singer_orbit_code(3, 2, seed)
    assert len(code) == 7 and dist == min_distance(code)[0]
    code, power = seed_search_singer(4, 2, 4)
    assert len(code) == 5 and min_distance(code)[0] >= 4
    code, _ = seed_search_singer(3, 3, 2)
    assert len(code) == 13 and min_distance(code)[0] >= 2
    with pytest.raises(TooLarge):
        seed_search_singer(5, 2, 2, cap=100)


def test_group_orbit_is_closed():
    g = singer_generator(3, 2)
    seed = enumerate_flags(3, 2)[5]
    code = group_orbit_code(GroupAction([g]), seed)
    assert len(code) == 7
    assert group_orbit_code(GroupAction([g]), code.words[3]).words == code.words


def test_cartesian_codes_q2():
    c52 = cartesian_code_5_2(2)
    assert isinstance(c52, CartesianCode) and len(c52) == 512
    assert min_distance(c52.words)[0] >= 2
    assert len(c52.as_code()) == 512
    c53 = cartesian_code_5_3(2)
    assert len(c53) == 256 and min_distance(c53.words)[0] >= 3
    with pytest.raises(TooLarge):
        cartesian_code_5_2(3, cap=10000)
