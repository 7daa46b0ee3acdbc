import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from flagcodes.linalg import (
    AmbientMismatch, MatrixFq, SingularMatrix, Subspace, apply, dual, enumerate_grassmannian,
    injection_distance, intersection, intersection_dim, is_subspace, lattice, rref, subspace_distance,
    subspace_sum, sum_dim,
)
from flagcodes.qcombin import gaussian_int


def _span(U: Subspace) -> set:
    """All vectors of U, by brute force over coefficient tuples."""
    F = U.field
    out = set()
    for coeffs in product(range(U.q), repeat=U.dim):
        x = [0] * U.v
        for c, row in zip(coeffs, U.rows):
            for j, a in enumerate(row):
                x[j] = F.add(x[j], F.mul(c, a))
        out.add(tuple(x))
    return out


def _random_subspace(rng, v, q, k):
    return rng.choice(enumerate_grassmannian(v, k, q))


def test_rref_is_canonical():
    U = Subspace.from_rows([(1, 1, 0, 1), (0, 1, 1, 1)], 2)
    W = Subspace.from_rows([(1, 0, 1, 0), (1, 1, 0, 1)], 2)
    assert U == W
    assert U.rows == ((1, 0, 1, 0), (0, 1, 1, 1))
    assert U.pivots == (0, 1)


@pytest.mark.parametrize("v,q", [(3, 2), (4, 2), (3, 3), (3, 4), (2, 5)])
def test_grassmannian_sizes_and_spans(v, q):
    seen = set()
    for k in range(v + 1):
        spaces = enumerate_grassmannian(v, k, q)
        assert len(spaces) == gaussian_int(v, k, q)
        for U in spaces:
            span = frozenset(_span(U))
            assert len(span) == q**k
            seen.add(span)
    assert len(seen) == sum(gaussian_int(v, k, q) for k in range(v + 1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(4, 2), (3, 3), (3, 4), (5, 2)]), st.integers(0, 10**6))
def test_sum_and_intersection_by_brute_force(vq, seed):
    v, q = vq
    rng = random.Random(seed)
    U = _random_subspace(rng, v, q, rng.randint(0, v))
    W = _random_subspace(rng, v, q, rng.randint(0, v))
    su, sw = _span(U), _span(W)
    assert _span(intersection(U, W)) == su & sw
    assert intersection_dim(U, W) == intersection(U, W).dim
    assert sum_dim(U, W) == subspace_sum(U, W).dim == U.dim + W.dim - intersection_dim(U, W)
    assert is_subspace(U, W) == su.issubset(sw)
    assert injection_distance(U, W) == max(U.dim, W.dim) - intersection_dim(U, W)
    assert subspace_distance(U, W) == U.dim + W.dim - 2 * intersection_dim(U, W)


@pytest.mark.parametrize("v,q", [(4, 2), (3, 3), (3, 4)])
def test_dual_is_orthogonal_involution(v, q):
    for k in range(v + 1):
        for U in enumerate_grassmannian(v, k, q):
            D = dual(U)
            assert D.dim == v - k
            assert dual(D) == U
            F = U.field
            for a in U.rows:
                for b in D.rows:
                    acc = 0
                    for x, y in zip(a, b):
                        acc = F.add(acc, F.mul(x, y))
                    assert acc == 0


def test_matrix_inverse_and_apply():
    g = MatrixFq.from_text("0,1,0;0,0,1;1,1,0", 2)
    assert g @ g.inverse() == MatrixFq.identity(3, 2)
    lines = enumerate_grassmannian(3, 2, 2)
    images = {apply(g, L) for L in lines}
    assert images == set(lines)
    with pytest.raises(SingularMatrix):
        MatrixFq.from_text("1,1;1,1", 2).inverse()
    with pytest.raises(AmbientMismatch):
        apply(MatrixFq.identity(2, 2), lines[0])


def test_apply_agrees_over_gf2_and_generic_path():
    rng = random.Random(3)
    for _ in range(20):
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(4)]
        g = MatrixFq(3, tuple(map(tuple, rows)), 4)
        if not g.is_invertible():
            continue
        U = _random_subspace(rng, 4, 3, 2)
        img = apply(g, U)
        assert img.dim == 2
        assert apply(g.inverse(), img) == U


def test_lattice_covers_and_permutations():
    L = lattice(4, 2)
    assert [L.size(k) for k in range(5)] == [1, 15, 35, 15, 1]
    for i, P in enumerate(L.levels[1]):
        for j in L.supers(1, i, 2):
            assert is_subspace(P, L.levels[2][j])
        assert len(L.supers(1, i, 2)) == 7
    for j, W in enumerate(L.levels[3]):
        assert len(L.subs(3, j, 2)) == 7
    g = MatrixFq.from_text("0,1,0,0;0,0,1,0;0,0,0,1;1,1,0,0", 2)
    perm = L.perm(g)
    for k in range(5):
        assert sorted(perm[k]) == list(range(L.size(k)))
        for i, U in enumerate(L.levels[k]):
            assert L.levels[k][perm[k][i]] == apply(g, U)


def test_text_round_trip():
    U = rref([(1, 2, 0), (0, 1, 1)], 3)
    assert Subspace.from_text(U.to_text(), 3, 3) == U
    assert Subspace.from_text("", 3, 3).dim == 0
