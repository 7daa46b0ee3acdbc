import pytest
from hypothesis import given, strategies as st

from flagcodes.reduction import (
    InvalidVector, ReductionVector, ShapeMismatch, box, check_vector, closure, compute_R, deficit, is_closed, preceq,
    u_values,
)


def test_u_values_and_closure():
    assert u_values((1, 0, 1), 4) == (1, 0, 3)
    assert closure((1, 0, 1), 4) == (1, 1, 1)
    assert is_closed((1, 1, 1), 4)
    assert deficit((0, 0, 0), 4) == 4


def test_check_vector():
    with pytest.raises(InvalidVector):
        check_vector((2, 0, 0), 4)
    with pytest.raises(ShapeMismatch):
        check_vector((1, 0), 4)


def test_r_sets_of_four():
    assert set(compute_R(4, 2)) == {(0, 2, 1), (1, 0, 1), (1, 2, 0)}
    assert set(compute_R(4, 3)) == {(0, 0, 1), (0, 2, 0), (1, 0, 0)}


@pytest.mark.parametrize("v", [4, 5, 6])
def test_r_sets_are_reversal_closed_antichains(v):
    for d in range(1, sum(min(i, v - i) for i in range(1, v)) + 1):
        R = compute_R(v, d)
        assert set(R) == {tuple(reversed(r)) for r in R}
        for r in R:
            assert deficit(r, v) < d
        for a in R:
            for b in R:
                if a != b:
                    assert not preceq(a, b, v)


def test_preceq_uses_closures():
    assert preceq((0, 1, 1, 0), (1, 0, 1, 0), 5)
    assert not preceq((1, 0, 1, 0), (0, 1, 1, 0), 5)


def test_non_full_type():
    assert closure((0, 3, 0), 6, (2, 3, 4)) == (1, 3, 1)
    assert all(len(r) == 3 for r in compute_R(6, 5, (2, 3, 4)))


@given(st.integers(2, 7), st.data())
def test_closure_is_a_closure_operator(v, data):
    m = [min(i, v - i) for i in range(1, v)]
    r = tuple(data.draw(st.integers(0, k)) for k in m)
    c = closure(r, v)
    assert closure(c, v) == c
    assert all(x >= y for x, y in zip(c, r))
    assert all(x <= k for x, k in zip(c, m))


def test_reduction_vector_wrapper():
    r = ReductionVector.make((1, 0, 0, 0), 5)
    assert tuple(r.closure()) == (1, 1, 0, 0)
    assert not r.closed
    assert len(list(box(4))) == 2 * 3 * 2
