from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from flagcodes.qcombin import (
    InexactDivision, QPolynomial, QRational, count_flags_symbolic, divide_exact, evaluate, floor_eval,
    gaussian_binomial, gaussian_int,
)


def test_gaussian_small_values():
    assert gaussian_int(4, 2, 2) == 35
    assert gaussian_int(5, 2, 2) == 155
    assert gaussian_int(6, 3, 2) == 1395
    assert gaussian_int(4, 2, 3) == 130
    assert gaussian_int(3, 0, 5) == gaussian_int(3, 3, 5) == 1
    assert str(gaussian_binomial(5, 2)) == "q^6 + q^5 + 2q^4 + 2q^3 + 2q^2 + q + 1"


@given(st.integers(1, 8), st.integers(0, 8), st.sampled_from([2, 3, 4, 5]))
def test_gaussian_symmetry_and_pascal(v, k, q):
    k = min(k, v)
    assert gaussian_int(v, k, q) == gaussian_int(v, v - k, q)
    assert gaussian_binomial(v, k)(q) == gaussian_int(v, k, q)
    if 0 < k < v:
        assert gaussian_int(v, k, q) == gaussian_int(v - 1, k - 1, q) + q**k * gaussian_int(v - 1, k, q)


def test_flag_count_polynomial():
    assert str(count_flags_symbolic(4)) == "q^6 + 3q^5 + 5q^4 + 6q^3 + 5q^2 + 3q + 1"
    assert count_flags_symbolic(4, (1, 3))(2) == 15 * 7


def test_exact_division():
    a = gaussian_binomial(6, 1) * gaussian_binomial(5, 1)
    b = gaussian_binomial(2, 1)
    assert divide_exact(a * b, b) == a
    with pytest.raises(InexactDivision):
        divide_exact(a, b * b)


def test_rational_mixed_form():
    expr = QRational(gaussian_binomial(6, 1) * gaussian_binomial(5, 1), gaussian_binomial(2, 1) ** 2)
    assert expr.mixed_str() == "q^7 + 2q^5 + 3q^3 - q^2 + 3q - 2 + 3/(q + 1)"
    assert evaluate(expr, 2) == Fraction(63 * 31, 9)
    assert floor_eval(expr, 2) == 217


@given(st.lists(st.integers(-5, 5), max_size=6), st.lists(st.integers(-5, 5), max_size=6),
       st.integers(-4, 4))
def test_polynomial_arithmetic_matches_evaluation(a, b, x):
    pa, pb = QPolynomial(a), QPolynomial(b)
    assert (pa + pb)(x) == pa(x) + pb(x)
    assert (pa * pb)(x) == pa(x) * pb(x)
    assert (pa - pb)(x) == pa(x) - pb(x)


def test_subset_count_matches_gaussian():
    # k-subspaces of F_2^4 counted by brute force over spanning sets
    from flagcodes.linalg import enumerate_grassmannian
    for k in range(5):
        assert len(enumerate_grassmannian(4, k, 2)) == gaussian_int(4, k, 2)
    assert len(list(combinations(range(4), 2))) == 6
