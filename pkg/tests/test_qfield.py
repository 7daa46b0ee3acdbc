import pytest
from hypothesis import given, strategies as st

from flagcodes.qfield import (
    NotPrimePower, TooLarge, factor_prime_power, is_irreducible, is_prime_power, make_field,
    multiplicative_order, primitive_element,
)

QS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_factor_prime_power():
    assert factor_prime_power(8) == (2, 3)
    assert factor_prime_power(9) == (3, 2)
    assert factor_prime_power(7) == (7, 1)
    assert is_prime_power(49) and not is_prime_power(6) and not is_prime_power(1)
    with pytest.raises(NotPrimePower):
        factor_prime_power(12)


def test_too_large():
    with pytest.raises(TooLarge):
        make_field(2**20)


@pytest.mark.parametrize("q", QS)
def test_tables_form_a_field(q):
    F = make_field(q)
    a = primitive_element(F)
    assert multiplicative_order(F, a) == q - 1
    assert sorted(F.pow(a, i) for i in range(q - 1)) == list(range(1, q))
    for x in range(q):
        assert F.add(x, F.neg(x)) == 0
        assert F.add(x, 0) == x and F.mul(x, 1) == x
        if x:
            assert F.mul(x, F.inv(x)) == 1
    if F.e > 1:
        assert is_irreducible(list(F.modulus), F.p)


@pytest.mark.parametrize("q", [4, 8, 9])
def test_frobenius_is_additive(q):
    F = make_field(q)
    for a in range(q):
        for b in range(q):
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


@given(st.sampled_from(QS), st.data())
def test_ring_axioms(q, data):
    F = make_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a


def test_make_field_is_cached():
    assert make_field(4) is make_field(4)
