"""Finite fields F_q for prime powers q.

Elements are integers in ``[0, q)``.  For ``q = p^e`` with ``e > 1`` the
integer encodes the coefficients of a polynomial in ``x`` over F_p in base
``p`` (least significant digit = constant term), reduced modulo a fixed monic
primitive polynomial of degree ``e``.  Multiplication goes through
log/antilog tables.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

MAX_Q = 1 << 16


class NotPrimePower(ValueError):
    pass


class TooLarge(ValueError):
    pass


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``, or raise ``NotPrimePower``."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NotPrimePower(f"{q} has at least two distinct prime factors")
    return p, e


def is_prime_power(q: int) -> bool:
    try:
        factor_prime_power(q)
    except NotPrimePower:
        return False
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low -> high ---------------------

def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic_polys(p: int, deg: int):
    """Monic polynomials of degree ``deg``, in increasing base-p encoding."""
    for tail in product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(modulus) - 1
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def _x_power_table(modulus: list[int], p: int) -> list[int] | None:
    """Encodings of x^0, x^1, ... until the cycle closes; None if x is not primitive."""
    e = len(modulus) - 1
    q = p**e
    one = [1] + [0] * (e - 1)
    digits = one
    table = []
    for _ in range(q - 1):
        table.append(sum(c * p**i for i, c in enumerate(digits)))
        top = digits[-1]
        digits = [0] + digits[:-1]
        if top:
            digits = [(c - top * m) % p for c, m in zip(digits, modulus)]
        if digits == one:
            break
    if digits != one or len(table) != q - 1:
        return None
    return table


class FieldSpec:
    """The finite field with ``q = p**e`` elements.

    Immutable after construction; build through :func:`make_field`.
    """

    __slots__ = ("p", "e", "q", "modulus", "_exp", "_log", "_neg", "_inv")

    def __init__(self, q: int):
        if q > MAX_Q:
            raise TooLarge(f"q={q} exceeds {MAX_Q}")
        p, e = factor_prime_power(q)
        self.p, self.e, self.q = p, e, q
        if e == 1:
            self.modulus: tuple[int, ...] = ()
            g = least_primitive_root(p)
            exp = [1]
            for _ in range(p - 2):
                exp.append(exp[-1] * g % p)
        else:
            exp = None
            for cand in _monic_polys(p, e):
                if cand[0] == 0:
                    continue
                exp = _x_power_table(cand, p)
                if exp is not None:
                    break
            assert exp is not None
            assert is_irreducible(cand, p)
            self.modulus = tuple(cand)
        self._exp = tuple(exp)
        log = [0] * q
        for i, a in enumerate(exp):
            log[a] = i
        self._log = tuple(log)
        if e == 1:
            self._neg = tuple((-a) % p for a in range(q))
        elif p == 2:
            self._neg = tuple(range(q))
        else:
            self._neg = tuple(self._digitwise(a, 0, lambda x, _: -x) for a in range(q))
        self._inv = (0,) + tuple(exp[(-log[a]) % (q - 1)] for a in range(1, q))

    def _digitwise(self, a: int, b: int, op) -> int:
        p, out, scale = self.p, 0, 1
        for _ in range(self.e):
            out += (op(a % p, b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, lambda x, y: x + y)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.q)
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log base :meth:`primitive_element`."""
        if a == 0:
            raise ValueError("log of 0")
        return self._log[a]

    def exp(self, n: int) -> int:
        return self._exp[n % (self.q - 1)]

    def primitive_element(self) -> int:
        return self._exp[1] if self.q > 2 else 1

    def elements(self) -> range:
        return range(self.q)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def to_str(self, a: int) -> str:
        """Polynomial notation, e.g. ``x+1`` in F_4."""
        if self.e == 1:
            return str(a)
        terms = []
        for i in reversed(range(self.e)):
            c = (a // self.p**i) % self.p
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = "" if c == 1 and i > 0 else str(c)
            terms.append(coef + mono)
        return "+".join(terms) or "0"

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("F", self.q))


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build (and cache) F_q.  Raises ``NotPrimePower`` or ``TooLarge``."""
    if q > MAX_Q:
        raise TooLarge(f"q={q} exceeds {MAX_Q}")
    factor_prime_power(q)
    return FieldSpec(q)


def primitive_element(field: FieldSpec) -> int:
    return field.primitive_element()


def multiplicative_order(field: FieldSpec, a: int) -> int:
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    n, x = 1, a
    while x != 1:
        x = field.mul(x, a)
        n += 1
    return n
