"""Exact polynomials and rational functions in q.

Used for Gaussian binomials and for parametric bounds that are only
rational in q (e.g. with a ``3/(q+1)`` remainder term).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Sequence


class InvalidRange(ValueError):
    pass


class InexactDivision(ArithmeticError):
    pass


class DenominatorZero(ZeroDivisionError):
    pass


def _trim(cs: Iterable) -> tuple:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class QPolynomial:
    """Polynomial in q with integer coefficients, ``coeffs[i]`` multiplies q^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        cs = _trim(coeffs)
        if any(not isinstance(c, int) for c in cs):
            if any(Fraction(c).denominator != 1 for c in cs):
                raise InexactDivision("non-integer coefficient")
            cs = tuple(int(c) for c in cs)
        self.coeffs: tuple[int, ...] = cs

    @classmethod
    def const(cls, c: int) -> "QPolynomial":
        return cls((c,))

    @classmethod
    def q_power(cls, n: int) -> "QPolynomial":
        return cls((0,) * n + (1,))

    @classmethod
    def from_descending(cls, cs: Sequence[int]) -> "QPolynomial":
        """``from_descending([1, 2, 1])`` is q^2 + 2q + 1."""
        return cls(tuple(reversed(cs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPolynomial.const(other)
        if isinstance(other, QRational):
            return other == self
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "QPolynomial":
        if isinstance(other, QRational):
            return NotImplemented
        o = _as_poly(other).coeffs
        n = max(len(self.coeffs), len(o))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o + (0,) * (n - len(o))
        return QPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "QPolynomial":
        if isinstance(other, QRational):
            return NotImplemented
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "QPolynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "QPolynomial":
        if isinstance(other, QRational):
            return NotImplemented
        o = _as_poly(other).coeffs
        if not self.coeffs or not o:
            return QPolynomial()
        out = [0] * (len(self.coeffs) + len(o) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o):
                    out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QPolynomial":
        out = QPolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, q):
        return evaluate(self, q)

    def divmod_rational(self, other: "QPolynomial") -> tuple[list[Fraction], list[Fraction]]:
        return _divmod(list(map(Fraction, self.coeffs)), list(map(Fraction, other.coeffs)))

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def __repr__(self) -> str:
        return f"QPolynomial({self})"

    def __str__(self) -> str:
        return poly_to_str(self.coeffs)


def _as_poly(x) -> QPolynomial:
    if isinstance(x, QPolynomial):
        return x
    if isinstance(x, int):
        return QPolynomial.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def _divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(_trim(a))
    b = list(_trim(b))
    if not b:
        raise DenominatorZero("division by the zero polynomial")
    if len(a) < len(b):
        return [], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a = list(_trim(a))
    return list(_trim(quot)), a


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(_trim(a)), list(_trim(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, list(_trim(r))
    if not a:
        return [Fraction(1)]
    return [c / a[-1] for c in a]


def _primitive(cs: list[Fraction]) -> QPolynomial:
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    from math import lcm
    den = reduce(lcm, (c.denominator for c in cs), 1)
    ints = [int(c * den) for c in cs]
    g = reduce(gcd, ints, 0) or 1
    if ints and ints[-1] < 0:
        g = -g
    return QPolynomial(x // g for x in ints)


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def divide_exact(a: QPolynomial, b: QPolynomial) -> QPolynomial:
    quot, rem = a.divmod_rational(b)
    if rem:
        raise InexactDivision(f"({a}) / ({b}) leaves remainder")
    if any(c.denominator != 1 for c in quot):
        raise InexactDivision("quotient has non-integer coefficients")
    return QPolynomial(int(c) for c in quot)


class QRational:
    """num/den with integer-coefficient polynomials, stored in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise DenominatorZero("zero denominator polynomial")
        if num.is_zero():
            self.num, self.den = QPolynomial(), QPolynomial.const(1)
            return
        g = _poly_gcd(list(map(Fraction, num.coeffs)), list(map(Fraction, den.coeffs)))
        nq, nr = _divmod(list(map(Fraction, num.coeffs)), g)
        dq, dr = _divmod(list(map(Fraction, den.coeffs)), g)
        assert not nr and not dr
        # common integer scale making both sides integral with gcd 1
        from math import lcm
        scale = reduce(lcm, (c.denominator for c in nq + dq), 1)
        ni = [int(c * scale) for c in nq]
        di = [int(c * scale) for c in dq]
        g2 = reduce(gcd, ni + di, 0) or 1
        if di[-1] < 0:
            g2 = -g2
        self.num = QPolynomial(x // g2 for x in ni)
        self.den = QPolynomial(x // g2 for x in di)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0 and self.den.coeffs[0] == 1

    def as_polynomial(self) -> QPolynomial:
        if not self.is_polynomial():
            raise InexactDivision(f"{self} is not a polynomial")
        return self.num

    def split(self) -> tuple[list[Fraction], "QRational"]:
        """Polynomial part (rational coefficients) and proper remainder."""
        quot, rem = _divmod(list(map(Fraction, self.num.coeffs)), list(map(Fraction, self.den.coeffs)))
        from math import lcm
        scale = reduce(lcm, (c.denominator for c in rem), 1)
        rem_poly = QPolynomial(int(c * scale) for c in rem)
        return quot, QRational(rem_poly, self.den * scale)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, QPolynomial)):
            other = QRational(other)
        if not isinstance(other, QRational):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num.coeffs, self.den.coeffs))

    def __add__(self, other) -> "QRational":
        o = _as_rat(other)
        return QRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "QRational":
        return QRational(-self.num, self.den)

    def __sub__(self, other) -> "QRational":
        return self + (-_as_rat(other))

    def __rsub__(self, other) -> "QRational":
        return _as_rat(other) - self

    def __mul__(self, other) -> "QRational":
        o = _as_rat(other)
        return QRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QRational":
        o = _as_rat(other)
        if o.num.is_zero():
            raise DenominatorZero("division by zero")
        return QRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "QRational":
        return _as_rat(other) / self

    def __call__(self, q):
        return evaluate(self, q)

    def __repr__(self) -> str:
        return f"QRational({self})"

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def mixed_str(self) -> str:
        """Polynomial part plus proper fraction, e.g. ``q^2 - 1 + 3/(q + 1)``."""
        quot, rem = self.split()
        if rem.num.is_zero():
            return poly_to_str(quot)
        head = poly_to_str(quot) if quot else ""
        num = str(rem.num)
        neg = num.startswith("-")
        if neg:
            num = num[1:]
        num = f"({num})" if len(rem.num.coeffs) > 1 else num
        frac = f"{num}/({rem.den})"
        if not head:
            return ("-" if neg else "") + frac
        return f"{head} {'-' if neg else '+'} {frac}"


def _as_rat(x) -> QRational:
    if isinstance(x, QRational):
        return x
    return QRational(_as_poly(x))


def poly_to_str(coeffs: Sequence) -> str:
    """Descending powers with explicit coefficients: ``q^5 + 2q^4 - q + 1``."""
    cs = list(_trim(coeffs))
    if not cs:
        return "0"
    parts = []
    for i in reversed(range(len(cs))):
        c = cs[i]
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
        if i == 0:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}{mono}"
        if isinstance(c, Fraction) and c.denominator != 1 and i > 0:
            body = f"({mag}){mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def evaluate(expr, q: int):
    """Exact value at integer q; ints when integral, otherwise ``Fraction``."""
    if isinstance(expr, int):
        return expr
    if isinstance(expr, QPolynomial):
        val = 0
        for c in reversed(expr.coeffs):
            val = val * q + c
        return val
    if isinstance(expr, QRational):
        d = evaluate(expr.den, q)
        if d == 0:
            raise DenominatorZero(f"denominator vanishes at q={q}")
        val = Fraction(evaluate(expr.num, q), d)
        return int(val) if val.denominator == 1 else val
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


def floor_eval(expr, q: int) -> int:
    val = evaluate(expr, q)
    if isinstance(val, Fraction):
        return val.numerator // val.denominator
    return int(val)


@lru_cache(maxsize=None)
def gaussian_binomial(v: int, k: int) -> QPolynomial:
    """[v k]_q as an expanded polynomial in q (q-Pascal recurrence)."""
    if v < 0 or not 0 <= k <= v:
        raise InvalidRange(f"need 0 <= k <= v, got v={v}, k={k}")
    if k == 0 or k == v:
        return QPolynomial.const(1)
    return gaussian_binomial(v - 1, k - 1) + QPolynomial.q_power(k) * gaussian_binomial(v - 1, k)


@lru_cache(maxsize=None)
def gaussian_int(v: int, k: int, q: int) -> int:
    """[v k]_q evaluated directly by the product formula."""
    if v < 0 or not 0 <= k <= v:
        raise InvalidRange(f"need 0 <= k <= v, got v={v}, k={k}")
    num = den = 1
    for i in range(1, k + 1):
        num *= q ** (v - k + i) - 1
        den *= q**i - 1
    return num // den


def count_flags_symbolic(v: int, T: Sequence[int] | None = None) -> QPolynomial:
    """Number of flags of type T as a polynomial in q."""
    dims = tuple(range(1, v)) if T is None else tuple(getattr(T, "dims", T))
    out, prev = QPolynomial.const(1), 0
    for k in dims:
        out = out * gaussian_binomial(v - prev, k - prev)
        prev = k
    return out
