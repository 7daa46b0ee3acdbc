"""Reduction vectors, their closure, the order on them and the minimal sets R.

A reduction vector r (0 <= r <= m(v,T)) describes a family of cliques in the
conflict graph: two flags lie in a common clique when their layers t with
r_t > 0 share a prescribed subspace of dimension u_t = max(2t-v, 0) + r_t.
The closure propagates these intersection guarantees along the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .flags import FlagType, as_type, m_vector


class ShapeMismatch(ValueError):
    pass


class InvalidDistance(ValueError):
    pass


class InvalidVector(ValueError):
    pass


def _dims(v: int, T) -> tuple[int, ...]:
    return as_type(v, T).dims


def check_vector(r: Sequence[int], v: int, T=None) -> tuple[int, ...]:
    m = m_vector(v, T)
    r = tuple(int(x) for x in r)
    if len(r) != len(m):
        raise ShapeMismatch(f"vector of length {len(r)} for a type of length {len(m)}")
    if any(not 0 <= a <= b for a, b in zip(r, m)):
        raise InvalidVector(f"{r} not inside 0..{m}")
    return r


def u_values(r: Sequence[int], v: int, T=None) -> tuple[int, ...]:
    """Guaranteed intersection dimensions u_t = max(2t - v, 0) + r_t."""
    dims = _dims(v, T)
    return tuple(max(2 * t - v, 0) + x for t, x in zip(dims, r))


def closure(r: Sequence[int], v: int, T=None) -> tuple[int, ...]:
    """Closure of r for the flag type T (full type when T is None)."""
    dims = _dims(v, T)
    r = check_vector(r, v, dims)
    m = m_vector(v, dims)
    u = u_values(r, v, dims)
    out = []
    for t, mt in zip(dims, m):
        best = max(2 * t - v, 0)
        for s, us in zip(dims, u):
            best = max(best, us if s <= t else us - 2 * (s - t))
        out.append(best - t + mt)
    return tuple(out)


def is_closed(r: Sequence[int], v: int, T=None) -> bool:
    return closure(r, v, T) == tuple(r)


def deficit(r: Sequence[int], v: int, T=None) -> int:
    """Sum of m - closure(r): the largest distance two flags of a clique can have."""
    return sum(m - x for m, x in zip(m_vector(v, T), closure(r, v, T)))


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def preceq(a: Sequence[int], b: Sequence[int], v: int, T=None) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ShapeMismatch("vectors of different length")
    ca, cb = closure(a, v, T), closure(b, v, T)
    if ca != cb:
        return _leq(ca, cb)
    return _leq(a, b)


def box(v: int, T=None):
    """All r with 0 <= r <= m(v,T), in lexicographic order."""
    return product(*(range(x + 1) for x in m_vector(v, T)))


def compute_R(v: int, d: int, T=None) -> list[tuple[int, ...]]:
    """The preceq-minimal vectors whose closure leaves a deficit below d."""
    dims = _dims(v, T)
    dmax = sum(m_vector(v, dims))
    if not 1 <= d <= dmax:
        raise InvalidDistance(f"d={d} outside 1..{dmax}")
    valid: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    m = m_vector(v, dims)
    for r in box(v, dims):
        c = closure(r, v, dims)
        if d > sum(a - b for a, b in zip(m, c)):
            valid.setdefault(c, []).append(r)
    closures = list(valid)
    minimal_closures = [c for c in closures
                        if not any(o != c and _leq(o, c) for o in closures)]
    out = []
    for c in minimal_closures:
        members = valid[c]
        out.extend(r for r in members if not any(o != r and _leq(o, r) for o in members))
    return sorted(out)


@dataclass(frozen=True)
class ReductionVector:
    """Entry vector r for ambient dimension v and flag type T."""

    v: int
    type: FlagType
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", check_vector(self.entries, self.v, self.type))

    @classmethod
    def make(cls, entries: Sequence[int], v: int, T=None) -> "ReductionVector":
        return cls(v, as_type(v, T), tuple(entries))

    def closure(self) -> "ReductionVector":
        return ReductionVector(self.v, self.type, closure(self.entries, self.v, self.type))

    @property
    def closed(self) -> bool:
        return is_closed(self.entries, self.v, self.type)

    def __le__(self, other: "ReductionVector") -> bool:
        if (self.v, self.type) != (other.v, other.type):
            raise ShapeMismatch("different (v, T)")
        return preceq(self.entries, other.entries, self.v, self.type)

    def __iter__(self):
        return iter(self.entries)
