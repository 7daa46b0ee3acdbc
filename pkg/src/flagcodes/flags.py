"""Flags, their Grassmann distance, enumeration and code files."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    Subspace,
    dual,
    intersection_dim,
    is_subspace,
    lattice,
    sum_dim,
)


class TypeMismatch(ValueError):
    pass


class CodeFileError(ValueError):
    pass


INF = math.inf


@dataclass(frozen=True)
class FlagType:
    v: int
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(k) for k in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("empty flag type")
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise ValueError(f"type {dims} is not strictly increasing")
        if dims[0] < 1 or dims[-1] > self.v - 1:
            raise ValueError(f"type {dims} not inside 1..{self.v - 1}")

    @classmethod
    def full(cls, v: int) -> "FlagType":
        return cls(v, tuple(range(1, v)))

    @property
    def is_full(self) -> bool:
        return self.dims == tuple(range(1, self.v))

    def dual(self) -> "FlagType":
        return FlagType(self.v, tuple(sorted(self.v - t for t in self.dims)))

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def text(self) -> str:
        return ",".join(map(str, self.dims))


def as_type(v: int, T: FlagType | Sequence[int] | None = None) -> FlagType:
    """Normalize a type argument; ``None`` means the full type."""
    if T is None:
        return FlagType.full(v)
    if isinstance(T, FlagType):
        if T.v != v:
            raise TypeMismatch(f"type is for v={T.v}, not v={v}")
        return T
    return FlagType(v, tuple(T))


def m_vector(v: int, T: FlagType | Sequence[int] | None = None) -> tuple[int, ...]:
    """Maximal per-layer injection distances min(k, v-k)."""
    return tuple(min(k, v - k) for k in as_type(v, T).dims)


def max_distance(v: int, T=None) -> int:
    return sum(m_vector(v, T))


@dataclass(frozen=True)
class Flag:
    parts: tuple[Subspace, ...]

    @property
    def v(self) -> int:
        return self.parts[0].v

    @property
    def q(self) -> int:
        return self.parts[0].q

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.parts)

    @property
    def type(self) -> FlagType:
        return FlagType(self.v, self.dims)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __len__(self):
        return len(self.parts)

    def sort_key(self):
        return tuple(p.rows for p in self.parts)

    def __lt__(self, other: "Flag") -> bool:
        return self.sort_key() < other.sort_key()

    def to_text(self) -> str:
        return "|".join(p.to_text() for p in self.parts)


def make_flag(parts: Iterable[Subspace]) -> Flag:
    """Build a flag, checking strict nesting and a common ambient space."""
    parts = tuple(parts)
    if not parts:
        raise ValueError("a flag needs at least one subspace")
    v, q = parts[0].v, parts[0].q
    for a in parts:
        if a.v != v or a.q != q:
            raise TypeMismatch("flag parts live in different spaces")
    FlagType(v, tuple(p.dim for p in parts))
    for a, b in zip(parts, parts[1:]):
        if not is_subspace(a, b):
            raise ValueError("flag parts are not nested")
    return Flag(parts)


def _parts(x) -> tuple[Subspace, ...]:
    return x.parts if isinstance(x, Flag) else tuple(x)


def grassmann_distance(a, b) -> int:
    """Sum of layerwise injection distances.  Works for flags and plain tuples."""
    pa, pb = _parts(a), _parts(b)
    if len(pa) != len(pb) or any(x.dim != y.dim for x, y in zip(pa, pb)):
        raise TypeMismatch("different types")
    return sum(x.dim - intersection_dim(x, y) for x, y in zip(pa, pb))


def dual_flag(a: Flag) -> Flag:
    return Flag(tuple(dual(p) for p in reversed(a.parts)))


def flag_index_tuples(v: int, q: int, T=None) -> list[tuple[int, ...]]:
    """Flags of type T as tuples of per-level indices into ``lattice(v, q)``.

    The order is lexicographic, which agrees with the order of the flags'
    RREF encodings.
    """
    dims = as_type(v, T).dims
    L = lattice(v, q)
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], pos: int) -> None:
        if pos == len(dims):
            out.append(prefix)
            return
        t = dims[pos]
        if pos == 0:
            cands = range(L.size(t))
        else:
            cands = sorted(L.supers(dims[pos - 1], prefix[-1], t))
        for i in cands:
            rec(prefix + (i,), pos + 1)

    rec((), 0)
    return out


def enumerate_flags(v: int, field, T=None) -> list[Flag]:
    """Every flag of type T in F_q^v exactly once, in canonical order."""
    q = field if isinstance(field, int) else field.q
    dims = as_type(v, T).dims
    L = lattice(v, q)
    return [Flag(tuple(L.levels[t][i] for t, i in zip(dims, idx)))
            for idx in flag_index_tuples(v, q, dims)]


def count_flags(v: int, q: int, T=None) -> int:
    """Closed-form count: product of Gaussian binomials along the chain."""
    from .qcombin import gaussian_int
    dims = as_type(v, T).dims
    total, prev = 1, 0
    for k in dims:
        total *= gaussian_int(v - prev, k - prev, q)
        prev = k
    return total


@dataclass(frozen=True)
class FlagCode:
    q: int
    type: FlagType
    words: tuple

    def __post_init__(self):
        words = tuple(self.words)
        object.__setattr__(self, "words", words)
        if len(set(words)) != len(words):
            raise ValueError("duplicate codewords")
        for w in words:
            parts = _parts(w)
            if tuple(p.dim for p in parts) != self.type.dims:
                raise TypeMismatch("codeword type differs from code type")
            if any(p.q != self.q or p.v != self.type.v for p in parts):
                raise TypeMismatch("codeword lives in a different space")

    @property
    def v(self) -> int:
        return self.type.v

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def distance_matrix(words: Sequence) -> np.ndarray:
    """Pairwise Grassmann distances as an int32 matrix."""
    n = len(words)
    if n == 0:
        return np.zeros((0, 0), dtype=np.int32)
    layers = list(zip(*(_parts(w) for w in words)))
    total = np.zeros((n, n), dtype=np.int32)
    for layer in layers:
        ids, local = _layer_ids(layer)
        total += _layer_distances(local)[np.ix_(ids, ids)]
    return total


def _layer_ids(layer: Sequence[Subspace]) -> tuple[np.ndarray, list[Subspace]]:
    seen: dict[Subspace, int] = {}
    ids = np.empty(len(layer), dtype=np.int64)
    for i, s in enumerate(layer):
        ids[i] = seen.setdefault(s, len(seen))
    return ids, list(seen)


def _layer_distances(local: list[Subspace]) -> np.ndarray:
    n = len(local)
    out = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        a = local[i]
        for j in range(i + 1, n):
            b = local[j]
            d = max(a.dim, b.dim) - (a.dim + b.dim - sum_dim(a, b))
            out[i, j] = out[j, i] = d
    return out


def min_distance(code, chunk: int = 2048):
    """Minimum pairwise Grassmann distance and a witnessing pair.

    Returns ``(inf, None)`` for fewer than two words.  The witness is the
    first pair (i < j) in row-major order reaching the minimum.
    """
    words = list(code.words if isinstance(code, FlagCode) else code)
    n = len(words)
    if n < 2:
        return INF, None
    layers = list(zip(*(_parts(w) for w in words)))
    prepared = []
    for layer in layers:
        ids, local = _layer_ids(layer)
        prepared.append((ids, _layer_distances(local)))
    best, witness = None, None
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        block = np.zeros((stop - start, n), dtype=np.int32)
        for ids, dm in prepared:
            block += dm[np.ix_(ids[start:stop], ids)]
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(n)[None, :]
        block = np.where(cols > rows, block, np.iinfo(np.int32).max)
        m = int(block.min())
        if best is None or m < best:
            flat = int(np.argmin(block))
            i, j = divmod(flat, n)
            best, witness = m, (start + i, j)
    i, j = witness
    return best, (words[i], words[j])


def min_distance_value(code) -> float:
    return min_distance(code)[0]


# -- code files ---------------------------------------------------------------

def write_code(path, q: int, v: int, dims: Sequence[int], words: Iterable, cartesian: bool = False) -> None:
    header = f"q={q} v={v} type={','.join(map(str, dims))}"
    if cartesian:
        header += " cartesian=true"
    lines = [header] + ["|".join(p.to_text() for p in _parts(w)) for w in words]
    Path(path).write_text("\n".join(lines) + "\n")


def code_to_text(code: FlagCode, cartesian: bool = False) -> str:
    header = f"q={code.q} v={code.v} type={code.type.text()}"
    if cartesian:
        header += " cartesian=true"
    return "\n".join([header] + ["|".join(p.to_text() for p in _parts(w)) for w in code.words]) + "\n"


def parse_code(text: str) -> tuple[FlagCode, bool]:
    """Parse the line-oriented code format.  Returns ``(code, cartesian)``."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CodeFileError("empty code file")
    try:
        fields = dict(tok.split("=", 1) for tok in lines[0].split())
        q, v = int(fields["q"]), int(fields["v"])
        dims = tuple(int(x) for x in fields["type"].split(","))
    except (KeyError, ValueError) as exc:
        raise CodeFileError(f"bad header: {lines[0]!r}") from exc
    cartesian = fields.get("cartesian", "false").lower() == "true"
    T = FlagType(v, dims)
    words = []
    for ln in lines[1:]:
        parts = tuple(Subspace.from_text(s, q, v) for s in ln.split("|"))
        if tuple(p.dim for p in parts) != dims:
            raise CodeFileError(f"word {ln!r} does not have type {dims}")
        words.append(parts if cartesian else make_flag(parts))
    return FlagCode(q, T, tuple(words)), cartesian


def read_code(path) -> tuple[FlagCode, bool]:
    return parse_code(Path(path).read_text())
