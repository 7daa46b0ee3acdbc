"""Subspaces of F_q^v in canonical reduced row echelon form.

Vectors are row vectors and matrices act from the right, ``U.g = {u g}``.
For q = 2 rows are additionally kept as bitmasks (column 0 is the most
significant bit), which is what the hot loops use.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .qfield import FieldSpec, make_field


class AmbientMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


Row = tuple[int, ...]


# -- row reduction ------------------------------------------------------------

def _rref_rows(rows: Iterable[Sequence[int]], F: FieldSpec, ncols: int) -> list[list[int]]:
    mat = [list(r) for r in rows if any(r)]
    piv_row = 0
    for c in range(ncols):
        pr = next((i for i in range(piv_row, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[piv_row], mat[pr] = mat[pr], mat[piv_row]
        row = mat[piv_row]
        if row[c] != 1:
            s = F.inv(row[c])
            row[:] = [F.mul(s, x) for x in row]
        for i in range(len(mat)):
            if i != piv_row and mat[i][c]:
                f = mat[i][c]
                mat[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(mat[i], row)]
        piv_row += 1
        if piv_row == len(mat):
            break
    return mat[:piv_row]


def _rref_masks(masks: Iterable[int]) -> list[int]:
    """RREF over F_2 of bitmask rows; returned in increasing pivot column."""
    piv: dict[int, int] = {}
    for m in masks:
        while m:
            b = m.bit_length() - 1
            if b in piv:
                m ^= piv[b]
            else:
                piv[b] = m
                break
    order = sorted(piv, reverse=True)
    for b in order:
        pm = piv[b]
        for b2 in order:
            if b2 != b and (piv[b2] >> b) & 1:
                piv[b2] ^= pm
    return [piv[b] for b in order]


def _rank_masks(masks: Iterable[int]) -> int:
    piv: dict[int, int] = {}
    for m in masks:
        while m:
            b = m.bit_length() - 1
            if b in piv:
                m ^= piv[b]
            else:
                piv[b] = m
                break
    return len(piv)


def row_to_mask(row: Sequence[int]) -> int:
    m = 0
    for x in row:
        m = (m << 1) | x
    return m


def mask_to_row(m: int, v: int) -> Row:
    return tuple((m >> (v - 1 - j)) & 1 for j in range(v))


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class MatrixFq:
    """Dense matrix over F_q, rows stored as tuples."""

    q: int
    rows: tuple[Row, ...]
    ncols: int = dc_field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.ncols < 0:
            object.__setattr__(self, "ncols", len(rows[0]) if rows else 0)
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")
        if any(not 0 <= x < self.q for r in rows for x in r):
            raise ValueError("entry out of range")

    @property
    def field(self) -> FieldSpec:
        return make_field(self.q)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def identity(cls, n: int, q: int) -> "MatrixFq":
        return cls(q, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int, q: int) -> "MatrixFq":
        return cls(q, tuple((0,) * n for _ in range(m)), n)

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        F = self.field
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for r in self.rows:
            out.append(tuple(_dot(F, r, c) for c in cols))
        return MatrixFq(self.q, tuple(out), other.ncols)

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        F = self.field
        return MatrixFq(self.q, tuple(tuple(F.add(a, b) for a, b in zip(r, s))
                                      for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        F = self.field
        return MatrixFq(self.q, tuple(tuple(F.sub(a, b) for a, b in zip(r, s))
                                      for r, s in zip(self.rows, other.rows)), self.ncols)

    def scale(self, c: int) -> "MatrixFq":
        F = self.field
        return MatrixFq(self.q, tuple(tuple(F.mul(c, a) for a in r) for r in self.rows), self.ncols)

    def transpose(self) -> "MatrixFq":
        return MatrixFq(self.q, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def rank(self) -> int:
        if self.q == 2:
            return _rank_masks(row_to_mask(r) for r in self.rows)
        return len(_rref_rows(self.rows, self.field, self.ncols))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def inverse(self) -> "MatrixFq":
        n = self.nrows
        if n != self.ncols:
            raise SingularMatrix("not square")
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)]
        red = _rref_rows(aug, self.field, 2 * n)
        if len(red) < n or any(red[i][i] != 1 for i in range(n)):
            raise SingularMatrix("matrix is singular")
        return MatrixFq(self.q, tuple(tuple(r[n:]) for r in red), n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def flat(self) -> Row:
        return tuple(x for r in self.rows for x in r)

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows)

    @classmethod
    def from_text(cls, text: str, q: int) -> "MatrixFq":
        rows = [tuple(int(x) for x in part.split(",")) for part in text.strip().split(";") if part.strip()]
        return cls(q, tuple(rows))


def _dot(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> int:
    if F.e == 1:
        return sum(x * y for x, y in zip(a, b)) % F.p
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def vec_mat(F: FieldSpec, u: Sequence[int], g: MatrixFq) -> Row:
    out = [0] * g.ncols
    for a, grow in zip(u, g.rows):
        if not a:
            continue
        if F.e == 1:
            for j, x in enumerate(grow):
                out[j] += a * x
        else:
            for j, x in enumerate(grow):
                if x:
                    out[j] = F.add(out[j], F.mul(a, x))
    if F.e == 1:
        return tuple(x % F.p for x in out)
    return tuple(out)


# -- subspaces ----------------------------------------------------------------

@dataclass(frozen=True, order=False)
class Subspace:
    """A subspace of F_q^v given by its unique RREF basis.

    Construct through :func:`rref` (or :meth:`from_rows`) unless the rows are
    already canonical.
    """

    q: int
    v: int
    rows: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient(self) -> int:
        return self.v

    @property
    def field(self) -> FieldSpec:
        return make_field(self.q)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(row_to_mask(r) for r in self.rows)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    @property
    def basis(self) -> MatrixFq:
        return MatrixFq(self.q, self.rows, self.v)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], q: int, v: int | None = None) -> "Subspace":
        rows = [tuple(r) for r in rows]
        if v is None:
            if not rows:
                raise ValueError("ambient dimension needed for an empty row list")
            v = len(rows[0])
        return rref(MatrixFq(q, tuple(rows), v))

    @classmethod
    def zero(cls, v: int, q: int) -> "Subspace":
        return cls(q, v, ())

    @classmethod
    def full(cls, v: int, q: int) -> "Subspace":
        return cls(q, v, MatrixFq.identity(v, q).rows)

    def sort_key(self) -> tuple:
        return (self.dim, self.rows)

    def __lt__(self, other: "Subspace") -> bool:
        return self.sort_key() < other.sort_key()

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows)

    @classmethod
    def from_text(cls, text: str, q: int, v: int) -> "Subspace":
        text = text.strip()
        if not text:
            return cls.zero(v, q)
        return rref(MatrixFq.from_text(text, q))

    def __repr__(self) -> str:
        return f"Subspace(q={self.q}, v={self.v}, <{self.to_text()}>)"

    def contains_vector(self, x: Sequence[int]) -> bool:
        return sum_dim_rows(self, [x]) == self.dim

    def vectors(self) -> Iterator[Row]:
        """All q^dim vectors of the subspace."""
        F = self.field
        for coeffs in product(range(self.q), repeat=self.dim):
            out = [0] * self.v
            for c, r in zip(coeffs, self.rows):
                if c:
                    out = [F.add(a, F.mul(c, b)) for a, b in zip(out, r)]
            yield tuple(out)


def rref(m: MatrixFq | Sequence[Sequence[int]], q: int | None = None) -> Subspace:
    """Canonical subspace spanned by the rows of ``m``."""
    if not isinstance(m, MatrixFq):
        if q is None:
            raise ValueError("q required for raw rows")
        m = MatrixFq(q, tuple(tuple(r) for r in m))
    v = m.ncols
    if m.q == 2:
        red = _rref_masks(row_to_mask(r) for r in m.rows)
        return Subspace(2, v, tuple(mask_to_row(x, v) for x in red))
    red = _rref_rows(m.rows, m.field, v)
    return Subspace(m.q, v, tuple(tuple(r) for r in red))


def _check(U: Subspace, W: Subspace) -> None:
    if U.v != W.v or U.q != W.q:
        raise AmbientMismatch(f"F_{U.q}^{U.v} vs F_{W.q}^{W.v}")


def sum_dim_rows(U: Subspace, extra: Iterable[Sequence[int]]) -> int:
    if U.q == 2:
        return _rank_masks(list(U.masks) + [row_to_mask(r) for r in extra])
    return len(_rref_rows(list(U.rows) + [list(r) for r in extra], U.field, U.v))


def sum_dim(U: Subspace, W: Subspace) -> int:
    _check(U, W)
    if U.q == 2:
        return _rank_masks(U.masks + W.masks)
    return len(_rref_rows(U.rows + W.rows, U.field, U.v))


def intersection_dim(U: Subspace, W: Subspace) -> int:
    return U.dim + W.dim - sum_dim(U, W)


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _check(U, W)
    return rref(MatrixFq(U.q, U.rows + W.rows, U.v))


def intersection(U: Subspace, W: Subspace) -> Subspace:
    _check(U, W)
    return dual(subspace_sum(dual(U), dual(W)))


def injection_distance(U: Subspace, W: Subspace) -> int:
    return max(U.dim, W.dim) - intersection_dim(U, W)


def subspace_distance(U: Subspace, W: Subspace) -> int:
    return U.dim + W.dim - 2 * intersection_dim(U, W)


def is_incident(U: Subspace, W: Subspace) -> bool:
    return intersection_dim(U, W) == min(U.dim, W.dim)


def is_subspace(U: Subspace, W: Subspace) -> bool:
    """U <= W."""
    return U.dim <= W.dim and sum_dim(U, W) == W.dim


def dual(U: Subspace) -> Subspace:
    """Orthogonal complement for the standard dot product."""
    v, q = U.v, U.q
    if U.dim == 0:
        return Subspace.full(v, q)
    F = U.field
    piv = U.pivots
    free = [j for j in range(v) if j not in piv]
    rows = []
    # kernel vector for each free column f: x_f = 1, x_{piv_i} = -U[i][f]
    for f in free:
        x = [0] * v
        x[f] = 1
        for i, pc in enumerate(piv):
            x[pc] = F.neg(U.rows[i][f])
        rows.append(x)
    return rref(MatrixFq(q, tuple(tuple(r) for r in rows), v))


def apply(g: MatrixFq, U: Subspace) -> Subspace:
    """Image of U under the right action u -> u g."""
    if g.nrows != U.v or g.ncols != U.v:
        raise AmbientMismatch("matrix size does not match ambient dimension")
    if g.q != U.q:
        raise AmbientMismatch("field mismatch")
    if U.q == 2:
        gm = _masks_of(g)
        imgs = []
        for m in U.masks:
            acc, j = 0, U.v - 1
            while m:
                if m & 1:
                    acc ^= gm[j]
                m >>= 1
                j -= 1
            imgs.append(acc)
        red = _rref_masks(imgs)
        if len(red) != U.dim:
            raise SingularMatrix("matrix is singular")
        return Subspace(2, U.v, tuple(mask_to_row(x, U.v) for x in red))
    F = U.field
    out = rref(MatrixFq(U.q, tuple(vec_mat(F, r, g) for r in U.rows), U.v))
    if out.dim != U.dim:
        raise SingularMatrix("matrix is singular")
    return out


@lru_cache(maxsize=4096)
def _masks_of(g: MatrixFq) -> tuple[int, ...]:
    return tuple(row_to_mask(r) for r in g.rows)


def enumerate_grassmannian(v: int, k: int, field: FieldSpec | int) -> list[Subspace]:
    """All k-spaces of F_q^v, sorted by their RREF rows."""
    q = field if isinstance(field, int) else field.q
    return list(_grassmannian(v, k, q))


@lru_cache(maxsize=256)
def _grassmannian(v: int, k: int, q: int) -> tuple[Subspace, ...]:
    if not 0 <= k <= v:
        raise ValueError(f"need 0 <= k <= v, got k={k}, v={v}")
    out = []
    for pivots in combinations(range(v), k):
        pset = set(pivots)
        slots = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, v) if j not in pset]
        for fill in product(range(q), repeat=len(slots)):
            rows = [[0] * v for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), x in zip(slots, fill):
                rows[i][j] = x
            out.append(Subspace(q, v, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: s.rows)
    return tuple(out)


def all_vectors(v: int, q: int) -> Iterator[Row]:
    return product(range(q), repeat=v)


def unit_vector(v: int, i: int) -> Row:
    return tuple(int(j == i) for j in range(v))


def extend_by_vector(U: Subspace, x: Sequence[int]) -> Subspace:
    return rref(MatrixFq(U.q, U.rows + (tuple(x),), U.v))


class SubspaceLattice:
    """All subspaces of F_q^v, indexed per dimension, with cover relations.

    ``levels[k][i]`` is the i-th k-space in canonical order; ``up[k][i]`` lists
    the indices of the (k+1)-spaces containing it.
    """

    def __init__(self, v: int, q: int):
        self.v, self.q = v, q
        self.levels = [_grassmannian(v, k, q) for k in range(v + 1)]
        self.index = [{S: i for i, S in enumerate(lev)} for lev in self.levels]
        self.up: list[list[tuple[int, ...]]] = []
        for k in range(v):
            nxt = self.index[k + 1]
            ups = []
            for S in self.levels[k]:
                found = set()
                piv = set(S.pivots)
                free = [j for j in range(v) if j not in piv]
                for coeffs in product(range(q), repeat=len(free)):
                    if not any(coeffs):
                        continue
                    # one representative per line of the quotient space
                    lead = next(c for c in coeffs if c)
                    if lead != 1:
                        continue
                    x = [0] * v
                    for j, c in zip(free, coeffs):
                        x[j] = c
                    found.add(nxt[extend_by_vector(S, x)])
                ups.append(tuple(sorted(found)))
            self.up.append(ups)
        self.down: list[list[tuple[int, ...]]] = [[()] * len(self.levels[0])]
        for k in range(1, v + 1):
            acc: list[list[int]] = [[] for _ in self.levels[k]]
            for i, ups in enumerate(self.up[k - 1]):
                for j in ups:
                    acc[j].append(i)
            self.down.append([tuple(a) for a in acc])
        self._supers: dict[tuple[int, int, int], frozenset[int]] = {}
        self._subs: dict[tuple[int, int, int], frozenset[int]] = {}
        self._perms: dict[MatrixFq, tuple[tuple[int, ...], ...]] = {}

    def size(self, k: int) -> int:
        return len(self.levels[k])

    def supers(self, k: int, i: int, t: int) -> frozenset[int]:
        """Indices of the t-spaces containing the k-space with index i."""
        if t < k:
            raise ValueError("t < k")
        key = (k, i, t)
        got = self._supers.get(key)
        if got is not None:
            return got
        if t == k:
            got = frozenset((i,))
        elif t == k + 1:
            got = frozenset(self.up[k][i])
        else:
            acc: set[int] = set()
            for j in self.up[k][i]:
                acc |= self.supers(k + 1, j, t)
            got = frozenset(acc)
        self._supers[key] = got
        return got

    def subs(self, k: int, i: int, s: int) -> frozenset[int]:
        """Indices of the s-spaces inside the k-space with index i."""
        if s > k:
            raise ValueError("s > k")
        key = (k, i, s)
        got = self._subs.get(key)
        if got is not None:
            return got
        if s == k:
            got = frozenset((i,))
        elif s == k - 1:
            got = frozenset(self.down[k][i])
        else:
            acc: set[int] = set()
            for j in self.down[k][i]:
                acc |= self.subs(k - 1, j, s)
            got = frozenset(acc)
        self._subs[key] = got
        return got

    def perm(self, g: MatrixFq) -> tuple[tuple[int, ...], ...]:
        """Permutation induced by g on every level."""
        got = self._perms.get(g)
        if got is None:
            got = tuple(tuple(self.index[k][apply(g, S)] for S in lev)
                        for k, lev in enumerate(self.levels))
            self._perms[g] = got
        return got


@lru_cache(maxsize=32)
def lattice(v: int, q: int) -> SubspaceLattice:
    return SubspaceLattice(v, q)
