"""Explicit flag codes: spreads, Singer orbits, lifted rank-metric codes and
Cartesian-product codes."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .flags import Flag, FlagCode, FlagType, as_type, flag_index_tuples, make_flag, min_distance
from .linalg import MatrixFq, Subspace, apply, extend_by_vector, lattice, unit_vector
from .qfield import make_field
from .search import (
    GroupAction,
    TooLarge,
    _mat_pow,
    _index_orbits,
    singer_generator,
    singer_polynomial,
)


class InvalidParams(ValueError):
    pass


# -- extension fields ---------------------------------------------------------

class ExtensionField:
    """F_{q^N} as coordinate vectors over F_q in the basis 1, a, ..., a^(N-1),
    where a is a root of a primitive polynomial of degree N."""

    def __init__(self, q: int, N: int):
        self.q, self.N = q, N
        self.F = make_field(q)
        self.poly = singer_polynomial(N, q)  # a^N = sum poly[i] a^i
        F = self.F
        self.exp: list[tuple[int, ...]] = []
        x = tuple(1 if i == 0 else 0 for i in range(N))
        for _ in range(q**N - 1):
            self.exp.append(x)
            top = x[-1]
            shifted = (0,) + x[:-1]
            x = tuple(F.add(s, F.mul(top, c)) for s, c in zip(shifted, self.poly))
        self.log = {e: i for i, e in enumerate(self.exp)}
        self.zero = tuple([0] * N)

    def add(self, a, b):
        return tuple(self.F.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        return self.exp[(self.log[a] + self.log[b]) % (self.q**self.N - 1)]

    def power_of_a(self, e: int):
        return self.exp[e % (self.q**self.N - 1)]

    def frobenius(self, a, times: int = 1):
        """a^(q^times)."""
        if a == self.zero:
            return a
        return self.exp[(self.log[a] * self.q**times) % (self.q**self.N - 1)]

    def elements(self):
        return [self.zero] + self.exp


# -- rank-metric codes --------------------------------------------------------

@dataclass(frozen=True)
class RankMetricCode:
    q: int
    m: int
    n: int
    words: tuple[MatrixFq, ...]
    min_rank_distance: int

    def __len__(self) -> int:
        return len(self.words)

    def distance(self, a: MatrixFq, b: MatrixFq) -> int:
        return (a - b).rank()

    def computed_min_distance(self) -> int:
        return min((self.distance(a, b) for a, b in combinations(self.words, 2)), default=0)


def mrd_size(m: int, n: int, d_prime: int, q: int) -> int:
    """Largest size of an m x n rank-metric code with minimum rank distance d'."""
    return q ** (max(m, n) * (min(m, n) - d_prime + 1))


def gabidulin_mrd(m: int, n: int, d_prime: int, q: int) -> RankMetricCode:
    """Linear MRD code: evaluations of linearized polynomials of q-degree
    below min(m, n) - d' + 1 at a^0, ..., a^(L-1) in F_{q^N}, N = max(m, n),
    expanded to matrices in the polynomial basis."""
    if not (1 <= d_prime <= min(m, n)):
        raise InvalidParams(f"need 1 <= d' <= min(m, n), got d'={d_prime}, m={m}, n={n}")
    N, L = max(m, n), min(m, n)
    k = L - d_prime + 1
    E = ExtensionField(q, N)
    points = [E.power_of_a(j) for j in range(L)]
    frob = [[E.frobenius(g, i) for i in range(k)] for g in points]
    elements = E.elements()
    words = []
    for coeffs in product(elements, repeat=k):
        cols = []
        for j in range(L):
            val = E.zero
            for a, gp in zip(coeffs, frob[j]):
                val = E.add(val, E.mul(a, gp))
            cols.append(val)
        # N x L matrix with the evaluations as columns
        rows = tuple(tuple(c[i] for c in cols) for i in range(N))
        M = MatrixFq(q, rows, L)
        if m < n:
            M = M.transpose()
        words.append(M)
    code = RankMetricCode(q, m, n, tuple(words), d_prime)
    _assert_linear(code)
    return code


def _assert_linear(code: RankMetricCode, cap: int = 4096) -> None:
    if len(code) > cap:
        return
    flat = {w.flat() for w in code.words}
    F = make_field(code.q)
    zero = tuple([0] * (code.m * code.n))
    assert zero in flat, "MRD code misses the zero matrix"
    sample = code.words[: min(len(code), 16)]
    for a in sample:
        for b in code.words:
            s = tuple(F.add(x, y) for x, y in zip(a.flat(), b.flat()))
            assert s in flat, "MRD code is not closed under addition"


def lift(M: MatrixFq) -> Subspace:
    """Row space of (I | M): an m-space of F_q^(m+n)."""
    m, n = M.shape
    rows = [tuple([1 if i == j else 0 for j in range(m)]) + tuple(M.rows[i]) for i in range(m)]
    return Subspace.from_rows(rows, M.q, m + n)


def mrd_cosets(code: RankMetricCode) -> list[list[MatrixFq]]:
    """The cosets M + C of a linear code, ordered by least member.  Each coset
    is listed in the order of the code words."""
    F = make_field(code.q)
    flat = [w.flat() for w in code.words]
    seen: set = set()
    cosets = []
    for entries in product(range(code.q), repeat=code.m * code.n):
        if entries in seen:
            continue
        members = [tuple(F.add(x, y) for x, y in zip(entries, w)) for w in flat]
        seen.update(members)
        cosets.append([MatrixFq(code.q, tuple(tuple(e[i * code.n:(i + 1) * code.n]) for i in range(code.m)),
                                code.n) for e in members])
    return cosets


# -- spreads ------------------------------------------------------------------

def _down_chain(U: Subspace) -> list[Subspace]:
    """Spans of the first i RREF rows of U, i = 1..dim U - 1."""
    return [Subspace.from_rows(U.rows[:i], U.q, U.v) for i in range(1, U.dim)]


def _up_chain(U: Subspace, top: int) -> list[Subspace]:
    """Extend U one dimension at a time by the least unit vector not inside."""
    out = []
    cur = U
    while cur.dim < top:
        for i in range(cur.v):
            e = unit_vector(cur.v, i)
            if not cur.contains_vector(e):
                cur = extend_by_vector(cur, e)
                break
        out.append(cur)
    return out


def spread_subspaces(k: int, q: int) -> list[Subspace]:
    """A k-spread of F_q^(2k): lifts of the MRD code of k x k matrices with
    rank distance k, plus <0 | I>."""
    if k < 1:
        raise InvalidParams("k >= 1 required")
    out = [lift(M) for M in gabidulin_mrd(k, k, k, q).words]
    rows = [tuple([0] * k) + tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]
    out.append(Subspace.from_rows(rows, q, 2 * k))
    return out


def spread_code(k: int, q: int) -> FlagCode:
    """Full flags in F_q^(2k) of size q^k + 1 and distance k^2, one per spread element."""
    words = []
    for S in spread_subspaces(k, q):
        words.append(make_flag(_down_chain(S) + [S] + _up_chain(S, 2 * k - 1)))
    return FlagCode(q, FlagType.full(2 * k), tuple(sorted(words)))


def _supers(U: Subspace, prefer: Sequence[int] | None = None) -> list[Subspace]:
    """All (dim U + 1)-spaces containing U, the one through ``prefer`` first,
    then in canonical order."""
    from .linalg import all_vectors
    out = set()
    for x in all_vectors(U.v, U.q):
        if not U.contains_vector(x):
            out.add(extend_by_vector(U, x))
    out = sorted(out)
    if prefer is not None:
        first = extend_by_vector(U, prefer)
        out.remove(first)
        out.insert(0, first)
    return out


def _layer_assignments(domains: list[list[Subspace]], need: int):
    """Yield choices, one subspace per domain, meeting pairwise in dimension
    ``need``.  Forward checking with the smallest remaining domain first."""
    from .linalg import intersection_dim
    n = len(domains)
    chosen: list[Subspace | None] = [None] * n

    def rec(live: dict[int, list[Subspace]]):
        if not live:
            yield list(chosen)
            return
        w = min(live, key=lambda i: (len(live[i]), i))
        for W in live[w]:
            nxt = {}
            for o, dom in live.items():
                if o == w:
                    continue
                keep = [X for X in dom if intersection_dim(W, X) == need]
                if not keep:
                    break
                nxt[o] = keep
            else:
                chosen[w] = W
                yield from rec(nxt)
                chosen[w] = None

    yield from rec({i: list(d) for i, d in enumerate(domains)})


def max_distance_completion(bases: Sequence[Subspace], top: int,
                            prefer: Sequence[int] | None = None) -> list[list[Subspace]] | None:
    """Extend pairwise trivially meeting subspaces to chains up to dimension
    ``top`` so that every layer keeps the largest possible injection distance.

    Layers are filled bottom up by a deterministic search; in the first layer
    the span through ``prefer`` is tried first.  Returns the chains above the
    bases or None when no completion exists.
    """
    v = bases[0].v

    def rec(below: list[Subspace], t: int) -> list[list[Subspace]] | None:
        if t > top:
            return [[] for _ in below]
        domains = [_supers(U, prefer if t == bases[0].dim + 1 else None) for U in below]
        for layer in _layer_assignments(domains, max(0, 2 * t - v)):
            rest = rec(layer, t + 1)
            if rest is not None:
                return [[W] + r for W, r in zip(layer, rest)]
        return None

    return rec(list(bases), bases[0].dim + 1)


def partial_spread_flag_code(k: int, q: int) -> FlagCode:
    """Full flags in F_q^(2k+1) of size q^(k+1) + 1 and distance k^2 + k.

    The k-layer is a partial spread: lifts of the k x (k+1) MRD code with rank
    distance k plus a k-space S at infinity.  Higher layers are chosen by a
    deterministic search keeping every layer at maximal distance, trying the
    span with the least point P at infinity outside S first.
    """
    if k < 2:
        raise InvalidParams("k >= 2 required")
    v = 2 * k + 1
    elems = [lift(M) for M in gabidulin_mrd(k, k + 1, k, q).words]
    rows = [tuple(1 if j == k + i else 0 for j in range(v)) for i in range(k)]
    elems.append(Subspace.from_rows(rows, q, v))
    P = unit_vector(v, v - 1)
    assert not any(U.contains_vector(P) for U in elems)
    upper = max_distance_completion(elems, v - 1, prefer=P)
    if upper is None:
        raise AssertionError("no maximal-distance completion found")
    words = [make_flag(_down_chain(U) + [U] + up) for U, up in zip(elems, upper)]
    return FlagCode(q, FlagType.full(v), tuple(sorted(words)))


# -- Singer orbits ------------------------------------------------------------

def _apply_flag(g: MatrixFq, f) -> Flag:
    return Flag(tuple(apply(g, U) for U in f))


def group_orbit_code(group: GroupAction, seed: Flag) -> FlagCode:
    """The orbit of a seed flag under a matrix group."""
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for f in frontier:
            for g in group.generators:
                h = _apply_flag(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return FlagCode(seed.q, seed.type, tuple(sorted(seen)))


def singer_orbit_code(v: int, q: int, seed: Flag, power: int = 1) -> tuple[FlagCode, float]:
    """Orbit of the seed under <sigma^power> for a Singer cycle sigma, with its
    minimum distance."""
    if seed.v != v or seed.q != q:
        raise InvalidParams("seed lives in a different space")
    g = _mat_pow(singer_generator(v, q), power)
    code = group_orbit_code(GroupAction([g]), seed)
    return code, min_distance(code)[0]


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def seed_search_singer(v: int, q: int, d: int, T=None, cap: int = 200000) -> tuple[FlagCode, int]:
    """Largest orbit code with minimum distance >= d under the cyclic
    subgroups <sigma^k> (k dividing the projective order) of a Singer cycle.

    One seed per orbit is tried.  The orbit's minimum distance is the least
    distance from the seed to the other members, since the group acts by
    isometries.  Returns ``(code, power)``.
    """
    from .flags import count_flags
    dims = as_type(v, T).dims
    if count_flags(v, q, dims) > cap:
        raise TooLarge(f"{count_flags(v, q, dims)} flags exceed the cap {cap}")
    L = lattice(v, q)
    flags_idx = flag_index_tuples(v, q, dims)
    pos = {f: i for i, f in enumerate(flags_idx)}
    sigma = singer_generator(v, q)
    n = (q**v - 1) // (q - 1)
    best: tuple[int, int, FlagCode] | None = None
    for k in _divisors(n):
        P = L.perm(_mat_pow(sigma, k))
        image = [pos[tuple(P[t][i] for t, i in zip(dims, f))] for f in flags_idx]
        _, orbs = _index_orbits(len(flags_idx), [image])
        for orb in orbs:
            size = len(orb)
            if best is not None and size <= best[0]:
                continue
            seed = flags_idx[orb[0]]
            ok = True
            for j in orb[1:]:
                other = flags_idx[j]
                dist = 0
                for t, a, b in zip(dims, seed, other):
                    if a != b:
                        dist += t - _inter_dim(L, t, a, b)
                if dist < d:
                    ok = False
                    break
            if ok:
                words = tuple(Flag(tuple(L.levels[t][i] for t, i in zip(dims, flags_idx[j]))) for j in orb)
                best = (size, k, FlagCode(q, FlagType(v, dims), tuple(sorted(words))))
    assert best is not None
    return best[2], best[1]


def _inter_dim(L, t: int, a: int, b: int) -> int:
    from .linalg import intersection_dim
    return intersection_dim(L.levels[t][a], L.levels[t][b])


# -- Cartesian-product codes --------------------------------------------------

@dataclass(frozen=True)
class CartesianCode:
    """Tuples of subspaces with prescribed dimensions; nesting is not required."""

    q: int
    v: int
    type: FlagType
    words: tuple[tuple[Subspace, ...], ...]

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate codewords")
        for w in self.words:
            if tuple(U.dim for U in w) != self.type.dims:
                raise ValueError("component dimensions differ from the type")

    def __len__(self) -> int:
        return len(self.words)

    def as_code(self) -> FlagCode:
        return FlagCode(self.q, self.type, self.words)


def _line_plane_tables(q: int):
    lines = mrd_cosets(gabidulin_mrd(2, 3, 2, q))
    planes = mrd_cosets(gabidulin_mrd(3, 2, 2, q))
    U = [[lift(M) for M in coset] for coset in lines]   # U[j][i]
    W = [[lift(M) for M in coset] for coset in planes]  # W[j][h]
    return U, W


def cartesian_code_5_2(q: int, cap: int = 20000) -> CartesianCode:
    """q^9 pairs (line, plane) in F_q^5 with Grassmann distance >= 2.

    Word (i, j, h) pairs the i-th line of line coset j with the h-th plane of
    plane coset j; the line does not depend on h.
    """
    if q**9 > cap:
        raise TooLarge(f"{q**9} words exceed the cap {cap}")
    U, W = _line_plane_tables(q)
    n = q**3
    words = tuple((U[j][i], W[j][h]) for i in range(n) for j in range(n) for h in range(n))
    return CartesianCode(q, 5, FlagType(5, (2, 3)), words)


def cartesian_code_5_3(q: int, cap: int = 20000) -> CartesianCode:
    """q^8 tuples (point, line, plane, hyperplane) in F_q^5 with Grassmann
    distance >= 3.

    The w-th (line, plane) pair of the (5, 2) code gets index (i, j) =
    divmod(w, q^4); the point depends on j only and the hyperplane on i only.
    """
    if q**8 > cap:
        raise TooLarge(f"{q**8} words exceed the cap {cap}")
    U, W = _line_plane_tables(q)
    n = q**3
    pairs = [(U[j][i], W[j][h]) for i in range(n) for j in range(n) for h in range(n)][: q**8]
    L = lattice(5, q)
    points = L.levels[1][: q**4]
    hyperplanes = L.levels[4][: q**4]
    words = []
    for w, (line, plane) in enumerate(pairs):
        i, j = divmod(w, q**4)
        words.append((points[j], line, plane, hyperplanes[i]))
    return CartesianCode(q, 5, FlagType.full(5), tuple(words))


# -- the 155-flag fixture -----------------------------------------------------

_FIXTURE_155 = (
    ("00001", "00010,00001", "11000,00010,00001", "11000,00100,00010,00001"),
    ("00001", "00100,00001", "10010,00100,00001", "10000,00100,00010,00001"),
    ("00001", "01010,00001", "10100,01010,00001", "10000,01010,00100,00001"),
    ("00001", "01110,00001", "01000,00110,00001", "01000,00100,00010,00001"),
    ("00001", "10000,00001", "10000,01100,00001", "10000,01000,00100,00001"),
)


def fixture_155_representatives() -> list[Flag]:
    reps = []
    for parts in _FIXTURE_155:
        reps.append(make_flag(Subspace.from_rows([tuple(int(c) for c in row) for row in p.split(",")], 2, 5)
                              for p in parts))
    return reps


def fixture_155() -> FlagCode:
    """155 full flags in F_2^5 at distance 4: five orbits of size 31 under a
    Singer cycle."""
    group = GroupAction([singer_generator(5, 2)])
    words: list[Flag] = []
    for rep in fixture_155_representatives():
        orbit = group_orbit_code(group, rep)
        assert len(orbit) == 31
        words.extend(orbit.words)
    return FlagCode(2, FlagType.full(5), tuple(sorted(words)))
