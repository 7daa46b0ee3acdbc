"""Conflict graphs, clique constraints, prescribed groups and an exact set-packing solver.

A flag code with minimum distance d is an independent set of the conflict
graph (flags joined when their distance is below d).  The clique families
indexed by the minimal reduction vectors cover every edge, so the code
problem becomes a 0/1 packing program with one ``<= 1`` row per clique.  A
prescribed matrix group merges columns into flag orbits and rows into clique
orbits.
"""

from __future__ import annotations

import heapq
import json
import re
import time
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .flags import Flag, FlagCode, as_type, count_flags, flag_index_tuples, m_vector, min_distance
from .linalg import MatrixFq, Subspace, apply, lattice
from .qfield import make_field, prime_factors
from .reduction import closure, compute_R, u_values


class TooLarge(ValueError):
    pass


class DistanceConditionViolated(ValueError):
    pass


class InfeasibleSolution(AssertionError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, report: "SolveReport"):
        super().__init__(f"budget exhausted with incumbent {report.best_value}")
        self.report = report


DEFAULT_VERTEX_CAP = 20_000
DEFAULT_GROUP_CAP = 10**6


# -- distances between indexed subspaces --------------------------------------

@lru_cache(maxsize=64)
def level_intersections(v: int, q: int, t: int) -> np.ndarray:
    """dim(A & B) for all pairs of t-spaces, via common subspaces in the lattice."""
    L = lattice(v, q)
    n = L.size(t)
    out = np.zeros((n, n), dtype=np.int8)
    for s in range(1, t):
        for c in range(L.size(s)):
            idx = np.fromiter(sorted(L.supers(s, c, t)), dtype=np.int64)
            out[np.ix_(idx, idx)] = s
    np.fill_diagonal(out, t)
    out.setflags(write=False)
    return out


def level_distances(v: int, q: int, t: int) -> np.ndarray:
    return (t - level_intersections(v, q, t)).astype(np.int8)


# -- conflict graph -----------------------------------------------------------

@dataclass
class ConflictGraph:
    """Flags of one type as vertices, edges between flags at distance < d."""

    v: int
    q: int
    d: int
    dims: tuple[int, ...]
    index: np.ndarray  # n x len(dims) lattice indices, enumeration order

    @property
    def n(self) -> int:
        return len(self.index)

    def flag(self, i: int) -> Flag:
        L = lattice(self.v, self.q)
        return Flag(tuple(L.levels[t][j] for t, j in zip(self.dims, self.index[i])))

    def flags(self) -> list[Flag]:
        return [self.flag(i) for i in range(self.n)]

    def distance_row(self, i: int) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int32)
        for col, t in enumerate(self.dims):
            out += level_distances(self.v, self.q, t)[self.index[i, col]][self.index[:, col]]
        return out

    def distance_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int32)
        for col, t in enumerate(self.dims):
            dm = level_distances(self.v, self.q, t)
            ids = self.index[:, col]
            out += dm[np.ix_(ids, ids)]
        return out

    def adjacency(self) -> np.ndarray:
        adj = self.distance_matrix() < self.d
        np.fill_diagonal(adj, False)
        return adj

    def neighbors(self, i: int) -> np.ndarray:
        row = self.distance_row(i) < self.d
        row[i] = False
        return np.flatnonzero(row)

    def edges(self) -> Iterable[tuple[int, int]]:
        for i in range(self.n):
            row = self.distance_row(i)
            for j in np.flatnonzero(row[i + 1:] < self.d):
                yield i, i + 1 + int(j)

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())


def build_conflict_graph(v: int, q: int, d: int, T=None, cap: int = DEFAULT_VERTEX_CAP) -> ConflictGraph:
    dims = as_type(v, T).dims
    n = count_flags(v, q, dims)
    if n > cap:
        raise TooLarge(f"{n} flags exceed the vertex cap {cap}")
    idx = np.array(flag_index_tuples(v, q, dims), dtype=np.int64).reshape(n, len(dims))
    return ConflictGraph(v, q, d, dims, idx)


# -- clique families ----------------------------------------------------------

@dataclass
class CliqueFamily:
    """Cliques {flags with U_t <= W_t for t in I} for one reduction vector r.

    ``keys[c]`` lists the lattice indices of the prescribed spaces (U_t), their
    dimensions are ``key_dims``; ``members[c]`` are flag positions.
    """

    r: tuple[int, ...]
    closure: tuple[int, ...]
    key_dims: tuple[int, ...]
    key_layers: tuple[int, ...]
    keys: list[tuple[int, ...]]
    members: list[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.keys)


def generate_clique_family(v: int, q: int, d: int, T=None, r: Sequence[int] = (),
                           flags_idx: Sequence[tuple[int, ...]] | None = None) -> CliqueFamily:
    dims = as_type(v, T).dims
    r = tuple(r)
    m = m_vector(v, dims)
    rbar = closure(r, v, dims)
    if not d > sum(a - b for a, b in zip(m, rbar)):
        raise DistanceConditionViolated(f"vector {r} does not give cliques for d={d}")
    if flags_idx is None:
        flags_idx = flag_index_tuples(v, q, dims)
    u = u_values(r, v, dims)
    picked = [(pos, t, ut) for pos, (t, x, ut) in enumerate(zip(dims, r, u)) if x > 0]
    key_dims = tuple(p[2] for p in picked)
    key_layers = tuple(p[1] for p in picked)
    if not picked:
        return CliqueFamily(r, rbar, (), (), [()], [tuple(range(len(flags_idx)))])
    if any(b < a for a, b in zip(key_dims, key_dims[1:])):
        return CliqueFamily(r, rbar, key_dims, key_layers, [], [])
    L = lattice(v, q)
    groups: dict[tuple[int, ...], list[int]] = {}

    def chains(f, i, prev):
        pos, t, ut = picked[i]
        cands = L.subs(t, f[pos], ut)
        if i > 0:
            cands = cands & L.supers(picked[i - 1][2], prev, ut)
        for c in sorted(cands):
            if i + 1 == len(picked):
                yield (c,)
            else:
                for rest in chains(f, i + 1, c):
                    yield (c,) + rest

    for p, f in enumerate(flags_idx):
        for key in chains(f, 0, None):
            groups.setdefault(key, []).append(p)
    keys = sorted(groups)
    return CliqueFamily(r, rbar, key_dims, key_layers, keys, [tuple(groups[k]) for k in keys])


def clique_families(v: int, q: int, d: int, T=None, flags_idx=None) -> list[CliqueFamily]:
    """One family per vector of R(v, d, T); empty families are dropped."""
    dims = as_type(v, T).dims
    if flags_idx is None:
        flags_idx = flag_index_tuples(v, q, dims)
    if d > sum(m_vector(v, dims)):
        return []
    out = []
    for r in compute_R(v, d, dims):
        fam = generate_clique_family(v, q, d, dims, r, flags_idx)
        if len(fam):
            out.append(fam)
    return out


# -- groups -------------------------------------------------------------------

def _mat_pow(g: MatrixFq, n: int) -> MatrixFq:
    out = MatrixFq.identity(g.nrows, g.q)
    base = g
    while n:
        if n & 1:
            out = out @ base
        base = base @ base
        n >>= 1
    return out


def companion_matrix(coeffs: Sequence[int], q: int) -> MatrixFq:
    """Companion matrix of x^v - sum c_i x^i acting on row vectors.

    ``coeffs`` are c_0..c_{v-1}; the last row is (c_0, ..., c_{v-1}).
    """
    v = len(coeffs)
    rows = [tuple(int(j == i + 1) for j in range(v)) for i in range(v - 1)]
    rows.append(tuple(coeffs))
    return MatrixFq(q, tuple(rows), v)


def matrix_order_is(g: MatrixFq, n: int) -> bool:
    ident = MatrixFq.identity(g.nrows, g.q)
    if _mat_pow(g, n) != ident:
        return False
    return all(_mat_pow(g, n // p) != ident for p in prime_factors(n))


@lru_cache(maxsize=None)
def singer_polynomial(v: int, q: int) -> tuple[int, ...]:
    """Primitive polynomial of degree v over F_q, as c_0..c_{v-1} with x^v = sum c_i x^i.

    Among all primitive polynomials the one with the largest base-q encoding
    sum c_i q^i is taken.
    """
    n = q**v - 1
    for code in range(q**v - 1, 0, -1):
        cs = []
        x = code
        for _ in range(v):
            cs.append(x % q)
            x //= q
        if cs[0] == 0:
            continue
        if matrix_order_is(companion_matrix(cs, q), n):
            return tuple(cs)
    raise AssertionError("no primitive polynomial found")


def singer_generator(v: int, q: int) -> MatrixFq:
    """Companion matrix of a primitive polynomial: it generates a Singer cycle."""
    return companion_matrix(singer_polynomial(v, q), q)


class GroupAction:
    """A finite matrix group given by generators, closed by breadth-first search."""

    def __init__(self, generators: Sequence[MatrixFq], cap: int = DEFAULT_GROUP_CAP):
        gens = list(generators)
        if gens:
            n, q = gens[0].nrows, gens[0].q
            for g in gens:
                if g.shape != (n, n) or g.q != q:
                    raise ValueError("generators of different shape or field")
                if not g.is_invertible():
                    raise ValueError("generator is singular")
        self.generators = gens
        self.cap = cap
        self._elements: list[MatrixFq] | None = None

    @classmethod
    def trivial(cls) -> "GroupAction":
        return cls([])

    @property
    def elements(self) -> list[MatrixFq]:
        if self._elements is None:
            if not self.generators:
                self._elements = []
                return self._elements
            n, q = self.generators[0].nrows, self.generators[0].q
            ident = MatrixFq.identity(n, q)
            seen = {ident}
            order = [ident]
            queue = deque([ident])
            while queue:
                a = queue.popleft()
                for g in self.generators:
                    b = a @ g
                    if b not in seen:
                        if len(seen) >= self.cap:
                            raise TooLarge(f"group exceeds {self.cap} elements")
                        seen.add(b)
                        order.append(b)
                        queue.append(b)
            self._elements = order
        return self._elements

    @property
    def order(self) -> int:
        return max(1, len(self.elements))

    @property
    def projective_order(self) -> int:
        """Order of the induced action on subspaces (scalars act trivially)."""
        els = self.elements
        if not els:
            return 1
        n = els[0].nrows
        scalars = sum(1 for g in els
                      if all(g.rows[i][j] == (g.rows[0][0] if i == j else 0) for i in range(n) for j in range(n)))
        return len(els) // scalars

    @classmethod
    def from_text(cls, text: str, q: int | None = None) -> "GroupAction":
        """One generator per line as ``r1;r2;...``; an optional ``q=<q>`` first line."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if lines and lines[0].startswith("q="):
            q = int(lines[0][2:])
            lines = lines[1:]
        if q is None:
            raise ValueError("field size not given")
        return cls([MatrixFq.from_text(ln, q) for ln in lines])

    def to_text(self) -> str:
        if not self.generators:
            return ""
        return "\n".join([f"q={self.generators[0].q}"] + [g.to_text() for g in self.generators]) + "\n"


@dataclass
class Orbit:
    representative: object
    members: list


def orbits(group: GroupAction, items: Sequence) -> list[Orbit]:
    """Orbits of Flags or Subspaces; the representative is the first item in input order."""
    items = list(items)
    where = {x: i for i, x in enumerate(items)}
    seen = [False] * len(items)
    out = []

    def image(g, x):
        if isinstance(x, Flag):
            return Flag(tuple(apply(g, p) for p in x.parts))
        return apply(g, x)

    for i, x in enumerate(items):
        if seen[i]:
            continue
        seen[i] = True
        orb = [i]
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in group.generators:
                z = image(g, y)
                j = where.get(z)
                if j is None:
                    raise ValueError("item set is not closed under the group")
                if not seen[j]:
                    seen[j] = True
                    orb.append(j)
                    queue.append(z)
        orb.sort()
        out.append(Orbit(items[orb[0]], [items[k] for k in orb]))
    return out


def _index_orbits(n: int, images: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Orbits of 0..n-1 under the permutations ``images``."""
    orbit_of = [-1] * n
    orbs = []
    for i in range(n):
        if orbit_of[i] >= 0:
            continue
        oid = len(orbs)
        orbit_of[i] = oid
        members = [i]
        queue = deque([i])
        while queue:
            a = queue.popleft()
            for img in images:
                b = img[a]
                if orbit_of[b] < 0:
                    orbit_of[b] = oid
                    members.append(b)
                    queue.append(b)
        members.sort()
        orbs.append(members)
    return orbit_of, orbs


def flag_orbit_indices(group: GroupAction, v: int, q: int, T=None, flags_idx=None):
    dims = as_type(v, T).dims
    if flags_idx is None:
        flags_idx = flag_index_tuples(v, q, dims)
    pos = {f: i for i, f in enumerate(flags_idx)}
    L = lattice(v, q)
    images = []
    for g in group.generators:
        P = L.perm(g)
        images.append([pos[tuple(P[t][i] for t, i in zip(dims, f))] for f in flags_idx])
    return _index_orbits(len(flags_idx), images)


# -- packing systems ----------------------------------------------------------

@dataclass
class PackingSystem:
    """maximize sum w_j x_j subject to sum_j M_ij x_j <= 1 for every row, x binary."""

    weights: list[int]
    rows: list[dict[int, int]]
    column_members: list[tuple[int, ...]] = field(default_factory=list)
    row_labels: list = field(default_factory=list)
    v: int | None = None
    q: int | None = None
    d: int | None = None
    dims: tuple[int, ...] = ()
    flags_idx: list[tuple[int, ...]] | None = None

    @property
    def ncols(self) -> int:
        return len(self.weights)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                out[i, j] = c
        return out

    def forced_zero(self) -> set[int]:
        return {j for row in self.rows for j, c in row.items() if c > 1}

    def is_feasible(self, x: Sequence[int]) -> bool:
        chosen = set(x)
        return all(sum(c for j, c in row.items() if j in chosen) <= 1 for row in self.rows)


@dataclass
class KramerMesnerSystem(PackingSystem):
    group_order: int = 1
    flag_orbits: list[list[int]] = field(default_factory=list)
    constraint_orbit_sizes: list[int] = field(default_factory=list)

    @property
    def lengths(self) -> list[int]:
        return [len(o) for o in self.flag_orbits]

    @property
    def matrix(self) -> np.ndarray:
        return self.dense()

    def to_json(self) -> str:
        L = lattice(self.v, self.q)
        reps = ["|".join(L.levels[t][i].to_text() for t, i in zip(self.dims, self.flags_idx[o[0]]))
                for o in self.flag_orbits]
        return json.dumps({"v": self.v, "q": self.q, "d": self.d, "type": list(self.dims),
                           "orbits": reps, "lengths": self.lengths,
                           "matrix": self.dense().tolist()})


def kramer_mesner(group: GroupAction | None, v: int, q: int, d: int, T=None) -> KramerMesnerSystem:
    """Orbit-reduced clique system; the trivial group gives the plain system.

    Clique orbits that induce the same constraint row are merged.
    """
    group = group or GroupAction.trivial()
    dims = as_type(v, T).dims
    flags_idx = flag_index_tuples(v, q, dims)
    col_of, col_orbits = flag_orbit_indices(group, v, q, dims, flags_idx)
    L = lattice(v, q)
    perms = [L.perm(g) for g in group.generators]
    rows: list[dict[int, int]] = []
    labels = []
    sizes = []
    seen: dict[tuple, int] = {}
    for fam in clique_families(v, q, d, dims, flags_idx):
        kpos = {k: i for i, k in enumerate(fam.keys)}
        images = [[kpos[tuple(P[u][i] for u, i in zip(fam.key_dims, key))] for key in fam.keys]
                  for P in perms]
        _, korbits = _index_orbits(len(fam.keys), images)
        for orb in korbits:
            rep = orb[0]
            row = tuple(sorted(Counter(col_of[p] for p in fam.members[rep]).items()))
            if row in seen:
                # identical constraint from another clique orbit
                sizes[seen[row]] += len(orb)
                continue
            seen[row] = len(rows)
            rows.append(dict(row))
            labels.append((fam.r, fam.keys[rep]))
            sizes.append(len(orb))
    return KramerMesnerSystem(
        weights=[len(o) for o in col_orbits], rows=rows, column_members=[tuple(o) for o in col_orbits],
        row_labels=labels, v=v, q=q, d=d, dims=dims, flags_idx=flags_idx,
        group_order=group.projective_order, flag_orbits=col_orbits, constraint_orbit_sizes=sizes)


def system_from_graph(n: int, edges: Iterable[tuple[int, int]], weights: Sequence[int] | None = None) -> PackingSystem:
    """Packing rows from greedy maximal cliques covering every edge."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    covered = set()
    rows = []
    for a in range(n):
        for b in sorted(adj[a]):
            if b < a or (a, b) in covered:
                continue
            clique = [a, b]
            for c in sorted(adj[a] & adj[b]):
                if all(c in adj[x] for x in clique):
                    clique.append(c)
            clique.sort()
            for i, x in enumerate(clique):
                for y in clique[i + 1:]:
                    covered.add((x, y))
            rows.append({x: 1 for x in clique})
    return PackingSystem(weights=list(weights) if weights is not None else [1] * n, rows=rows,
                         column_members=[(j,) for j in range(n)])


# -- exact solver -------------------------------------------------------------

@dataclass
class SolveReport:
    status: str  # optimal | feasible_aborted | infeasible
    best_value: int
    best_x: list[int]
    best_code: FlagCode | None
    upper_bound: int
    upper_bound_reached: bool
    nodes_explored: int
    wall_time: float

    def summary(self) -> str:
        return (f"status={self.status} value={self.best_value} bound={self.upper_bound} "
                f"nodes={self.nodes_explored} time={self.wall_time:.2f}s")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Packer:
    def __init__(self, system: PackingSystem, orbit_of: Sequence[int] | None = None):
        forced = system.forced_zero()
        cols = [j for j in range(system.ncols) if j not in forced]
        # columns lying in exactly the same rows (and the same symmetry orbit)
        # are interchangeable: keep the heaviest
        by_rows: dict[tuple, int] = {}
        membership: dict[int, list[int]] = {j: [] for j in cols}
        for ri, row in enumerate(system.rows):
            for j in row:
                if j in membership:
                    membership[j].append(ri)
        self.rep: dict[int, int] = {}
        for j in cols:
            rows_j = frozenset(membership[j])
            key = (rows_j if rows_j else j, orbit_of[j] if orbit_of is not None else 0)
            k = by_rows.get(key)
            if k is None or system.weights[j] > system.weights[k]:
                by_rows[key] = j
        for j in cols:
            rows_j = frozenset(membership[j])
            self.rep[j] = by_rows[(rows_j if rows_j else j, orbit_of[j] if orbit_of is not None else 0)]
        self.cols = sorted(by_rows.values())
        self.local = {j: i for i, j in enumerate(self.cols)}
        local = {j: i for i, j in enumerate(self.cols)}
        self.w = [system.weights[j] for j in self.cols]
        rows = []
        for row in system.rows:
            mask = 0
            for j in row:
                if j in local:
                    mask |= 1 << local[j]
            if mask.bit_count() >= 2:
                rows.append(mask)
        self.rows = sorted(set(rows))
        n = len(self.cols)
        self.conf = [1 << i for i in range(n)]
        for mask in self.rows:
            for i in _bits(mask):
                self.conf[i] |= mask
        self.all = (1 << n) - 1

    def weight(self, mask: int) -> int:
        return sum(self.w[i] for i in _bits(mask))

    def _surrogate(self, inters: list[int]) -> int:
        counts: dict[int, int] = {}
        for inter in inters:
            for i in _bits(inter):
                counts[i] = counts.get(i, 0) + 1
        ratio = max(self.w[i] / c for i, c in counts.items())
        return int(ratio * len(inters) + 1e-9)

    def bound(self, cand: int) -> tuple[int, list[tuple[int, int]]]:
        """Clique-cover and surrogate bounds for the best packing inside ``cand``."""
        active = []
        touched = []
        covered = 0
        for mask in self.rows:
            inter = mask & cand
            if inter:
                touched.append(inter)
                if inter & (inter - 1):
                    active.append((inter.bit_count(), inter))
                    covered |= inter
        free = cand & ~covered
        free_w = self.weight(free)
        if not active:
            return free_w, active
        # greedy cover: repeatedly take the row covering the most uncovered columns
        cover = 0
        left = covered
        pool = [inter for _, inter in active]
        if len(pool) < 256:
            while left:
                part = max((inter & left for inter in pool), key=int.bit_count)
                cover += max(self.w[i] for i in _bits(part))
                left &= ~part
        else:
            # lazy evaluation: gains only shrink, so a popped entry whose
            # refreshed gain still reaches the next key is a true maximum
            heap = [(-c, k) for k, (c, _) in enumerate(active)]
            heapq.heapify(heap)
            while left:
                _, k = heapq.heappop(heap)
                part = pool[k] & left
                gain = part.bit_count()
                if not gain:
                    continue
                if heap and gain < -heap[0][0]:
                    heapq.heappush(heap, (-gain, k))
                    continue
                cover += max(self.w[i] for i in _bits(part))
                left &= ~part
        surrogate = self._surrogate(pool)
        rest = [inter & covered for inter in touched if inter & covered]
        surrogate = min(surrogate, self._surrogate(rest))
        return free_w + min(cover, surrogate), active

    def greedy(self) -> int:
        order = sorted(range(len(self.cols)), key=lambda i: (-self.w[i], i))
        cand, chosen = self.all, 0
        for i in order:
            if cand >> i & 1:
                chosen |= 1 << i
                cand &= ~self.conf[i]
        return chosen


def solve(system: PackingSystem, node_limit: int | None = None, time_limit: float | None = None,
          raise_on_budget: bool = False, verify: bool = True,
          initial: Sequence[int] | None = None,
          symmetry: Sequence[Sequence[int]] | None = None) -> SolveReport:
    """Exact branch and bound for the packing program.

    Branching picks the binding row with the fewest candidates and tries each
    of its columns, then the branch where the row stays empty.  Columns that
    no binding row constrains are taken immediately.  ``initial`` is a feasible
    column set used as the first incumbent.  ``symmetry`` lists column
    permutations preserving the system; the root then branches once per
    column orbit (take one representative, or drop the whole orbit).
    """
    t0 = time.perf_counter()
    if system.d is not None and system.v is not None and system.d > sum(m_vector(system.v, system.dims)):
        # no two flags are far enough apart: the whole flag set is one clique
        system = replace(system, rows=system.rows + [{j: 1 for j in range(system.ncols)}])
    orbit_of, orbs = (None, None)
    if symmetry:
        orbit_of, orbs = _index_orbits(system.ncols, [list(p) for p in symmetry])
    pk = _Packer(system, orbit_of)
    best = pk.greedy()
    best_val = pk.weight(best)
    if initial is not None:
        if not system.is_feasible(initial):
            raise InfeasibleSolution("initial solution violates a row")
        forced = system.forced_zero()
        if any(j in forced for j in initial):
            raise InfeasibleSolution("initial solution uses a forced-zero column")
        mask = 0
        for j in initial:
            mask |= 1 << pk.local[pk.rep[j]]
        if pk.weight(mask) > best_val:
            best, best_val = mask, pk.weight(mask)
    root_bound, _ = pk.bound(pk.all)
    nodes = 0
    aborted = False
    stack = [(pk.all, 0, 0)]
    if orbs is not None:
        # orbital branching at the root: a solution meeting orbit i first can be
        # moved onto the representative of orbit i
        stack = []
        dropped = 0
        for members in orbs:
            local = [pk.local[j] for j in members if j in pk.local]
            if not local:
                continue
            i = min(local)
            stack.append(((pk.all & ~dropped) & ~pk.conf[i], 1 << i, pk.w[i]))
            for k in local:
                dropped |= 1 << k
        stack.reverse()
    while stack:
        if (node_limit is not None and nodes >= node_limit) or \
                (time_limit is not None and time.perf_counter() - t0 > time_limit):
            aborted = True
            break
        cand, chosen, val = stack.pop()
        nodes += 1
        if best_val >= root_bound:
            break
        bnd, active = pk.bound(cand)
        if val + bnd <= best_val:
            continue
        covered = 0
        for _, inter in active:
            covered |= inter
        free = cand & ~covered
        if free:
            chosen |= free
            val += pk.weight(free)
            cand &= ~free
        if not active:
            if val > best_val:
                best, best_val = chosen, val
            continue
        _, row = min(active, key=lambda x: (x[0], x[1]))
        # the row stays empty: explored last
        stack.append((cand & ~row, chosen, val))
        picks = sorted(_bits(row), key=lambda i: (-pk.w[i], i))
        for i in reversed(picks):
            stack.append((cand & ~pk.conf[i], chosen | (1 << i), val + pk.w[i]))
    x = sorted(pk.cols[i] for i in _bits(best))
    status = "feasible_aborted" if aborted else "optimal"
    code = None
    if system.flags_idx is not None:
        code = expand_solution(system, x, verify=verify)
    report = SolveReport(status, best_val, x, code, root_bound if aborted else best_val,
                         best_val >= root_bound, nodes, time.perf_counter() - t0)
    if aborted and raise_on_budget:
        raise BudgetExceeded(report)
    return report


def transfer_solution(source: PackingSystem, x: Sequence[int], target: PackingSystem) -> list[int]:
    """Columns of ``target`` whose flags are all selected by ``x`` in ``source``.

    Both systems must index the same flag enumeration.
    """
    if source.flags_idx is None or target.flags_idx is None:
        raise ValueError("systems carry no flags")
    if (source.v, source.q, source.dims) != (target.v, target.q, target.dims):
        raise ValueError("systems live on different flag sets")
    chosen = {p for j in x for p in source.column_members[j]}
    return [j for j, members in enumerate(target.column_members)
            if members and all(p in chosen for p in members)]


def general_linear_generators(v: int, q: int) -> list[MatrixFq]:
    """A generating set of GL(v, q): a v-cycle, a transposition, a transvection
    and a diagonal matrix with a primitive entry."""
    F = make_field(q)
    I = [[1 if i == j else 0 for j in range(v)] for i in range(v)]
    gens = []
    if v >= 2:
        cycle = [I[(i + 1) % v] for i in range(v)]
        swap = [I[1], I[0]] + I[2:]
        trans = [row[:] for row in I]
        trans[0][1] = 1
        gens += [cycle, swap, trans]
    if q > 2:
        diag = [row[:] for row in I]
        diag[0][0] = F.primitive_element()
        gens.append(diag)
    return [MatrixFq(q, tuple(tuple(r) for r in g), v) for g in gens]


def flag_symmetries(system: PackingSystem, generators: Sequence[MatrixFq] | None = None) -> list[list[int]]:
    """Column permutations of an unreduced flag system induced by matrices
    (GL(v, q) generators by default)."""
    if system.flags_idx is None:
        raise ValueError("system carries no flags")
    if any(len(m) != 1 for m in system.column_members):
        raise ValueError("symmetries are only derived for unreduced systems")
    if generators is None:
        generators = general_linear_generators(system.v, system.q)
    col_of = {system.column_members[j][0]: j for j in range(system.ncols)}
    pos = {f: i for i, f in enumerate(system.flags_idx)}
    L = lattice(system.v, system.q)
    perms = []
    for g in generators:
        P = L.perm(g)
        perm = [col_of[pos[tuple(P[t][i] for t, i in zip(system.dims, system.flags_idx[system.column_members[j][0]]))]]
                for j in range(system.ncols)]
        perms.append(perm)
    return perms


WARM_START_SECONDS = 10.0


def solve_flag_code(v: int, q: int, d: int, T=None, node_limit: int | None = None,
                    time_limit: float | None = None, warm_start: bool = True,
                    use_symmetry: bool = True) -> SolveReport:
    """Exact A_q(v, d; T) on the unreduced system.

    The incumbent is seeded from the optimum of the Singer-reduced system and
    the root branches over GL(v, q) column orbits.
    """
    system = kramer_mesner(None, v, q, d, T)
    initial = None
    if warm_start and d <= sum(m_vector(v, system.dims)):
        reduced = kramer_mesner(GroupAction([singer_generator(v, q)]), v, q, d, T)
        budget = WARM_START_SECONDS if time_limit is None else min(WARM_START_SECONDS, time_limit / 10)
        rep = solve(reduced, time_limit=budget, node_limit=node_limit, verify=False)
        initial = transfer_solution(reduced, rep.best_x, system)
    symmetry = flag_symmetries(system) if use_symmetry and v >= 2 else None
    return solve(system, node_limit=node_limit, time_limit=time_limit,
                 initial=initial, symmetry=symmetry)


def expand_solution(system: PackingSystem, x: Sequence[int], verify: bool = True) -> FlagCode:
    """The flag code made of the selected columns (flag orbits)."""
    if system.flags_idx is None:
        raise ValueError("system carries no flags")
    L = lattice(system.v, system.q)
    positions = sorted(p for j in x for p in system.column_members[j])
    words = tuple(Flag(tuple(L.levels[t][i] for t, i in zip(system.dims, system.flags_idx[p])))
                  for p in positions)
    code = FlagCode(system.q, as_type(system.v, system.dims), words)
    if verify and len(words) >= 2:
        dist, _ = min_distance(code)
        if dist < system.d:
            raise InfeasibleSolution(f"expanded code has distance {dist} < {system.d}")
    return code


# -- LP files -----------------------------------------------------------------

def _terms(pairs: Iterable[tuple[int, int]]) -> list[str]:
    out = []
    for j, c in pairs:
        out.append(f"x{j}" if c == 1 else f"{c} x{j}")
    return out


def _wrap(prefix: str, terms: list[str], suffix: str = "") -> list[str]:
    lines, cur = [], prefix
    for i, t in enumerate(terms):
        piece = t if i == 0 else f"+ {t}"
        if len(cur) + len(piece) + 1 > 250:
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {piece}"
    lines.append(cur + suffix)
    return lines


def lp_text(system: PackingSystem) -> str:
    lines = [f"\\ packing model: {system.ncols} binary columns, {system.nrows} rows"]
    if system.v is not None:
        lines.append(f"\\ v={system.v} q={system.q} d={system.d} type={','.join(map(str, system.dims))}")
    lines.append("Maximize")
    lines += _wrap(" obj:", _terms(enumerate(system.weights)) or ["0 x0"])
    lines.append("Subject To")
    for i, row in enumerate(system.rows):
        lines += _wrap(f" c{i}:", _terms(sorted(row.items())), " <= 1")
    lines.append("Binary")
    for start in range(0, system.ncols, 10):
        lines.append(" " + " ".join(f"x{j}" for j in range(start, min(system.ncols, start + 10))))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_ilp(system: PackingSystem, path, fmt: str = "lp") -> None:
    if fmt == "lp":
        Path(path).write_text(lp_text(system))
    elif fmt == "json":
        if isinstance(system, KramerMesnerSystem):
            Path(path).write_text(system.to_json())
        else:
            Path(path).write_text(json.dumps({"weights": system.weights,
                                              "rows": [sorted(r.items()) for r in system.rows]}))
    else:
        raise ValueError(f"unknown format {fmt!r}")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*x(\d+)")


def parse_lp(text: str) -> PackingSystem:
    """Read back the subset of the LP format written by :func:`lp_text`."""
    section = None
    chunks: dict[str, list[str]] = {"obj": [], "rows": [], "bin": []}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("maximize", "maximise", "max"):
            section = "obj"
            continue
        if low in ("subject to", "st", "s.t."):
            section = "rows"
            continue
        if low in ("binary", "binaries", "bin"):
            section = "bin"
            continue
        if low == "end":
            break
        if section == "rows" and raw.startswith("   ") and chunks["rows"]:
            chunks["rows"][-1] += " " + line
        elif section == "obj":
            chunks["obj"].append(line)
        elif section == "rows":
            chunks["rows"].append(line)
        elif section == "bin":
            chunks["bin"].append(line)
    binaries = [int(t[1:]) for ln in chunks["bin"] for t in ln.split()]
    n = max(binaries) + 1 if binaries else 0
    weights = [0] * n
    obj = " ".join(chunks["obj"]).split(":", 1)[-1]
    for sign, coef, j in _TERM.findall(obj):
        weights[int(j)] = (-1 if sign == "-" else 1) * (int(coef) if coef else 1)
    rows = []
    for ln in chunks["rows"]:
        body = ln.split(":", 1)[-1].split("<=")[0]
        rows.append({int(j): (int(c) if c else 1) for _, c, j in _TERM.findall(body)})
    return PackingSystem(weights=weights, rows=rows, column_members=[(j,) for j in range(n)])


# -- orbit codes --------------------------------------------------------------

def singer_flag_orbits(v: int, q: int, T=None, power: int = 1):
    """Flag orbits under the cyclic group generated by sigma^power."""
    g = _mat_pow(singer_generator(v, q), power)
    return flag_orbit_indices(GroupAction([g]), v, q, T)
