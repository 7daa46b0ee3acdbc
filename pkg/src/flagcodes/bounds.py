"""Upper and lower bounds for flag codes.

``A(v, d; T)`` below is the largest size of a flag code of type T in F_q^v
with minimum Grassmann distance d; ``Ai(v, d; k)`` is the analogous number
for k-spaces under the injection distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .flags import Flag, as_type, count_flags, flag_index_tuples, m_vector
from .linalg import lattice, sum_dim
from .qcombin import (
    QPolynomial,
    QRational,
    count_flags_symbolic,
    evaluate,
    floor_eval,
    gaussian_binomial,
    gaussian_int,
)
from .reduction import check_vector, closure, compute_R, u_values


class DistanceConditionViolated(ValueError):
    pass


class EmptyFamily(ValueError):
    pass


class NotApplicable(ValueError):
    pass


class InvalidParams(ValueError):
    pass


class TooLarge(ValueError):
    pass


KINDS = ("exact", "anticode", "cdc", "johnson", "sphere_packing", "sphere_covering", "construction")


@dataclass(frozen=True)
class BoundResult:
    kind: str
    value_at_q: int | None
    symbolic: QRational | None = None
    provenance: dict = field(default_factory=dict, compare=False)
    q: int | None = None

    @property
    def value(self) -> int | None:
        return self.value_at_q

    def describe(self) -> str:
        p = self.provenance
        if self.kind == "anticode":
            return f"anticode r={_tup(p['r'])}"
        if self.kind == "cartesian_anticode":
            return f"cartesian anticode r={_tup(p['r'])}"
        if self.kind == "johnson":
            return f"johnson {p['trace']}"
        if self.kind == "cdc":
            return f"cdc Ai({p['v']},{p['d']};{p['k']})={p['cdc_value']} via t={p['t']} alpha={p['alpha']}"
        return f"{self.kind} {p.get('reason', '')}".strip()

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "value": self.value_at_q, "provenance": self.describe()}
        if self.symbolic is not None:
            out["symbolic"] = self.symbolic.mixed_str()
        return out


def _tup(r) -> str:
    return "(" + ",".join(map(str, r)) + ")"


def _dims(v, T):
    return as_type(v, T).dims


# -- anticode bound -----------------------------------------------------------

def anticode_expression(v: int, r: Sequence[int], T=None) -> QRational:
    """Number of prescribed chains over number of chains inside one flag."""
    dims = _dims(v, T)
    r = check_vector(r, v, dims)
    u = u_values(r, v, dims)
    picked = [(t, ut) for t, x, ut in zip(dims, r, u) if x > 0]
    if not picked:
        return QRational(1)
    if any(b[1] < a[1] for a, b in zip(picked, picked[1:])):
        raise EmptyFamily(f"u values {[x for _, x in picked]} are not weakly increasing")
    k1, u1 = picked[0]
    num = gaussian_binomial(v, u1)
    den = gaussian_binomial(k1, u1)
    for (_, ua), (kb, ub) in zip(picked, picked[1:]):
        num = num * gaussian_binomial(v - ua, ub - ua)
        den = den * gaussian_binomial(kb - ua, ub - ua)
    return QRational(num, den)


def anticode_bound(v: int, d: int, T=None, r: Sequence[int] = (), q: int | None = None) -> BoundResult:
    dims = _dims(v, T)
    r = check_vector(r, v, dims)
    deficit = sum(m - x for m, x in zip(m_vector(v, dims), closure(r, v, dims)))
    if not d > deficit:
        raise DistanceConditionViolated(f"d={d} does not exceed the deficit {deficit} of {r}")
    expr = anticode_expression(v, r, dims)
    val = floor_eval(expr, q) if q is not None else None
    return BoundResult("anticode", val, expr, {"r": r, "T": dims}, q)


def anticode_candidates(v: int, d: int, T=None) -> list[tuple[tuple[int, ...], QRational]]:
    """(r, expression) for every r in R(v, d, T) whose clique family is nonempty."""
    out = []
    for r in compute_R(v, d, T):
        try:
            out.append((r, anticode_expression(v, r, T)))
        except EmptyFamily:
            continue
    return out


def best_anticode_bound(v: int, d: int, q: int, T=None) -> BoundResult:
    """Smallest anticode bound at q; ties go to the lexicographically largest r."""
    dims = _dims(v, T)
    if d > sum(m_vector(v, dims)):
        return BoundResult("exact", 1, QRational(1), {"reason": "d exceeds the maximum distance"}, q)
    best = None
    for r, expr in anticode_candidates(v, d, dims):
        val = floor_eval(expr, q)
        if best is None or val < best[0] or (val == best[0] and r > best[1]):
            best = (val, r, expr)
    if best is None:
        raise NotApplicable("no usable reduction vector")
    val, r, expr = best
    return BoundResult("anticode", val, expr, {"r": r, "T": dims}, q)


def cartesian_anticode_bound(v: int, d: int, T=None, r: Sequence[int] = (), q: int | None = None) -> BoundResult:
    """Anticode bound for tuples of subspaces without nesting, using raw r.

    Cliques fix a u_t-space inside the t-component for every t with r_t > 0,
    independently per component, so the bound is a plain product.
    """
    dims = _dims(v, T)
    r = check_vector(r, v, dims)
    m = m_vector(v, dims)
    deficit = sum(a - b for a, b in zip(m, r))
    if not d > deficit:
        raise DistanceConditionViolated(f"d={d} does not exceed {deficit}")
    u = u_values(r, v, dims)
    expr = QRational(1)
    for t, x, ut in zip(dims, r, u):
        if x > 0:
            expr = expr * QRational(gaussian_binomial(v, ut), gaussian_binomial(t, ut))
    val = floor_eval(expr, q) if q is not None else None
    return BoundResult("cartesian_anticode", val, expr, {"r": r, "T": dims}, q)


def best_cartesian_anticode_bound(v: int, d: int, q: int, T=None) -> BoundResult:
    dims = _dims(v, T)
    m = m_vector(v, dims)
    best = None
    from .reduction import box
    for r in box(v, dims):
        if not d > sum(a - b for a, b in zip(m, r)):
            continue
        res = cartesian_anticode_bound(v, d, dims, r, q)
        if best is None or res.value_at_q < best.value_at_q:
            best = res
    return best


# -- constant dimension codes -------------------------------------------------

@dataclass(frozen=True)
class CdcEntry:
    v: int
    d: int
    k: int
    q: int | None
    value: Any
    source: str
    exact: bool


# sharp values quoted from the constant dimension code literature
_CDC_TABLE = {
    (6, 2, 3, 2): 77,
    (7, 2, 2, 2): 41,
}


def cdc_value(v: int, d: int, k: int, q: int | None = None) -> CdcEntry:
    """Ai(v, d; k): exact when a formula or table entry is known, else a bound.

    With ``q=None`` only the parametric formulas are available and the value
    is a ``QPolynomial``.
    """
    if not (0 <= k <= v and d >= 1):
        raise InvalidParams(f"bad parameters v={v}, d={d}, k={k}")
    k = min(k, v - k)
    if k == 0 or d > k:
        return CdcEntry(v, d, k, q, _const(1, q), "single codeword", True)
    if d == 1:
        return CdcEntry(v, d, k, q, _gauss(v, k, q), "all k-spaces", True)
    if d == k and v % k == 0:
        expr = QRational(QPolynomial.q_power(v) - 1, QPolynomial.q_power(k) - 1).as_polynomial()
        return CdcEntry(v, d, k, q, _ev(expr, q), "spread", True)
    if d == k and v == 2 * k + 1 and k >= 2:
        expr = QPolynomial.q_power(k + 1) + 1
        return CdcEntry(v, d, k, q, _ev(expr, q), "partial spread", True)
    if q is None:
        raise NotApplicable(f"no parametric value for Ai({v},{d};{k})")
    if (v, d, k, q) in _CDC_TABLE:
        return CdcEntry(v, d, k, q, _CDC_TABLE[(v, d, k, q)], "table", True)
    return CdcEntry(v, d, k, q, _cdc_upper(v, d, k, q), "anticode/johnson", False)


@lru_cache(maxsize=None)
def _cdc_upper(v: int, d: int, k: int, q: int) -> int:
    anticode = gaussian_int(v, k - d + 1, q) // gaussian_int(k, k - d + 1, q)
    best = anticode
    if d < k:
        inner = cdc_value(v - 1, d, k - 1, q).value
        best = min(best, (q**v - 1) * inner // (q**k - 1))
    return best


def _const(c, q):
    return c if q is not None else QPolynomial.const(c)


def _gauss(v, k, q):
    return gaussian_int(v, k, q) if q is not None else gaussian_binomial(v, k)


def _ev(expr, q):
    return evaluate(expr, q) if q is not None else expr


def cdc_candidates(v: int, d: int, T=None):
    """For each t in T: the least alpha >= 1 making alpha*e_t usable."""
    dims = _dims(v, T)
    m = m_vector(v, dims)
    out = []
    for pos, (t, mt) in enumerate(zip(dims, m)):
        for alpha in range(1, mt + 1):
            r = tuple(alpha if i == pos else 0 for i in range(len(dims)))
            c = closure(r, v, dims)
            if d > sum(a - b for a, b in zip(m, c)):
                out.append((t, alpha, mt - alpha + 1))
                break
    return out


def cdc_bound(v: int, d: int, q: int | None = None, T=None) -> BoundResult:
    """Best bound obtained from one layer of the code, Ai(v, m_t - alpha + 1; t)."""
    dims = _dims(v, T)
    best = None
    for t, alpha, dd in cdc_candidates(v, d, dims):
        try:
            entry = cdc_value(v, dd, t, q)
        except NotApplicable:
            continue
        val = entry.value
        key = val if q is not None else None
        if best is None or (q is not None and key < best[0]):
            best = (key, t, alpha, dd, entry)
    if best is None:
        raise NotApplicable(f"no single-layer bound for v={v}, d={d}")
    _, t, alpha, dd, entry = best
    prov = {"v": v, "d": dd, "k": t, "t": t, "alpha": alpha, "cdc_value": entry.value,
            "exact": entry.exact, "source": entry.source}
    if q is None:
        return BoundResult("cdc", None, QRational(entry.value), prov, None)
    return BoundResult("cdc", entry.value, None, prov, q)


# -- exact values and the Johnson recursion -----------------------------------

def exact_value(v: int, d: int, q: int | None = None, T=None):
    """Known exact A(v, d; T) as ``(expression, reason)`` or None."""
    dims = _dims(v, T)
    dmax = sum(m_vector(v, dims))
    if d > dmax:
        return QPolynomial.const(1), "d exceeds the maximum distance"
    if d == 1:
        return count_flags_symbolic(v, dims), "all flags"
    if tuple(dims) != tuple(range(1, v)):
        return None
    if v % 2 == 0 and d == (v // 2) ** 2:
        return QPolynomial.q_power(v // 2) + 1, "spread"
    if v % 2 == 1 and v >= 5 and d == (v // 2) ** 2 + v // 2:
        return QPolynomial.q_power(v // 2 + 1) + 1, "partial spread"
    if v == 3 and d == 2:
        return gaussian_binomial(3, 1), "singer orbit"
    if v == 4 and d == 3:
        return gaussian_binomial(4, 1), "singer orbit"
    return None


def johnson_bound(v: int, d: int, q: int, T=None) -> BoundResult:
    """A(v,d;T) <= floor([v 1]/[k_1 1] * A(v-1, d; T-1))."""
    dims = _dims(v, T)
    if v < 2:
        raise InvalidParams("v must be at least 2")
    inner_dims = tuple(t - 1 for t in dims if t >= 2)
    if inner_dims and d <= sum(m_vector(v - 1, inner_dims)):
        inner = best_upper_bound(v - 1, d, q, inner_dims)
        inner_val, inner_desc = inner.value_at_q, inner.describe()
    else:
        inner_val, inner_desc = 1, "trivial"
    a, b = gaussian_int(v, 1, q), gaussian_int(dims[0], 1, q)
    val = a * inner_val // b
    label = _type_label(v - 1, inner_dims)
    head = f"[{v} 1]" if b == 1 else f"[{v} 1]/[{dims[0]} 1]"
    nums = f"{a}" if b == 1 else f"{a}/{b}"
    trace = f"{head}*A({v - 1},{d}{label})={nums}*{inner_val} [{inner_desc}]"
    return BoundResult("johnson", val, None, {"trace": trace, "inner": inner_val}, q)


def _type_label(v, dims) -> str:
    if not dims:
        return ";{}"
    if tuple(dims) == tuple(range(1, v)):
        return ""
    return ";{" + ",".join(map(str, dims)) + "}"


_ORDER = {"exact": 0, "anticode": 1, "cdc": 2, "johnson": 3}


def upper_bound_candidates(v: int, d: int, q: int, T=None) -> list[BoundResult]:
    dims = _dims(v, T)
    out = []
    ex = exact_value(v, d, q, dims)
    if ex is not None:
        expr, reason = ex
        out.append(BoundResult("exact", evaluate(expr, q), QRational(expr), {"reason": reason}, q))
        return out
    try:
        out.append(best_anticode_bound(v, d, q, dims))
    except NotApplicable:
        pass
    try:
        out.append(cdc_bound(v, d, q, dims))
    except NotApplicable:
        pass
    if v >= 2:
        out.append(johnson_bound(v, d, q, dims))
    return out


@lru_cache(maxsize=None)
def _best(v: int, d: int, q: int, dims: tuple[int, ...]) -> BoundResult:
    cands = upper_bound_candidates(v, d, q, dims)
    return min(cands, key=lambda b: (b.value_at_q, _ORDER.get(b.kind, 9)))


def best_upper_bound(v: int, d: int, q: int, T=None) -> BoundResult:
    return _best(v, d, q, _dims(v, T))


def all_upper_bounds(v: int, d: int, q: int, T=None) -> dict[str, BoundResult]:
    """Each method separately (where it applies); used by the CLI."""
    dims = _dims(v, T)
    out = {}
    ex = exact_value(v, d, q, dims)
    if ex is not None:
        expr, reason = ex
        out["exact"] = BoundResult("exact", evaluate(expr, q), QRational(expr), {"reason": reason}, q)
    for name, fn in (("anticode", best_anticode_bound), ("cdc", cdc_bound), ("johnson", johnson_bound)):
        try:
            out[name] = fn(v, d, q, dims)
        except (NotApplicable, InvalidParams):
            pass
    return out


def single_layer_cdc_bound(v: int, d: int, q: int) -> BoundResult:
    """Ai(v, k; k) with k = floor(v/2) - delta for d = dmax - delta, delta < floor(v/2)."""
    dmax = (v * v) // 4
    delta = dmax - d
    if not 0 <= delta < v // 2:
        raise NotApplicable(f"d={d} is not within floor(v/2) of the maximum {dmax}")
    k = v // 2 - delta
    entry = cdc_value(v, k, k, q)
    prov = {"v": v, "d": k, "k": k, "t": v // 2, "alpha": 1, "cdc_value": entry.value,
            "exact": entry.exact, "source": entry.source}
    return BoundResult("cdc", entry.value, None, prov, q)


@lru_cache(maxsize=None)
def johnson_cdc_bound(v: int, d: int, q: int) -> BoundResult:
    """Full-type bound from the point Johnson recursion and the single-layer cdc bound only.

    This is the recursion behind the classical binary tables: each row is
    [v 1] times the previous row, unless the cdc bound gives less.  It can be
    weaker than :func:`best_upper_bound`, which also uses anticode bounds.
    """
    if d > (v * v) // 4:
        return BoundResult("exact", 1, QRational(1), {"reason": "d exceeds the maximum distance"}, q)
    if v == 1:
        return BoundResult("exact", 1, QRational(1), {"reason": "trivial"}, q)
    inner = johnson_cdc_bound(v - 1, d, q)
    a = gaussian_int(v, 1, q)
    trace = f"[{v} 1]*A({v - 1},{d})={a}*{inner.value_at_q} [{inner.describe()}]"
    cands = [BoundResult("johnson", a * inner.value_at_q, None, {"trace": trace, "inner": inner.value_at_q}, q)]
    try:
        cands.append(single_layer_cdc_bound(v, d, q))
    except NotApplicable:
        pass
    return min(cands, key=lambda b: (b.value_at_q, -_ORDER[b.kind]))


# -- asymptotics --------------------------------------------------------------

def beta_exponent(v: int, d: int) -> int:
    """Leading exponent beta of the explicit upper bound q^beta + O(q^(beta-1))."""
    if d < 1:
        raise InvalidParams("d must be positive")
    vh = math.isqrt(4 * d - 1) + 1  # ceil(2 sqrt(d))
    if v < vh:
        raise NotApplicable(f"v={v} < ceil(2 sqrt d)={vh}: only one codeword")
    return (v * (v - 1) - vh * (vh - 1)) // 2 + vh - d + (vh - 1) ** 2 // 4


# -- sphere bounds ------------------------------------------------------------

DEFAULT_WORK_CAP = 10**7


def _distance_profile(v: int, q: int, T, center: Flag | None, cap: int) -> np.ndarray:
    dims = _dims(v, T)
    total = count_flags(v, q, dims)
    if total > cap:
        raise TooLarge(f"{total} flags exceed the cap {cap}")
    L = lattice(v, q)
    idx = np.array(flag_index_tuples(v, q, dims), dtype=np.int64)
    if center is None:
        cidx = idx[0]
    else:
        if center.dims != dims:
            raise InvalidParams("center has the wrong type")
        cidx = [L.index[t][s] for t, s in zip(dims, center.parts)]
    dist = np.zeros(len(idx), dtype=np.int64)
    for col, (t, ci) in enumerate(zip(dims, cidx)):
        c = L.levels[t][ci]
        per = np.array([t - (2 * t - sum_dim(c, s)) for s in L.levels[t]], dtype=np.int64)
        dist += per[idx[:, col]]
    return dist


def ball_size(v: int, q: int, T, radius: int, center: Flag | None = None, cap: int = DEFAULT_WORK_CAP) -> int:
    """Number of flags within Grassmann distance ``radius`` of ``center``."""
    dist = _distance_profile(v, q, T, center, cap)
    return int(np.count_nonzero(dist <= radius))


def sphere_packing_bound(v: int, d: int, q: int, T=None, cap: int = DEFAULT_WORK_CAP) -> BoundResult:
    total = count_flags(v, q, T)
    b = ball_size(v, q, T, (d - 1) // 2, cap=cap)
    return BoundResult("sphere_packing", total // b, None,
                       {"reason": f"{total} // ball({(d - 1) // 2})={b}"}, q)


def sphere_covering_bound(v: int, d: int, q: int, T=None, cap: int = DEFAULT_WORK_CAP) -> BoundResult:
    total = count_flags(v, q, T)
    b = ball_size(v, q, T, d - 1, cap=cap)
    return BoundResult("sphere_covering", -(-total // b), None,
                       {"reason": f"ceil({total} / ball({d - 1})={b})"}, q)


# -- lower bounds and tables --------------------------------------------------

def construction_lower_bound(v: int, d: int, q: int, T=None):
    """Sizes realised by the constructions of this package: ``(size, source)``."""
    dims = _dims(v, T)
    full = tuple(dims) == tuple(range(1, v))
    if d > sum(m_vector(v, dims)):
        return 1, "single flag"
    if d == 1:
        return count_flags(v, q, dims), "all flags"
    if not full:
        return None
    if v % 2 == 0 and d == (v // 2) ** 2:
        return q ** (v // 2) + 1, "spread_code"
    if v % 2 == 1 and v >= 5 and d == (v // 2) ** 2 + v // 2:
        return q ** (v // 2 + 1) + 1, "partial_spread_flag_code"
    if v == 3 and d == 2:
        return q * q + q + 1, "singer_orbit_code"
    if v == 4 and d == 3:
        return gaussian_int(4, 1, q), "singer_orbit_code"
    if (v, d, q) == (5, 4, 2):
        return 155, "fixture_155"
    return None


def parse_results_cache(text: str) -> list[dict]:
    """Lines ``v d q T size source``; T is a comma list or ``full``."""
    out = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split(None, 5)
        if len(parts) < 5:
            raise ValueError(f"bad cache line: {ln!r}")
        v, d, q = int(parts[0]), int(parts[1]), int(parts[2])
        T = None if parts[3] == "full" else tuple(int(x) for x in parts[3].split(","))
        out.append({"v": v, "d": d, "q": q, "T": _dims(v, T), "size": int(parts[4]),
                    "source": parts[5] if len(parts) > 5 else "cache"})
    return out


@dataclass
class TableCell:
    v: int
    d: int
    q: int
    upper: BoundResult
    lower: int | None
    lower_source: str | None
    tighter: BoundResult | None = None

    def text(self) -> str:
        hi = self.upper.value_at_q
        if self.lower is None or self.lower >= hi:
            return str(hi)
        return f"{self.lower}--{hi}"

    def to_json(self) -> dict:
        out = {"v": self.v, "d": self.d, "q": self.q, "upper": self.upper.value_at_q,
               "lower": self.lower, "lower_source": self.lower_source,
               "cell": self.text(), "provenance": self.upper.to_json()}
        if self.tighter is not None:
            out["tighter"] = self.tighter.to_json()
        return out


def bounds_table(v_range, q: int, cache: Sequence[dict] = (), method: str = "recursion") -> list[list[TableCell]]:
    """Rows of cells for full flag codes, d = 1 .. floor(v^2/4).

    ``method="recursion"`` fills the cells with :func:`johnson_cdc_bound` and
    records a strictly smaller :func:`best_upper_bound` as ``tighter``;
    ``method="best"`` uses :func:`best_upper_bound` directly.
    """
    if method not in ("recursion", "best"):
        raise ValueError(f"unknown table method {method!r}")
    rows = []
    for v in v_range:
        row = []
        full = tuple(range(1, v))
        for d in range(1, (v * v) // 4 + 1):
            best = best_upper_bound(v, d, q)
            up = best if method == "best" else johnson_cdc_bound(v, d, q)
            tighter = best if best.value_at_q < up.value_at_q else None
            lo = construction_lower_bound(v, d, q)
            lower, source = (lo if lo else (None, None))
            for rec in cache:
                if (rec["v"], rec["d"], rec["q"], rec["T"]) == (v, d, q, full):
                    if lower is None or rec["size"] > lower:
                        lower, source = rec["size"], rec["source"]
            if lower is not None and lower > best.value_at_q:
                raise AssertionError(f"lower bound {lower} exceeds upper bound at v={v}, d={d}")
            row.append(TableCell(v, d, q, up, lower, source, tighter))
        rows.append(row)
    return rows


def render_table(rows: list[list[TableCell]], fmt: str = "text") -> str:
    if fmt == "json":
        import json
        return json.dumps([[c.to_json() for c in row] for row in rows], indent=1)
    if fmt == "csv":
        lines = ["v,d,q,cell,upper,lower,provenance"]
        for row in rows:
            for c in row:
                lines.append(f"{c.v},{c.d},{c.q},{c.text()},{c.upper.value_at_q},"
                             f"{'' if c.lower is None else c.lower},\"{c.upper.describe()}\"")
        return "\n".join(lines) + "\n"
    width = max((len(c.text()) for row in rows for c in row), default=1)
    dmax = max((len(row) for row in rows), default=0)
    head = "v/d " + " ".join(str(d).rjust(width) for d in range(1, dmax + 1))
    lines = [head]
    for row in rows:
        if not row:
            continue
        lines.append(f"{row[0].v:<3} " + " ".join(c.text().rjust(width) for c in row))
    lines.append("")
    for row in rows:
        for c in row:
            extra = f"; lower {c.lower} ({c.lower_source})" if c.lower is not None else ""
            if c.tighter is not None:
                extra += f"; tighter {c.tighter.value_at_q} by {c.tighter.describe()}"
            lines.append(f"({c.v},{c.d}): {c.upper.value_at_q} {c.upper.describe()}{extra}")
    return "\n".join(lines) + "\n"
