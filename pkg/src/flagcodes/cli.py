"""Command-line entry point: ``flagcodes <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 verification failure, 4 budget
exceeded (the best code found so far is still reported).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, constructions, flags, qcombin, reduction, search
from .qfield import is_prime_power

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(ValueError):
    pass


class VerificationFailed(RuntimeError):
    pass


def _type_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad type list {text!r}")


def _check_q(q: int) -> int:
    if not is_prime_power(q):
        raise UsageError(f"q={q} is not a prime power")
    return q


def _check_type(v: int, T):
    if v < 2:
        raise UsageError("v must be at least 2")
    try:
        return flags.as_type(v, T).dims
    except ValueError as exc:
        raise UsageError(str(exc))


def _check_d(v: int, d: int, dims) -> None:
    if d < 1:
        raise UsageError("d must be positive")


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload))
    else:
        print(text)


# -- subcommands --------------------------------------------------------------

def cmd_gauss(args) -> int:
    if not 0 <= args.k <= args.v:
        raise UsageError("need 0 <= k <= v")
    poly = qcombin.gaussian_binomial(args.v, args.k)
    payload = {"v": args.v, "k": args.k, "symbolic": str(poly)}
    text = f"[{args.v} {args.k}]_q = {poly}"
    if args.q is not None:
        value = qcombin.gaussian_int(args.v, args.k, _check_q(args.q))
        payload["q"], payload["value"] = args.q, value
        text += f"\nq={args.q}: {value}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_count(args) -> int:
    dims = _check_type(args.v, args.type)
    poly = qcombin.count_flags_symbolic(args.v, dims)
    payload = {"v": args.v, "type": list(dims), "symbolic": str(poly)}
    text = f"#flags(v={args.v}, T={{{','.join(map(str, dims))}}}) = {poly}"
    if args.q is not None:
        value = flags.count_flags(args.v, _check_q(args.q), dims)
        payload["q"], payload["value"] = args.q, value
        text += f"\nq={args.q}: {value}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_rset(args) -> int:
    dims = _check_type(args.v, args.type)
    _check_d(args.v, args.d, dims)
    try:
        R = reduction.compute_R(args.v, args.d, dims)
    except reduction.InvalidDistance as exc:
        raise UsageError(str(exc))
    rows = [{"r": list(r), "closure": list(reduction.closure(r, args.v, dims))} for r in R]
    text = "\n".join(f"{bounds._tup(x['r'])}  closure {bounds._tup(x['closure'])}" for x in rows)
    _emit(args, {"v": args.v, "d": args.d, "type": list(dims), "R": rows}, text)
    return EXIT_OK


def _bound_result(method: str, v: int, d: int, q: int, dims) -> bounds.BoundResult:
    if method == "best":
        return bounds.best_upper_bound(v, d, q, dims)
    if method == "anticode":
        return bounds.best_anticode_bound(v, d, q, dims)
    if method == "johnson":
        return bounds.johnson_bound(v, d, q, dims)
    if method == "cdc":
        return bounds.cdc_bound(v, d, q, dims)
    if method == "pack":
        return bounds.sphere_packing_bound(v, d, q, dims)
    if method == "cover":
        return bounds.sphere_covering_bound(v, d, q, dims)
    raise UsageError(f"unknown method {method!r}")


def cmd_bound(args) -> int:
    q = _check_q(args.q)
    dims = _check_type(args.v, args.type)
    _check_d(args.v, args.d, dims)
    if args.method == "beta":
        if dims != tuple(range(1, args.v)):
            raise UsageError("beta is defined for the full type only")
        beta = bounds.beta_exponent(args.v, args.d)
        _emit(args, {"v": args.v, "d": args.d, "beta": beta}, f"beta = {beta}  (bound q^{beta} + O(q^{beta - 1}))")
        return EXIT_OK
    try:
        res = _bound_result(args.method, args.v, args.d, q, dims)
    except (bounds.NotApplicable, bounds.DistanceConditionViolated, bounds.EmptyFamily) as exc:
        raise UsageError(f"{args.method} bound not applicable: {exc}")
    payload = {"v": args.v, "d": args.d, "q": q, "type": list(dims), **res.to_json()}
    text = f"{res.value_at_q}  {res.describe()}"
    if res.symbolic is not None:
        text += f"\nsymbolic: {res.symbolic.mixed_str()}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_table(args) -> int:
    q = _check_q(args.q)
    if args.v_max < args.v_min:
        raise UsageError("--v-max below --v-min")
    cache = []
    if args.cache:
        cache = bounds.parse_results_cache(Path(args.cache).read_text())
    rows = bounds.bounds_table(range(args.v_min, args.v_max + 1), q, cache, method=args.method)
    fmt = "json" if args.json else args.format
    sys.stdout.write(bounds.render_table(rows, fmt))
    return EXIT_OK


def _write_or_print(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _report_code(args, code, dist, extra: dict | None = None, cartesian: bool = False) -> None:
    payload = {"size": len(code), "min_distance": None if dist == flags.INF else dist, **(extra or {})}
    if args.output:
        Path(args.output).write_text(flags.code_to_text(code, cartesian=cartesian))
        payload["path"] = args.output
        _emit(args, payload, f"size {len(code)}, distance {dist}; written to {args.output}")
    elif args.json:
        payload["code"] = flags.code_to_text(code, cartesian=cartesian)
        print(json.dumps(payload))
    else:
        sys.stdout.write(flags.code_to_text(code, cartesian=cartesian))
        print(f"# size {len(code)}, distance {dist}", file=sys.stderr)


def cmd_construct(args) -> int:
    q = _check_q(args.q)
    kind = args.kind
    cartesian = False
    extra: dict = {"construction": kind}
    try:
        if kind == "spread":
            code = constructions.spread_code(args.param, q)
        elif kind == "pspread":
            code = constructions.partial_spread_flag_code(args.param, q)
        elif kind == "singer":
            if args.param is None or args.d is None:
                raise UsageError("singer needs v and --d")
            dims = _check_type(args.param, args.type)
            code, power = constructions.seed_search_singer(args.param, q, args.d, dims)
            extra["power"] = power
        elif kind == "mrd-cartesian":
            if args.param not in (2, 3):
                raise UsageError("mrd-cartesian takes 2 (type {2,3}) or 3 (full type)")
            c = (constructions.cartesian_code_5_2 if args.param == 2 else constructions.cartesian_code_5_3)(q)
            code, cartesian = c.as_code(), True
        else:
            raise UsageError(f"unknown construction {kind!r}")
    except (constructions.InvalidParams, search.TooLarge) as exc:
        raise UsageError(str(exc))
    dist = flags.min_distance(code)[0]
    _report_code(args, code, dist, extra, cartesian)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        code, cartesian = flags.read_code(args.file)
    except (OSError, flags.CodeFileError, ValueError) as exc:
        raise VerificationFailed(f"cannot read {args.file}: {exc}")
    dist, witness = flags.min_distance(code)
    ok = args.d is None or dist >= args.d
    payload = {"file": str(args.file), "size": len(code), "cartesian": cartesian,
               "min_distance": None if dist == flags.INF else dist, "ok": ok}
    text = f"size {len(code)}, distance {dist}" + ("" if ok else f" < required {args.d}")
    if not ok and witness is not None:
        text += "\nwitness:\n  " + "\n  ".join("|".join(p.to_text() for p in flags._parts(w)) for w in witness)
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_search(args) -> int:
    q = _check_q(args.q)
    dims = _check_type(args.v, args.type)
    _check_d(args.v, args.d, dims)
    try:
        if args.group:
            group = search.GroupAction.from_text(Path(args.group).read_text(), q)
            system = search.kramer_mesner(group, args.v, q, args.d, dims)
        else:
            system = search.kramer_mesner(None, args.v, q, args.d, dims)
    except search.TooLarge as exc:
        raise UsageError(str(exc))
    if args.export_lp:
        search.export_ilp(system, args.export_lp, "lp")
    if args.export_json:
        search.export_ilp(system, args.export_json, "json")
    if args.group:
        report = search.solve(system, node_limit=args.node_limit, time_limit=args.time_limit)
    else:
        report = search.solve_flag_code(args.v, q, args.d, dims, node_limit=args.node_limit,
                                        time_limit=args.time_limit)
    payload = {"v": args.v, "d": args.d, "q": q, "type": list(dims), "rows": system.nrows,
               "columns": system.ncols, "status": report.status, "best_value": report.best_value,
               "upper_bound": report.upper_bound, "nodes": report.nodes_explored,
               "wall_time": round(report.wall_time, 3)}
    if args.output and report.best_code is not None:
        Path(args.output).write_text(flags.code_to_text(report.best_code))
        payload["path"] = args.output
    text = f"{system.nrows} rows x {system.ncols} columns\n{report.summary()}"
    _emit(args, payload, text)
    return EXIT_OK if report.status == "optimal" else EXIT_BUDGET


def cmd_fixture(args) -> int:
    if args.name != "155":
        raise UsageError(f"unknown fixture {args.name!r}")
    code = constructions.fixture_155()
    dist = flags.min_distance(code)[0]
    _report_code(args, code, dist, {"fixture": "155"})
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="flagcodes", description="Bounds, constructions and searches for flag codes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gauss", parents=[common], help="Gaussian binomial coefficient")
    s.add_argument("v", type=int)
    s.add_argument("k", type=int)
    s.add_argument("q", type=int, nargs="?")
    s.set_defaults(func=cmd_gauss)

    s = sub.add_parser("count", parents=[common], help="number of flags of a type")
    s.add_argument("v", type=int)
    s.add_argument("q", type=int, nargs="?")
    s.add_argument("--type", type=_type_arg)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("rset", parents=[common], help="minimal reduction vectors")
    s.add_argument("v", type=int)
    s.add_argument("d", type=int)
    s.add_argument("--type", type=_type_arg)
    s.set_defaults(func=cmd_rset)

    s = sub.add_parser("bound", parents=[common], help="upper bound for A_q(v, d; T)")
    s.add_argument("v", type=int)
    s.add_argument("d", type=int)
    s.add_argument("q", type=int, nargs="?", default=2)
    s.add_argument("--type", type=_type_arg)
    s.add_argument("--method", default="best",
                   choices=["anticode", "johnson", "cdc", "beta", "pack", "cover", "best"])
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("table", parents=[common], help="table of bounds for full flag codes")
    s.add_argument("--v-max", type=int, default=7)
    s.add_argument("--v-min", type=int, default=2)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--format", choices=["text", "csv", "json"], default="text")
    s.add_argument("--cache", help="results cache with extra lower bounds")
    s.add_argument("--method", choices=["recursion", "best"], default="recursion")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("construct", parents=[common], help="build an explicit code")
    s.add_argument("kind", choices=["spread", "pspread", "singer", "mrd-cartesian"])
    s.add_argument("param", type=int, nargs="?",
                   help="k for spread/pspread, v for singer, 2 or 3 for mrd-cartesian")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--d", type=int, help="distance for singer")
    s.add_argument("--type", type=_type_arg)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check a code file")
    s.add_argument("file")
    s.add_argument("--d", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="exact search, optionally under a group")
    s.add_argument("v", type=int)
    s.add_argument("d", type=int)
    s.add_argument("q", type=int, nargs="?", default=2)
    s.add_argument("--type", type=_type_arg)
    s.add_argument("--group", help="file with generator matrices")
    s.add_argument("--export-lp")
    s.add_argument("--export-json")
    s.add_argument("--node-limit", type=int)
    s.add_argument("--time-limit", type=float)
    s.add_argument("-o", "--output", help="write the best code here")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("fixture", parents=[common], help="built-in example codes")
    s.add_argument("name", choices=["155"])
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fixture)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        return _fail(args, "usage", str(exc), EXIT_USAGE)
    except VerificationFailed as exc:
        return _fail(args, "verification", str(exc), EXIT_VERIFY)
    except search.BudgetExceeded as exc:
        return _fail(args, "budget", exc.report.summary(), EXIT_BUDGET)


def _fail(args, kind: str, message: str, code: int) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"error": kind, "message": message, "exit": code}))
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
