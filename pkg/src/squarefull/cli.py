"""Command-line interface: one subcommand per computation plus the named
verification suites.  Reports are emitted as versioned JSON or fixed-column
CSV, with every input echoed in each row for reproducibility.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .arith import modulus
from .constants import constants_result
from .counting import count_report
from .expsum import bound_certificate, s_direct, s_factored, s_prime_power
from .geometry import Box, box_count, build_partition, verify_tiling
from .suites import SUITES, run_suite

SCHEMA_VERSION = 1


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/12, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="squarefull", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; explicit flags win over it")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker processes for grids")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")
    common.add_argument("--tol", type=float, default=1e-8, help="tolerance for constants")
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_parser("count", "squarefull or pair counts with main terms")
    p.add_argument("--kind", choices=("squarefull", "pairs"), default="squarefull")
    p.add_argument("--x", "--X", dest="x", type=_int_list)
    p.add_argument("--q", type=_int_list)
    p.add_argument("--l", type=_int_list)

    p = add_parser("constants", "main-term constants with tail certificates")
    p.add_argument("--q", type=_int_list)
    p.add_argument("--l", type=_int_list)

    p = add_parser("expsum", "complete exponential sum with certified bound")
    p.add_argument("--a", type=_int_list)
    p.add_argument("--b", type=_int_list)
    p.add_argument("--q", type=_int_list)
    p.add_argument("--method", choices=("direct", "factored", "stationary"), default="direct")

    p = add_parser("box", "curve points in a box")
    p.add_argument("--q", type=_int_list)
    p.add_argument("--l", type=_int_list)
    p.add_argument("--A", type=int, default=0)
    p.add_argument("--B", type=int, default=0)
    p.add_argument("--K", type=int)
    p.add_argument("--L", type=int)

    p = add_parser("partition", "build and verify the dyadic tiling")
    p.add_argument("--X", dest="x", type=int)
    p.add_argument("--lambda", dest="lam", type=_fraction)
    p.add_argument("--mu", type=_fraction)
    p.add_argument("--J", type=int, default=1)

    p = add_parser("verify", "run a named verification suite")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    return top


def _apply_config(argv: list[str], parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Parse argv, then fill unset values from --config; flags always win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    explicit = {a.lstrip("-").split("=")[0] for a in argv if a.startswith("--")}
    overrides = []
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            dest = {"lambda": "lam", "X": "x"}.get(key, key.replace("-", "_"))
            if key in explicit or key.replace("-", "_") in explicit:
                overrides.append(key)
                continue
            if not hasattr(args, dest):
                raise SystemExit(f"config key {key!r} does not match any flag")
            current = getattr(args, dest)
            if isinstance(current, list):
                setattr(args, dest, _int_list(value))
            elif isinstance(current, Fraction):
                setattr(args, dest, _fraction(value))
            elif isinstance(current, bool):
                setattr(args, dest, value.lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(args, dest, int(value))
            elif isinstance(current, float):
                setattr(args, dest, float(value))
            else:
                setattr(args, dest, value)
    for key in overrides:
        print(f"config: {key} overridden by explicit flag", file=sys.stderr)
    return args


# grid workers must be importable for process pools


def _count_row(task: tuple) -> dict:
    kind, x, q, l, tol = task
    rep = count_report(kind, x, l, q, tol)
    return {
        "kind": kind,
        "x": x,
        "q": q,
        "l": rep.l,
        "exact": rep.exact,
        "main1": rep.main1,
        "main2": rep.main2,
        "residual": rep.residual,
        **{f"residual/{k}": v for k, v in rep.normalized.items()},
        "tol": tol,
    }


def _constants_row(task: tuple) -> dict:
    q, l, tol = task
    r = constants_result(l, q, tol)
    return {
        "q": q,
        "l": r.l,
        "C": r.c,
        "D": r.d,
        "C_tail": r.c_tail,
        "D_tail": r.d_tail,
        "euler3": float(r.euler3),
        "euler2": float(r.euler2),
        "tol": tol,
    }


def _expsum_row(task: tuple) -> dict:
    a, b, q, method = task
    if method == "direct":
        v = s_direct(a, b, q)
    elif method == "factored":
        v = s_factored(a, b, q)
    else:
        m = modulus(q)
        if m.omega != 1:
            raise SystemExit(f"stationary method needs a prime power, got q = {q}")
        p, beta = m.factors[0]
        v = s_prime_power(a, b, p, beta)
    cert = bound_certificate(a, b, q)
    return {
        "a": a % q,
        "b": b % q,
        "q": q,
        "re": v.value.real,
        "im": v.value.imag,
        "abs": abs(v.value),
        "certified_bound": v.certified_bound,
        "sharp_factor_bounds": "; ".join(
            f"{p}^{e}:{'-' if s is None else f'{s:.4f}'}" for p, e, s in cert.per_factor
        ),
        "method": v.method,
    }


def _box_row(task: tuple) -> dict:
    q, l, a0, b0, k, ll = task
    rep = box_count(l, q, Box(a0, b0, k, ll))
    return {
        "q": q,
        "l": rep.l,
        "A": a0,
        "B": b0,
        "K": k,
        "L": ll,
        "exact": rep.exact,
        "main": rep.main_term,
        "residual": rep.residual,
    }


def _emit(rows: list[dict], args: argparse.Namespace, command: str) -> None:
    stamp = None if args.no_timestamp else time.strftime("%Y-%m-%dT%H:%M:%S")
    if args.format == "json":
        doc = {"schema": SCHEMA_VERSION, "command": command, "rows": rows}
        if stamp:
            doc["timestamp"] = stamp
        text = json.dumps(doc, indent=2, default=str) + "\n"
    else:
        buf = io.StringIO()
        if stamp:
            buf.write(f"# generated {stamp}\n")
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map_tasks(fn, tasks: list[tuple], threads: int) -> list[dict]:
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]



_REQUIRED = {
    "count": ("x", "q", "l"),
    "constants": ("q", "l"),
    "expsum": ("a", "b", "q"),
    "box": ("q", "l", "K", "L"),
    "partition": ("x", "lam", "mu"),
    "verify": ("suite",),
}


def _require(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    missing = [n for n in _REQUIRED[args.command] if getattr(args, n, None) is None]
    if missing:
        parser.error(f"{args.command}: missing required values: {', '.join(missing)}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _apply_config(list(sys.argv[1:] if argv is None else argv), parser)
    _require(args, parser)

    if args.command == "count":
        tasks = [(args.kind, x, q, l, args.tol) for x in args.x for q in args.q for l in args.l]
        _emit(_map_tasks(_count_row, tasks, args.threads), args, "count")
    elif args.command == "constants":
        tasks = [(q, l, args.tol) for q in args.q for l in args.l]
        _emit(_map_tasks(_constants_row, tasks, args.threads), args, "constants")
    elif args.command == "expsum":
        tasks = [(a, b, q, args.method) for a in args.a for b in args.b for q in args.q]
        _emit(_map_tasks(_expsum_row, tasks, args.threads), args, "expsum")
    elif args.command == "box":
        tasks = [(q, l, args.A, args.B, args.K, args.L) for q in args.q for l in args.l]
        _emit(_map_tasks(_box_row, tasks, args.threads), args, "box")
    elif args.command == "partition":
        pieces = build_partition(args.x, args.lam, args.mu, args.J)
        rep = verify_tiling(pieces)
        rows = [
            {
                "X": args.x,
                "lambda": str(args.lam),
                "mu": str(args.mu),
                "J": args.J,
                "columns": pieces.columns,
                "rectangles": len(pieces.rects),
                "leftovers": len(pieces.leftovers),
                "disjoint": rep.disjoint,
                "covering": rep.covering,
                "region_points": rep.region_points,
                "mismatches": "; ".join(rep.mismatches),
            }
        ]
        _emit(rows, args, "partition")
        if not (rep.disjoint and rep.covering):
            return 1
    elif args.command == "verify":
        names = sorted(SUITES) if args.suite == "all" else [args.suite]
        rows = []
        failed = False
        for name in names:
            res = run_suite(name)
            print(res.summary(), file=sys.stderr)
            for note in res.notes:
                print(f"  note: {note}", file=sys.stderr)
            rows.append(
                {
                    "suite": name,
                    "ok": res.ok,
                    "checked": res.checked,
                    "seconds": round(res.elapsed, 2),
                    "first_failure": res.failures[0] if res.failures else "",
                    "notes": " | ".join(res.notes),
                }
            )
            failed = failed or not res.ok
        _emit(rows, args, "verify")
        return 1 if failed else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
