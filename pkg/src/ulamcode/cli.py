"""Command-line front end.

Every subcommand emits a reproducibility header (tool version, seed,
budgets, thread count) and supports text, JSON, and CSV output.  JSON runs
are wrapped in a stable envelope described by data/cli-output.schema.json;
identical configurations produce byte-identical JSON apart from the
elapsed-seconds field.

Exit codes: 0 success (budget-exhausted results included, with status
"bounded"), 1 usage or data error, 2 capacity error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .ball import (
    DEFAULT_ENUM_LIMIT,
    ball_table,
    clt_samples,
    lis_distribution_exact,
    lis_prob_mc,
    sphere_packing_bounds,
)
from .bounds import (
    BoundReport,
    CodeParams,
    asymptotic_lower_log,
    gv_lower,
    kim_rate_log,
    rate_function,
    singleton_upper,
)
from .budget import SearchBudget
from .errors import CapacityError, DistanceViolation
from .ilp import build_model, export_lp, ip_upper_bound, solve_ilp
from .perm import format_permutation, lcs_length, parse_permutation
from .search import (
    DEFAULT_SEARCH_LIMIT,
    find_singleton_optimal,
    max_code_search,
    read_code_file,
    reproduce_tables,
    verify_code,
    write_code_file,
)

RANDOMIZED_COMMANDS = {"mc", "clt"}


class _Parser(argparse.ArgumentParser):
    """argparse with exit code 1 on usage errors (default is 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parent.add_argument("--out", metavar="FILE", default=None)
    parent.add_argument("--seed", type=int, default=None)
    parent.add_argument("--threads", type=int, default=None)
    parent.add_argument("--max-nodes", type=int, default=None)
    parent.add_argument("--max-seconds", type=float, default=None)
    parent.add_argument("--strict", action="store_true",
                        help="require an explicit --seed on randomized subcommands")
    return parent


def build_parser() -> _Parser:
    parser = _Parser(prog="ulamcode", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ulamcode {__version__}")
    parent = _common_parent()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[parent],
                       help="Ulam distance between two permutations")
    p.add_argument("sigma", help='first permutation, e.g. "2 3 1 5 4"')
    p.add_argument("tau", help="second permutation")

    p = sub.add_parser("bounds", parents=[parent], help="bound report for (n, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--with-ip", action="store_true")
    p.add_argument("--with-sphere", action="store_true")
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--show-asymptotics", action="store_true",
                   help="append the constant-c log-scale bound lines")

    p = sub.add_parser("search", parents=[parent], help="exact code search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--singleton-only", action="store_true",
                   help="only decide whether a Singleton-optimal code exists")
    p.add_argument("--with-ip", action="store_true",
                   help="tighten the pruning bound with the integer program")
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--search-limit", type=int, default=DEFAULT_SEARCH_LIMIT)
    p.add_argument("--save-code", metavar="FILE", default=None,
                   help="also write the found code in the code-file format")

    p = sub.add_parser("verify", parents=[parent], help="verify a code file")
    p.add_argument("file", help='code file: first line "n d", one word per line')

    p = sub.add_parser("tables", parents=[parent],
                       help="reproduce the size and Singleton-optimality tables")
    p.add_argument("--n", required=True, help="range, e.g. 4..6 or 5")
    p.add_argument("--d", default=None, help="range, e.g. 2..5 (default: all valid)")
    p.add_argument("--with-ip", action="store_true")
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--search-limit", type=int, default=DEFAULT_SEARCH_LIMIT)
    p.add_argument("--long-runs", action="store_true",
                   help="attempt full proofs on the hard cells too")

    p = sub.add_parser("ball", parents=[parent], help="Ulam ball sizes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--cache-dir", default=None)

    p = sub.add_parser("lisdist", parents=[parent],
                       help="exact LIS-length distribution over S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--cache-dir", default=None)

    p = sub.add_parser("mc", parents=[parent],
                       help="Monte-Carlo estimate of P(LIS >= k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("clt", parents=[parent],
                       help="emit centered/scaled LIS samples, one per line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("export-lp", parents=[parent],
                       help="write the (n, d) integer program in LP format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    return parser


def _parse_range(text: str) -> list[int]:
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty range {text!r}")
    return values


def _budget(args) -> Optional[SearchBudget]:
    if args.max_nodes is None and args.max_seconds is None:
        return None  # let hard cells fall back to their bound-only default
    return SearchBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)


def _effective_seed(args) -> Optional[int]:
    if args.command in RANDOMIZED_COMMANDS:
        if args.seed is None:
            if args.strict:
                raise ValueError("--strict requires an explicit --seed here")
            return 0
        return args.seed
    return args.seed


def _threads(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise ValueError("--threads must be >= 1")
        return args.threads
    return os.cpu_count() or 1


class _Run:
    """Collects everything the output envelope needs."""

    def __init__(self, args):
        self.args = args
        self.command = args.command
        self.seed = _effective_seed(args)
        self.threads = _threads(args)
        self.started = time.monotonic()
        self.status = "ok"

    def header_lines(self) -> list[str]:
        b = self.args
        return [
            f"# ulamcode {__version__}",
            f"# command: {self.command}",
            f"# seed: {'-' if self.seed is None else self.seed}",
            f"# threads: {self.threads}",
            f"# budgets: max_nodes={b.max_nodes if b.max_nodes is not None else 'none'}"
            f" max_seconds={b.max_seconds if b.max_seconds is not None else 'none'}",
        ]

    def envelope(self, result: dict) -> dict:
        return {
            "tool": "ulamcode",
            "version": __version__,
            "command": self.command,
            "seed": self.seed,
            "threads": self.threads,
            "budgets": {
                "max_nodes": self.args.max_nodes,
                "max_seconds": self.args.max_seconds,
            },
            "status": self.status,
            "elapsed_seconds": round(time.monotonic() - self.started, 6),
            "result": result,
        }

    def emit(self, result: dict, text_body: str, csv_rows: list[list] | None = None,
             raw_text: bool = False) -> int:
        args = self.args
        if args.format == "json":
            payload = json.dumps(self.envelope(result), indent=2) + "\n"
        elif args.format == "csv":
            buf = io.StringIO()
            for line in self.header_lines():
                buf.write(line + "\n")
            rows = csv_rows if csv_rows is not None else _dict_to_csv_rows(result)
            for row in rows:
                buf.write(",".join(str(v) for v in row) + "\n")
            payload = buf.getvalue()
        else:
            if raw_text:
                payload = text_body
            else:
                payload = "\n".join(self.header_lines()) + "\n" + text_body
                if not payload.endswith("\n"):
                    payload += "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
        return 0


def _dict_to_csv_rows(result: dict, prefix: str = "") -> list[list]:
    rows: list[list] = []
    for key, value in result.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_dict_to_csv_rows(value, prefix=f"{name}."))
        elif isinstance(value, list):
            rows.append([name, " ".join(str(v) for v in value)])
        else:
            rows.append([name, value])
    return rows


def _cmd_distance(run: _Run) -> int:
    args = run.args
    sigma = parse_permutation(args.sigma)
    tau = parse_permutation(args.tau)
    if len(sigma) != len(tau):
        raise ValueError(
            f"permutations have different lengths {len(sigma)} and {len(tau)}"
        )
    lcs = lcs_length(sigma, tau)
    result = {"n": len(sigma), "lcs_length": lcs, "distance": len(sigma) - lcs}
    text = f"n {len(sigma)}\nlcs_length {lcs}\ndistance {len(sigma) - lcs}"
    return run.emit(result, text)


def _cmd_bounds(run: _Run) -> int:
    args = run.args
    params = CodeParams(args.n, args.d)
    report = BoundReport(
        params=params,
        singleton_upper=singleton_upper(params),
        gv_lower=gv_lower(params),
    )
    if args.with_sphere:
        lo, hi = sphere_packing_bounds(params, limit=args.enum_limit)
        report.sphere_lower = lo
        report.sphere_upper = hi
        if params.delta % 2 == 1:
            report.notes.append(
                "sphere upper bound uses radius floor((d-1)/2) because d-1 is odd"
            )
    if args.with_ip:
        if params.d == 1:
            report.ip_upper = math.factorial(params.n)
        else:
            sol = solve_ilp(build_model(params), _budget(args))
            report.ip_upper = min(report.singleton_upper, sol.objective_value)
            if sol.status == "bound_only":
                run.status = "bounded"
                report.notes.append("integer program hit its budget; bound not tight")
    report.finalize()
    result = report.to_dict()
    text = report.to_text()
    if args.show_asymptotics:
        # The constant-c regime reads d - 1 = n - c sqrt(n).
        c = (params.n - params.delta) / math.sqrt(params.n)
        asym: dict = {"c": c, "lower_log": asymptotic_lower_log(c, params.n)}
        lines = [
            f"asymptotic_c {c:.6f}",
            f"asymptotic_lower_log {asym['lower_log']:.6f}",
        ]
        if c >= 2.0:
            asym["rate_function"] = rate_function(c)
            lines.append(f"rate_function {asym['rate_function']:.6f}")
        if 2.0 < c <= 2.05:
            asym["kim_rate_log_approximate"] = kim_rate_log(c, params.n)
            lines.append(
                f"kim_rate_log {asym['kim_rate_log_approximate']:.6f} (approximate)"
            )
        result["asymptotics"] = asym
        text = text + "\n" + "\n".join(lines)
    return run.emit(result, text)


def _cmd_search(run: _Run) -> int:
    args = run.args
    params = CodeParams(args.n, args.d)
    budget = _budget(args)
    if args.singleton_only:
        res = find_singleton_optimal(params, budget, search_limit=args.search_limit)
        if res.status == "budget_exhausted":
            run.status = "bounded"
        if res.code is not None and args.save_code:
            write_code_file(res.code, args.save_code)
        result = {
            "n": params.n,
            "d": params.d,
            "singleton_status": res.status,
            "target_size": singleton_upper(params),
            "size": len(res.code.words) if res.code else 0,
            "nodes_explored": res.nodes_explored,
            "words": sorted(format_permutation(w) for w in res.code.words)
            if res.code
            else [],
        }
        text = "\n".join(
            [f"singleton_status {res.status}", f"nodes {res.nodes_explored}"]
            + result["words"]
        )
        return run.emit(result, text)

    ceiling = singleton_upper(params)
    try:
        lo, hi = sphere_packing_bounds(params, limit=args.enum_limit)
        ceiling = min(ceiling, hi)
    except CapacityError:
        pass
    if args.with_ip and params.d >= 2:
        ceiling = min(ceiling, ip_upper_bound(params, budget))
    res = max_code_search(
        params, budget, upper_bound=ceiling, search_limit=args.search_limit
    )
    if res.optimality == "lower_bound_only":
        run.status = "bounded"
    if args.save_code:
        write_code_file(res.code, args.save_code)
    words = sorted(format_permutation(w) for w in res.code.words)
    result = {
        "n": params.n,
        "d": params.d,
        "size": len(res.code.words),
        "min_distance": res.code.min_distance,
        "optimality": res.optimality,
        "upper_bound_used": res.upper_bound_used,
        "nodes_explored": res.nodes_explored,
        "words": words,
    }
    text = "\n".join(
        [
            f"size {len(res.code.words)}",
            f"min_distance {res.code.min_distance}",
            f"optimality {res.optimality}",
            f"upper_bound_used {res.upper_bound_used}",
            f"nodes {res.nodes_explored}",
        ]
        + words
    )
    return run.emit(result, text)


def _cmd_verify(run: _Run) -> int:
    args = run.args
    params, words = read_code_file(args.file)
    code = verify_code(words, params)
    result = {
        "n": params.n,
        "d": params.d,
        "size": len(code.words),
        "min_distance": code.min_distance,
        "valid": True,
    }
    text = (
        f"valid code: {len(code.words)} words, "
        f"min_distance {code.min_distance} >= d = {params.d}"
    )
    return run.emit(result, text)


def _cmd_tables(run: _Run) -> int:
    args = run.args
    n_values = _parse_range(args.n)
    d_values = _parse_range(args.d) if args.d else None
    cells = reproduce_tables(
        n_values,
        d_values,
        cell_budget=_budget(args),
        with_ip=args.with_ip,
        enum_limit=args.enum_limit,
        search_limit=args.search_limit,
        long_runs=args.long_runs,
    )
    if any(cell.status in ("bounded", "skipped") for cell in cells):
        run.status = "bounded"
    result = {
        "cells": [
            {
                "n": c.n,
                "d": c.d,
                "lower": c.lower,
                "upper": c.upper,
                "status": c.status,
                "singleton_optimal": c.singleton_optimal,
                "method": c.method,
                "nodes": c.nodes,
            }
            for c in cells
        ]
    }
    csv_rows = [["n", "d", "lower", "upper", "status", "singleton_optimal", "method"]]
    csv_rows += [
        [c.n, c.d, c.lower, c.upper, c.status, c.singleton_optimal, c.method]
        for c in cells
    ]
    text = _render_tables_text(cells)
    return run.emit(result, text, csv_rows=csv_rows)


def _cell_label(cell) -> str:
    if cell.status == "proven":
        return f"{cell.lower}="
    if cell.status == "skipped":
        return "?"
    if cell.lower >= 2:
        return f">={cell.lower}"
    return f"<={cell.upper}"


def _render_tables_text(cells) -> str:
    ns = sorted({c.n for c in cells})
    ds = sorted({c.d for c in cells})
    by_pos = {(c.n, c.d): c for c in cells}
    width = max(
        [len(_cell_label(c)) for c in cells] + [len(str(d)) for d in ds] + [3]
    )
    lines = ["maximum code sizes"]
    head = "  n\\d " + " ".join(f"{d:>{width}}" for d in ds)
    lines.append(head)
    for n in ns:
        row = [f"{n:>5} "]
        for d in ds:
            cell = by_pos.get((n, d))
            row.append(f"{_cell_label(cell) if cell else '--':>{width}}")
        lines.append(" ".join(row))
    lines.append("singleton-optimal codes")
    lines.append(head)
    for n in ns:
        row = [f"{n:>5} "]
        for d in ds:
            cell = by_pos.get((n, d))
            row.append(f"{cell.singleton_optimal if cell else '--':>{width}}")
        lines.append(" ".join(row))
    return "\n".join(lines)


def _cmd_ball(run: _Run) -> int:
    args = run.args
    table = ball_table(args.n, limit=args.enum_limit)
    if args.cache_dir:
        lis_distribution_exact(args.n, limit=args.enum_limit, cache_dir=args.cache_dir)
    if args.r is not None:
        if args.r not in table.sizes:
            raise ValueError(f"radius must be in 0..{args.n - 1}, got {args.r}")
        result = {"n": args.n, "sizes": {str(args.r): table.sizes[args.r]}}
        text = f"{args.r} {table.sizes[args.r]}"
        csv_rows = [["r", "size"], [args.r, table.sizes[args.r]]]
    else:
        result = {"n": args.n, "sizes": {str(r): s for r, s in table.sizes.items()}}
        text = "\n".join(f"{r} {s}" for r, s in sorted(table.sizes.items()))
        csv_rows = [["r", "size"]] + [[r, s] for r, s in sorted(table.sizes.items())]
    return run.emit(result, text, csv_rows=csv_rows)


def _cmd_lisdist(run: _Run) -> int:
    args = run.args
    dist = lis_distribution_exact(
        args.n, limit=args.enum_limit, cache_dir=args.cache_dir,
        workers=run.threads,
    )
    counts = {str(k): dist.counts[k] for k in sorted(dist.counts)}
    result = {"n": dist.n, "total": dist.total, "counts": counts}
    text = "\n".join(f"{k} {c}" for k, c in counts.items())
    csv_rows = [["k", "count"]] + [[k, c] for k, c in counts.items()]
    return run.emit(result, text, csv_rows=csv_rows)


def _cmd_mc(run: _Run) -> int:
    args = run.args
    estimate, stderr = lis_prob_mc(
        args.n, args.k, args.samples, run.seed, workers=run.threads
    )
    result = {
        "n": args.n,
        "k": args.k,
        "samples": args.samples,
        "estimate": estimate,
        "stderr": stderr,
    }
    text = f"estimate {estimate!r}\nstderr {stderr!r}"
    return run.emit(result, text)


def _cmd_clt(run: _Run) -> int:
    args = run.args
    values = clt_samples(args.n, args.samples, run.seed, workers=run.threads)
    result = {"n": args.n, "samples": args.samples, "values": values}
    text = "\n".join(repr(v) for v in values)
    csv_rows = [["value"]] + [[repr(v)] for v in values]
    return run.emit(result, text, csv_rows=csv_rows)


def _cmd_export_lp(run: _Run) -> int:
    args = run.args
    params = CodeParams(args.n, args.d)
    text = export_lp(build_model(params))
    result = {"n": args.n, "d": args.d, "lp": text}
    # Raw text keeps the output a valid .lp file; the JSON envelope carries
    # the reproducibility header instead.
    return run.emit(result, text, raw_text=True)


_DISPATCH = {
    "distance": _cmd_distance,
    "bounds": _cmd_bounds,
    "search": _cmd_search,
    "verify": _cmd_verify,
    "tables": _cmd_tables,
    "ball": _cmd_ball,
    "lisdist": _cmd_lisdist,
    "mc": _cmd_mc,
    "clt": _cmd_clt,
    "export-lp": _cmd_export_lp,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run = _Run(args)
        return _DISPATCH[args.command](run)
    except CapacityError as exc:
        print(f"ulamcode: capacity error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, DistanceViolation, OSError) as exc:
        print(f"ulamcode: error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"ulamcode: internal invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
