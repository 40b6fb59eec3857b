"""Command-line interface.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 a configured resource bound was hit.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Callable

from . import config
from .config import OrderBoundError
from .corpus import builtin_corpus
from .degrees import csd, sd
from .density import DensityError, HorizonExceeded, approach_rational, quaternion_tail
from .groups import GroupConstructionError
from .lattice import all_subgroups, cyclic_subgroups, gamma, normal_cyclic_count
from .report import (
    ResultCache,
    degree_json,
    dump_json,
    make_document,
    render_csv,
    render_human,
)
from .specparse import SpecError, build, parse
from .spectra import (
    csd_spectrum,
    is_iwasawa,
    relative_csd_spectrum,
    relative_sd_spectrum,
    scan_equal_degrees,
    scan_two_valued,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _class_rows(spectrum) -> list[dict]:
    return [
        {
            "class_id": r.class_id,
            "representative": r.representative,
            "order": r.order,
            "size": r.size,
            "cyclic": r.cyclic,
            "normal": r.normal,
            "value": degree_json(r.value),
        }
        for r in spectrum.table
    ]


def _load(spec: str):
    expr = parse(spec)
    return expr.render(), build(expr)


# ---- commands ----------------------------------------------------------------
# each returns (command args echo, canonical specs, results, exit code)

def cmd_info(args, cache: ResultCache):
    spec, G = _load(args.spec)

    def compute() -> dict:
        try:
            n_lattice: int | None = len(all_subgroups(G))
            g: int | None = gamma(G)
        except OrderBoundError:
            n_lattice = g = None
        return {
            "order": G.order,
            "abelian": G.is_abelian(),
            "l1": len(cyclic_subgroups(G)),
            "l": n_lattice,
            "normal_cyclic": normal_cyclic_count(G),
            "gamma": g,
            "csd": degree_json(csd(G)),
            "iwasawa": is_iwasawa(G),
        }

    return {"spec": args.spec}, [spec], cache.fetch(spec, "info", compute), EXIT_OK


def _select(rows: list[dict], selector: str) -> list[dict]:
    if selector == "all":
        return rows
    if selector.startswith("order="):
        try:
            order = int(selector[len("order="):])
        except ValueError:
            raise InputError(f"bad class selector {selector!r}") from None
        picked = [r for r in rows if r["order"] == order]
    else:
        try:
            cid = int(selector)
        except ValueError:
            raise InputError(f"bad class selector {selector!r}; use all, a class id or order=N") from None
        picked = [r for r in rows if r["class_id"] == cid]
    if not picked:
        raise InputError(f"no subgroup class matches {selector!r}")
    return picked


def cmd_degree(args, cache: ResultCache):
    spec, G = _load(args.spec)
    echo = {"kind": args.kind, "spec": args.spec, "relative": args.relative}
    if args.relative is None:
        fn = csd if args.kind == "csd" else sd
        payload = cache.fetch(spec, f"degree:{args.kind}", lambda: {"value": degree_json(fn(G))})
        return echo, [spec], {"kind": args.kind, **payload}, EXIT_OK
    spectrum = relative_csd_spectrum if args.kind == "csd" else relative_sd_spectrum
    rows = cache.fetch(spec, f"classes:{args.kind}", lambda: _class_rows(spectrum(G)))
    return echo, [spec], {"kind": args.kind, "rows": _select(rows, args.relative)}, EXIT_OK


def cmd_spectrum(args, cache: ResultCache):
    spec, G = _load(args.spec)

    def compute() -> dict:
        f1 = relative_csd_spectrum(G)
        g1 = csd_spectrum(G)
        f = relative_sd_spectrum(G) if args.include_sd else None
        rows = []
        for i, r in enumerate(f1.table):
            row = {
                "class_id": r.class_id,
                "representative": r.representative,
                "order": r.order,
                "size": r.size,
                "normal": r.normal,
                "csd_relative": degree_json(r.value),
                "csd": degree_json(g1.table[i].value),
            }
            if f is not None:
                row["sd_relative"] = degree_json(f.table[i].value)
            rows.append(row)
        counts = {"im_f1": len(f1), "im_g1": len(g1)}
        values = {"im_f1": [degree_json(v) for v in f1.distinct_values],
                  "im_g1": [degree_json(v) for v in g1.distinct_values]}
        if f is not None:
            counts["im_f"] = len(f)
            values["im_f"] = [degree_json(v) for v in f.distinct_values]
        return {"counts": counts, "gamma": gamma(G), "values": values, "rows": rows}

    kind = "spectrum:sd" if args.include_sd else "spectrum"
    echo = {"spec": args.spec, "include_sd": args.include_sd}
    return echo, [spec], cache.fetch(spec, kind, compute), EXIT_OK


def cmd_verify(args, cache: ResultCache):
    checks = run_suite(args.suite)
    rows = [{"suite": c.suite, "name": c.name, "expected": c.expected,
             "observed": c.observed, "status": c.status} for c in checks]
    failed = sum(1 for c in checks if c.status == "fail")
    results = {
        "suite": args.suite,
        "passed": sum(1 for c in checks if c.status == "pass"),
        "failed": failed,
        "documented": sum(1 for c in checks if c.status == "documented deviation"),
        "checks": rows,
    }
    return {"suite": args.suite}, [], results, EXIT_CHECK if failed else EXIT_OK


def _parse_ratio(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("/") if "/" in text else (text, "1")
        return int(a), int(b)
    except ValueError:
        raise InputError(f"expected a rational a/b, got {text!r}") from None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected a rational number, got {text!r}") from None


def cmd_density(args, cache: ResultCache):
    if args.density_cmd == "qtail":
        if args.max_n < 3:
            raise InputError("--max-n must be at least 3")
        rows = [{"n": str(n), "value": degree_json(v)} for n, v in quaternion_tail(args.max_n)]
        return {"subcommand": "qtail", "max_n": args.max_n}, [], {"rows": rows}, EXIT_OK
    a, b = _parse_ratio(args.target)
    tol = _parse_fraction(args.tol)
    w = approach_rational(a, b, tol)
    results = {
        "target": degree_json(w.target),
        "tol": degree_json(w.tol),
        "value": degree_json(w.value),
        "error": degree_json(w.error),
        "quaternion_n": None if w.quaternion_n is None else str(w.quaternion_n),
        "terms": [
            {"q": str(t.q), "n": str(t.n), "p": str(t.p), "k": str(t.k), "group": t.spec,
             "value": degree_json(t.value), "limit": degree_json(t.limit)}
            for t in w.terms
        ],
    }
    echo = {"subcommand": "approach", "target": args.target, "tol": args.tol}
    return echo, w.specs, results, EXIT_OK


def cmd_scan(args, cache: ResultCache):
    bound = args.scan_max_order
    config.settings.max_order = max(config.settings.max_order, bound)
    corpus = builtin_corpus(bound)
    scan = scan_two_valued if args.scan_kind == "two-valued" else scan_equal_degrees
    r = scan(corpus, bound, workers=args.workers, cache=cache)
    results = {
        "kind": args.scan_kind,
        "max_order": bound,
        "census": r.census,
        "findings": r.findings,
        "skipped": r.skipped,
        "errors": r.errors,
    }
    return {"kind": args.scan_kind, "max_order": bound}, [], results, EXIT_OK


COMMANDS: dict[str, Callable] = {
    "info": cmd_info,
    "degree": cmd_degree,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "density": cmd_density,
    "scan": cmd_scan,
}


# ---- argument parsing --------------------------------------------------------

def _output_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=default if suppress else False,
                     help="emit the JSON report document")
    fmt.add_argument("--csv", action="store_true", default=default if suppress else False,
                     help="emit CSV rows")
    parser.add_argument("--cache-dir", default=default,
                        help="result cache directory (env CYCLICDEG_CACHE_DIR)")
    parser.add_argument("--workers", type=int, default=default,
                        help="worker processes for scans (env CYCLICDEG_WORKERS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclicdeg",
        description="Exact cyclic subgroup commutativity degrees of finite groups.",
    )
    _output_flags(parser, suppress=False)
    parser.add_argument("--max-order", type=int, default=None,
                        help="largest group order to construct (env CYCLICDEG_MAX_ORDER)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        _output_flags(p, suppress=True)
        return p

    p = add("info", "order, lattice sizes, gamma and the Iwasawa flag of a group")
    p.add_argument("spec")

    p = add("degree", "csd or sd of a group, or relative to its subgroup classes")
    p.add_argument("kind", choices=["csd", "sd"])
    p.add_argument("spec")
    p.add_argument("--relative", metavar="SELECTOR",
                   help="'all', a class id, or order=N: degrees of subgroups relative to the group")

    p = add("spectrum", "distinct relative and intrinsic degrees over all subgroups")
    p.add_argument("spec")
    p.add_argument("--include-sd", action="store_true",
                   help="also compute the relative subgroup commutativity degrees")

    p = add("verify", "run a named verification suite")
    p.add_argument("suite", choices=[*SUITES, "all"])

    p = add("density", "witnesses approaching a rational, and the quaternion tail")
    dsub = p.add_subparsers(dest="density_cmd", required=True)
    ap = dsub.add_parser("approach", help="product witness within a tolerance of a/b")
    _output_flags(ap, suppress=True)
    ap.add_argument("target", metavar="A/B")
    ap.add_argument("--tol", required=True)
    qt = dsub.add_parser("qtail", help="csd(Q_{2^n}) for n = 3..N")
    _output_flags(qt, suppress=True)
    qt.add_argument("--max-n", type=int, required=True)

    p = add("scan", "census of the built-in corpus")
    p.add_argument("scan_kind", choices=["two-valued", "equal-degrees"])
    p.add_argument("--max-order", dest="scan_max_order", type=int, required=True,
                   help="largest group order included in the census")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    s = config.settings
    if args.max_order is not None:
        s.max_order = args.max_order
    if args.workers is not None:
        s.workers = args.workers
    args.workers = s.workers
    cache = ResultCache(args.cache_dir or s.cache_dir)

    start = time.perf_counter()
    try:
        echo, specs, results, code = COMMANDS[args.command](args, cache)
    except (SpecError, InputError, GroupConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OrderBoundError, HorizonExceeded) as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except DensityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    timing = {
        "elapsed_seconds": round(time.perf_counter() - start, 3),
        "cache_hits": cache.hits,
        "cache_misses": cache.misses,
    }
    doc = make_document({"name": args.command, "args": echo}, specs, results, timing)
    if args.json:
        sys.stdout.write(dump_json(doc))
    elif args.csv:
        sys.stdout.write(render_csv(doc))
    else:
        sys.stdout.write(render_human(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
