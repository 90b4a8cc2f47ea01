"""Command-line front end.

Exit status: 0 on success, 1 when ``verify`` finds a mismatch, 2 on bad
arguments or out-of-range parameters, 3 when a capacity ceiling is hit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import golden
from .coefficients import format_leading_coefficients, leading_coefficients
from .engine import (
    CACHE_ENV_VAR,
    TemplateStore,
    gromov_witten,
    node_polynomial,
    polynomiality_threshold,
    q_transform,
    severi_degree,
    severi_degree_bruteforce,
)
from .errors import CapacityError, DomainError, NodePolyError
from .polynomial import RationalPolynomial

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

# desk-scale ceilings; larger requests are refused rather than left running
MAX_TEMPLATE_DELTA = 8
MAX_NODE_POLY_DELTA = 8
MAX_SEVERI_DEGREE = 13
MAX_SEVERI_DELTA = 14
MAX_THRESHOLD_DELTA = 8
MAX_COEFF_N = 9


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _global_options(parser, suppress: bool) -> None:
    # accepted before or after the subcommand; the subcommand copy must not
    # overwrite a value given earlier, hence SUPPRESS there
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--cache-dir", default=dflt(os.environ.get(CACHE_ENV_VAR)), help=f"template cache (default ${CACHE_ENV_VAR})")
    parser.add_argument("--workers", type=_positive, default=dflt(1))
    parser.add_argument("--format", dest="output_format", choices=("plain", "json", "latex"), default=dflt("plain"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    p = argparse.ArgumentParser(prog="nodepoly", description="Severi degrees and node polynomials of plane curves.")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("templates", parents=[common], help="generate (and cache) all templates of one cogenus")
    s.add_argument("--delta", type=_positive, required=True)
    s.add_argument("--max-drop", type=_nonneg, default=None)
    s.add_argument("--count-only", action="store_true")

    s = sub.add_parser("node-poly", parents=[common], help="node polynomial N_delta(d)")
    s.add_argument("--delta", type=_nonneg, required=True)

    s = sub.add_parser("severi", parents=[common], help="Severi degree N^{d,delta}")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--delta", type=_nonneg, required=True)

    s = sub.add_parser("gw", parents=[common], help="Gromov-Witten invariant N_{d,g}")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--genus", type=_nonneg, required=True)

    s = sub.add_parser("qpoly", parents=[common], help="exponents Q_1..Q_delta of the generating function")
    s.add_argument("--delta", type=_positive, required=True)

    s = sub.add_parser("thresholds", parents=[common], help="polynomiality thresholds for delta = 1..max")
    s.add_argument("--max-delta", type=_positive, required=True)

    s = sub.add_parser("coeffs", parents=[common], help="leading coefficients of N_delta as polynomials in delta")
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("verify", parents=[common], help="compare against the bundled reference tables")
    s.add_argument("--suite", choices=("appendix-a", "appendix-b", "thresholds", "oracle"), required=True)
    s.add_argument("--max-delta", type=_positive, default=None, help="limit the suite to delta <= this")
    s.add_argument("--max-degree", type=_positive, default=8, help="appendix-b: degrees d <= this (default 8)")
    return p


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise CapacityError(msg)


def _poly_out(poly: RationalPolynomial, fmt: str, var: str = "d") -> str:
    if fmt == "json":
        return poly.to_json()
    if fmt == "latex":
        return poly.to_latex(var)
    return poly.format(var)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _int_out(v: int, fmt: str, **fields) -> str:
    if fmt == "json":
        return _dumps({**fields, "value": v})
    return str(v)


# -- commands ---------------------------------------------------------------------


def cmd_templates(args, store: TemplateStore, out) -> int:
    _check(args.delta <= MAX_TEMPLATE_DELTA, f"template generation limited to delta <= {MAX_TEMPLATE_DELTA}")
    ts = store.templates(args.delta, args.max_drop)
    if args.count_only:
        out.write(_int_out(len(ts), args.output_format, delta=args.delta) + "\n")
    elif args.output_format == "json":
        out.write(_dumps([{"length": t.length, "edges": [list(e) for e in t.edges]} for t in ts]) + "\n")
    else:
        for t in ts:
            out.write(str(t) + "\n")
    return EXIT_OK


def cmd_node_poly(args, store, out) -> int:
    _check(args.delta <= MAX_NODE_POLY_DELTA, f"node polynomials limited to delta <= {MAX_NODE_POLY_DELTA}")
    out.write(_poly_out(node_polynomial(args.delta, store).poly, args.output_format) + "\n")
    return EXIT_OK


def cmd_severi(args, store, out) -> int:
    _check(args.d <= MAX_SEVERI_DEGREE and args.delta <= MAX_SEVERI_DELTA,
           f"Severi degrees limited to d <= {MAX_SEVERI_DEGREE}, delta <= {MAX_SEVERI_DELTA}")
    v = severi_degree(args.d, args.delta, store)
    out.write(_int_out(v, args.output_format, d=args.d, delta=args.delta) + "\n")
    return EXIT_OK


def cmd_gw(args, store, out) -> int:
    v = gromov_witten(args.d, args.genus)
    out.write(_int_out(v, args.output_format, d=args.d, genus=args.genus) + "\n")
    return EXIT_OK


def cmd_qpoly(args, store, out) -> int:
    _check(args.delta <= MAX_NODE_POLY_DELTA, f"node polynomials limited to delta <= {MAX_NODE_POLY_DELTA}")
    polys = [node_polynomial(j, store).poly for j in range(args.delta + 1)]
    qs = q_transform(polys)
    if args.output_format == "json":
        out.write(_dumps([q.to_pairs() for q in qs]) + "\n")
    else:
        for j, q in enumerate(qs, 1):
            out.write(f"Q_{j} = {_poly_out(q, args.output_format)}\n")
    return EXIT_OK


def cmd_thresholds(args, store, out) -> int:
    _check(args.max_delta <= MAX_THRESHOLD_DELTA, f"thresholds limited to delta <= {MAX_THRESHOLD_DELTA}")
    rows = [polynomiality_threshold(dl, store) for dl in range(1, args.max_delta + 1)]
    if args.output_format == "json":
        out.write(_dumps([{"delta": r.delta, "threshold": r.threshold, "mismatches": list(r.mismatches)} for r in rows]) + "\n")
    else:
        for r in rows:
            out.write(f"{r.delta}\t{r.threshold}\n")
    return EXIT_OK


def cmd_coeffs(args, store, out) -> int:
    _check(args.n <= MAX_COEFF_N, f"coefficient engine limited to N <= {MAX_COEFF_N}")
    cs = leading_coefficients(args.n, store)
    if args.output_format == "json":
        out.write(_dumps([c.to_pairs() for c in cs]) + "\n")
    elif args.output_format == "latex":
        for t, c in enumerate(cs):
            power = "2\\delta" if t == 0 else "2\\delta-%d" % t
            out.write("(%s)\\, d^{%s}\n" % (c.to_latex("\\delta"), power))
    else:
        out.write(format_leading_coefficients(cs) + "\n")
    return EXIT_OK


def _first_diff(label: str, got, want) -> str:
    return f"mismatch at {label}: computed {got}, expected {want}"


def cmd_verify(args, store, out) -> int:
    cap = args.max_delta
    diffs = []
    if args.suite == "appendix-a":
        top = min(cap or 6, MAX_NODE_POLY_DELTA)
        ref = golden.load_node_polynomials()
        for dl in range(top + 1):
            got = node_polynomial(dl, store).poly
            if got != ref[dl]:
                diffs.append(_first_diff(f"delta={dl}", got.format("d"), ref[dl].format("d")))
                break
            out.write(f"delta={dl} ok\n")
    elif args.suite == "appendix-b":
        top = min(cap or 10, MAX_SEVERI_DELTA)
        dmax = min(args.max_degree, MAX_SEVERI_DEGREE)
        for (d, dl), want in sorted(golden.load_severi_table().items()):
            if d > dmax or dl > top:
                continue
            got = severi_degree(d, dl, store)
            if got != want:
                diffs.append(_first_diff(f"d={d} delta={dl}", got, want))
                break
        if not diffs:
            out.write(f"Severi degrees d <= {dmax}, delta <= {top} ok\n")
    elif args.suite == "thresholds":
        top = min(cap or 6, MAX_THRESHOLD_DELTA)
        for dl in range(1, top + 1):
            want = 1 if dl <= 2 else (dl + 1) // 2 + 1
            got = polynomiality_threshold(dl, store).threshold
            if got != want:
                diffs.append(_first_diff(f"delta={dl}", got, want))
                break
            out.write(f"delta={dl} threshold={got} ok\n")
    else:
        top = min(cap or 4, 6)
        for d in range(1, 6):
            for dl in range(top + 1):
                got, want = severi_degree(d, dl, store), severi_degree_bruteforce(d, dl)
                if got != want:
                    diffs.append(_first_diff(f"d={d} delta={dl}", got, want))
                    break
            if diffs:
                break
        if not diffs:
            out.write(f"template sums agree with diagram enumeration for d <= 5, delta <= {top}\n")
    if diffs:
        out.write(diffs[0] + "\n")
        return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "templates": cmd_templates,
    "node-poly": cmd_node_poly,
    "severi": cmd_severi,
    "gw": cmd_gw,
    "qpoly": cmd_qpoly,
    "thresholds": cmd_thresholds,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed the message
        return EXIT_USAGE if e.code else EXIT_OK
    cache = Path(args.cache_dir) if args.cache_dir else None
    store = TemplateStore(cache, workers=args.workers)
    try:
        return COMMANDS[args.command](args, store, out)
    except CapacityError as e:
        print(f"nodepoly: capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as e:
        print(f"nodepoly: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NodePolyError as e:
        print(f"nodepoly: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
