"""Batch verification front-end.

Subcommands cover every verification surface; reports are deterministic
(stdout carries only the payload, byte-identical across runs for a fixed
configuration, while the config header with its timestamp goes to
stderr).  Exit codes: 0 all checks pass (sign-reconciled records count as
passes and appear in the errata section), 1 any FAIL verdict, 2 config
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .cache import ENGINE_VERSION
from .engine import Engine

MAX_SUPPORTED_DEGREE = 160


def _add_common(p, suppress: bool):
    """Shared flags; accepted both before and after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--max-degree", type=int, default=d(None))
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default=d("text"))
    p.add_argument("--cache-dir",
                   default=d(os.environ.get("COTOR_CACHE_DIR")))
    p.add_argument("--scheme", choices=("weight_s3", "may_s5", "trivial"),
                   default=d("weight_s3"))
    p.add_argument("--page", type=int, default=d(None))
    p.add_argument("--group", choices=("i", "ii", "iii", "all"),
                   default=d("all"))
    p.add_argument("--convention", default=d("audit"),
                   help="audit | force:parity | force:plus | force:minus")
    p.add_argument("--jobs", type=int, default=d(1))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cotor",
        description="exact verification of the resolution's cohomology")
    _add_common(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("audit", parents=[common])
    sub.add_parser("basis", parents=[common])
    sub.add_parser("diff", parents=[common])
    sub.add_parser("homology", parents=[common]).add_argument(
        "--check-basis", action="store_true",
        help="also verify the enumerated class representatives per degree")
    sub.add_parser("poincare", parents=[common])
    sub.add_parser("verify", parents=[common])
    disc = sub.add_parser("discover", parents=[common])
    disc.add_argument("--support", required=True,
                      help="comma-separated formal monomials")
    disc.add_argument("--degree", type=int, required=True)
    sub.add_parser("table40", parents=[common])
    sub.add_parser("spectral", parents=[common])
    sub.add_parser("ideal-check", parents=[common])
    return p


class ConfigError(Exception):
    pass


def _engine(args) -> Engine:
    from .engine import DEFAULT_MAX_DEGREE

    conv = args.convention
    if conv != "audit":
        if not conv.startswith("force:"):
            raise ConfigError(f"bad --convention {conv!r}")
        conv = conv.removeprefix("force:")
    return Engine(max_degree=(args.max_degree if args.max_degree is not None
                              else DEFAULT_MAX_DEGREE),
                  convention=conv,
                  cache_dir=args.cache_dir,
                  jobs=args.jobs)


def _default_degree(args, fallback: int) -> int:
    n = args.max_degree if args.max_degree is not None else fallback
    if n < 0:
        raise ConfigError("--max-degree must be >= 0")
    if n > MAX_SUPPORTED_DEGREE:
        raise ConfigError(
            f"--max-degree beyond the supported cap {MAX_SUPPORTED_DEGREE}")
    return n


def _emit(args, payload, text_fn, csv_rows=None):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    elif args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in csv_rows:
            writer.writerow(row)
        sys.stdout.write(buf.getvalue())
    else:
        print(text_fn())


def _header(args, engine: Engine):
    header = {
        "schema": "cotor-report/1",
        "engine_version": ENGINE_VERSION,
        "fingerprint": engine.fingerprint,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config": {
            "command": args.command,
            "max_degree": args.max_degree,
            "format": args.format,
            "scheme": args.scheme,
            "page": args.page,
            "group": args.group,
            "convention": args.convention,
            "jobs": args.jobs,
        },
    }
    print(json.dumps(header, sort_keys=True), file=sys.stderr)


def cmd_audit(args) -> int:
    from .differential import audit_conventions

    report = audit_conventions(degree_bound=min(_default_degree(args, 40), 60))
    payload = {
        "admissible": report.admissible,
        "selected": report.selected,
        "x26_coefficients": list(report.x26_coefficients),
        "x26": report.x26.text(),
        "verdicts": [
            {"convention": v.convention, "admissible": v.admissible,
             "factorization_failures": v.factorization_failures,
             "dd_failures": v.dd_failures}
            for v in report.verdicts],
    }
    _emit(args, payload, lambda: "\n".join(
        [f"admissible conventions: {', '.join(report.admissible)}",
         f"selected: {report.selected}",
         f"degree-26 word cocycle: {report.x26.text()}"]))
    return 0 if report.admissible else 1


def cmd_basis(args) -> int:
    engine = _engine(args)
    n_max = _default_degree(args, 40)
    rows = [{"degree": n, "dim": len(engine.basis(n))}
            for n in range(n_max + 1)]
    _emit(args, rows,
          lambda: "\n".join(f"{r['degree']:4d} {r['dim']:8d}" for r in rows),
          csv_rows=[("degree", "dim")] + [(r["degree"], r["dim"])
                                          for r in rows])
    return 0


def cmd_diff(args) -> int:
    engine = _engine(args)
    n_max = _default_degree(args, 40)
    engine.build_range(n_max)
    rows = [{"degree": n,
             "shape": [engine.d_matrix(n).n_rows, engine.d_matrix(n).n_cols],
             "nnz": engine.d_matrix(n).nnz,
             "rank": engine.rank(n)} for n in range(n_max + 1)]
    _emit(args, rows, lambda: "\n".join(
        f"{r['degree']:4d} {r['shape'][0]:6d}x{r['shape'][1]:<6d}"
        f" nnz={r['nnz']:<8d} rank={r['rank']}" for r in rows),
          csv_rows=[("degree", "rows", "cols", "nnz", "rank")]
          + [(r["degree"], r["shape"][0], r["shape"][1], r["nnz"], r["rank"])
             for r in rows])
    return 0


def cmd_homology(args) -> int:
    engine = _engine(args)
    n_max = _default_degree(args, 80)
    engine.build_range(n_max)
    expected = engine.series_coeffs(n_max)
    rows = []
    failed = False
    for n in range(n_max + 1):
        row = {"degree": n, "dim": engine.dim_h(n), "expected": expected[n],
               "match": engine.dim_h(n) == expected[n]}
        if args.check_basis:
            row["basis_ok"] = engine.check_additive_basis(n)
            failed |= not row["basis_ok"]
        failed |= not row["match"]
        rows.append(row)
    _emit(args, rows, lambda: "\n".join(
        f"{r['degree']:4d} dim={r['dim']:4d} expected={r['expected']:4d} "
        f"{'ok' if r['match'] else 'MISMATCH'}" for r in rows),
          csv_rows=[("degree", "dim_v", "rank_d", "dim_h", "expected",
                     "match")]
          + [(n, len(engine.basis(n)), engine.rank(n), engine.dim_h(n),
              expected[n], engine.dim_h(n) == expected[n])
             for n in range(n_max + 1)])
    return 1 if failed else 0


def cmd_poincare(args) -> int:
    engine = _engine(args)
    n_max = _default_degree(args, 80)
    coeffs = engine.series_coeffs(n_max)
    _emit(args, coeffs, lambda: " ".join(map(str, coeffs)),
          csv_rows=[("degree", "coefficient")] + list(enumerate(coeffs)))
    return 0


def cmd_verify(args) -> int:
    from .relations import verify_all

    engine = _engine(args)
    groups = ("i", "ii", "iii") if args.group == "all" else (args.group,)
    report = verify_all(engine, groups)
    payload = {
        "records": report.records_json(),
        "sign_assignment": report.assignment,
        "group_i_reconcilable": report.group_i_reconcilable,
        "errata": report.errata,
        "ok": report.all_ok,
    }

    def text():
        lines = [f"{v.record.rid:8s} {v.verdict:10s} {v.record.lhs_text}"
                 for v in report.verdicts]
        lines.append(f"errata entries: {len(report.errata)}")
        lines.append(f"ok: {report.all_ok}")
        return "\n".join(lines)

    _emit(args, payload, text)
    return 0 if report.all_ok else 1


def cmd_discover(args) -> int:
    from .relations import discover_relation

    engine = _engine(args)
    support = [s.strip() for s in args.support.split(",") if s.strip()]
    result = discover_relation(support, args.degree, engine)
    _emit(args, result.as_json(), lambda: json.dumps(result.as_json()))
    return 0


def cmd_table40(args) -> int:
    from .derivation import derivative_catalog_report

    engine = _engine(args)
    rows = derivative_catalog_report(engine.d)
    payload = [{
        "q": r.q,
        "partial": r.partial_machine,
        "partial2": r.partial2_machine,
        "partial_display": {"text": r.partial_display.text,
                            "verdict": r.partial_display.verdict,
                            "flips": list(r.partial_display.flips)},
        "partial2_displays": [
            {"text": v.text, "verdict": v.verdict, "flips": list(v.flips)}
            for v in r.partial2_displays],
        "expanded_ok": r.expanded_ok,
    } for r in rows]

    def text():
        lines = []
        for r in rows:
            lines.append(f"{r.q:24s} expanded_ok={r.expanded_ok}")
            for v in (r.partial_display, *r.partial2_displays):
                flips = f" flips={','.join(v.flips)}" if v.flips else ""
                lines.append(f"    {v.verdict:10s} {v.text}{flips}")
        return "\n".join(lines)

    _emit(args, payload, text)
    return 0 if all(r.expanded_ok for r in rows) else 1


def cmd_spectral(args) -> int:
    from .spectral import SpectralSequence, run_scheme_checks

    engine = _engine(args)
    n_max = _default_degree(args, 60)
    engine.build_range(n_max + 1)
    if args.page is not None:
        ss = SpectralSequence(engine, args.scheme)
        table = ss.page_table(args.page, n_max)
        rows = [{"p": p, "n": n, "dim": d}
                for (p, n), d in sorted(table.items())]
        _emit(args, rows, lambda: "\n".join(
            f"p={r['p']:3d} n={r['n']:3d} dim={r['dim']}" for r in rows),
              csv_rows=[("p", "n", "dim")]
              + [(r["p"], r["n"], r["dim"]) for r in rows])
        return 0
    report = run_scheme_checks(engine, args.scheme, n_max)
    ss = SpectralSequence(engine, args.scheme)
    payload = {
        "scheme": report.scheme,
        "page": args.page,
        "max_degree": report.n_max,
        "filtration_compatible": report.filtration_compatible,
        "active_pages": report.active_pages,
        "collapsed_at": ss.collapsed_at(n_max),
        "mismatches": {k: [list(map(str, x)) for x in v]
                       for k, v in report.checks.items()},
        "ok": report.ok,
    }
    _emit(args, payload, lambda: "\n".join(
        [f"scheme {report.scheme}: ok={report.ok}",
         f"active pages: {report.active_pages}",
         f"collapsed at: {payload['collapsed_at']}"]
        + [f"  {k}: {'pass' if not v else v[:5]}"
           for k, v in report.checks.items()]))
    return 0 if report.ok else 1


def cmd_ideal_check(args) -> int:
    from .relations import ideal_and_split_check

    engine = _engine(args)
    n_max = _default_degree(args, 80)
    engine.build_range(n_max)
    report = ideal_and_split_check(engine, n_max)
    payload = {
        "degree_bound": report.degree_bound,
        "ideal_products": report.ideal_products,
        "ideal_violations": report.ideal_violations,
        "split_products": report.split_products,
        "split_violations": report.split_violations,
        "ok": report.ok,
    }
    _emit(args, payload, lambda: json.dumps(payload, indent=2))
    return 0 if report.ok else 1


_COMMANDS = {
    "audit": cmd_audit,
    "basis": cmd_basis,
    "diff": cmd_diff,
    "homology": cmd_homology,
    "poincare": cmd_poincare,
    "verify": cmd_verify,
    "discover": cmd_discover,
    "table40": cmd_table40,
    "spectral": cmd_spectral,
    "ideal-check": cmd_ideal_check,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.max_degree is not None and not (
                0 <= args.max_degree <= MAX_SUPPORTED_DEGREE):
            raise ConfigError("--max-degree out of range")
        _header(args, _HeaderStub(args))
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


class _HeaderStub:
    """Fingerprint for the header without paying for an engine audit."""

    def __init__(self, args):
        from .cache import fingerprint

        conv = args.convention.removeprefix("force:")
        self.fingerprint = fingerprint(
            conv if conv != "audit" else "parity")


if __name__ == "__main__":
    sys.exit(main())
