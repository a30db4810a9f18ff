"""Command-line front end.

Subcommands:
  larc <file>                  rank condition: backtracking search + closure dim
  compound <file> --k K        induced matrices of A and B on the k-th power
  orthants <file> --k K        family-invariant orthant certificates
  analyze <file>               full pipeline, text and optional JSON report
  verify <report>              re-check every certificate in a report file

Exit codes: 0 success, 1 inconclusive verdict under --strict or a
capacity limit, 2 malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

import numpy as np

from . import __version__
from .dynamics import DEFAULT_BUDGET, Budget
from .errors import CapacityError, InputError
from .exterior import additive_compound, compound_matrix
from .larc import bracket_closure_dim, larc_algorithm1
from .orthants import family_invariant_orthants
from .report import report_to_json, spec_from_dict, verify_report
from .system import SystemSpec
from .verdict import (CONTROLLABLE_EVIDENCE, INCONCLUSIVE, NOT_CONTROLLABLE,
                      analyze, analyze_k)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_INPUT = 2


def _load_system(path: str, seed_override: int | None = None) -> tuple[SystemSpec, Budget]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: not valid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    if seed_override is not None:
        data = dict(data)
        data["seed"] = seed_override
    try:
        spec = spec_from_dict(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc
    budget = DEFAULT_BUDGET
    overrides = data.get("budget", {})
    if overrides:
        known = {f.name for f in dataclasses.fields(Budget)}
        bad = set(overrides) - known
        if bad:
            raise InputError(f"{path}: unknown budget fields {sorted(bad)}")
        overrides = {k: (tuple(v) if isinstance(v, list) else v)
                     for k, v in overrides.items()}
        budget = dataclasses.replace(budget, **overrides)
    return spec, budget


def _print_matrix(M: np.ndarray, out):
    for row in np.asarray(M):
        out.write("  [" + ", ".join(f"{x: .6g}" for x in row) + "]\n")


def _cmd_larc(args, out) -> int:
    spec, _ = _load_system(args.file, args.seed)
    target = spec.d * spec.d - 1
    alg1 = larc_algorithm1(spec.A, spec.B, target)
    dim = bracket_closure_dim(spec.A, spec.B)
    out.write(f"algorithm1: {str(alg1).lower()}; closure dim: {dim}/{target}\n")
    return EXIT_OK


def _cmd_compound(args, out) -> int:
    spec, _ = _load_system(args.file, args.seed)
    build = additive_compound if args.additive else compound_matrix
    kind = "additive" if args.additive else "multiplicative"
    for name, M in (("A", spec.A), ("B", spec.B)):
        cm = build(M, args.k)
        out.write(f"{kind} compound of {name} at k={args.k} "
                  f"({cm.table.dim}x{cm.table.dim}):\n")
        _print_matrix(cm.entries, out)
    return EXIT_OK


def _cmd_orthants(args, out) -> int:
    spec, _ = _load_system(args.file, args.seed)
    certs = family_invariant_orthants(spec, args.k)
    if not certs:
        out.write(f"no family-invariant orthants at k={args.k}\n")
        return EXIT_OK
    out.write(f"{len(certs)} family-invariant orthant(s) at k={args.k}:\n")
    for c in certs:
        signs = "".join("+" if s > 0 else "-" for s in c.pattern.signs)
        out.write(f"  pattern {signs}  slack {c.slack:.3e}  checked u {list(c.checked_u)}\n")
    return EXIT_OK


def _status_line(rep) -> str:
    bits = [f"k={rep.k}: {rep.status}"]
    if rep.orthant_certs:
        signs = "".join("+" if s > 0 else "-" for s in rep.orthant_certs[0].pattern.signs)
        extra = f" (+{len(rep.orthant_certs) - 1} more)" if len(rep.orthant_certs) > 1 else ""
        bits.append(f"orthant {signs} slack {rep.orthant_certs[0].slack:.2e}{extra}")
    if rep.nonpointed_cert:
        bits.append(f"non-pointed [{rep.nonpointed_cert.mode}] "
                    f"alignment {rep.nonpointed_cert.alignment:.9f}"
                    if rep.nonpointed_cert.mode == "line-pair" else
                    f"non-pointed [hull] residual {rep.nonpointed_cert.residual:.2e}")
    if rep.dual_nonpointed_cert:
        bits.append(f"dual non-pointed at degree {rep.dual_nonpointed_cert.k} "
                    f"of the inverse system")
    if rep.reason:
        bits.append(rep.reason)
    return "; ".join(bits)


def _cmd_analyze(args, out) -> int:
    spec, budget = _load_system(args.file, args.seed)
    t0 = time.perf_counter()
    if args.k is not None:
        rep = analyze_k(spec, args.k, budget)
        out.write(_status_line(rep) + "\n")
        return EXIT_OK if rep.status != INCONCLUSIVE or not args.strict else EXIT_INCONCLUSIVE

    report = analyze(spec, budget)
    elapsed = time.perf_counter() - t0
    out.write(f"system: d={spec.d}, u model {spec.u_model.kind}, seed {spec.rng_seed}\n")
    out.write(f"rank condition: algorithm1 {str(report.algorithm1).lower()}, "
              f"closure dim {report.closure_dim}/{report.closure_target}"
              + (" (DISAGREEMENT)" if report.larc_disagreement else "") + "\n")
    for rep in report.k_reports:
        out.write(_status_line(rep) + "\n")
    for note in report.notes:
        out.write(f"note: {note}\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(report, elapsed=elapsed))
            fh.write("\n")
        out.write(f"json report written to {args.json}\n")

    if report.verdict == NOT_CONTROLLABLE:
        flags = ",".join(str(k) for k in report.flag_type_estimate)
        out.write(f"verdict: NOT CONTROLLABLE (certified); flag type estimate: {{{flags}}}\n")
        return EXIT_OK
    if report.verdict == CONTROLLABLE_EVIDENCE:
        ks = ",".join(str(r.k) for r in report.k_reports)
        out.write(f"verdict: CONTROLLABLE (evidence: non-pointed at k = {ks})\n")
        return EXIT_OK
    out.write("verdict: INCONCLUSIVE\n")
    return EXIT_INCONCLUSIVE if args.strict else EXIT_OK


def _cmd_verify(args, out) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.report}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{args.report}:{exc.lineno}:{exc.colno}: not valid JSON ({exc.msg})") from exc
    checks = verify_report(data)
    ok = True
    for name, passed, detail in checks:
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}\n")
        ok = ok and passed
    out.write(f"report {'verifies' if ok else 'FAILS verification'} "
              f"({sum(p for _, p, _ in checks)}/{len(checks)} checks)\n")
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conelab",
        description="Invariant-cone certificates and controllability analysis "
                    "for bilinear control systems dx/dt = Ax + uBx.",
        epilog="Defaults: seed 42; sampling budget "
               f"{DEFAULT_BUDGET.seeds} seeds x {DEFAULT_BUDGET.words_per_seed} words, "
               f"word length <= {DEFAULT_BUDGET.word_len}, t <= {DEFAULT_BUDGET.t_max}. "
               "CONELAB_THREADS caps worker threads (default 1).")
    p.add_argument("--version", action="version", version=f"conelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("file", help="system file (JSON: d, A, B, u_model, seed, budget)")
        sp.add_argument("--seed", type=int, default=None, help="override the RNG seed")

    sp = sub.add_parser("larc", help="Lie algebra rank condition")
    add_common(sp)

    sp = sub.add_parser("compound", help="print induced matrices on an exterior power")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True, help="exterior degree")
    sp.add_argument("--additive", action="store_true",
                    help="additive compound instead of multiplicative")

    sp = sub.add_parser("orthants", help="family-invariant orthant certificates")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True, help="exterior degree")

    sp = sub.add_parser("analyze", help="full controllability analysis")
    add_common(sp)
    sp.add_argument("--k", type=int, default=None, help="analyze a single degree")
    sp.add_argument("--json", default=None, metavar="OUT", help="write a JSON report")
    sp.add_argument("--strict", action="store_true",
                    help="exit 1 when the verdict is inconclusive")

    sp = sub.add_parser("verify", help="re-check every certificate in a report")
    sp.add_argument("report", help="JSON report emitted by analyze --json")
    return p


def run_cli(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "larc": _cmd_larc,
        "compound": _cmd_compound,
        "orthants": _cmd_orthants,
        "analyze": _cmd_analyze,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
