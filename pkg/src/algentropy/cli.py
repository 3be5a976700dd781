"""Command line interface.

    algentropy analyze MAPPING [options]   patterns, balance, dynamical degree
    algentropy degrees MAPPING [options]   brute-force degree sequence (CSV)
    algentropy verify  MAPPING [options]   analysis cross-checked vs the oracle

Exit codes: 0 success, 1 parse/computation error, 2 usage error or an
unresolved singularity pattern, 3 consistency failure (the balance or a
cross-check contradicts the oracle).
"""

from __future__ import annotations

import argparse
import sys

from . import oracle as oc
from . import patterns as pt
from . import report as rp
from .errors import (
    AlgentropyError,
    DegenerateSequenceError,
    InconsistentBalanceError,
    ResourceCapExceeded,
    UnresolvedPatternError,
)
from .mapping import load_mapping

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNRESOLVED = 2
EXIT_MISMATCH = 3


def _add_common(p, oracle=True):
    p.add_argument("mapping", help="mapping file")
    p.add_argument("-n", "--max-n", type=int, default=None, dest="n_max",
                   help="how many degrees to compute")
    if oracle:
        p.add_argument("--mode", choices=("modp", "exact"), default="modp",
                       help="oracle backend (default modp)")
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed for mod-p specializations (default 0)")
    p.add_argument("--max-pattern-length", type=int, default=None,
                   metavar="L", help="cap on traced pattern length")
    p.add_argument("--orbit-seeds", default=None, metavar="V1,V2,...",
                   help="extra starting values to trace (inf or exact "
                        "expressions in the parameters)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="algentropy",
        description="dynamical degrees of rational mappings from their "
                    "singularity structure")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="singularity patterns, degree "
                                       "balance and dynamical degree")
    _add_common(p)
    p.add_argument("--no-oracle", action="store_true",
                   help="skip the brute-force cross-check")
    p.add_argument("--tolerance", type=float, default=0.02,
                   help="allowed gap between the computed dynamical degree "
                        "and the oracle growth estimate (default 0.02)")
    p.add_argument("--json", metavar="FILE",
                   help="also write the canonical JSON report")

    p = sub.add_parser("degrees", help="brute-force degree sequence")
    _add_common(p)
    p.add_argument("--csv", metavar="FILE", help="write the sequence as "
                                                 "n,degree CSV")

    p = sub.add_parser("verify", help="analysis cross-checked against the "
                                      "oracle degree sequence and the "
                                      "inverse mapping")
    _add_common(p)
    p.add_argument("--tolerance", type=float, default=0.02,
                   help="allowed gap between the computed dynamical degree "
                        "and the oracle growth estimate (default 0.02)")
    return parser


def _limits(args):
    if args.max_pattern_length is None:
        return None
    return pt.TraceLimits(max_forward=args.max_pattern_length)


def _extra_seeds(args):
    if args.orbit_seeds is None:
        return ()
    return tuple(s.strip() for s in args.orbit_seeds.split(",") if s.strip())


def _report_kw(args, oracle_mode):
    kw = dict(n_max=args.n_max, oracle_mode=oracle_mode,
              limits=_limits(args), extra_seeds=_extra_seeds(args))
    if oracle_mode == "modp":
        kw["oracle_kw"] = {"seed": args.seed}
    if hasattr(args, "tolerance"):
        kw["tolerance"] = args.tolerance
    return kw


def _emit_report(report, failures_fatal):
    sys.stdout.write(rp.render_text(report))
    if failures_fatal and any(not c.passed for c in report.checks):
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_analyze(args):
    spec = load_mapping(args.mapping)
    mode = None if args.no_oracle else args.mode
    report = rp.build_report(spec, **_report_kw(args, mode))
    code = _emit_report(report, failures_fatal=True)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return code


def _cmd_degrees(args):
    spec = load_mapping(args.mapping)
    n_max = 12 if args.n_max is None else args.n_max
    kw = {"seed": args.seed} if args.mode == "modp" else {}
    truncated = False
    try:
        degrees = oc.degree_sequence(spec, n_max, mode=args.mode, **kw)
    except ResourceCapExceeded as exc:
        degrees = exc.partial
        truncated = True
        print(f"warning: {exc}; writing the partial sequence",
              file=sys.stderr)
    print(" ".join(str(d) for d in degrees))
    try:
        print(f"growth estimate: {oc.estimate_lambda(degrees):.6f}")
    except DegenerateSequenceError:
        pass  # too few terms for an estimate; the raw sequence stands
    if args.csv:
        oc.write_degrees_csv(args.csv, degrees, truncated=truncated)
    return EXIT_OK


def _cmd_verify(args):
    spec = load_mapping(args.mapping)
    report = rp.build_report(spec, reversal_check=True,
                             **_report_kw(args, args.mode))
    code = _emit_report(report, failures_fatal=True)
    if code == EXIT_OK:
        print("verified: balance, growth and inverse checks all pass")
    return code


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"analyze": _cmd_analyze, "degrees": _cmd_degrees,
               "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except InconsistentBalanceError as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except UnresolvedPatternError as exc:
        print(f"unresolved: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except (AlgentropyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
