"""Command-line front end: instance analysis, decode tests, rates, curves, simulation.

Exit codes: 0 success, 2 usage error, 3 verification failure.  Output is a
pure function of the flags (plus the seed for randomized subcommands).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bounds import DEFAULT_NODE_CAP, build_report, gap_ratio
from .coloring import local_chromatic_value, theorem1_coloring, verify_proper
from .icp import GapVector, build_union_icp, to_suicp
from .macc import (
    CcdnConfig,
    end_to_end_simulate,
    rate_hkd,
    rate_new,
    rate_rk,
    tradeoff_csv,
    tradeoff_curve,
)
from .scheme import build_mds_scheme, scheme_to_json, simulate_decode

USAGE_ERROR = 2
VERIFICATION_FAILURE = 3


def _decimal(x: Fraction) -> str:
    return f"{float(x):.6g}"


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag} expects a comma-separated integer list")


def _mais_cap() -> int:
    raw = os.environ.get("SICPS_MAIS_CAP")
    return DEFAULT_NODE_CAP if raw is None else int(raw)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_icp_analyze(args) -> int:
    spec, shift = GapVector(tuple(args.gaps), args.L).canonicalize()
    report = build_report(spec, node_cap=_mais_cap())
    icp = build_union_icp(spec)
    graph = to_suicp(icp)
    coloring = theorem1_coloring(icp)
    violations = verify_proper(graph, coloring)
    lcv = local_chromatic_value(graph, coloring) if not violations else None
    ratio = gap_ratio(spec)
    payload = {
        "gaps": list(spec.gaps),
        "rotation_shift": shift,
        "L": spec.L,
        "K": spec.K,
        "i": spec.i,
        "bounds": report.to_json(),
        "gap_ratio": str(ratio),
        "coloring": {
            "colors": coloring.num_colors,
            "proper": not violations,
            "local_chromatic": lcv,
        },
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"gaps: {','.join(map(str, spec.gaps))} (canonical, shift {shift})")
        print(f"L: {spec.L}")
        print(f"K: {spec.K}")
        print(f"upper_Ru: {report.upper}")
        print(f"lower_constructive: {report.lower_constructive}")
        print(f"lower_brute: {report.lower_brute if report.lower_brute is not None else 'skipped'}")
        print(f"exact: {report.exact if report.exact is not None else 'unknown'}")
        print(f"gap_ratio: {ratio} ({_decimal(ratio)})")
        print(f"coloring_proper: {str(not violations).lower()}")
        print(f"local_chromatic: {lcv}")
    return 0


def cmd_icp_decode_test(args) -> int:
    import random

    spec, _ = GapVector(tuple(args.gaps), args.L).canonicalize()
    icp = build_union_icp(spec)
    graph = to_suicp(icp)
    scheme = build_mds_scheme(graph, theorem1_coloring(icp), args.field)
    failures = 0
    for trial in range(args.trials):
        rng = random.Random(f"{args.seed}:{trial}")
        messages = {node: rng.randrange(scheme.field_order) for node in graph.nodes}
        decoded = simulate_decode(scheme, graph, messages)
        failures += sum(decoded[node] != messages[node] for node in graph.nodes)
    payload = {
        "gaps": list(spec.gaps),
        "L": spec.L,
        "K": spec.K,
        "trials": args.trials,
        "failures": failures,
        "scheme": scheme_to_json(scheme),
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"gaps: {','.join(map(str, spec.gaps))}")
        print(f"L: {spec.L}")
        print(f"K: {spec.K}")
        print(f"chi: {scheme.chi}")
        print(f"field: {scheme.field_order}")
        print(f"trials: {args.trials}")
        print(f"failures: {failures}")
    return 0 if failures == 0 else VERIFICATION_FAILURE


def cmd_macc_rate(args) -> int:
    K, L, w = args.K, args.L, args.w
    N = args.N if args.N is not None else K
    memory = Fraction(w * N, K)
    rates = {
        "new": rate_new(K, L, w),
        "hkd": rate_hkd(K, L, w),
        "rk": rate_rk(N, K, L, memory),
    }
    if args.format == "json":
        payload = {
            "N": N,
            "K": K,
            "L": L,
            "w": w,
            "M": str(memory),
            "rates": {
                name: {"exact": str(value), "decimal": _decimal(value)}
                for name, value in rates.items()
            },
        }
        print(json.dumps(payload, indent=2))
    else:
        labels = {"new": "R_new", "hkd": "R_HKD", "rk": "R_RK"}
        print(f"M: {memory} ({_decimal(memory)})")
        for name, value in rates.items():
            print(f"{labels[name]}: {value} ({_decimal(value)})")
    return 0


def cmd_macc_tradeoff(args) -> int:
    N = args.N if args.N is not None else args.K
    cfg = CcdnConfig(N=N, K=args.K, L=args.L)
    points = tradeoff_curve(cfg, samples=args.samples)
    if args.format == "json":
        payload = [
            {
                "M_exact": str(p.M),
                "M_decimal": _decimal(p.M),
                "rate_exact": str(p.rate),
                "rate_decimal": _decimal(p.rate),
                "source": p.source,
            }
            for p in points
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(tradeoff_csv(points), args.out)
    return 0


def cmd_macc_simulate(args) -> int:
    N = args.N if args.N is not None else args.K
    cfg = CcdnConfig(N=N, K=args.K, L=args.L)
    report = end_to_end_simulate(
        cfg, args.w, args.demands, field_order=args.field, seed=args.seed
    )
    if args.format == "text":
        print(f"decoded_ok: {str(report.decoded_ok).lower()}")
        print(f"total_rate: {report.total_rate} ({_decimal(report.total_rate)})")
        for cls in report.classes:
            rep = ",".join(map(str, cls.representative))
            print(f"class ({rep}): columns={cls.columns} split={cls.split} "
                  f"chi={cls.chi} field={cls.field}")
        for failure in report.failures:
            print(f"FAIL {failure}")
    else:
        print(json.dumps(report.to_json(), indent=2))
    return 0 if report.decoded_ok else VERIFICATION_FAILURE


def _add_format(parser, choices=("text", "json"), default="text") -> None:
    parser.add_argument("--format", choices=list(choices), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sicps",
        description="Structured index coding bounds and multi-access caching rates",
    )
    top = parser.add_subparsers(dest="domain", required=True)

    icp = top.add_parser("icp", help="gap-instance analysis and decode checks")
    icp_sub = icp.add_subparsers(dest="command", required=True)

    analyze = icp_sub.add_parser("analyze", help="bounds, exact cases, coloring value")
    analyze.add_argument("--gaps", required=True,
                         type=lambda s: _parse_int_list(s, "--gaps"))
    analyze.add_argument("--L", required=True, type=int)
    _add_format(analyze)
    analyze.set_defaults(handler=cmd_icp_analyze)

    decode = icp_sub.add_parser("decode-test", help="randomized decode verification")
    decode.add_argument("--gaps", required=True,
                        type=lambda s: _parse_int_list(s, "--gaps"))
    decode.add_argument("--L", required=True, type=int)
    decode.add_argument("--field", type=int, default=None)
    decode.add_argument("--trials", type=int, default=20)
    decode.add_argument("--seed", required=True, type=int)
    _add_format(decode)
    decode.set_defaults(handler=cmd_icp_decode_test)

    macc = top.add_parser("macc", help="multi-access caching rates and simulation")
    macc_sub = macc.add_subparsers(dest="command", required=True)

    rate = macc_sub.add_parser("rate", help="corner-point rates")
    rate.add_argument("--N", type=int, default=None)
    rate.add_argument("--K", required=True, type=int)
    rate.add_argument("--L", required=True, type=int)
    rate.add_argument("--w", required=True, type=int)
    _add_format(rate)
    rate.set_defaults(handler=cmd_macc_rate)

    tradeoff = macc_sub.add_parser("tradeoff", help="rate-memory curve as CSV")
    tradeoff.add_argument("--N", type=int, default=None)
    tradeoff.add_argument("--K", required=True, type=int)
    tradeoff.add_argument("--L", required=True, type=int)
    tradeoff.add_argument("--samples", type=int, default=0)
    tradeoff.add_argument("--out", default=None)
    _add_format(tradeoff, choices=("csv", "json"), default="csv")
    tradeoff.set_defaults(handler=cmd_macc_tradeoff)

    simulate = macc_sub.add_parser("simulate", help="placement-to-decode simulation")
    simulate.add_argument("--N", type=int, default=None)
    simulate.add_argument("--K", required=True, type=int)
    simulate.add_argument("--L", required=True, type=int)
    simulate.add_argument("--w", required=True, type=int)
    simulate.add_argument("--demands", required=True,
                          type=lambda s: _parse_int_list(s, "--demands"))
    simulate.add_argument("--field", type=int, default=None)
    simulate.add_argument("--seed", required=True, type=int)
    _add_format(simulate, choices=("json", "text"), default="json")
    simulate.set_defaults(handler=cmd_macc_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
