"""Command-line entry point: verify, simulate, poisson, report."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

import jsonschema

from . import gyrostat, suites, vandiejen
from .config import RunConfig
from .errors import ConfigError
from .records import dump_report, encode, validate_report

EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3
FLOWS = ("vd8", "vd4-1", "vd4-2", "inoz", "gyrostat")


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if getattr(args, "tolerance", None) is not None:
        cfg = cfg.with_tolerance(args.tolerance)
    return cfg


def _summarize(records, stream) -> int:
    failed = [r for r in records if not r.passed]
    for r in records:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark} {r.suite:<14} {r.tag:<34} {r.max_residual:10.3e} <= {r.tolerance:.0e}"
              f"  [{r.samples_accepted}/{r.samples_attempted}]", file=stream)
    print(f"{len(records) - len(failed)}/{len(records)} records passed", file=stream)
    return EXIT_FAIL if failed else 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    records = suites.verify_records(cfg, set(args.only) if args.only else None)
    dump_report(records, args.out or cfg.outputs["report"])
    return _summarize(records, sys.stderr if args.quiet else sys.stdout)


def cmd_poisson(args) -> int:
    cfg = _config(args)
    records = suites.poisson_records(cfg)
    dump_report(records, args.out or "poisson.json")
    return _summarize(records, sys.stdout)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    start = time.perf_counter()
    traj = suites.run_flow(cfg, args.flow, args.dt, args.steps)
    wall = time.perf_counter() - start
    csv_path = args.out or cfg.outputs["trajectory"]
    if args.flow == "gyrostat":
        gyrostat.write_csv(traj, csv_path)
    else:
        vandiejen.write_csv(traj, csv_path)
    aborted = getattr(traj, "aborted", False)
    summary = {
        "flow": args.flow,
        "dt": args.dt,
        "steps_requested": args.steps,
        "steps_completed": len(traj.times) - 1,
        "initial_state": traj.states[0] if traj.states else None,
        "drifts": traj.drifts(),
        "aborted": aborted,
        "reason": getattr(traj, "reason", ""),
        "wall_time": wall,
    }
    state = summary["initial_state"]
    if state is not None:
        summary["initial_state"] = state.as_array().tolist()
    with open(args.summary or cfg.outputs["summary"], "w", encoding="utf-8") as fh:
        json.dump(encode(summary), fh, sort_keys=True, indent=1)
        fh.write("\n")
    for name, value in summary["drifts"].items():
        print(f"{name:<10} drift {value:.3e}")
    if aborted:
        print(f"aborted after {summary['steps_completed']} steps: {summary['reason']}", file=sys.stderr)
        return EXIT_FAIL
    return 0


def cmd_report(args) -> int:
    if not args.merge:
        print("report: nothing to do without --merge", file=sys.stderr)
        return EXIT_CONFIG
    merged = []
    for path in args.inputs:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        validate_report(data)
        merged.extend(data)
    merged.sort(key=lambda r: (r["suite"], r["tag"]))
    text = dump_report(merged, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_FAIL if any(not r["pass"] for r in merged) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bc1lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--tolerance", type=float, help="override every tolerance")

    p = sub.add_parser("verify", help="run the verification suites and write a JSON report")
    common(p)
    p.add_argument("--out", metavar="PATH", help="report path (default from config)")
    p.add_argument("--only", nargs="+", choices=sorted(suites.SUITE_BUILDERS), help="restrict to these suites")
    p.add_argument("--quiet", action="store_true", help="send the per-record table to stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="integrate one flow with fixed-step RK4")
    common(p)
    p.add_argument("--flow", required=True, choices=FLOWS)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", metavar="PATH", help="trajectory CSV path (default from config)")
    p.add_argument("--summary", metavar="PATH", help="drift summary JSON path (default from config)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("poisson", help="numeric bracket tables")
    common(p)
    p.add_argument("--out", metavar="PATH", help="report path (default poisson.json)")
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("report", help="combine reports")
    p.add_argument("--merge", action="store_true", help="merge the input reports into one")
    p.add_argument("inputs", nargs="*", metavar="REPORT")
    p.add_argument("--out", metavar="PATH", help="merged report path (default stdout)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "steps", 0) < 0:
        print("--steps must be nonnegative", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except jsonschema.ValidationError as exc:
        print(f"invalid report: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
