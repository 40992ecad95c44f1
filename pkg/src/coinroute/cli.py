"""Command line front end.

Subcommands:
    run        batch of seeded runs for one algorithm, per-run CSV rows
    braess     both network variants side by side, paradox flags per load
    sweep      mb policy across steering values vs the ispa and fk anchors
    lb-bounds  two-link threshold analysis: balanced vs best threshold
"""

import argparse
import csv
import sys

from .agents import POLICY_NAMES, run as run_once
from .engine import SimulationError
from .harness import (DETERMINISTIC, HarnessError, ResultTable, braess_report,
                      emit, load_scenario, run_scenario, steering_sweep)
from .loadbalance import BoundsError, verdict
from .netmodel import TopologyError, parse_cost_spec

RUN_HEADER = ["scenario", "variant", "algorithm", "load", "seed",
              "per_packet_cost", "waves_measured"]


def _out_stream(path):
    return open(path, "w") if path else sys.stdout


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    label = f"mb@{args.steering:g}" if args.algo == "mb" else args.algo
    seeds = args.seeds if args.seeds is not None else scenario.seeds
    if args.algo in DETERMINISTIC:
        seeds = 1
    schedule = scenario.schedule(args.waves)
    fh = _out_stream(args.out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_HEADER)
        for row in scenario.rows:
            load = ";".join(str(n) for n in row)
            for variant in scenario.variants:
                topo = scenario.topology(variant, row)
                for seed in range(seeds):
                    result = run_once(topo, schedule, policy=args.algo,
                                      seed=seed, steering=args.steering)
                    writer.writerow([scenario.name, variant, label, load, seed,
                                     f"{result.per_packet_cost:.6f}",
                                     result.measured_waves])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def _cmd_braess(args) -> int:
    scenario = load_scenario(args.scenario)
    if len(scenario.variants) < 2:
        raise HarnessError(f"scenario {scenario.name} declares no added links")
    steering = 0.5 if 0.5 in scenario.steering else scenario.steering[0]
    table = run_scenario(scenario, seeds=args.seeds, steering=[steering],
                         waves=args.waves)
    report = braess_report(table, tolerance=args.tolerance)
    sys.stdout.write(table.to_markdown())
    sys.stdout.write("\n")
    sys.stdout.write(report.to_text())
    if args.out:
        emit(table, "csv", args.out)
    return 0


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    sweep = steering_sweep(scenario, steering=args.steering, seeds=args.seeds,
                           waves=args.waves)
    merged = ResultTable(rows=list(sweep.reference.rows))
    for table in sweep.tables.values():
        merged.rows.extend(table.rows)
    merged.sort()
    sys.stdout.write(merged.to_markdown())
    sys.stdout.write("\n")
    for row in sweep.rows:
        curve = sweep.curve(row)
        load = ";".join(str(n) for n in row)
        points = "  ".join(f"{s:g}:{cost:.3f}" for s, cost in sorted(curve.items()))
        sys.stdout.write(f"load {load}  mb steering -> {points}\n")
    if args.out:
        emit(merged, "csv", args.out)
    return 0


def _parse_cost(text):
    form, *coeffs = text.split()
    return parse_cost_spec(form, coeffs)


def _cmd_bounds(args) -> int:
    cost_a = _parse_cost(args.ca)
    cost_b = _parse_cost(args.cb)
    report = verdict(cost_a, cost_b, args.W)
    rows = report.rows()
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        if isinstance(value, bool):
            text = "yes" if value else "no"
        elif isinstance(value, float):
            text = f"{value:.6f}"
        else:
            text = str(value)
        sys.stdout.write(f"{name:<{width}}  {text}\n")
    fh = _out_stream(args.out)
    try:
        if fh is sys.stdout:
            sys.stdout.write("\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quantity", "value"])
        for name, value in rows:
            writer.writerow([name, f"{value:.6f}" if isinstance(value, float) else value])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinroute",
        description="Discrete-time network routing: simulation and analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="seeded batch for one algorithm, per-run CSV")
    p.add_argument("--scenario", required=True, help="bundled name or file path")
    p.add_argument("--algo", default="ispa", choices=POLICY_NAMES)
    p.add_argument("--steering", type=float, default=0.5,
                   help="mb blend weight in [0, 1] (1.0 plays fk every step)")
    p.add_argument("--seeds", type=int, default=None,
                   help="seed count (deterministic algorithms always run once)")
    p.add_argument("--waves", type=int, default=None, help="override total waves")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("braess", help="compare network variants, flag paradox rows")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tolerance", type=float, default=0.5,
                   help="cost change below this magnitude counts as neutral")
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--waves", type=int, default=None)
    p.add_argument("--out", default=None, help="write the underlying table as CSV")
    p.set_defaults(func=_cmd_braess)

    p = sub.add_parser("sweep", help="mb cost across steering values")
    p.add_argument("--scenario", required=True)
    p.add_argument("--steering", type=float, nargs="+", default=None,
                   help="values in [0, 1]; default comes from the scenario file")
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--waves", type=int, default=None)
    p.add_argument("--out", default=None, help="write the merged table as CSV")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("lb-bounds", help="two-link threshold cost bounds")
    p.add_argument("--ca", required=True, metavar="SPEC",
                   help="first link cost, e.g. 'power 1 2'")
    p.add_argument("--cb", required=True, metavar="SPEC",
                   help="second link cost, e.g. 'affine 0 1'")
    p.add_argument("--W", required=True, type=int, help="window length")
    p.add_argument("--out", default=None, help="write the CSV block here")
    p.set_defaults(func=_cmd_bounds)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HarnessError, TopologyError, SimulationError, BoundsError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
