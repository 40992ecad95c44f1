"""Trace the memory-based learner from pure recall to pure model play.

The mb policy flips a seeded coin each decision: with probability equal to
the steering weight it trusts the one-step lookahead model (the fk rule),
otherwise it falls back on nearest-neighbor recall over its own scored
history. Steering 1.0 therefore reproduces fk decision for decision, while
steering 0.0 is recall alone and inherits every tic of the memory: thin
records at rarely-consulted routers, estimate ties, stale outcomes.

On the two-halves network this shows as a curve: recall alone loses to the
myopic shortest-path baseline, a modest amount of model play crosses below
it, and the fk endpoint anchors the far side.

    python demos/steering_tradeoff.py --seeds 5
"""

import argparse

from coinroute import load_scenario, steering_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenario", default="ray")
    ap.add_argument("--seeds", type=int, default=5,
                    help="seeds per steering value (bundled default is 20)")
    ap.add_argument("--steering", type=float, nargs="+", default=None)
    args = ap.parse_args()

    scenario = load_scenario(args.scenario)
    rows = [scenario.sweeprow] if scenario.sweeprow else scenario.rows
    print(f"scenario {scenario.name}, variant {scenario.variants[-1]}, "
          f"load row(s) {rows}, {args.seeds} seed(s) per value")
    print("sweeping steering values...")
    print()

    sweep = steering_sweep(scenario, steering=args.steering, seeds=args.seeds)
    ispa = {tuple(r): sweep.reference.cell(r, sweep.variant, "ispa").mean
            for r in sweep.rows}
    fk = {tuple(r): sweep.reference.cell(r, sweep.variant, "fk").mean
          for r in sweep.rows}

    for row in sweep.rows:
        print(f"load {row}: ispa {ispa[row]:.3f}   fk {fk[row]:.3f}")
        for s, cost in sorted(sweep.curve(row).items()):
            side = "beats ispa" if cost < ispa[row] else "behind ispa"
            print(f"  steering {s:>4g}: {cost:8.3f}  ({side})")
        print()

    print("the 1.0 column matches fk exactly, seed for seed: with the coin")
    print("always landing on the model there is nothing left to recall.")


if __name__ == "__main__":
    main()
