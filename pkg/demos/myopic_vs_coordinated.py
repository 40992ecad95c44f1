"""Two small static games where self-interested routing walks into a wall.

First game: two routers each own a flat-cost private link and share one
cheap link whose cost grows with the square of its load. Evaluated alone
the shared link wins, so simultaneous greedy senders pile onto it and pay
double the coordinated cost. The true optimum is lopsided: exactly one
sender uses the shared link.

Second game: a source-to-sink network with two three-hop routes, before and
after a low-cost crossover is added. Best-reply dynamics from a common
start converge in a sweep or two; at light load the crossover is a genuine
shortcut, at heavy load every traveler crowds through it and the selfish
equilibrium costs more than the network without the new links.

    python demos/myopic_vs_coordinated.py
"""

from coinroute import (best_response_equilibrium, coordinated_optimum,
                       evaluate_assignment, greedy_choices, load_scenario)


def shared_link_story():
    topo = load_scenario("two-router-shared-link").topology("a")
    greedy = greedy_choices(topo)
    names = [" then ".join(p) for p in
             (greedy.paths[t][i] for t, i in zip(greedy.travelers, greedy.assignment))]
    print("shared-link game, one packet per router:")
    print("  greedy, priced alone: both choose the shared link")
    for name, cost in zip(names, greedy.costs):
        print(f"    {name}: pays {cost:.0f}")
    print(f"  joint damage: {greedy.total:.0f}")

    alternates = evaluate_assignment(topo, (0, 0))
    print(f"  coordinated, both on private links: {alternates.costs[0]:.0f} each, "
          f"total {alternates.total:.0f}")

    opt = coordinated_optimum(topo)
    print(f"  best joint profile is asymmetric: costs {opt.costs}, "
          f"total {opt.total:.0f}")
    print()


def crossover_story():
    scenario = load_scenario("braess-figure2")
    print("three-route network, best-reply equilibria:")
    for load in (1, 6):
        for variant, tag in (("a", "without crossover"), ("b", "with crossover")):
            eq = best_response_equilibrium(scenario.topology(variant, (load,)))
            per = sorted(set(round(c, 6) for c in eq.costs))
            print(f"  load {load}, {tag:<18}: per-traveler cost {per} "
                  f"(converged in {eq.sweeps} sweep{'s' if eq.sweeps != 1 else ''})")
        print()
    print("one traveler gains from the crossover (61 down to 31); six travelers")
    print("all take it and all lose (83 up to 92). Nobody can deviate and do")
    print("better, which is exactly the trap.")


if __name__ == "__main__":
    shared_link_story()
    crossover_story()
