"""Static path-choice analysis: best-response dynamics, greedy play, joint optima.

Each packet of each demand is a traveler who commits to one whole path; a
router's load is the number of travelers whose paths cross it, and a traveler
pays the summed router costs along its own path. No waves or windows: this is
the one-shot game the simulator's dynamics relax toward.
"""

from dataclasses import dataclass
from itertools import product

from .netmodel import Topology, all_paths


class EquilibriumError(RuntimeError):
    """Raised when the static analysis cannot run on the given topology."""


@dataclass(frozen=True)
class Traveler:
    """One unit of demand: a single packet with a fixed source and destination."""

    source: str
    dest: str


@dataclass
class PlayResult:
    """A joint path assignment and what every traveler pays under it."""

    travelers: tuple
    paths: dict            # traveler -> tuple of candidate paths
    assignment: tuple      # path index per traveler
    costs: tuple           # realized cost per traveler
    total: float
    sweeps: int = 0        # best-response sweeps until quiescent (0 = not iterated)


def travelers_of(topology: Topology):
    """Expand demands into individual travelers, one per packet per wave."""
    out = []
    for s, d, n in topology.demands:
        out.extend(Traveler(s, d) for _ in range(n))
    return tuple(out)


def router_loads(chosen_paths):
    """Occupancy per router given every traveler's chosen path."""
    loads = {}
    for path in chosen_paths:
        for r in path:
            loads[r] = loads.get(r, 0) + 1
    return loads


def path_cost(topology: Topology, path, loads) -> float:
    """Cost one traveler pays on `path` when routers carry the given loads."""
    return sum(topology.nodes[r](loads.get(r, 0)) for r in path)


def _candidate_paths(topology):
    travelers = travelers_of(topology)
    if not travelers:
        raise EquilibriumError("topology declares no demands")
    paths = {}
    for tr in travelers:
        if tr not in paths:
            found = all_paths(topology, tr.source, tr.dest)
            if not found:
                raise EquilibriumError(f"no path from {tr.source} to {tr.dest}")
            paths[tr] = tuple(found)
    return travelers, paths


def _evaluate(topology, travelers, paths, assignment):
    chosen = [paths[tr][i] for tr, i in zip(travelers, assignment)]
    loads = router_loads(chosen)
    costs = tuple(path_cost(topology, p, loads) for p in chosen)
    return costs, sum(costs)


def best_response_equilibrium(topology: Topology, max_sweeps=1000) -> PlayResult:
    """Iterate single-traveler best responses until nobody wants to move.

    Travelers start piled on their first candidate path and take turns
    switching to the cheapest path given everyone else's current choice,
    switching only on strict improvement; ties keep the incumbent. Summed
    router costs form an exact potential here, so the sweeps terminate.
    """
    travelers, paths = _candidate_paths(topology)
    assignment = [0] * len(travelers)
    chosen = [paths[tr][0] for tr in travelers]
    loads = router_loads(chosen)
    for sweep in range(1, max_sweeps + 1):
        moved = False
        for idx, tr in enumerate(travelers):
            for r in chosen[idx]:
                loads[r] -= 1
            options = []
            for i, p in enumerate(paths[tr]):
                with_self = dict(loads)
                for r in p:
                    with_self[r] = with_self.get(r, 0) + 1
                options.append(path_cost(topology, p, with_self))
            here = options[assignment[idx]]
            best = min(options)
            if best < here:
                assignment[idx] = options.index(best)
                chosen[idx] = paths[tr][assignment[idx]]
                moved = True
            for r in chosen[idx]:
                loads[r] = loads.get(r, 0) + 1
        if not moved:
            costs, total = _evaluate(topology, travelers, paths, assignment)
            return PlayResult(travelers, paths, tuple(assignment), costs, total, sweeps=sweep)
    raise EquilibriumError(f"no equilibrium after {max_sweeps} sweeps")


def greedy_choices(topology: Topology) -> PlayResult:
    """Every traveler simultaneously picks the path that would be cheapest alone.

    Each choice is evaluated as if the network were empty apart from the
    chooser, then all travelers are placed at once and pay the realized
    joint-load costs.
    """
    travelers, paths = _candidate_paths(topology)
    assignment = []
    for tr in travelers:
        solo = [path_cost(topology, p, {r: 1 for r in p}) for p in paths[tr]]
        assignment.append(solo.index(min(solo)))
    costs, total = _evaluate(topology, travelers, paths, tuple(assignment))
    return PlayResult(travelers, paths, tuple(assignment), costs, total)


def evaluate_assignment(topology: Topology, assignment) -> PlayResult:
    """Price a given joint assignment: one path index per traveler, demand order."""
    travelers, paths = _candidate_paths(topology)
    assignment = tuple(assignment)
    if len(assignment) != len(travelers):
        raise EquilibriumError(
            f"assignment length {len(assignment)} != traveler count {len(travelers)}")
    costs, total = _evaluate(topology, travelers, paths, assignment)
    return PlayResult(travelers, paths, assignment, costs, total)


def coordinated_optimum(topology: Topology, limit=200000) -> PlayResult:
    """Brute-force the joint assignment minimizing total cost across travelers."""
    travelers, paths = _candidate_paths(topology)
    combos = 1
    for tr in travelers:
        combos *= len(paths[tr])
        if combos > limit:
            raise EquilibriumError(f"joint search space exceeds {limit} profiles")
    best = None
    for assignment in product(*(range(len(paths[tr])) for tr in travelers)):
        costs, total = _evaluate(topology, travelers, paths, assignment)
        if best is None or total < best[2]:
            best = (assignment, costs, total)
    assignment, costs, total = best
    return PlayResult(travelers, paths, tuple(assignment), costs, total)
