"""Routing policies: shortest-path, full-knowledge reward chasing, and memory-based
estimation with steering, plus the run loop that drives them wave by wave."""

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .engine import RunResult, Simulation, SimulationError, WaveSchedule
from .netmodel import AgentKey, Topology
from .wlu import wlr_residual


@dataclass
class TrainingExample:
    """One scored decision: observed windowed loads, chosen hop, wave reward."""

    agent: AgentKey
    input: np.ndarray
    action: str
    outcome: float


class TrainingSet:
    """Per-agent memory of scored decisions with nearest-neighbor lookup.

    A capacity bounds the memory to the most recent examples so lookups
    track the regime the traffic is actually in; stale regimes age out.
    """

    def __init__(self, capacity=None):
        if capacity is not None and capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self.examples = []

    def __len__(self):
        return len(self.examples)

    def record_outcome(self, example: TrainingExample):
        if not np.isfinite(example.outcome):
            raise ValueError("training outcome must be finite")
        self.examples.append(example)
        if self.capacity is not None and len(self.examples) > self.capacity:
            del self.examples[0]

    def nearest_outcome(self, query, action=None):
        """Outcome of the example closest to query in Euclidean distance.

        With an action given, only examples that took that action compete;
        if none exist the whole set serves as fallback. Distance ties go to
        the earliest recorded example.
        """
        pool = self.examples
        if action is not None:
            filtered = [e for e in pool if e.action == action]
            if filtered:
                pool = filtered
        if not pool:
            raise LookupError("empty training set")
        inputs = np.array([e.input for e in pool])
        d2 = ((inputs - np.asarray(query)) ** 2).sum(axis=1)
        return pool[int(np.argmin(d2))].outcome


class RunContext:
    """State shared by policies across one run: rng, memories, standing decisions."""

    def __init__(self, topology: Topology, schedule: WaveSchedule, rng,
                 memory_capacity=None):
        self.topology = topology
        self.schedule = schedule
        self.rng = rng
        self.agents = topology.agents()
        self.candidates = {a: topology.candidates(a.router, a.dest) for a in self.agents}
        self.deciders = [a for a in self.agents if len(self.candidates[a]) > 1]
        self.training = {a: TrainingSet(memory_capacity) for a in self.agents}
        # standing decisions stand in for "everyone else repeats last wave"
        self.standing = {a: self.candidates[a][0] for a in self.agents}
        self.last_amount = {a: 0 for a in self.agents}
        self.last_pick = {}
        self.pending_inputs = {}

    def observe(self, sim: Simulation, snapshot, decisions):
        """Commit a finished wave: update standing choices and traffic sizes.

        Returns stubs (agent, input, hop) for decisions that moved traffic;
        their outcomes become known once the window has slid past the wave.
        """
        wave = snapshot.wave
        counts = sim.wave_ring[wave % sim.schedule.waves_in_window]
        stubs = []
        for agent in self.agents:
            hop = decisions[agent]
            if isinstance(hop, dict):
                continue
            self.standing[agent] = hop
            self.last_pick[(agent, hop)] = wave
            routed = int(counts[sim.r2i[agent.router], sim.d2i[agent.dest]])
            self.last_amount[agent] = routed
            if routed > 0 and agent in self.pending_inputs:
                stubs.append((agent, self.pending_inputs[agent], hop))
        self.pending_inputs = {}
        return stubs


class Recorder:
    """Turns decision stubs into TrainingExamples once outcomes are computable.

    A wave's reward spans its own cost share plus the residue it leaves in
    the window until it fully drains, W/L waves later, so scoring lags the
    simulation by that horizon; flush() closes out the tail with whatever
    horizon the run provided.
    """

    def __init__(self, ctx: RunContext):
        self.ctx = ctx
        self.window = deque(maxlen=ctx.schedule.waves_in_window + 1)
        self.pending = deque()

    def wave_done(self, snapshot, stubs):
        self.window.append(snapshot)
        self.pending.append((snapshot.wave, stubs))
        horizon = self.ctx.schedule.waves_in_window
        while self.pending and self.pending[0][0] + horizon <= snapshot.wave:
            self._score(*self.pending.popleft())

    def _score(self, wave, stubs):
        snaps = list(self.window)
        outcomes = {}
        for agent, vec, hop in stubs:
            if agent.dest not in outcomes:
                outcomes[agent.dest] = wlr_residual(snaps, agent.dest, wave)
            self.ctx.training[agent].record_outcome(TrainingExample(
                agent=agent, input=vec, action=hop, outcome=outcomes[agent.dest]))

    def flush(self):
        while self.pending:
            self._score(*self.pending.popleft())


def frozen_path_costs(topology: Topology, dest, node_cost):
    """Remaining cost-to-destination for every router, on frozen per-node costs.

    phi(u) = min over next hops v of node_cost(v) + phi(v), phi(dest) = 0;
    a router's own cost is sunk and excluded. Plain Dijkstra on the reverse
    graph; node costs are nonnegative by construction.
    """
    rev = {}
    for u, v in topology.edges:
        rev.setdefault(v, []).append(u)
    phi = {dest: 0.0}
    heap = [(0.0, dest)]
    while heap:
        cost, v = heapq.heappop(heap)
        if cost > phi.get(v, np.inf):
            continue
        through = cost + node_cost(v)
        for u in rev.get(v, []):
            if through < phi.get(u, np.inf):
                phi[u] = through
                heapq.heappush(heap, (through, u))
    return phi


def ispa_decide(topology: Topology, agent: AgentKey, observed, recent=None):
    """First hop of a minimum-cost path to the destination under frozen loads.

    observed maps router id to its current windowed load. Ties between
    equal-cost first hops go to the hop least recently played per the optional
    recent map {hop: last wave index}, then to candidate order; rotating ties
    this way keeps equal-cost paths evenly loaded in the long run.
    """
    cands = topology.candidates(agent.router, agent.dest)
    if not cands:
        raise SimulationError(f"{agent} has no route to its destination")
    spec = topology.nodes

    def node_cost(v):
        return spec[v](observed.get(v, 0.0))

    phi = frozen_path_costs(topology, agent.dest, node_cost)
    trips = [node_cost(c) + phi[c] for c in cands]
    best = min(trips)
    tied = [c for c, tr in zip(cands, trips) if tr == best]
    if len(tied) == 1:
        return tied[0]
    recent = recent or {}
    order = {c: i for i, c in enumerate(cands)}
    return min(tied, key=lambda c: (recent.get(c, -1), order[c]))


class IspaPolicy:
    """All agents route along shortest paths computed on last-step windowed loads."""

    name = "ispa"

    def __init__(self, ctx: RunContext):
        self.ctx = ctx

    def decide_all(self, sim: Simulation):
        ctx = self.ctx
        Z = sim.windowed_total()
        observed = {r: Z[i] for i, r in enumerate(sim.routers)}
        spec = ctx.topology.nodes

        def node_cost(v):
            return spec[v](observed[v])

        phi = {d: frozen_path_costs(ctx.topology, d, node_cost)
               for d in {a.dest for a in ctx.deciders}}
        decisions = {}
        for agent in ctx.agents:
            cands = ctx.candidates[agent]
            if len(cands) == 1:
                decisions[agent] = cands[0]
                continue
            trips = [node_cost(c) + phi[agent.dest][c] for c in cands]
            best = min(trips)
            tied = [c for c, tr in zip(cands, trips) if tr == best]
            if len(tied) == 1:
                pick = tied[0]
            else:
                order = {c: i for i, c in enumerate(cands)}
                pick = min(tied, key=lambda c: (ctx.last_pick.get((agent, c), -1), order[c]))
            decisions[agent] = pick
            ctx.pending_inputs[agent] = Z
        return decisions


class FkPolicy:
    """Each agent plays the candidate hop minimizing its destination's predicted
    wave reward, propagating the coming wave through everyone's standing choices."""

    name = "fk"

    def __init__(self, ctx: RunContext):
        self.ctx = ctx

    def _propagate(self, sim: Simulation, decisions):
        """Visit counts per (router, destination) for one wave under the given map."""
        v = np.zeros_like(sim.x)
        for s, d, n in self.ctx.topology.demands:
            node = s
            hops = 0
            while node != d:
                v[sim.r2i[node], sim.d2i[d]] += n
                node = decisions[AgentKey(node, d)]
                hops += 1
                if hops > self.ctx.schedule.L:
                    raise SimulationError(f"standing decisions trap {s}->{d} traffic")
        return v

    def _predicted_reward(self, sim: Simulation, dest, visits, base, oldest):
        m = self.ctx.schedule.waves_in_window
        j = sim.d2i[dest]
        Xhat = (base - oldest + visits) / m
        Zhat = Xhat.sum(axis=1)
        Zother = Zhat - Xhat[:, j]
        vall = visits.sum(axis=1)
        vother = vall - visits[:, j]
        total = 0.0
        for i in np.nonzero(vall)[0]:
            total += vall[i] * sim.costs[i](Zhat[i])
            if vother[i]:
                total -= vother[i] * sim.costs[i](Zother[i])
        return total

    def fk_decide(self, sim: Simulation, agent: AgentKey, base, oldest):
        ctx = self.ctx
        cands = ctx.candidates[agent]
        scores = []
        for cand in cands:
            trial = dict(ctx.standing)
            trial[agent] = cand
            visits = self._propagate(sim, trial)
            scores.append(self._predicted_reward(sim, agent.dest, visits, base, oldest))
        best = min(scores)
        tied = [c for c, sc in zip(cands, scores) if sc == best]
        if len(tied) == 1:
            return tied[0]
        # break ties toward the least recently played candidate
        order = {c: i for i, c in enumerate(cands)}
        return min(tied, key=lambda c: (ctx.last_pick.get((agent, c), -1), order[c]))

    def decide_all(self, sim: Simulation):
        ctx = self.ctx
        m = ctx.schedule.waves_in_window
        base = sim.wave_ring.sum(axis=0)
        oldest = sim.wave_ring[sim.wave % m]
        Z = sim.windowed_total()
        decisions = {}
        for agent in ctx.agents:
            cands = ctx.candidates[agent]
            if len(cands) == 1:
                decisions[agent] = cands[0]
                continue
            decisions[agent] = self.fk_decide(sim, agent, base, oldest)
            ctx.pending_inputs[agent] = Z
        return decisions


class MbPolicy(FkPolicy):
    """Memory-based estimation of wave rewards with probabilistic delegation.

    Each deciding agent flips a steering coin per wave: delegate to the
    full-knowledge rule, or estimate each candidate's reward with the
    nearest stored example and play the argmin estimate.
    """

    name = "mb"

    def __init__(self, ctx: RunContext, steering=0.5, neighbor_scope="any"):
        super().__init__(ctx)
        if not 0.0 <= steering <= 1.0:
            raise ValueError(f"steering must lie in [0, 1], got {steering}")
        if neighbor_scope not in ("any", "action"):
            raise ValueError(f"neighbor_scope must be 'any' or 'action', got {neighbor_scope!r}")
        self.steering = steering
        self.neighbor_scope = neighbor_scope

    def mb_decide(self, sim: Simulation, agent: AgentKey, loads):
        ctx = self.ctx
        cands = ctx.candidates[agent]
        memory = ctx.training[agent]
        if len(memory) == 0:
            return None
        delta = ctx.last_amount[agent] / ctx.schedule.waves_in_window
        estimates = []
        for cand in cands:
            query = loads.copy()
            query[sim.r2i[cand]] += delta
            scope = cand if self.neighbor_scope == "action" else None
            estimates.append(memory.nearest_outcome(query, action=scope))
        best = min(estimates)
        tied = [c for c, e in zip(cands, estimates) if e == best]
        if len(tied) == 1:
            return tied[0]
        # tied estimates: rotate through the least recently played candidate
        order = {c: i for i, c in enumerate(cands)}
        return min(tied, key=lambda c: (ctx.last_pick.get((agent, c), -1), order[c]))

    def decide_all(self, sim: Simulation):
        ctx = self.ctx
        m = ctx.schedule.waves_in_window
        base = sim.wave_ring.sum(axis=0)
        oldest = sim.wave_ring[sim.wave % m]
        Z = sim.windowed_total()
        decisions = {}
        for agent in ctx.agents:
            cands = ctx.candidates[agent]
            if len(cands) == 1:
                decisions[agent] = cands[0]
                continue
            pick = None
            if ctx.rng.random() >= self.steering:
                pick = self.mb_decide(sim, agent, Z)
            if pick is None:
                pick = self.fk_decide(sim, agent, base, oldest)
            decisions[agent] = pick
            ctx.pending_inputs[agent] = Z
        return decisions


class FixedSplitPolicy:
    """Replays a constant decision map every wave; splits allowed. Test scaffolding."""

    name = "fixed"

    def __init__(self, ctx: RunContext, decisions):
        self.ctx = ctx
        self.decisions = {a: ctx.candidates[a][0]
                          for a in ctx.agents if len(ctx.candidates[a]) == 1}
        self.decisions.update(decisions)

    def decide_all(self, sim: Simulation):
        return dict(self.decisions)


POLICY_NAMES = ("ispa", "fk", "mb")


def make_policy(name, ctx, steering=0.5, neighbor_scope="any"):
    if name == "ispa":
        return IspaPolicy(ctx)
    if name == "fk":
        return FkPolicy(ctx)
    if name == "mb":
        return MbPolicy(ctx, steering=steering, neighbor_scope=neighbor_scope)
    raise ValueError(f"unknown policy {name!r}; expected one of {POLICY_NAMES}")


def run(topology: Topology, schedule: WaveSchedule, policy="ispa", seed=0,
        steering=0.5, neighbor_scope="any", memory_capacity=None,
        keep_trajectory=False) -> RunResult:
    """Simulate warm-up plus measured waves and aggregate per-packet cost.

    Every run starts with shortest-path routing for the warm-up phase
    (schedule.measure_start waves), recording scored decisions throughout, so
    learned policies begin measurement with populated memories and identical
    seeds yield identical warm-ups under every policy.
    """
    rng = np.random.default_rng(seed)
    ctx = RunContext(topology, schedule, rng, memory_capacity=memory_capacity)
    sim = Simulation(topology, schedule)
    warmup = IspaPolicy(ctx)
    main = policy if hasattr(policy, "decide_all") else make_policy(
        policy, ctx, steering=steering, neighbor_scope=neighbor_scope)
    recorder = Recorder(ctx)
    trajectory = [] if keep_trajectory else None
    rewards = []
    cost_mark = injected_mark = delivered_mark = 0
    for wave in range(schedule.total_waves):
        if wave == schedule.measure_start:
            cost_mark = sim.total_cost
            injected_mark = sim.injected
            delivered_mark = sim.delivered
        driver = warmup if wave < schedule.measure_start else main
        decisions = driver.decide_all(sim)
        snapshot = sim.run_wave(decisions)
        recorder.wave_done(snapshot, ctx.observe(sim, snapshot, decisions))
        if wave >= schedule.measure_start:
            rewards.append(snapshot.reward)
        if keep_trajectory:
            trajectory.append(snapshot)
    recorder.flush()
    measured_cost = sim.total_cost - cost_mark
    measured_injected = sim.injected - injected_mark
    return RunResult(
        total_cost=measured_cost,
        injected=measured_injected,
        delivered=sim.delivered - delivered_mark,
        per_packet_cost=measured_cost / measured_injected,
        rewards=rewards,
        measured_waves=schedule.total_waves - schedule.measure_start,
        seed=seed,
        trajectory=trajectory,
        training=ctx.training)


def bootstrap(topology: Topology, schedule: WaveSchedule, waves: int, seed=0):
    """Run shortest-path routing for the given waves and return the scored memories."""
    if waves < 1:
        raise ValueError("bootstrap needs at least one wave")
    rng = np.random.default_rng(seed)
    ctx = RunContext(topology, schedule, rng)
    sim = Simulation(topology, schedule)
    pol = IspaPolicy(ctx)
    recorder = Recorder(ctx)
    for _ in range(waves):
        decisions = pol.decide_all(sim)
        snapshot = sim.run_wave(decisions)
        recorder.wave_done(snapshot, ctx.observe(sim, snapshot, decisions))
    recorder.flush()
    return ctx.training
