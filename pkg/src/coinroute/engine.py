"""Wave-based traffic simulation: injection, movement, windowed loads, cost accrual."""

import numpy as np
from dataclasses import dataclass, field

from .netmodel import AgentKey, Topology


class SimulationError(RuntimeError):
    """Raised when a run hits an invalid decision or degenerate configuration."""


@dataclass(frozen=True)
class WaveSchedule:
    """Timing of a run: wave length L, window W, warm-up waves, total waves."""

    L: int
    W: int
    measure_start: int = 100
    total_waves: int = 300

    def __post_init__(self):
        if self.L < 1:
            raise SimulationError(f"wave length must be positive, got {self.L}")
        if self.W < 1 or self.W % self.L != 0:
            raise SimulationError(f"window {self.W} must be a positive multiple of L={self.L}")
        # windows must be fully populated before measurement starts
        if self.measure_start < self.W // self.L:
            raise SimulationError(
                f"measure_start={self.measure_start} must be >= W/L = {self.W // self.L}")
        if self.total_waves <= self.measure_start:
            raise SimulationError("total_waves must exceed measure_start")

    @property
    def waves_in_window(self) -> int:
        return self.W // self.L

    def wave_of(self, t: int) -> int:
        return t // self.L


@dataclass
class WaveSnapshot:
    """Traffic and windowed loads for every step of one wave.

    x[k] and X[k] are (router, destination) arrays for the k-th step; X holds
    windowed per-destination loads in packets-per-wave units.
    """

    wave: int
    L: int
    W: int
    routers: tuple
    dests: tuple
    costs: tuple
    x: list = field(default_factory=list)
    X: list = field(default_factory=list)
    reward: float = 0.0

    def z(self, k: int):
        return self.x[k].sum(axis=1)

    def Z(self, k: int):
        return self.X[k].sum(axis=1)


def world_reward(snapshot: WaveSnapshot) -> float:
    """Accrued cost of one wave: sum over steps and routers of z_r * V_r(Z_r)."""
    total = 0.0
    for k in range(len(snapshot.x)):
        z = snapshot.z(k)
        Z = snapshot.Z(k)
        for i, spec in enumerate(snapshot.costs):
            if z[i]:
                total += z[i] * spec(Z[i])
    return total


def world_utility(trajectory) -> float:
    """Total accrued cost over a sequence of wave snapshots."""
    return sum(world_reward(s) for s in trajectory)


@dataclass
class RunResult:
    """Outcome of a run: measured cost, deliveries, per-wave rewards, metadata."""

    total_cost: float
    injected: int
    delivered: int
    per_packet_cost: float
    rewards: list
    measured_waves: int
    seed: int = 0
    trajectory: list = None
    training: dict = None


class Simulation:
    """Mutable state of one run: traffic tensor, window ring buffers, ledgers.

    Windowed loads count whole packet-visits; the per-wave scale L/W is applied
    once on read so equal integer window sums compare exactly equal.
    """

    def __init__(self, topology: Topology, schedule: WaveSchedule):
        if not topology.demands:
            raise SimulationError("topology declares no demands; nothing to simulate")
        self.topology = topology
        self.schedule = schedule
        self.routers = tuple(sorted(topology.nodes))
        self.dests = tuple(sorted({d for _, d, _ in topology.demands}))
        self.r2i = {r: i for i, r in enumerate(self.routers)}
        self.d2i = {d: i for i, d in enumerate(self.dests)}
        self.costs = tuple(topology.nodes[r] for r in self.routers)
        R, D = len(self.routers), len(self.dests)
        self.x = np.zeros((R, D), dtype=np.int64)
        # step-granular window ring: W slices of per-(router, dest) counts
        self.win = np.zeros((schedule.W, R, D), dtype=np.int64)
        # wave-granular totals of the last W/L waves, for one-wave-ahead prediction
        self.wave_ring = np.zeros((schedule.waves_in_window, R, D), dtype=np.int64)
        self.t = 0
        self.wave = 0
        self.total_cost = 0.0
        self.injected = 0
        self.delivered = 0
        self._allowed = {}
        for s, d, _ in topology.demands:
            for u, v in topology.route_edges(s, d):
                self._allowed.setdefault((u, d), set()).add(v)

    def windowed(self):
        """Current per-(router, dest) windowed loads, packets-per-wave units."""
        return self.win.sum(axis=0) * (self.schedule.L / self.schedule.W)

    def windowed_total(self):
        """Current per-router windowed loads Z_r."""
        return self.windowed().sum(axis=1)

    def _inject(self):
        for s, d, n in self.topology.demands:
            self.x[self.r2i[s], self.d2i[d]] += n
            self.injected += n
        return sum(n for _, _, n in self.topology.demands)

    def _resolve(self, decisions, r, d, amount):
        """Split an (r, d) amount across next hops per the decision entry."""
        try:
            choice = decisions[AgentKey(r, d)]
        except KeyError:
            raise SimulationError(f"no decision for traffic at {r} bound for {d}") from None
        if isinstance(choice, dict):
            if sum(choice.values()) != amount:
                raise SimulationError(
                    f"split for ({r},{d}) sums to {sum(choice.values())}, traffic is {amount}")
            parts = choice.items()
        else:
            parts = [(choice, amount)]
        for hop, n in parts:
            if n < 0:
                raise SimulationError(f"negative split for ({r},{d})")
            if n and hop not in self._allowed.get((r, d), ()):
                raise SimulationError(f"hop {r}->{hop} is not on a route to {d}")
        return parts

    def step(self, decisions):
        """Advance one time step: window update, cost accrual, one-hop movement."""
        self.win[self.t % self.schedule.W] = self.x
        X = self.windowed()
        z = self.x.sum(axis=1)
        Z = X.sum(axis=1)
        for i in np.nonzero(z)[0]:
            self.total_cost += z[i] * self.costs[i](Z[i])
        moved = np.zeros_like(self.x)
        delivered = 0
        for i, j in zip(*np.nonzero(self.x)):
            r, d = self.routers[i], self.dests[j]
            for hop, n in self._resolve(decisions, r, d, int(self.x[i, j])):
                if n == 0:
                    continue
                if hop == d:
                    delivered += n
                else:
                    moved[self.r2i[hop], j] += n
        self.x = moved
        self.delivered += delivered
        self.t += 1
        return X, z, delivered

    def run_wave(self, decisions):
        """Inject, run L steps under fixed decisions, and return the wave snapshot."""
        sched = self.schedule
        snap = WaveSnapshot(wave=self.wave, L=sched.L, W=sched.W, routers=self.routers,
                            dests=self.dests, costs=self.costs)
        injected = self._inject()
        wave_counts = np.zeros_like(self.x)
        delivered = 0
        cost_before = self.total_cost
        for _ in range(sched.L):
            wave_counts += self.x
            snap.x.append(self.x.copy())
            X, _, arrived = self.step(decisions)
            snap.X.append(X)
            delivered += arrived
        if self.x.any():
            stuck = [(self.routers[i], self.dests[j]) for i, j in zip(*np.nonzero(self.x))]
            raise SimulationError(f"wave {self.wave} did not drain; traffic left at {stuck}")
        if delivered != injected:
            raise SimulationError(
                f"wave {self.wave}: injected {injected} but delivered {delivered}")
        self.wave_ring[self.wave % sched.waves_in_window] = wave_counts
        self.wave += 1
        snap.reward = self.total_cost - cost_before
        return snap
