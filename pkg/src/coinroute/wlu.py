"""Counterfactual utilities: clamping, clamped-world cost differences, wave rewards."""

import numpy as np
from dataclasses import dataclass

from .engine import Simulation, WaveSchedule, WaveSnapshot, world_utility
from .netmodel import AgentKey, all_paths


class CoordinateError(KeyError):
    """Raised when a clamp coordinate does not exist in the trajectory."""


def _locate(trajectory, t):
    for snap in trajectory:
        if snap.wave * snap.L <= t < (snap.wave + 1) * snap.L:
            return snap, t - snap.wave * snap.L
    raise CoordinateError(f"step {t} outside trajectory")


class ClampedView:
    """Read-only view of a trajectory with a set of coordinates forced to zero.

    Coordinates are (kind, router, dest, step) with kind "x" (traffic) or
    "X" (windowed load). The base trajectory is never modified and no
    dynamics are re-run; the view is purely counterfactual.
    """

    def __init__(self, trajectory, sigma):
        self.trajectory = list(trajectory)
        self.sigma = frozenset(sigma)
        for kind, r, d, t in self.sigma:
            if kind not in ("x", "X"):
                raise CoordinateError(f"unknown coordinate kind {kind!r}")
            snap, k = _locate(self.trajectory, t)
            if r not in snap.routers or d not in snap.dests:
                raise CoordinateError(f"no coordinate ({kind}, {r}, {d}, {t})")

    def _masked(self, snap, k, kind):
        base = (snap.x if kind == "x" else snap.X)[k]
        out = base.copy()
        t = snap.wave * snap.L + k
        for ckind, r, d, ct in self.sigma:
            if ckind == kind and ct == t:
                out[snap.routers.index(r), snap.dests.index(d)] = 0
        return out

    def utility(self) -> float:
        """Total accrued cost of the clamped world."""
        total = 0.0
        for snap in self.trajectory:
            for k in range(len(snap.x)):
                x = self._masked(snap, k, "x")
                X = self._masked(snap, k, "X")
                z = x.sum(axis=1)
                Z = X.sum(axis=1)
                for i, spec in enumerate(snap.costs):
                    if z[i]:
                        total += z[i] * spec(Z[i])
        return total


def clamp(trajectory, sigma) -> ClampedView:
    """Build the zero-clamped counterfactual view of a trajectory."""
    return ClampedView(trajectory, sigma)


def wlu(trajectory, sigma) -> float:
    """Cost the clamped coordinates account for: G(actual) - G(clamped)."""
    return world_utility(trajectory) - clamp(trajectory, sigma).utility()


def effect_set(trajectory, dest, wave, include_future_window=False):
    """Coordinates attributed to destination-bound traffic of one wave.

    All traffic and windowed-load coordinates of `dest` within the wave; with
    include_future_window, also the windowed-load coordinates of the following
    W/L - 1 waves, where this wave's traffic still lingers in the window.
    """
    snaps = {s.wave: s for s in trajectory}
    if wave not in snaps:
        raise CoordinateError(f"wave {wave} outside trajectory")
    base = snaps[wave]
    if dest not in base.dests:
        raise CoordinateError(f"unknown destination {dest!r}")
    sigma = set()
    for k in range(base.L):
        t = wave * base.L + k
        for r in base.routers:
            sigma.add(("x", r, dest, t))
            sigma.add(("X", r, dest, t))
    if include_future_window:
        for later in range(wave + 1, wave + base.W // base.L):
            if later in snaps:
                for k in range(base.L):
                    t = later * base.L + k
                    for r in base.routers:
                        sigma.add(("X", r, dest, t))
    return sigma


def wlr(snapshot: WaveSnapshot, dest) -> float:
    """Wave reward attributed to one destination's traffic, in closed form.

    Difference between the wave's accrued cost and the cost with the
    destination's traffic and windowed-load share removed.
    """
    j = snapshot.dests.index(dest)
    total = 0.0
    for k in range(len(snapshot.x)):
        x = snapshot.x[k]
        X = snapshot.X[k]
        z = x.sum(axis=1)
        Z = X.sum(axis=1)
        z_other = z - x[:, j]
        Z_other = Z - X[:, j]
        for i, spec in enumerate(snapshot.costs):
            if z[i]:
                total += z[i] * spec(Z[i])
            if z_other[i]:
                total -= z_other[i] * spec(Z_other[i])
    return total


def wave_rewards_by_dest(snapshot: WaveSnapshot) -> dict:
    """wlr for every destination of a wave, keyed by destination id."""
    return {d: wlr(snapshot, d) for d in snapshot.dests}


def wlr_window(trajectory, dest, wave) -> float:
    """Wave reward including the window residue the wave leaves behind.

    Closed form for wlu with the future-window effect set: the wave's own wlr
    plus the extra cost later traffic pays while this destination's share
    still sits in the W/L - 1 following windows. Missing later waves (end of
    trajectory) truncate the horizon, mirroring effect_set.
    """
    snaps = {s.wave: s for s in trajectory}
    if wave not in snaps:
        raise CoordinateError(f"wave {wave} outside trajectory")
    base = snaps[wave]
    j = base.dests.index(dest)
    total = wlr(base, dest)
    for later in range(wave + 1, wave + base.W // base.L):
        s = snaps.get(later)
        if s is None:
            continue
        for k in range(len(s.x)):
            z = s.x[k].sum(axis=1)
            X = s.X[k]
            Z = X.sum(axis=1)
            Z_other = Z - X[:, j]
            for i, spec in enumerate(s.costs):
                if z[i]:
                    total += z[i] * (spec(Z[i]) - spec(Z_other[i]))
    return total


def wlr_residual(trajectory, dest, wave) -> float:
    """Wave reward charging the wave for the marginal cost of its residue.

    Like wlr_window, but the counterfactual for later waves removes only this
    wave's own lingering window contribution rather than the destination's
    whole column, so the charge isolates the congestion the wave itself
    inflicts on traffic behind it. Within the W/L - 1 following waves every
    visit of the base wave is still inside the window; in wave + W/L the
    residue drains stepwise, so only visits from later steps still count.
    """
    snaps = {s.wave: s for s in trajectory}
    if wave not in snaps:
        raise CoordinateError(f"wave {wave} outside trajectory")
    base = snaps[wave]
    j = base.dests.index(dest)
    total = wlr(base, dest)
    scale = base.L / base.W
    residue = sum(x[:, j] for x in base.x) * scale
    if not residue.any():
        return total
    m = base.W // base.L
    for later in range(wave + 1, wave + m + 1):
        s = snaps.get(later)
        if s is None:
            continue
        for k in range(len(s.x)):
            if later == wave + m:
                # steps of the base wave up to k have already left the window
                left = sum(x[:, j] for x in base.x[k + 1:]) * scale
                if not np.any(left):
                    break
            else:
                left = residue
            z = s.x[k].sum(axis=1)
            Z = s.X[k].sum(axis=1)
            for i, spec in enumerate(s.costs):
                if z[i] and left[i]:
                    total += z[i] * (spec(Z[i]) - spec(Z[i] - left[i]))
    return total


@dataclass
class ProbeRecord:
    """Sign comparison of a private-utility change against the world-cost change."""

    agent: object
    action_from: object
    action_to: object
    delta_g: float
    delta_G: float

    @property
    def factored(self) -> bool:
        # lower cost is better on both axes, so the signs must match
        return bool(np.sign(self.delta_g) == np.sign(self.delta_G))


class PathChoiceGame:
    """One-wave system where each source picks a whole path for its traffic.

    Agents are (source, dest) pairs; actions are the simple paths between
    them. The window spans exactly the wave, so the joint action fully
    determines every load. Small enough to enumerate exhaustively.
    """

    def __init__(self, topology):
        self.topology = topology
        self.agents = [AgentKey(s, d) for s, d, _ in topology.demands]
        if len(set(a.dest for a in self.agents)) != len(self.agents):
            raise ValueError("each agent needs its own destination tag")
        self.actions = {a: all_paths(topology, a.router, a.dest) for a in self.agents}
        self.L = topology.longest_path_length()

    def _decisions(self, joint):
        dec = {}
        for agent, path in joint.items():
            for u, v in zip(path, path[1:]):
                dec[AgentKey(u, agent.dest)] = v
        return dec

    def play(self, joint) -> WaveSnapshot:
        """Run the single wave under the given path profile."""
        sched = WaveSchedule(self.L, self.L, measure_start=1, total_waves=2)
        sim = Simulation(self.topology, sched)
        return sim.run_wave(self._decisions(joint))

    def evaluate(self, joint, utility="wlu"):
        """World cost and per-agent private utilities for one joint action."""
        snap = self.play(joint)
        G = world_utility([snap])
        g = {}
        for agent in self.agents:
            if utility == "team":
                g[agent] = G
            elif utility == "wlu":
                g[agent] = wlu([snap], effect_set([snap], agent.dest, snap.wave))
            elif utility == "own":
                j = snap.dests.index(agent.dest)
                own = 0.0
                for k in range(len(snap.x)):
                    Z = snap.Z(k)
                    for i, spec in enumerate(snap.costs):
                        if snap.x[k][i, j]:
                            own += snap.x[k][i, j] * spec(Z[i])
                g[agent] = own
            else:
                raise ValueError(f"unknown utility kind {utility!r}")
        return G, g

    def profiles(self):
        """Every joint action profile, in deterministic order."""
        import itertools
        keys = list(self.agents)
        for combo in itertools.product(*(self.actions[a] for a in keys)):
            yield dict(zip(keys, combo))


def factoredness_probe(game, agent, joint, alt_action, utility="wlu") -> ProbeRecord:
    """Re-evaluate a small game under a unilateral action swap and compare signs.

    `game` must expose evaluate(joint) -> (G, per-agent utilities dict) where
    the utilities follow the requested kind; `joint` maps agents to actions.
    """
    swapped = dict(joint)
    swapped[agent] = alt_action
    G0, g0 = game.evaluate(joint, utility)
    G1, g1 = game.evaluate(swapped, utility)
    return ProbeRecord(agent=agent, action_from=joint[agent], action_to=alt_action,
                       delta_g=g1[agent] - g0[agent], delta_G=G1 - G0)
