import numpy as np

from coinroute.netmodel import build_topology
from coinroute.engine import Simulation, WaveSchedule
from coinroute.agents import RunContext, IspaPolicy, MbPolicy, Recorder

HEX_B = """
node S zero
node P affine 0 10
node Q {vq}
node R {vq}
node T affine 0 10
node M {vm}
node D zero
edge S P
edge S R
edge P Q
edge P M
edge Q D
edge R T
edge M T
edge T D
demand S D {n}
"""

LINEAR = dict(vq="affine 50 1", vm="affine 10 1")
LOG = dict(vq="affinelog 50 1", vm="affinelog 0 1")


def trace(variant, n, seed):
    topo = build_topology(HEX_B.format(n=n, **variant))
    sched = WaveSchedule(4, 24, measure_start=100, total_waves=500)
    rng = np.random.default_rng(seed)
    ctx = RunContext(topo, sched, rng)
    warm = IspaPolicy(ctx)
    main = MbPolicy(ctx, steering=0.5)
    rec = Recorder(ctx)
    sim = Simulation(topo, sched)
    mark = None
    deleg = {}  # wave -> set of agents that went FK this wave

    orig_fk = main.fk_decide
    fk_picks = {}

    for wave in range(sched.total_waves):
        if wave == sched.measure_start:
            mark = (sim.total_cost, sim.injected)
        policy = warm if wave < sched.measure_start else main
        if policy is main:
            # replicate decide_all exactly, tagging which branch chose
            m = ctx.schedule.waves_in_window
            base = sim.wave_ring.sum(axis=0)
            oldest = sim.wave_ring[sim.wave % m]
            Z = sim.windowed_total()
            decisions = {}
            fk_this = set()
            for agent in ctx.agents:
                cands = ctx.candidates[agent]
                if len(cands) == 1:
                    decisions[agent] = cands[0]
                    continue
                pick = None
                if ctx.rng.random() >= main.steering:
                    pick = main.mb_decide(sim, agent, Z)
                    if pick is None:
                        fk_this.add((agent.router, 'mem0'))
                else:
                    fk_this.add((agent.router, 'fk'))
                if pick is None:
                    pick = main.fk_decide(sim, agent, base, oldest)
                decisions[agent] = pick
                ctx.pending_inputs[agent] = Z
            snap = sim.run_wave(decisions)
            stubs = ctx.observe(sim, snap, decisions)
            rec.wave_done(snap, stubs)
            if wave >= sched.measure_start and wave < sched.measure_start + 120:
                row = {a.router: decisions[a] for a in ctx.agents
                       if len(ctx.candidates[a]) > 1}
                tags = {s: t for s, t in fk_this}
                lab = " ".join(f"{s}->{row[s]}[{tags.get(s,'mb')}]"
                               for s in sorted(row))
                print(f"w{wave:3d} cost {snap.reward:8.2f}  {lab}")
        else:
            decisions = policy.decide_all(sim)
            snap = sim.run_wave(decisions)
            stubs = ctx.observe(sim, snap, decisions)
            rec.wave_done(snap, stubs)
    rec.flush()
    measured = sim.total_cost - mark[0]
    inj = sim.injected - mark[1]
    print(f"per-packet {measured / inj:.3f}")


import sys
variant = LINEAR if sys.argv[1] == "lin" else LOG
trace(variant, int(sys.argv[2]), int(sys.argv[3]))
