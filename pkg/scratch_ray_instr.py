import sys
import numpy as np
from coinroute.netmodel import build_topology
from coinroute.engine import WaveSchedule, Simulation
from coinroute.agents import RunContext, IspaPolicy, FkPolicy, Recorder
from scratch_ray import net

n = int(sys.argv[1]) if len(sys.argv) > 1 else 4
tb = net(n, True)
sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=200)

rng = np.random.default_rng(0)
ctx = RunContext(tb, sched, rng)
sim = Simulation(tb, sched)
warmup = IspaPolicy(ctx)
main = FkPolicy(ctx)
recorder = Recorder(ctx)
watch = ["P1", "Q1", "R1", "T1", "M1", "X1"]
deciders = [a for a in ctx.agents if len(ctx.candidates[a]) > 1 and a.dest == "D1"]
cost_mark = 0
for wave in range(sched.total_waves):
    if wave == sched.measure_start:
        cost_mark = sim.total_cost
    driver = warmup if wave < sched.measure_start else main
    decisions = driver.decide_all(sim)
    snapshot = sim.run_wave(decisions)
    recorder.wave_done(snapshot, ctx.observe(sim, snapshot, decisions))
    if 95 <= wave < 135 or wave >= 190:
        Z = sim.windowed_total()
        zs = " ".join(f"{r}={Z[sim.r2i[r]]:5.2f}" for r in watch)
        picks = " ".join(f"{a.router}->{decisions[a]}" for a in deciders)
        tag = "ispa" if wave < sched.measure_start else "fk"
        print(f"w{wave:3d} [{tag}] {zs} | {picks} | wave_reward={snapshot.reward:8.2f}")
print(f"per-packet over measured: {(sim.total_cost - cost_mark) / (n * 2 * (sched.total_waves - sched.measure_start)):.3f}")
