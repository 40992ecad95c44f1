import numpy as np
from coinroute.netmodel import build_topology, AgentKey
from coinroute.engine import Simulation, WaveSchedule
from coinroute.agents import run, RunContext, FixedSplitPolicy
from coinroute.wlu import wave_rewards_by_dest

HEX_LINEAR_A = """
node S zero
node P affine 0 10
node Q affine 50 1
node R affine 50 1
node T affine 0 10
node M affine 10 1
node D zero
edge S P
edge P Q
edge Q D
edge S R
edge R T
edge T D
demand S D {n}
"""

HEX_LINEAR_B = HEX_LINEAR_A + "edge P M\nedge M T\n"

sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=300)

print("=== hex-linear variant A, ISPA ===")
for n in (1, 2, 3, 4):
    topo = build_topology(HEX_LINEAR_A.format(n=n))
    res = run(topo, sched, policy="ispa", seed=3)
    print(f"load {n}: per-packet {res.per_packet_cost:.3f}")

print("=== hex-linear variant B, ISPA ===")
for n in (1, 2, 3, 4):
    topo = build_topology(HEX_LINEAR_B.format(n=n))
    res = run(topo, sched, policy="ispa", seed=3)
    print(f"load {n}: per-packet {res.per_packet_cost:.3f}")

print("=== hex-linear variant A, FK ===")
for n in (1, 2, 3, 4):
    topo = build_topology(HEX_LINEAR_A.format(n=n))
    res = run(topo, sched, policy="fk", seed=3)
    print(f"load {n}: per-packet {res.per_packet_cost:.3f}")

print("=== hex-linear variant B, FK ===")
for n in (1, 2, 3, 4):
    topo = build_topology(HEX_LINEAR_B.format(n=n))
    res = run(topo, sched, policy="fk", seed=3)
    print(f"load {n}: per-packet {res.per_packet_cost:.3f}")

print("=== MB steering 1.0 vs FK bitwise ===")
topo = build_topology(HEX_LINEAR_B.format(n=4))
a = run(topo, sched, policy="fk", seed=7)
b = run(topo, sched, policy="mb", steering=1.0, seed=7)
print("identical:", a.per_packet_cost == b.per_packet_cost,
      a.per_packet_cost, b.per_packet_cost)

print("=== MB steering 0.5 hex-linear ===")
for n in (1, 2, 3, 4):
    ta = build_topology(HEX_LINEAR_A.format(n=n))
    tb = build_topology(HEX_LINEAR_B.format(n=n))
    ra = run(ta, sched, policy="mb", steering=0.5, seed=3)
    rb = run(tb, sched, policy="mb", steering=0.5, seed=3)
    print(f"load {n}: A {ra.per_packet_cost:.3f}  B {rb.per_packet_cost:.3f}  "
          f"B-A {rb.per_packet_cost - ra.per_packet_cost:+.3f}")

print("=== fixed split braess equilibrium wave reward ===")
topo = build_topology(HEX_LINEAR_B.format(n=6))
s2 = WaveSchedule(L=4, W=24, measure_start=7, total_waves=20)
ctx = RunContext(topo, s2, np.random.default_rng(0))
pol = FixedSplitPolicy(ctx, {
    AgentKey("S", "D"): {"P": 4, "R": 2},
    AgentKey("P", "D"): {"Q": 2, "M": 2},
})
sim = Simulation(topo, s2)
for w in range(10):
    snap = sim.run_wave(pol.decide_all(sim))
print(f"steady wave reward: {snap.reward:.6f} (want 552 = 6*92)")
