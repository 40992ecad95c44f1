import time
import numpy as np
from coinroute.netmodel import build_topology
from coinroute.engine import WaveSchedule
from coinroute.agents import run

CORE = """
node S zero
node P {vp}
node Q {vq}
node R {vq}
node T {vp}
node M {vm}
node D zero
edge S P
edge P Q
edge Q D
edge S R
edge R T
edge T D
demand S D {n}
"""
BRIDGE = "edge P M\nedge M T\n"

LINEAR = dict(vp="affine 0 10", vq="affine 50 1", vm="affine 10 1")
LOG = dict(vp="affine 0 10", vq="affinelog 50 1", vm="affinelog 0 1")

sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=500)
t0 = time.time()

for name, fns in (("hex-linear", LINEAR), ("hex-log", LOG)):
    print(f"### {name}")
    for n in (1, 2, 3, 4):
        ta = build_topology(CORE.format(n=n, **fns))
        tb = build_topology(CORE.format(n=n, **fns) + BRIDGE)
        ia = run(ta, sched, policy="ispa", seed=0).per_packet_cost
        ib = run(tb, sched, policy="ispa", seed=0).per_packet_cost
        fa = run(ta, sched, policy="fk", seed=0).per_packet_cost
        fb = run(tb, sched, policy="fk", seed=0).per_packet_cost
        ma = np.array([run(ta, sched, policy="mb", steering=0.5, seed=s).per_packet_cost
                       for s in range(20)])
        mb = np.array([run(tb, sched, policy="mb", steering=0.5, seed=s).per_packet_cost
                       for s in range(20)])
        d = mb.mean() - ma.mean()
        flag = "PARADOX" if d > 0.5 else ("BENEFIT" if d < -0.5 else "NEUTRAL")
        print(f"load {n}: ISPA A {ia:7.3f} B {ib:7.3f} | FK A {fa:7.3f} B {fb:7.3f} | "
              f"MB.5 A {ma.mean():7.3f}±{ma.std():.2f} B {mb.mean():7.3f}±{mb.std():.2f} "
              f"B-A {d:+6.3f} {flag}")

print(f"elapsed {time.time()-t0:.1f}s")
