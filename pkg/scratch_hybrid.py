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

CONFIGS = {
    "lin/lin (hex-linear)": dict(vp="affine 0 10", vq="affine 50 1", vm="affine 10 1"),
    "log/log0 (hex-log)": dict(vp="affine 0 10", vq="affinelog 50 1", vm="affinelog 0 1"),
    "H1 log/log10": dict(vp="affine 0 10", vq="affinelog 50 1", vm="affinelog 10 1"),
    "H2 lin/log10": dict(vp="affine 0 10", vq="affine 50 1", vm="affinelog 10 1"),
    "H3 log/lin10": dict(vp="affine 0 10", vq="affinelog 50 1", vm="affine 10 1"),
}

sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=500)
t0 = time.time()
for name, fns in CONFIGS.items():
    print(f"### {name}")
    for n in (3, 4):
        ta = build_topology(CORE.format(n=n, **fns))
        tb = build_topology(CORE.format(n=n, **fns) + BRIDGE)
        ia = run(ta, sched, policy="ispa", seed=0).per_packet_cost
        ib = run(tb, sched, policy="ispa", seed=0).per_packet_cost
        fa = run(ta, sched, policy="fk", seed=0).per_packet_cost
        fb = run(tb, sched, policy="fk", seed=0).per_packet_cost
        print(f"  load {n}: ISPA A {ia:7.3f} B {ib:7.3f} | FK A {fa:7.3f} B {fb:7.3f} "
              f"| FK edge over ISPA on B: {ib - fb:+7.3f}")
print(f"elapsed {time.time()-t0:.1f}s")
