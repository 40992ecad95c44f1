import sys
import time
import numpy as np
from coinroute.netmodel import build_topology
from coinroute.engine import WaveSchedule
from coinroute.agents import run

HALF = """
node S{h} zero
node A{h}1 affine 0 10
node A{h}2 affinelog 10 1
node A{h}3 affinelog 50 1
node B{h}1 affinelog 50 1
node B{h}2 affinelog 10 1
node B{h}3 affine 0 10
node D{h} zero
edge S{h} A{h}1
edge A{h}1 A{h}2
edge A{h}2 A{h}3
edge A{h}3 D{h}
edge S{h} B{h}1
edge B{h}1 B{h}2
edge B{h}2 B{h}3
edge B{h}3 D{h}
demand S{h} D{h} {n}
"""

RUNGS = """
edge A{h}1 B{h}2
edge B{h}1 A{h}2
edge A{h}2 B{h}3
edge B{h}2 A{h}3
"""


def net(n, bridged):
    text = HALF.format(h=1, n=n) + HALF.format(h=2, n=n)
    if bridged:
        text += RUNGS.format(h=1) + RUNGS.format(h=2)
    return build_topology(text)


sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=500)

if __name__ == "__main__":
    seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    loads = [int(x) for x in sys.argv[2].split(",")] if len(sys.argv) > 2 else [4]
    t0 = time.time()
    for n in loads:
        ta, tb = net(n, False), net(n, True)
        ia = run(ta, sched, policy="ispa", seed=0).per_packet_cost
        ib = run(tb, sched, policy="ispa", seed=0).per_packet_cost
        fa = run(ta, sched, policy="fk", seed=0).per_packet_cost
        fb = run(tb, sched, policy="fk", seed=0).per_packet_cost
        print(f"load ({n},{n}): ISPA A {ia:7.3f} B {ib:7.3f} | FK A {fa:7.3f} B {fb:7.3f}")
        for s_val in (0.0, 0.25, 0.5, 1.0):
            mb = np.array([run(tb, sched, policy="mb", steering=s_val, seed=s).per_packet_cost
                           for s in range(seeds)])
            rel = "WORSE" if mb.mean() > ib else "better"
            print(f"    MB({s_val:4.2f}) B {mb.mean():7.3f}±{mb.std():.2f}  vs ISPA B: {rel}")
    print(f"elapsed {time.time()-t0:.1f}s")
