import sys
import time
import numpy as np
from coinroute.netmodel import build_topology
from coinroute.engine import WaveSchedule
from coinroute.agents import run

HALF = """
node S{h} zero
node P{h} affine 0 10
node Q{h} affinelog 50 1
node R{h} affinelog 50 1
node T{h} affine 0 10
node M{h} affinelog 10 1
node X{h} affinelog 50 1
node D{h} zero
edge S{h} P{h}
edge P{h} Q{h}
edge Q{h} D{h}
edge S{h} R{h}
edge R{h} T{h}
edge T{h} D{h}
demand S{h} D{h} {n}
"""

HALF_B = """
edge P{h} M{h}
edge M{h} T{h}
edge S{h} X{h}
edge X{h} Q{h}
edge X{h} T{h}
"""


def net(n, bridged):
    text = HALF.format(h=1, n=n) + HALF.format(h=2, n=n)
    if bridged:
        text += HALF_B.format(h=1) + HALF_B.format(h=2)
    return build_topology(text)


sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=500)

if __name__ == "__main__":
    seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    t0 = time.time()
    for n in (2, 3, 4, 6):
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
