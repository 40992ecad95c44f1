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

BASE_B = "edge P{h} M{h}\nedge M{h} T{h}\nedge S{h} X{h}\nedge X{h} Q{h}\nedge X{h} T{h}\n"

VARIANTS = {
    # sane zero-toll crossings between conduits for extra decision churn
    "B: +P>T,R>Q": BASE_B + "edge P{h} T{h}\nedge R{h} Q{h}\n",
    # crossing hub feeds mid-tails and the far tail only
    "C: X>Q only": "edge P{h} M{h}\nedge M{h} T{h}\nedge S{h} X{h}\nedge X{h} Q{h}\n",
    # both: churn crossings plus hub
    "D: B minus R>Q": BASE_B + "edge P{h} T{h}\n",
}

sched = WaveSchedule(L=4, W=24, measure_start=100, total_waves=500)
seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 8
n = 4
t0 = time.time()
for name, wiring in VARIANTS.items():
    text = HALF.format(h=1, n=n) + HALF.format(h=2, n=n) + wiring.format(h=1) + wiring.format(h=2)
    tb = build_topology(text)
    ib = run(tb, sched, policy="ispa", seed=0).per_packet_cost
    fb = run(tb, sched, policy="fk", seed=0).per_packet_cost
    out = [f"{name:18s} ISPA {ib:7.3f} FK {fb:7.3f}"]
    for s_val in (0.0, 0.25, 0.5):
        mb = np.array([run(tb, sched, policy="mb", steering=s_val, seed=s).per_packet_cost
                       for s in range(seeds)])
        mark = "W" if mb.mean() > ib else "b"
        out.append(f"MB{s_val:.2f} {mb.mean():7.3f}±{mb.std():.2f}[{mark}]")
    print(" | ".join(out))
print(f"elapsed {time.time()-t0:.1f}s")
