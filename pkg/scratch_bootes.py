import numpy as np
from coinroute.netmodel import build_topology
from coinroute.engine import WaveSchedule
from coinroute.agents import run

CORE = """
node S1 zero
node S2 zero
node A affinelog 10 1
node B affinelog 10 1
node C power 4 2
node G affinelog 0 1
node D zero
edge S1 A
edge S2 B
edge A G
edge B G
edge G D
demand S1 D {n1}
demand S2 D {n2}
"""

BRIDGE = """
edge S1 C
edge S2 C
edge C G
"""

sched = WaveSchedule(L=3, W=6, measure_start=100, total_waves=500)

if __name__ == "__main__":
    for n1, n2 in ((1, 1), (2, 1), (2, 2), (4, 2)):
        ta = build_topology(CORE.format(n1=n1, n2=n2))
        tb = build_topology(CORE.format(n1=n1, n2=n2) + BRIDGE)
        ia = run(ta, sched, policy="ispa", seed=0).per_packet_cost
        ib = run(tb, sched, policy="ispa", seed=0).per_packet_cost
        verdict = "PARADOX" if ib > ia + 0.5 else ("BENEFIT" if ib < ia - 0.5 else "NEUTRAL")
        mb = np.array([run(tb, sched, policy="mb", steering=0.5, seed=s).per_packet_cost
                       for s in range(8)])
        print(f"({n1},{n2}): ISPA A {ia:7.3f} -> B {ib:7.3f}  {verdict:8s} | MB-0.5 B {mb.mean():7.3f}±{mb.std():.2f}")
