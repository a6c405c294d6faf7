"""The two impossibility attacks in action.

Midpoint against the one-third protocol: Bob cannot tell which of two inputs
Alice holds, so some run of the quadruple ends wrong or aborted, while the
corruption rate of each direction stays at most 1/2 on every prefix.  Rolling change against the sample
fully-utilized protocol: Alice's view is the same for two inputs of Bob while
the prefix noise rate stays under 1/4.
"""

import argparse
import itertools

from adaptive_ic.adversaries import MidpointAdversary, RollingAdversary
from adaptive_ic.channel import BOB, metrics
from adaptive_ic.harness import classify
from adaptive_ic.protocols import FullExchangeProtocol, make_one_third


def midpoint(n: int, eps: float, quads: int):
    p = make_one_third(n, eps)
    dom = range(2**n)
    print(f"midpoint vs one_third n={n} eps={eps}")
    for (x0, x1), (y0, y1) in itertools.islice(
        itertools.product(itertools.combinations(dom, 2), itertools.combinations(dom, 2)), quads
    ):
        res = []
        for x, y in itertools.product((x0, x1), (y0, y1)):
            adv = MidpointAdversary(x1 if x == x0 else x0, y1 if y == y0 else y0)
            rec = p.run(x, y, adv)
            res.append((classify(rec.outputs, p.expected(x, y)), float(metrics(rec).nr)))
        broken = any(o != "correct" for o, _ in res)
        print(f"  x={x0},{x1} y={y0},{y1}: " + " ".join(f"{o}@{nr:.3f}" for o, nr in res)
              + ("  broken" if broken else ""))


def rolling(n: int):
    p = FullExchangeProtocol(n)
    x, y = 1, 2
    y_alt = y ^ (1 << (n - 1))
    views = []
    for yy in (y, y_alt):
        rec = p.run(x, yy, RollingAdversary(y, y_alt))
        views.append(tuple(d for d, w in zip(rec.delivered, rec.slot_senders) if w == BOB))
        m = metrics(rec)
        print(f"rolling vs full_exchange n={n}, Bob holds {yy}: NR={float(m.nr):.3f} "
              f"outcome={classify(rec.outputs, p.expected(x, yy))}")
    print(f"  Alice's views equal: {views[0] == views[1]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--quads", type=int, default=6)
    a = ap.parse_args()
    midpoint(a.n, a.eps, a.quads)
    rolling(16)
