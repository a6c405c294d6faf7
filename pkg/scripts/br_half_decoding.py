"""Tree-decoder work in the half-rate protocol, with and without the
candidate sets of erased labels.

Each erased label lets every one of the 5 children through at no cost, so
with erasure rate e the zero-cost frontier grows like (5e + 5(1-e)/L) per
emulated round and the exact search explodes once that passes 1.  Passing the
mini-rounds that carried a letter keeps it well below 1.
"""

import argparse
import time

from adaptive_ic.adversaries import RandomBudgeted
from adaptive_ic.channel import metrics
from adaptive_ic.harness import classify
from adaptive_ic.protocols import NoiselessProtocolTree, effective_noise, make_br_half
from adaptive_ic.rng import derive_seed, make_rng


def main(runs: int, p_max: float, cap: int):
    tree = NoiselessProtocolTree.identity_exchange(6)
    soft = make_br_half(tree, 0.2, max_expansions=cap)
    hard = make_br_half(tree, 0.2, soft.code, soft=False, max_expansions=cap)
    for proto in (soft, hard):
        rng = make_rng("br_half_decoding")
        t0, worst, outcomes, over = time.perf_counter(), 0, {}, 0
        for i in range(runs):
            x, y = rng.randrange(8), rng.randrange(8)
            rec = proto.run(x, y, RandomBudgeted(rng.uniform(0, p_max), derive_seed("bhd", i)))
            a, b = rec.parties
            worst = max(worst, a.br.decoder.expansions, b.br.decoder.expansions)
            over += a.br.decoder.overloaded or b.br.decoder.overloaded
            o = classify(rec.outputs, proto.expected(x, y))
            if metrics(rec).nr <= 0.3:
                outcomes[o] = outcomes.get(o, 0) + 1
        print(f"soft={proto.soft}: NR<=0.3 outcomes {outcomes}, overloaded runs {over}, "
              f"max expansions {worst}, {time.perf_counter() - t0:.0f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--p-max", type=float, default=0.005)
    ap.add_argument("--cap", type=int, default=200_000)
    a = ap.parse_args()
    main(a.runs, a.p_max, a.cap)
