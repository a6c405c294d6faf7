"""Random-noise sweep: outcome counts per realized-noise-rate bucket.

    python3 scripts/sweep_resilience.py --protocol one_third --rates 0.02 0.05 0.1 0.2 --trials 200
"""

import argparse
from collections import Counter
from dataclasses import dataclass, field, replace

from adaptive_ic.harness import ExperimentConfig, default_threshold, run_experiment, write_csv


@dataclass
class Sweep:
    protocol: str = "one_third"
    rates: list = field(default_factory=lambda: [0.02, 0.05, 0.1, 0.2])
    kind: str = "random"
    trials: int = 200
    buckets: int = 10
    seed: int = 0
    out: str | None = None


def run(sw: Sweep):
    rows = []
    for i, p in enumerate(sw.rates):
        cfg = ExperimentConfig(sw.protocol, adversary=f"{sw.kind}:{p}", trials=sw.trials, seed=sw.seed + i)
        rows += run_experiment(cfg)
    budget = float(default_threshold(sw.protocol, ExperimentConfig(sw.protocol).epsilon))
    table = Counter()
    for r in rows:
        nr = float(r.nr)
        b = min(int(nr * sw.buckets), sw.buckets) if nr != float("inf") else sw.buckets
        table[b, r.outcome] += 1
    print(f"{sw.protocol}: budget {budget:.4f}, {len(rows)} runs")
    print("  NR bucket      correct  abort  wrong")
    for b in sorted({b for b, _ in table}):
        lo = b / sw.buckets
        print(f"  [{lo:.2f}, {lo + 1 / sw.buckets:.2f})  "
              f"{table[b, 'correct']:7d} {table[b, 'abort']:6d} {table[b, 'wrong']:6d}")
    bad = sum(1 for r in rows if r.within_budget and r.outcome == "wrong")
    print(f"  wrong within budget: {bad}")
    if sw.out:
        write_csv(rows, sw.out)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--protocol", default="one_third")
    ap.add_argument("--rates", type=float, nargs="+", default=[0.02, 0.05, 0.1, 0.2])
    ap.add_argument("--kind", default="random", choices=("random", "deletion"))
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    a = ap.parse_args()
    run(replace(Sweep(), **vars(a)))
