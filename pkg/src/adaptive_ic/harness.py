"""Experiment runner: named protocols against named adversaries, one CSV row per run."""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Iterator

import numpy as np

from .adversaries.attacks import MidpointAdversary, RollingAdversary
from .adversaries.basic import NoNoise, PatternAdversary, RandomBudgeted, RandomDeletion, SilenceAll, enumerate_patterns
from .channel import ABORT, metrics, noise_rate
from .errors import ConfigurationError, ProtocolFault
from .protocols.br_half import make_br_half
from .protocols.noiseless import NoiselessProtocolTree
from .protocols.one_third import make_one_third
from .protocols.sample import FullExchangeProtocol
from .protocols.shared_rand import make_shared_rand
from .protocols.two_thirds import evaluate_toggle_patterns, make_two_thirds
from .rng import derive_seed, make_rng

CSV_HEADER = ["protocol", "adversary", "trial", "seed", "cc", "nc", "nr", "rounds", "outcome", "within_budget"]

PROTOCOLS = ("one_third", "two_thirds", "br_half", "shared_rand", "shared_rand_erasure", "full_exchange")
MODELS = {
    "one_third": "term", "two_thirds": "adp", "br_half": "adp", "shared_rand": "adp",
    "shared_rand_erasure": "adp", "full_exchange": "abort",
}
DEFAULT_EPS = {"one_third": 0.1, "br_half": 0.2, "shared_rand": 0.25, "shared_rand_erasure": 0.25}
DEFAULT_N = {"one_third": 4, "two_thirds": 2, "full_exchange": 16}


def default_threshold(protocol: str, eps: float | None) -> Fraction:
    e = Fraction(str(eps)) if eps is not None else None
    return {
        "one_third": lambda: Fraction(1, 3) - e,
        # below 2/3: the largest 6-digit decimal under it
        "two_thirds": lambda: Fraction(666666, 10**6),
        "br_half": lambda: Fraction(1, 2) - e,
        "shared_rand": lambda: 1 - e,
        "shared_rand_erasure": lambda: 1 - e,
        "full_exchange": lambda: Fraction(1, 4),
    }[protocol]()


@dataclass
class ExperimentConfig:
    protocol: str
    adversary: str = "none"
    model: str | None = None
    epsilon: float | None = None
    n: int | None = None
    k: int = 3
    depth: int = 6
    field_size: int = 16
    c_n: float = 4
    label_size: int = 64
    trials: int = 1
    seed: int = 0
    threshold: float | None = None
    out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigurationError(f"unknown protocol {self.protocol!r}; choose from {', '.join(PROTOCOLS)}")
        want = MODELS[self.protocol]
        if self.model is None:
            self.model = want
        elif self.model != want:
            raise ConfigurationError(f"{self.protocol} runs in the {want} model, not {self.model!r}")
        if self.epsilon is None:
            self.epsilon = DEFAULT_EPS.get(self.protocol)
        if self.n is None:
            self.n = DEFAULT_N.get(self.protocol)
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive int, got {self.trials!r}")
        if self.depth < 2 or self.depth % 2:
            raise ConfigurationError(f"depth must be even and >= 2, got {self.depth}")
        parse_adversary(self.adversary)

    @property
    def budget(self) -> Fraction:
        if self.threshold is not None:
            return Fraction(str(self.threshold))
        return default_threshold(self.protocol, self.epsilon)


@dataclass(slots=True)
class ReportRow:
    protocol: str
    adversary: str
    trial: int
    seed: int
    cc: int
    nc: int
    nr: object
    rounds: int
    outcome: str
    within_budget: bool


def parse_adversary(spec: str) -> tuple[str, float | None]:
    name, _, arg = spec.partition(":")
    if name in ("none", "midpoint", "rolling", "silence"):
        if arg:
            raise ConfigurationError(f"adversary {name!r} takes no parameter")
        return name, None
    if name in ("random", "deletion"):
        try:
            p = float(arg)
        except ValueError:
            raise ConfigurationError(f"adversary {spec!r} needs a probability, e.g. {name}:0.1") from None
        if not 0 <= p <= 1:
            raise ConfigurationError(f"probability out of range in {spec!r}")
        return name, p
    if name == "enumerate":
        if not arg.isdigit():
            raise ConfigurationError(f"adversary {spec!r} needs a weight, e.g. enumerate:2")
        return name, int(arg)
    raise ConfigurationError(f"unknown adversary {spec!r}")


def build_protocol(cfg: ExperimentConfig):
    name = cfg.protocol
    if name == "one_third":
        return make_one_third(cfg.n, cfg.epsilon, field_size=cfg.field_size, seed=cfg.seed)
    if name == "two_thirds":
        return make_two_thirds(cfg.n, cfg.n, cfg.k)
    if name == "full_exchange":
        return FullExchangeProtocol(cfg.n)
    tree = NoiselessProtocolTree.identity_exchange(cfg.depth)
    if name == "br_half":
        return make_br_half(tree, cfg.epsilon, c_n=cfg.c_n, label_size=cfg.label_size, seed=cfg.seed)
    return make_shared_rand(tree, cfg.epsilon, erasure_only=name == "shared_rand_erasure",
                            c_n=cfg.c_n, label_size=cfg.label_size, seed=cfg.seed)


def input_domains(proto) -> tuple[list, list]:
    if hasattr(proto, "inputs_a"):
        return list(proto.inputs_a), list(proto.inputs_b)
    if hasattr(proto, "tree"):
        return list(proto.tree.inputs_a), list(proto.tree.inputs_b)
    if hasattr(proto, "family"):
        msgs = list(range(1 << proto.family.n))
        return msgs, msgs
    msgs = list(range(1 << proto.n))
    return msgs, msgs


def classify(outputs, expected) -> str:
    if any(o is not ABORT and o != e for o, e in zip(outputs, expected)):
        return "wrong"
    if any(o is ABORT for o in outputs):
        return "abort"
    return "correct"


def _pick_alt(rng, domain, current):
    return rng.choice([v for v in domain if v != current])


def _make_adversary(cfg, proto, kind, arg, tseed, x, y, xs, ys):
    rng = make_rng("adversary", tseed)
    if kind == "none":
        return NoNoise()
    if kind == "random":
        return RandomBudgeted(arg, derive_seed("random", tseed))
    if kind == "deletion":
        return RandomDeletion(arg, derive_seed("deletion", tseed))
    if kind == "silence":
        return SilenceAll()
    if kind == "midpoint":
        return MidpointAdversary(_pick_alt(rng, xs, x), _pick_alt(rng, ys, y))
    if kind == "rolling":
        if cfg.protocol == "full_exchange" and cfg.n > 10:
            # keep the first 10 bits so the clean prefix is identical under both inputs
            high = rng.randrange(1, 1 << (cfg.n - 10))
            return RollingAdversary(y, y ^ (high << 10))
        return RollingAdversary(y, _pick_alt(rng, ys, y))
    raise ConfigurationError(f"adversary {kind!r} is not a per-trial strategy")


def _run(proto, cfg, x, y, adv, tseed):
    if cfg.protocol == "shared_rand":
        return proto.run(x, y, adv, shared_seed=derive_seed("shared", tseed))
    return proto.run(x, y, adv)


def _row(cfg, trial, tseed, m, rounds, outcome) -> ReportRow:
    within = m.nr <= cfg.budget if m.nr != math.inf else False
    return ReportRow(cfg.protocol, cfg.adversary, trial, tseed, m.cc, m.nc, m.nr, rounds, outcome, bool(within))


def iter_rows(cfg: ExperimentConfig) -> Iterator[ReportRow]:
    proto = build_protocol(cfg)
    kind, arg = parse_adversary(cfg.adversary)
    xs, ys = input_domains(proto)
    if kind == "enumerate":
        yield from _iter_enumerate(cfg, proto, arg, xs, ys)
        return
    for trial in range(cfg.trials):
        tseed = derive_seed("trial", cfg.seed, trial)
        rng = make_rng("inputs", tseed)
        x, y = rng.choice(xs), rng.choice(ys)
        try:
            adv = _make_adversary(cfg, proto, kind, arg, tseed, x, y, xs, ys)
            rec = _run(proto, cfg, x, y, adv, tseed)
        except ProtocolFault:
            yield ReportRow(cfg.protocol, cfg.adversary, trial, tseed, 0, 0, Fraction(0), 0, "fault", True)
            continue
        m = metrics(rec)
        rounds = m.rc if m.rc is not None else rec.r_max
        yield _row(cfg, trial, tseed, m, rounds, classify(rec.outputs, proto.expected(x, y)))


class _Metrics:
    __slots__ = ("cc", "nc", "nr")

    def __init__(self, cc, nc):
        self.cc, self.nc, self.nr = cc, nc, noise_rate(nc, cc)


def _iter_enumerate(cfg, proto, weight, xs, ys):
    """Trial ``t`` takes input pair ``t mod |X||Y|`` and runs every pattern of weight <= w."""
    pairs = [(x, y) for x in xs for y in ys]
    row = 0
    for trial in range(cfg.trials):
        tseed = derive_seed("trial", cfg.seed, trial)
        x, y = pairs[trial % len(pairs)]
        expected = proto.expected(x, y)
        if cfg.protocol == "two_thirds":
            yield from _enumerate_two_thirds(cfg, proto, weight, x, y, tseed, row)
            row += _count(2 * proto.r_max, weight, 1)
            continue
        if proto.model != "adp":
            raise ConfigurationError("enumeration is only supported for adp protocols")
        alts = proto.alphabet_size
        for pattern in enumerate_patterns(2 * proto.r_max, weight, alts):
            try:
                rec = _run(proto, cfg, x, y, PatternAdversary(dict(pattern)), tseed)
            except ProtocolFault:
                yield ReportRow(cfg.protocol, cfg.adversary, row, tseed, 0, 0, Fraction(0), 0, "fault", True)
            else:
                yield _row(cfg, row, tseed, metrics(rec), rec.r_max, classify(rec.outputs, expected))
            row += 1


def _count(slots, w, a):
    return sum(math.comb(slots, i) * a**i for i in range(min(w, slots) + 1))


def toggle_matrix(slots: int, weight: int, chunk: int = 200_000):
    """Boolean pattern matrices in the order of :func:`enumerate_patterns` (unary alphabet)."""
    buf = []
    for pattern in enumerate_patterns(slots, weight, 1):
        buf.append([s for s, _ in pattern])
        if len(buf) == chunk:
            yield _to_matrix(buf, slots)
            buf = []
    if buf:
        yield _to_matrix(buf, slots)


def _to_matrix(rows, slots):
    m = np.zeros((len(rows), slots), dtype=bool)
    for i, r in enumerate(rows):
        m[i, r] = True
    return m


def _enumerate_two_thirds(cfg, proto, weight, x, y, tseed, row0):
    expected = proto.expected(x, y)
    row = row0
    for toggles in toggle_matrix(2 * proto.r_max, weight):
        res = evaluate_toggle_patterns(proto, x, y, toggles)
        for a, b, cc, nc in zip(res["alice"].tolist(), res["bob"].tolist(), res["cc"].tolist(), res["nc"].tolist()):
            outs = (ABORT if a == 0 else proto.f(x, a), ABORT if b == 0 else proto.f(b, y))
            yield _row(cfg, row, tseed, _Metrics(cc, nc), proto.r_max, classify(outs, expected))
            row += 1


def run_experiment(cfg: ExperimentConfig) -> list[ReportRow]:
    return list(iter_rows(cfg))


def format_nr(nr) -> str:
    if nr == math.inf:
        return "inf"
    q = Fraction(nr)
    d = Decimal(q.numerator) / Decimal(q.denominator)
    return str(d.quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN))


def _fields(r: ReportRow) -> list:
    return [r.protocol, r.adversary, r.trial, r.seed, r.cc, r.nc, format_nr(r.nr), r.rounds, r.outcome,
            "true" if r.within_budget else "false"]


def write_csv(rows, path) -> dict:
    """Write rows (any iterable) and return outcome counts."""
    counts = new_counts()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(_fields(r))
            tally(counts, r)
    return counts


def new_counts() -> dict:
    return {"rows": 0, "correct": 0, "wrong": 0, "abort": 0, "fault": 0, "suite_failures": 0}


def tally(counts: dict, r: ReportRow) -> None:
    counts["rows"] += 1
    counts[r.outcome] += 1
    counts["suite_failures"] += is_suite_failure(r)


def is_suite_failure(r: ReportRow) -> bool:
    return r.outcome == "wrong" and r.within_budget


def read_csv(path) -> list[ReportRow]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ConfigurationError(f"unexpected CSV header {header}")
        for rec in reader:
            proto, adv, trial, seed, cc, nc, _nr, rounds, outcome, within = rec
            cc, nc = int(cc), int(nc)
            out.append(ReportRow(proto, adv, int(trial), int(seed), cc, nc, noise_rate(nc, cc),
                                 int(rounds), outcome, within == "true"))
    return out


def config_fields() -> list[str]:
    return [f.name for f in fields(ExperimentConfig)]


def config_from_dict(d: dict) -> ExperimentConfig:
    unknown = set(d) - set(config_fields())
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return ExperimentConfig(**d)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return dataclasses.asdict(cfg)
