"""Half-rate resilient protocol for the adaptive-silence model.

The edge-announcement emulator produces one tree-code label per emulated
round.  The label is sent with a 1-silence encoding: the emulated round is
split into ``label_size`` mini-rounds and the party speaks only in the
mini-round whose index is the label.  A single corruption can therefore only
erase a label; replacing it by another label takes two.

An erased label still tells the receiver which mini-rounds carried the letter.
With ``soft`` on, the tree decoder gets that candidate set: it charges 0 to
the labels in the set and 1 to the others.  Against any wrong path this never
does worse than a plain erasure, and the effective-noise accounting still
sees an erasure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..channel import ALICE, BOB, SILENCE, Party, RunRecord, run_adp
from ..codes.silence import SEValue, se_candidates, se_decode
from ..codes.treecode import TreeCode, tc_gen_hashed
from ..errors import ConfigurationError
from .br import GAMMA_SIZE, BREmulator
from .noiseless import NoiselessProtocolTree

SIGMA = 0


class BRHalfParty(Party):
    def __init__(self, role, inp, tree, code, label_size, n_rounds, max_expansions, soft=True):
        self.role, self.input = role, inp
        self.soft = soft
        self.br = BREmulator(role, inp, tree, code, n_rounds, max_expansions)
        self.L = label_size
        self.n_rounds = n_rounds
        self._label = None
        self._word: list[int] = []

    def next_action(self, rnd: int):
        m = (rnd - 1) % self.L
        if m == 0:
            self._label = self.br.next_label()
        return SIGMA if m == self._label else SILENCE

    def deliver(self, rnd: int, symbol: int) -> None:
        self._word.append(symbol)
        if len(self._word) == self.L:
            res = se_decode(self._word, 1, self.L, SIGMA)
            if isinstance(res, SEValue):
                self.br.receive(res.index - 1)
            else:
                self.br.receive(None, se_candidates(self._word, 1, self.L, SIGMA) if self.soft else None)
            self._word = []

    def final_output(self):
        return self.br.output()


@dataclass
class BRHalfProtocol:
    tree: NoiselessProtocolTree
    eps: float
    code: TreeCode
    c_n: float = 4
    max_expansions: int = 200_000
    soft: bool = True

    name = "br_half"
    model = "adp"
    alphabet_size = 1

    def __post_init__(self):
        if not 0 < self.eps < 0.5:
            raise ConfigurationError(f"eps must be in (0, 1/2), got {self.eps}")
        self.code.require_verified()
        if self.code.arity != GAMMA_SIZE:
            raise ConfigurationError(f"tree code arity must be {GAMMA_SIZE}")
        self.n_rounds = math.ceil(Fraction(str(self.c_n)) * self.tree.depth / Fraction(str(self.eps)))
        self.label_size = self.code.label_size
        self.r_max = self.n_rounds * self.label_size

    def party(self, role: str, inp) -> BRHalfParty:
        return BRHalfParty(role, inp, self.tree, self.code, self.label_size, self.n_rounds,
                           self.max_expansions, self.soft)

    def parties(self, x, y):
        return self.party(ALICE, x), self.party(BOB, y)

    def expected(self, x, y):
        v = self.tree.evaluate(x, y)
        return v, v

    def run(self, x, y, adversary) -> RunRecord:
        a, b = self.parties(x, y)
        return run_adp(a, b, adversary, self.r_max, alphabet_size=1, protocol=self)


def make_br_half(tree: NoiselessProtocolTree, eps: float, code: TreeCode | None = None, *,
                 c_n: float = 4, label_size: int = 64, seed: int = 0, soft: bool = True,
                 max_expansions: int = 200_000) -> BRHalfProtocol:
    """Default code: arity-5 hashed tree code over 64 labels, distance checked to depth 3 at alpha = 1/2."""
    if code is None:
        code = tc_gen_hashed(GAMMA_SIZE, label_size, Fraction(1, 2), seed, verify_depth=3)
    return BRHalfProtocol(tree, eps, code, c_n, max_expansions, soft)


def effective_noise(record: RunRecord, start: int = 1, end: int | None = None) -> tuple[int, int, int]:
    """Erasure counts 1 and a wrong label counts 2, per emulated round in ``[start, end]``."""
    alice, bob = record.parties
    sa, ra = alice.br.sent_labels, alice.br.received_labels
    sb, rb = bob.br.sent_labels, bob.br.received_labels
    end = len(ra) if end is None else end

    def charge(sent, got):
        return sum(
            0 if g == s else (1 if g is None else 2)
            for s, g in zip(sent[start - 1 : end], got[start - 1 : end])
        )

    n_a, n_b = charge(sa, rb), charge(sb, ra)
    return n_a, n_b, n_a + n_b
