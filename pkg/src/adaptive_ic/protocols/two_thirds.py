"""Two-thirds resilient protocol with adaptive order of speaking.

Both inputs are indices into small domains.  Alice announces ``x_i`` with a
k-silence encoding.  Bob decodes with gap ``t`` and answers inside window
``j`` (his input index) with ``2t`` copies of the letter: a shaky decode buys
a short answer, so the adversary pays twice for what it spent on Alice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from ..channel import ABORT, ALICE, BOB, SILENCE, Party, RunRecord, run_adp
from ..codes.silence import SEValue, se_decode
from ..errors import ConfigurationError

SIGMA = 0


def identity(x, y):
    return (x, y)


class TwoThirdsAlice(Party):
    role = ALICE

    def __init__(self, proto: "TwoThirdsProtocol", x: int):
        self.p, self.input = proto, x
        self.counts = [0] * proto.ny

    def next_action(self, rnd: int):
        lo = (self.input - 1) * self.p.k
        return SIGMA if lo < rnd <= lo + self.p.k else SILENCE

    def deliver(self, rnd: int, symbol: int) -> None:
        off = rnd - self.p.alice_len - 1
        if off >= 0 and symbol == SIGMA:
            self.counts[off // (2 * self.p.k)] += 1

    def final_output(self):
        best = max(self.counts)
        if self.counts.count(best) > 1:
            return ABORT
        return self.p.f(self.input, self.counts.index(best) + 1)


class TwoThirdsBob(Party):
    role = BOB

    def __init__(self, proto: "TwoThirdsProtocol", y: int):
        self.p, self.input = proto, y
        self.received: list[int] = []
        self.decoded = None

    def next_action(self, rnd: int):
        p = self.p
        if rnd <= p.alice_len:
            return SILENCE
        if self.decoded is None:
            self.decoded = se_decode(self.received, p.k, p.nx, SIGMA)
        if not isinstance(self.decoded, SEValue):
            return SILENCE
        start = p.alice_len + 2 * p.k * (self.input - 1)
        return SIGMA if start < rnd <= start + 2 * self.decoded.gap else SILENCE

    def deliver(self, rnd: int, symbol: int) -> None:
        if rnd <= self.p.alice_len:
            self.received.append(symbol)

    def final_output(self):
        if self.decoded is None:
            self.decoded = se_decode(self.received, self.p.k, self.p.nx, SIGMA)
        if not isinstance(self.decoded, SEValue):
            return ABORT
        return self.p.f(self.decoded.index, self.input)


@dataclass
class TwoThirdsProtocol:
    nx: int
    ny: int
    k: int
    f: Callable[[Any, Any], Any] = identity

    name = "two_thirds"
    model = "adp"
    alphabet_size = 1

    def __post_init__(self):
        if self.nx < 2 or self.ny < 1 or self.k < 1:
            raise ConfigurationError(f"need |X| >= 2, |Y| >= 1, k >= 1; got {self.nx}, {self.ny}, {self.k}")
        self.alice_len = self.k * self.nx
        self.r_max = self.k * self.nx + 2 * self.k * self.ny

    @property
    def inputs_a(self):
        return range(1, self.nx + 1)

    @property
    def inputs_b(self):
        return range(1, self.ny + 1)

    def party(self, role: str, inp) -> Party:
        return TwoThirdsAlice(self, inp) if role == ALICE else TwoThirdsBob(self, inp)

    def parties(self, x, y):
        return TwoThirdsAlice(self, x), TwoThirdsBob(self, y)

    def expected(self, x, y):
        v = self.f(x, y)
        return v, v

    def run(self, x, y, adversary) -> RunRecord:
        a, b = self.parties(x, y)
        return run_adp(a, b, adversary, self.r_max, alphabet_size=1, protocol=self)


def make_two_thirds(nx: int = 2, ny: int = 2, k: int = 3, f: Callable = identity) -> TwoThirdsProtocol:
    return TwoThirdsProtocol(nx, ny, k, f)


def evaluate_toggle_patterns(proto: TwoThirdsProtocol, x: int, y: int, toggles: np.ndarray) -> dict:
    """Vectorized runs for a batch of oblivious unary toggle patterns.

    ``toggles`` is a boolean ``(P, 2*r_max)`` array in interleaved slot order
    (Alice's slot of round r at ``2(r-1)``, Bob's at ``2(r-1)+1``).  A toggle
    flips letter and silence.  Returns per-pattern outputs as input indices
    (0 = abort) plus ``cc`` and ``nc``.
    """
    k, nx, ny, R = proto.k, proto.nx, proto.ny, proto.r_max
    tog = np.asarray(toggles, dtype=bool)
    P = tog.shape[0]
    if tog.shape[1] != 2 * R:
        raise ConfigurationError(f"patterns need {2 * R} slots, got {tog.shape[1]}")
    ta, tb = tog[:, 0::2], tog[:, 1::2]

    a_sent = np.zeros(R, dtype=bool)
    a_sent[(x - 1) * k : x * k] = True
    got_b = a_sent[: proto.alice_len] ^ ta[:, : proto.alice_len]
    counts = got_b.reshape(P, nx, k).sum(axis=2)
    best = counts.max(axis=1)
    arg = counts.argmax(axis=1)
    unique = (counts == best[:, None]).sum(axis=1) == 1
    runner = np.where(
        np.arange(nx)[None, :] == arg[:, None], -1, counts
    ).max(axis=1)
    gap = np.where(unique, best - runner, 0)
    bob_out = np.where(unique, arg + 1, 0)

    # Bob's sent stream: 2*gap letters from the start of window y
    rounds = np.arange(R)
    start = proto.alice_len + 2 * k * (y - 1)
    b_sent = (rounds[None, :] >= start) & (rounds[None, :] < start + 2 * gap[:, None])
    got_a = (b_sent ^ tb)[:, proto.alice_len :]
    wins = got_a.reshape(P, ny, 2 * k).sum(axis=2)
    wbest = wins.max(axis=1)
    wuniq = (wins == wbest[:, None]).sum(axis=1) == 1
    alice_out = np.where(wuniq, wins.argmax(axis=1) + 1, 0)

    cc = k + b_sent.sum(axis=1)
    nc = tog.sum(axis=1)
    return {"alice": alice_out, "bob": bob_out, "cc": cc, "nc": nc}
