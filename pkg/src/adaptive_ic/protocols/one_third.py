"""One-third resilient protocol with adaptive termination.

Alice sends ``ECC(x)`` of length ``L``.  Bob decodes with distance ``t``; if
``t`` is small he replies with a prefix of ``ECC(y)`` of length ``2L - 4t``
and stops, otherwise he aborts at once.  The more noise Bob saw, the shorter
his reply, so noise spent on Alice's message is paid back by a cheaper reply.
Alice listens until the last round and infers both the reply length and ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from ..channel import ABORT, ALICE, BOB, SILENCE, Party, RunRecord, TermSchedule, Terminate, run_term
from ..codes.prefix import PrefixCodeFamily, gen_prefix_family
from ..errors import ConfigurationError


def identity(x, y):
    return (x, y)


class OneThirdAlice(Party):
    role = ALICE

    def __init__(self, proto: "OneThirdProtocol", x: int):
        self.p, self.input = proto, x
        self.codeword = proto.family.encode_prefix(x, proto.L)
        self.received: list[int] = []

    def next_action(self, rnd: int):
        return int(self.codeword[rnd - 1]) if rnd <= self.p.L else SILENCE

    def deliver(self, rnd: int, symbol: int) -> None:
        if rnd > self.p.L:
            self.received.append(symbol)

    def final_output(self):
        y_hat = self.p.infer_reply(self.received)
        return ABORT if y_hat is None else self.p.f(self.input, y_hat)


class OneThirdBob(Party):
    role = BOB

    def __init__(self, proto: "OneThirdProtocol", y: int):
        self.p, self.input = proto, y
        self.received: list[int] = []
        self.reply = None
        self.x_hat = None
        self.t = None

    def next_action(self, rnd: int):
        L = self.p.L
        if rnd <= L:
            return SILENCE
        if self.reply is None:
            self.x_hat, self.t = self.p.family.decode_prefix(np.array(self.received))
            if not self.t < self.p.t_bound:
                return Terminate(ABORT)
            self.reply = self.p.family.encode_prefix(self.input, self.p.reply_length(self.t))
        i = rnd - L - 1
        if i < len(self.reply):
            return int(self.reply[i])
        return Terminate(self.p.f(self.x_hat, self.input))

    def deliver(self, rnd: int, symbol: int) -> None:
        if rnd <= self.p.L:
            self.received.append(symbol)

    def final_output(self):
        # only reached when the reply fills Bob's whole window
        if self.reply is None:
            return ABORT
        return self.p.f(self.x_hat, self.input)


@dataclass
class OneThirdProtocol:
    family: PrefixCodeFamily
    eps: float
    f: Callable[[Any, Any], Any] = identity
    j: int | None = None

    name = "one_third"
    model = "term"

    def __post_init__(self):
        eps = Fraction(str(self.eps))
        if not 0 < eps < Fraction(1, 4):
            raise ConfigurationError(f"eps must be in (0, 1/4), got {self.eps}")
        lengths, fam = self.family.lengths, self.family
        ok = [
            i for i, Li in enumerate(lengths)
            if Li * 4 * eps >= lengths[0] and 2 * Li <= fam.max_length
        ]
        if self.j is None:
            if not ok:
                raise ConfigurationError(
                    f"family lengths {lengths} have no L with 4*eps*L >= {lengths[0]} and 2L <= {fam.max_length}"
                )
            self.j = ok[0]
        elif self.j not in ok:
            raise ConfigurationError(f"code index {self.j} violates the length requirements")
        self.L = lengths[self.j]
        self.t_bound = (Fraction(1, 2) - eps) * self.L
        self.t_values = [t for t in range(self.L) if t < self.t_bound]
        self.reply_lengths = [self.reply_length(t) for t in self.t_values]
        need = 1 - 2 * eps
        for ell in [self.L, *self.reply_lengths]:
            if fam.distance_at(ell) < need * ell:
                raise ConfigurationError(
                    f"family distance at length {ell} is {fam.distance_at(ell)}, below {float(need * ell):.1f}"
                )
        self.r_max = 3 * self.L + 1
        self.schedule = TermSchedule.split(self.L, self.r_max)
        self.alphabet_size = fam.field_size
        # admissible lengths in increasing order, for the tie-break on length
        self._lengths_sorted = sorted(set(self.reply_lengths))

    def reply_length(self, t: int) -> int:
        return 2 * self.L - 4 * t

    def party(self, role: str, inp) -> Party:
        return OneThirdAlice(self, inp) if role == ALICE else OneThirdBob(self, inp)

    def parties(self, x, y):
        return OneThirdAlice(self, x), OneThirdBob(self, y)

    def expected(self, x, y):
        v = self.f(x, y)
        return v, v

    def run(self, x, y, adversary) -> RunRecord:
        a, b = self.parties(x, y)
        return run_term(a, b, self.schedule, adversary, alphabet_size=self.alphabet_size, protocol=self)

    def scores(self, received) -> tuple[np.ndarray, np.ndarray]:
        """Score matrix over (admissible length, message) and the lengths it covers."""
        r = np.asarray(received)
        W = 2 * self.L
        if r.shape[0] != W:
            raise ConfigurationError(f"reply window has {r.shape[0]} slots, expected {W}")
        book = self.family.codebook[:, :W]
        mism = np.cumsum(book != r, axis=1)  # mismatches in [0, l)
        loud = np.cumsum((r != SILENCE)[::-1])[::-1]  # non-silent slots in [l, W)
        loud = np.append(loud, 0)
        lens = np.array(self._lengths_sorted)
        return mism[:, lens - 1].T + loud[lens][:, None], lens

    def infer_reply(self, received):
        """Best (length, y) by score; ``None`` when the best score is shared by different y."""
        score, _ = self.scores(received)
        best = score.min()
        ys = np.unique(np.nonzero(score == best)[1])
        return int(ys[0]) if len(ys) == 1 else None


def make_one_third(n: int = 4, eps: float = 0.1, family: PrefixCodeFamily | None = None,
                   f: Callable = identity, *, field_size: int = 16, seed: int = 0,
                   multipliers=(8, 16, 32, 64)) -> OneThirdProtocol:
    """Default family: lengths ``m * n`` for the given multipliers, distance checked at every
    truncation from the shortest listed length on (replies use arbitrary truncations)."""
    if family is None:
        lengths = [m * n for m in multipliers]
        family = gen_prefix_family(n, eps, lengths, field_size, seed, verify_from=lengths[0])
    if family.n != n:
        raise ConfigurationError(f"family encodes {family.n}-bit messages, not {n}")
    return OneThirdProtocol(family, eps, f)
