"""A small fully-utilized protocol for the abort model.

Both parties speak in every round.  In round ``i`` each sends bit ``i`` of its
input XORed with the last bit it received, so every symbol depends on what
the channel delivered.  Outputs are the reconstructed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..channel import ALICE, BOB, Party, RunRecord, TermSchedule, run_term
from ..errors import ConfigurationError


class ExchangeParty(Party):
    def __init__(self, role: str, inp: int, n: int):
        self.role, self.input, self.n = role, inp, n
        self.last_got = 0
        self.prev_sent = 0
        self.got: list[int] = []

    def next_action(self, rnd: int):
        self.prev_sent = ((self.input >> (rnd - 1)) & 1) ^ self.last_got
        return self.prev_sent

    def deliver(self, rnd: int, symbol: int) -> None:
        bit = symbol if symbol in (0, 1) else 0
        # the sender masked with the last symbol it received, which is my previous send
        self.got.append(bit ^ self._mask)
        self._mask = self.prev_sent
        self.last_got = bit

    _mask = 0

    def final_output(self):
        other = sum(b << i for i, b in enumerate(self.got))
        return (self.input, other) if self.role == ALICE else (other, self.input)


@dataclass
class FullExchangeProtocol:
    n: int = 16

    name = "full_exchange"
    model = "abort"
    alphabet_size = 2

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("n must be positive")
        self.r_max = self.n + 1
        self.schedule = TermSchedule.full(self.r_max)

    def party(self, role: str, inp) -> Party:
        return ExchangeParty(role, inp, self.n)

    def parties(self, x, y):
        return self.party(ALICE, x), self.party(BOB, y)

    def expected(self, x, y):
        return (x, y), (x, y)

    def run(self, x, y, adversary) -> RunRecord:
        a, b = self.parties(x, y)
        return run_term(a, b, self.schedule, adversary, alphabet_size=2, abort=True, protocol=self)
