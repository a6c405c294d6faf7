"""Channel models and the run loop.

Two models are simulated:

* ``term``: a fixed speaking schedule (rounds in which Alice and Bob own a slot)
  where each party may terminate at the start of any round.  ``abort`` is the
  same model with the extra rule that any early termination voids both outputs.
* ``adp``: both parties own a slot every round and choose between a letter and
  silence.  Silent slots cost nothing.

Symbols are plain ints: letters are ``0..alphabet_size-1``, ``SILENCE`` and
``ERASURE`` are negative sentinels.  ``ERASURE`` only ever appears on the
receiving side of an erasure channel.

Round convention for ``term``/``abort``: communication happens in rounds
``1..r_max-1``.  At the start of round ``r_max`` every party still running is
forced to terminate, so ``TER <= r_max`` always holds and a party that runs to
the end has ``TER == r_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Container, Optional

from .errors import ConfigurationError, ProtocolFault

SILENCE = -1
ERASURE = -2

ALICE = "A"
BOB = "B"
ROLES = (ALICE, BOB)


def other(role: str) -> str:
    return BOB if role == ALICE else ALICE


def symbol_str(sym: int) -> str:
    if sym == SILENCE:
        return "_"
    if sym == ERASURE:
        return "?"
    return str(sym)


class _Abort:
    """The invalid output. Compares equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABORT"

    def __reduce__(self):
        return (_Abort, ())


ABORT = _Abort()


@dataclass(frozen=True)
class Terminate:
    output: Any


class Party:
    """One endpoint of a protocol.

    ``next_action`` is called once per round (before that round's slot) with
    every delivery of earlier rounds already applied.  In ``term`` it may return
    :class:`Terminate`; after that the party is never queried again.
    """

    role: str = ALICE
    input: Any = None

    def next_action(self, rnd: int):
        raise NotImplementedError

    def deliver(self, rnd: int, symbol: int) -> None:
        pass

    def final_output(self):
        """Output when the simulator stops a party that is still running."""
        return ABORT


@dataclass(frozen=True)
class TermSchedule:
    """Speaking rounds ``I_A``, ``I_B`` over ``1..r_max``."""

    r_max: int
    alice_rounds: Container[int]
    bob_rounds: Container[int]
    fully_utilized: bool = False

    @classmethod
    def split(cls, alice_last: int, r_max: int) -> "TermSchedule":
        """Alice owns ``1..alice_last``, Bob owns the rest."""
        return cls(r_max, range(1, alice_last + 1), range(alice_last + 1, r_max + 1))

    @classmethod
    def alternating(cls, r_max: int) -> "TermSchedule":
        return cls(r_max, range(1, r_max + 1, 2), range(2, r_max + 1, 2))

    @classmethod
    def full(cls, r_max: int) -> "TermSchedule":
        everything = range(1, r_max + 1)
        return cls(r_max, everything, everything, fully_utilized=True)

    def speaks(self, role: str, rnd: int) -> bool:
        return rnd in (self.alice_rounds if role == ALICE else self.bob_rounds)

    def validate(self) -> None:
        if not isinstance(self.r_max, int) or self.r_max < 1:
            raise ConfigurationError(f"r_max must be a positive int, got {self.r_max!r}")
        for rnd in range(1, self.r_max + 1):
            a, b = rnd in self.alice_rounds, rnd in self.bob_rounds
            if not (a or b):
                raise ConfigurationError(f"round {rnd} belongs to neither party")
            if self.fully_utilized and not (a and b):
                raise ConfigurationError(f"fully utilized schedule misses a slot in round {rnd}")


@dataclass
class RunView:
    """Everything the adversary may look at. Transcript lists grow during the run."""

    model: str
    x: Any
    y: Any
    alphabet_size: int
    r_max: int
    erasure: bool = False
    schedule: Optional[TermSchedule] = None
    protocol: Any = None
    slot_rounds: list = field(default_factory=list)
    slot_senders: list = field(default_factory=list)
    sent: list = field(default_factory=list)
    delivered: list = field(default_factory=list)


class Adversary:
    """Pass-through channel; subclasses override :meth:`corrupt`."""

    view: Optional[RunView] = None

    def reset(self, view: RunView) -> None:
        self.view = view

    def corrupt(self, slot: int, rnd: int, sender: str, sent: int) -> int:
        return sent


@dataclass
class RunRecord:
    model: str
    r_max: int
    alphabet_size: int
    slot_rounds: list
    slot_senders: list
    sent: list
    delivered: list
    outputs: tuple
    raw_outputs: tuple
    inputs: tuple
    schedule: Optional[TermSchedule] = None
    ter_a: Optional[int] = None
    ter_b: Optional[int] = None
    parties: tuple = ()

    @property
    def noise_pattern(self) -> list:
        """``None`` where the slot was delivered intact, else the delivered symbol."""
        return [None if d == s else d for s, d in zip(self.sent, self.delivered)]

    def corrupted_slots(self) -> list:
        return [i for i, (s, d) in enumerate(zip(self.sent, self.delivered)) if s != d]

    def direction(self, sender: str) -> list:
        return [i for i, who in enumerate(self.slot_senders) if who == sender]


@dataclass(frozen=True)
class Metrics:
    cc: int
    nc: int
    nr: Any
    rc: Optional[int] = None


def noise_rate(nc: int, cc: int):
    """``nc/cc`` as an exact Fraction; 0 for 0/0 and ``math.inf`` for x/0."""
    if cc == 0:
        return Fraction(0) if nc == 0 else math.inf
    return Fraction(nc, cc)


def _check_sent(sym, alphabet_size: int, who: str, rnd: int) -> int:
    if sym == SILENCE or (isinstance(sym, int) and 0 <= sym < alphabet_size):
        return sym
    raise ProtocolFault(f"party {who} emitted {sym!r} in round {rnd} (alphabet size {alphabet_size})")


def _check_delivered(sent: int, got, alphabet_size: int, erasure: bool, rnd: int) -> int:
    if erasure:
        if got != sent and got != ERASURE:
            raise ProtocolFault(f"erasure channel delivered {got!r} for {sent!r} in round {rnd}")
        return got
    if got == SILENCE or (isinstance(got, int) and 0 <= got < alphabet_size):
        return got
    raise ProtocolFault(f"adversary delivered {got!r} in round {rnd}")


def run_term(
    alice: Party,
    bob: Party,
    schedule: TermSchedule,
    adversary: Adversary,
    *,
    alphabet_size: int,
    abort: bool = False,
    erasure: bool = False,
    protocol: Any = None,
) -> RunRecord:
    """Execute one instance in the term model (``abort=True`` for the abort variant)."""
    schedule.validate()
    r_max = schedule.r_max
    model = "abort" if abort else "term"
    view = RunView(model, alice.input, bob.input, alphabet_size, r_max, erasure, schedule, protocol)
    adversary.reset(view)
    parties = {ALICE: alice, BOB: bob}
    ter = {ALICE: None, BOB: None}
    outputs = {ALICE: None, BOB: None}
    rounds, senders, sent_l, deliv_l = view.slot_rounds, view.slot_senders, view.sent, view.delivered

    for rnd in range(1, r_max + 1):
        actions = {}
        for role in ROLES:
            if ter[role] is not None:
                continue
            party = parties[role]
            if rnd == r_max:
                ter[role], outputs[role] = r_max, party.final_output()
                continue
            act = party.next_action(rnd)
            if isinstance(act, Terminate):
                ter[role], outputs[role] = rnd, act.output
            else:
                actions[role] = act
        if rnd == r_max:
            break
        this_round = []
        for role in ROLES:
            if not schedule.speaks(role, rnd):
                act = actions.get(role, SILENCE)
                if act != SILENCE:
                    raise ProtocolFault(f"party {role} spoke outside its schedule in round {rnd}")
                continue
            sym = _check_sent(actions.get(role, SILENCE), alphabet_size, role, rnd)
            slot = len(sent_l)
            rounds.append(rnd)
            senders.append(role)
            sent_l.append(sym)
            got = adversary.corrupt(slot, rnd, role, sym)
            got = _check_delivered(sym, got, alphabet_size, erasure, rnd)
            deliv_l.append(got)
            this_round.append((role, got))
        for role, got in this_round:
            receiver = other(role)
            if ter[receiver] is None:
                parties[receiver].deliver(rnd, got)

    raw = (outputs[ALICE], outputs[BOB])
    final = raw
    if abort and min(ter[ALICE], ter[BOB]) != r_max:
        final = (ABORT, ABORT)
    return RunRecord(
        model, r_max, alphabet_size, rounds, senders, sent_l, deliv_l, final, raw,
        (alice.input, bob.input), schedule, ter[ALICE], ter[BOB], (alice, bob),
    )


def run_adp(
    alice: Party,
    bob: Party,
    adversary: Adversary,
    r_max: int,
    *,
    alphabet_size: int,
    erasure: bool = False,
    protocol: Any = None,
) -> RunRecord:
    """Execute one instance in the adp model; both parties own a slot every round."""
    if not isinstance(r_max, int) or r_max < 1:
        raise ConfigurationError(f"r_max must be a positive int, got {r_max!r}")
    view = RunView("adp", alice.input, bob.input, alphabet_size, r_max, erasure, None, protocol)
    adversary.reset(view)
    rounds, senders, sent_l, deliv_l = view.slot_rounds, view.slot_senders, view.sent, view.delivered
    corrupt = adversary.corrupt
    # hot loop: checks are inlined
    for rnd in range(1, r_max + 1):
        a = alice.next_action(rnd)
        b = bob.next_action(rnd)
        if a != SILENCE and not (isinstance(a, int) and 0 <= a < alphabet_size):
            _check_sent(a, alphabet_size, ALICE, rnd)
        if b != SILENCE and not (isinstance(b, int) and 0 <= b < alphabet_size):
            _check_sent(b, alphabet_size, BOB, rnd)
        slot = 2 * (rnd - 1)
        da = corrupt(slot, rnd, ALICE, a)
        if da != a:
            da = _check_delivered(a, da, alphabet_size, erasure, rnd)
        rounds.append(rnd)
        senders.append(ALICE)
        sent_l.append(a)
        deliv_l.append(da)
        db = corrupt(slot + 1, rnd, BOB, b)
        if db != b:
            db = _check_delivered(b, db, alphabet_size, erasure, rnd)
        rounds.append(rnd)
        senders.append(BOB)
        sent_l.append(b)
        deliv_l.append(db)
        alice.deliver(rnd, db)
        bob.deliver(rnd, da)

    outputs = (alice.final_output(), bob.final_output())
    return RunRecord(
        "adp", r_max, alphabet_size, rounds, senders, sent_l, deliv_l, outputs, outputs,
        (alice.input, bob.input), None, None, None, (alice, bob),
    )


def metrics_term(record: RunRecord) -> Metrics:
    if record.model not in ("term", "abort"):
        raise ConfigurationError(f"metrics_term needs a term/abort record, got {record.model!r}")
    sched = record.schedule
    ter = {ALICE: record.ter_a, BOB: record.ter_b}
    cc = sum(
        1
        for role in ROLES
        for rnd in range(1, ter[role])
        if sched.speaks(role, rnd)
    )
    rc = max(record.ter_a, record.ter_b)
    nc = sum(
        1
        for rnd, s, d in zip(record.slot_rounds, record.sent, record.delivered)
        if rnd < rc and s != d
    )
    return Metrics(cc, nc, noise_rate(nc, cc), rc)


def metrics_adp(record: RunRecord) -> Metrics:
    if record.model != "adp":
        raise ConfigurationError(f"metrics_adp needs an adp record, got {record.model!r}")
    cc = sum(1 for s in record.sent if s != SILENCE)
    nc = sum(1 for s, d in zip(record.sent, record.delivered) if s != d)
    return Metrics(cc, nc, noise_rate(nc, cc))


def metrics(record: RunRecord) -> Metrics:
    return metrics_adp(record) if record.model == "adp" else metrics_term(record)
