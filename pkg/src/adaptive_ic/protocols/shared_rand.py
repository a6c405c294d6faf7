"""Protocol for noise rates up to ``1 - eps`` with shared randomness.

Every emulated round is two epochs, Alice's label then Bob's.  An epoch:

    window 0            sender repeats the coded label in k slots
    repeat t_rep times  1 slot: receiver sends a coded repeat-request if it
                        still has no valid label; k slots: sender resends,
                        but only after a valid request

Every slot uses a fresh secret Blueberry map (position = slot index), so a
forged or altered symbol is detected with probability ``1 - q``.  A window
is valid when at least one slot decodes, all decoded slots agree, and the
value is a label.  The epoch yields the first valid label, else an erasure.

With ``erasure_only`` the Blueberry maps become identities and the channel
may only erase, which needs no shared randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..channel import ALICE, BOB, ERASURE, SILENCE, Party, RunRecord, run_adp
from ..codes.blueberry import BlueberryTable, IdentityTable
from ..codes.treecode import TreeCode, tc_gen_hashed
from ..errors import ConfigurationError
from .br import GAMMA_SIZE, BREmulator
from .noiseless import NoiselessProtocolTree

DEFAULT_OUT_SIZE = 1 << 19


@dataclass
class EpochLog:
    index: int
    sender: str
    label: int
    requests_received: int = 0
    requests_honored: int = 0
    outcome: int | None = None  # delivered label, None when deleted
    communication: int = 0
    corruptions: int = 0
    lucky: bool = False  # an undetected forgery was accepted somewhere in the epoch


class SharedRandParty(Party):
    def __init__(self, role: str, inp, proto: "SharedRandProtocol", table):
        self.role, self.input = role, inp
        self.p = proto
        self.table = table
        self.br = BREmulator(role, inp, proto.tree, proto.code, proto.n_rounds, proto.max_expansions)
        self.req = proto.code.label_size
        self._label = None  # label being sent in the current own epoch
        self._got = None  # label received in the current other epoch
        self._window: list = []
        self._request_ok = False

    def _slot_pos(self, rnd: int, role: str) -> int:
        return 2 * (rnd - 1) + (role == BOB)

    def _locate(self, rnd: int):
        """(epoch sender, offset inside epoch)."""
        e = (rnd - 1) // self.p.epoch_len
        return (ALICE if e % 2 == 0 else BOB), (rnd - 1) % self.p.epoch_len

    def _phase(self, off: int):
        """('data', window index, slot in window) or ('req', iteration)."""
        k = self.p.k
        if off < k:
            return "data", 0, off
        it, r = divmod(off - k, k + 1)
        return ("req", it, 0) if r == 0 else ("data", it + 1, r - 1)

    def next_action(self, rnd: int):
        sender, off = self._locate(rnd)
        kind, w, s = self._phase(off)
        pos = self._slot_pos(rnd, self.role)
        if sender == self.role:
            if off == 0:
                self._label = self.br.next_label()
            if kind == "data" and (w == 0 or self._request_ok):
                return self.table.encode(pos, self._label)
            return SILENCE
        if kind == "req" and self._got is None:
            return self.table.encode(pos, self.req)
        return SILENCE

    def deliver(self, rnd: int, symbol: int) -> None:
        sender, off = self._locate(rnd)
        kind, w, s = self._phase(off)
        pos = self._slot_pos(rnd, "B" if self.role == ALICE else ALICE)
        if sender == self.role:
            if kind == "req":
                self._request_ok = self._decode(pos, symbol) == self.req
            elif s == self.p.k - 1:
                self._request_ok = False
            return
        if kind == "data":
            self._window.append(self._decode(pos, symbol))
            if s == self.p.k - 1:
                vals = set(self._window)
                vals.discard(None)
                if self._got is None and len(vals) == 1:
                    v = vals.pop()
                    if v != self.req:
                        self._got = v
                self._window = []
        if off == self.p.epoch_len - 1:
            self.br.receive(self._got)
            self._got = None

    def _decode(self, pos: int, symbol: int):
        if symbol == SILENCE or symbol == ERASURE:
            return None
        return self.table.decode(pos, symbol)

    def final_output(self):
        return self.br.output()


@dataclass
class SharedRandProtocol:
    tree: NoiselessProtocolTree
    eps: float
    code: TreeCode
    erasure_only: bool = False
    c_n: float = 4
    out_size: int = DEFAULT_OUT_SIZE
    max_expansions: int = 200_000
    k: int = field(init=False)
    t_rep: int = field(init=False)

    model = "adp"

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ConfigurationError(f"eps must be in (0, 1), got {self.eps}")
        self.code.require_verified()
        if self.code.arity != GAMMA_SIZE:
            raise ConfigurationError(f"tree code arity must be {GAMMA_SIZE}")
        eps = Fraction(str(self.eps))
        self.k = math.ceil(1 / eps)
        self.t_rep = math.ceil(self.k / eps)
        self.in_size = self.code.label_size + 1  # labels plus the repeat-request
        if self.erasure_only:
            self.alphabet_size = self.in_size
        else:
            self.alphabet_size = self.out_size
            q = Fraction(self.in_size, self.out_size)
            if not q < Fraction(1, (self.k * self.t_rep) ** 2):
                raise ConfigurationError(
                    f"|in|/|out| = {q} is not below (k*t_rep)^-2; enlarge out_size"
                )
        self.epoch_len = self.k + self.t_rep * (self.k + 1)
        self.n_rounds = math.ceil(Fraction(str(self.c_n)) * self.tree.depth / eps)
        self.r_max = 2 * self.epoch_len * self.n_rounds
        self.name = "shared_rand_erasure" if self.erasure_only else "shared_rand"

    def table(self, shared_seed: int):
        if self.erasure_only:
            return IdentityTable(self.in_size)
        return BlueberryTable(self.in_size, self.out_size, shared_seed)

    def party(self, role: str, inp, shared_seed: int = 0) -> SharedRandParty:
        return SharedRandParty(role, inp, self, self.table(shared_seed))

    def parties(self, x, y, shared_seed: int = 0):
        # both ends draw the same maps from the shared seed; the adversary never sees it
        return self.party(ALICE, x, shared_seed), self.party(BOB, y, shared_seed)

    def expected(self, x, y):
        v = self.tree.evaluate(x, y)
        return v, v

    def run(self, x, y, adversary, shared_seed: int = 0) -> RunRecord:
        a, b = self.parties(x, y, shared_seed)
        return run_adp(a, b, adversary, self.r_max, alphabet_size=self.alphabet_size,
                       erasure=self.erasure_only, protocol=self)


def make_shared_rand(tree: NoiselessProtocolTree, eps: float, code: TreeCode | None = None, *,
                     erasure_only: bool = False, c_n: float = 4, label_size: int = 64,
                     seed: int = 0, out_size: int = DEFAULT_OUT_SIZE,
                     max_expansions: int = 200_000) -> SharedRandProtocol:
    if code is None:
        code = tc_gen_hashed(GAMMA_SIZE, label_size, Fraction(1, 2), seed, verify_depth=3)
    return SharedRandProtocol(tree, eps, code, erasure_only, c_n, out_size, max_expansions)


def epoch_logs(record: RunRecord) -> list[EpochLog]:
    """Rebuild per-epoch accounting from a finished run."""
    proto = record.parties[0].p
    alice, bob = record.parties
    E, k = proto.epoch_len, proto.k
    sent_labels = {ALICE: alice.br.sent_labels, BOB: bob.br.sent_labels}
    got_labels = {ALICE: bob.br.received_labels, BOB: alice.br.received_labels}
    logs = []
    n_epochs = record.r_max // E
    for e in range(n_epochs):
        sender = ALICE if e % 2 == 0 else BOB
        br_round = e // 2
        if br_round >= len(sent_labels[sender]):
            break
        log = EpochLog(e, sender, sent_labels[sender][br_round])
        log.outcome = got_labels[sender][br_round]
        receiver_table = (bob if sender == ALICE else alice).table
        lo, hi = 2 * e * E, 2 * (e + 1) * E
        for slot in range(lo, hi):
            s, d, who = record.sent[slot], record.delivered[slot], record.slot_senders[slot]
            log.communication += s != SILENCE
            if s != d:
                log.corruptions += 1
                if d not in (SILENCE, ERASURE) and receiver_table.decode(slot, d) is not None:
                    log.lucky = True
            off = (record.slot_rounds[slot] - 1) % E
            if who != sender and off >= k and (off - k) % (k + 1) == 0:
                if d not in (SILENCE, ERASURE):
                    log.requests_received += receiver_table.decode(slot, d) == proto.in_size - 1
        log.requests_honored = sum(
            1
            for it in range(proto.t_rep)
            if record.sent[lo + 2 * (k + it * (k + 1) + 1) + (sender == BOB)] != SILENCE
        )
        logs.append(log)
    return logs
