"""Attacks that defeat any protocol beyond a given noise rate.

Both attacks run shadow copies of the parties on alternative inputs, feed
them exactly what the real channel delivered, and corrupt the real stream
so that one party cannot tell which alternative it is facing.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..channel import ALICE, BOB, SILENCE, Adversary, RunView, Terminate
from ..errors import ConfigurationError
from ..codes.field import Field


class Shadow:
    """A private copy of one endpoint driven by the real delivered stream."""

    def __init__(self, party, r_max: int):
        self.party = party
        self.r_max = r_max
        self.done_round = 0  # rounds whose action has been computed
        self.fed_round = 0  # rounds whose deliveries have been applied
        self.ter = None
        self.actions: dict[int, int] = {}

    def advance(self, rnd: int, delivered_to_me) -> None:
        """Compute actions up to ``rnd``; ``delivered_to_me(r)`` gives the round-r symbol or None."""
        while self.done_round < rnd:
            r = self.done_round + 1
            while self.fed_round < r - 1:
                self.fed_round += 1
                sym = delivered_to_me(self.fed_round)
                if self.ter is None and sym is not None:
                    self.party.deliver(self.fed_round, sym)
            if self.ter is None:
                if r >= self.r_max:
                    self.ter = self.r_max
                else:
                    act = self.party.next_action(r)
                    if isinstance(act, Terminate):
                        self.ter = r
                    else:
                        self.actions[r] = act
            self.done_round = r

    def symbol(self, rnd: int) -> int:
        return self.actions.get(rnd, SILENCE)


class _ShadowAdversary(Adversary):
    def reset(self, view: RunView) -> None:
        super().reset(view)
        if view.protocol is None or not hasattr(view.protocol, "party"):
            raise ConfigurationError("this attack needs the protocol description in the view")
        self._delivered = {ALICE: {}, BOB: {}}  # sender -> round -> delivered
        self._seen = 0

    def _sync(self) -> None:
        v = self.view
        while self._seen < len(v.delivered):
            i = self._seen
            self._delivered[v.slot_senders[i]][v.slot_rounds[i]] = v.delivered[i]
            self._seen += 1

    def _shadow(self, role: str, inp) -> Shadow:
        return Shadow(self.view.protocol.party(role, inp), self.view.r_max)

    def _feed(self, role: str):
        src = self._delivered[BOB if role == ALICE else ALICE]
        return src.get


def _canonical(a, b) -> list:
    try:
        return sorted([a, b])
    except TypeError:
        return sorted([a, b], key=repr)


class MidpointAdversary(_ShadowAdversary):
    """Alternates each direction between the transcripts of two candidate inputs.

    Alice is simulated on both Alice inputs, Bob on both Bob inputs.  Where
    the two shadows of the sender agree nothing happens; otherwise odd
    disagreements get the first input's symbol and even ones the second's.
    The order within each pair is canonical (smaller input first) so the four
    real instances see exactly the same corruptions.  Stops for good at the
    first termination of any real or shadow party.
    """

    def __init__(self, x_alt, y_alt):
        self.x_alt, self.y_alt = x_alt, y_alt

    def reset(self, view: RunView) -> None:
        super().reset(view)
        xs = _canonical(view.x, self.x_alt)
        ys = _canonical(view.y, self.y_alt)
        self.pairs = {
            ALICE: [self._shadow(ALICE, v) for v in xs],
            BOB: [self._shadow(BOB, v) for v in ys],
        }
        self.flips = {ALICE: 0, BOB: 0}
        self.corrupted = {ALICE: 0, BOB: 0}
        self.stopped_at = None

    def corrupt(self, slot, rnd, sender, sent):
        if self.stopped_at is not None:
            return sent
        self._sync()
        for role, shadows in self.pairs.items():
            for sh in shadows:
                sh.advance(rnd, self._feed(role))
        if any(sh.ter is not None and sh.ter <= rnd for s in self.pairs.values() for sh in s):
            self.stopped_at = rnd
            return sent
        first, second = (sh.symbol(rnd) for sh in self.pairs[sender])
        if first == second:
            return sent
        self.flips[sender] += 1
        out = first if self.flips[sender] % 2 else second
        self.corrupted[sender] += out != sent
        return out


class RollingAdversary(_ShadowAdversary):
    """Makes Alice's view identical under Bob inputs ``y`` and ``y_alt``.

    Only Bob's slots are touched.  After a clean prefix, rounds are taken in
    pairs; the first slot of each pair carries what Bob would send on ``y``
    and the second what he would send on ``y_alt``.  Whichever input Bob
    really has, at most one slot per pair is changed.
    """

    def __init__(self, y, y_alt, clean_prefix: int = 10):
        self.y, self.y_alt, self.clean_prefix = y, y_alt, clean_prefix

    def reset(self, view: RunView) -> None:
        super().reset(view)
        self.bobs = [self._shadow(BOB, self.y), self._shadow(BOB, self.y_alt)]

    def corrupt(self, slot, rnd, sender, sent):
        if sender != BOB or rnd <= self.clean_prefix or self.y == self.y_alt:
            return sent
        self._sync()
        for sh in self.bobs:
            sh.advance(rnd, self._feed(BOB))
        which = (rnd - self.clean_prefix - 1) % 2
        return self.bobs[which].symbol(rnd)


@dataclass(frozen=True)
class RollingChangeString:
    z: tuple

    def weight(self, upto: int | None = None) -> int:
        return sum(1 for v in self.z[:upto] if v != 0)


def rolling_change(x, y, field: Field | int = 2) -> RollingChangeString:
    """A change ``z`` that moves ``x`` at least as close to ``y`` as it stays to ``x``,
    with at most ``(j + 1) / 2`` nonzero entries in every length-``j`` prefix.

    Differing positions are paired up in order and the second of each pair is
    set to ``y``'s value; an odd leftover also moves its (last) position.
    """
    fld = field if isinstance(field, Field) else Field(field)
    if len(x) != len(y):
        raise ConfigurationError(f"strings differ in length: {len(x)} vs {len(y)}")
    diff = [i for i, (a, b) in enumerate(zip(x, y)) if a != b]
    z = [0] * len(x)
    flip = diff[1::2]
    if len(diff) % 2:
        flip.append(diff[-1])
    for i in flip:
        z[i] = fld.sub(y[i], x[i])
    return RollingChangeString(tuple(z))
