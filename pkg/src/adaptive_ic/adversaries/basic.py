"""Generic adversaries: random budgeted noise and exhaustive oblivious patterns."""

from __future__ import annotations

import itertools
import math
from typing import Iterator

from ..channel import ERASURE, SILENCE, Adversary, RunView
from ..errors import ConfigurationError
from ..rng import make_rng


class NoNoise(Adversary):
    pass


def _alternative(sent: int, idx: int) -> int:
    """The ``idx``-th symbol of [SILENCE, 0, 1, ...] after removing ``sent``."""
    pos = sent + 1
    return (idx + 1 if idx >= pos else idx) - 1


class RandomBudgeted(Adversary):
    """Each slot independently, with probability ``p``, gets a uniformly random
    different symbol from the alphabet plus silence (an erasure mark on an
    erasure channel)."""

    def __init__(self, p: float, seed: int = 0):
        if not 0 <= p <= 1:
            raise ConfigurationError(f"p must be in [0, 1], got {p}")
        self.p, self.seed = p, seed

    def reset(self, view: RunView) -> None:
        super().reset(view)
        self.rng = make_rng("random_budgeted", self.seed)
        self.corruptions = 0

    def corrupt(self, slot, rnd, sender, sent):
        if self.p == 0 or self.rng.random() >= self.p:
            return sent
        self.corruptions += 1
        if self.view.erasure:
            return ERASURE
        return _alternative(sent, self.rng.randrange(self.view.alphabet_size))


class RandomDeletion(Adversary):
    """Deletes (silences, or erases on an erasure channel) each non-silent slot with probability ``p``."""

    def __init__(self, p: float, seed: int = 0):
        if not 0 <= p <= 1:
            raise ConfigurationError(f"p must be in [0, 1], got {p}")
        self.p, self.seed = p, seed

    def reset(self, view: RunView) -> None:
        super().reset(view)
        self.rng = make_rng("random_deletion", self.seed)

    def corrupt(self, slot, rnd, sender, sent):
        if sent == SILENCE or self.rng.random() >= self.p:
            return sent
        return ERASURE if self.view.erasure else SILENCE


class SilenceAll(Adversary):
    """Deletes everything one direction (or both) sends."""

    def __init__(self, senders=("A", "B")):
        self.senders = tuple(senders)

    def corrupt(self, slot, rnd, sender, sent):
        if sender not in self.senders or sent == SILENCE:
            return sent
        return ERASURE if self.view.erasure else SILENCE


class PatternAdversary(Adversary):
    """Oblivious pattern: ``{slot: alternative index}``; the index picks among the
    symbols different from whatever is sent (0 is the first of [SILENCE, 0, 1, ...])."""

    def __init__(self, pattern):
        self.pattern = dict(pattern)

    def corrupt(self, slot, rnd, sender, sent):
        alt = self.pattern.get(slot)
        if alt is None:
            return sent
        if self.view.erasure:
            return ERASURE
        return _alternative(sent, alt)


def enumerate_patterns(slot_count: int, max_weight: int, per_slot_alternatives: int = 1) -> Iterator[tuple]:
    """Every pattern with at most ``max_weight`` corrupted slots, as tuples of (slot, alternative).

    Weight-major, then lexicographic in slots, then in alternatives.
    """
    if slot_count < 0 or max_weight < 0 or per_slot_alternatives < 1:
        raise ConfigurationError("need slot_count >= 0, max_weight >= 0, alternatives >= 1")
    alts = range(per_slot_alternatives)
    for w in range(min(max_weight, slot_count) + 1):
        for slots in itertools.combinations(range(slot_count), w):
            for choice in itertools.product(alts, repeat=w):
                yield tuple(zip(slots, choice))


def count_patterns(slot_count: int, max_weight: int, per_slot_alternatives: int = 1) -> int:
    return sum(
        math.comb(slot_count, w) * per_slot_alternatives**w
        for w in range(min(max_weight, slot_count) + 1)
    )
