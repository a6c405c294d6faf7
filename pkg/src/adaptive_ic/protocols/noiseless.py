"""Noiseless protocols in root-to-leaf form.

Levels alternate owners: the edge leaving a node at even depth is chosen by
Alice from ``(x, path)``, the edge at odd depth by Bob from ``(y, path)``.
Paths are strings over ``'0'/'1'``, which keeps them hashable and readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from ..channel import ALICE, BOB
from ..errors import ConfigurationError


def owner(depth: int) -> str:
    return ALICE if depth % 2 == 0 else BOB


@dataclass(frozen=True)
class NoiselessProtocolTree:
    depth: int
    alice_bit: Callable[[Any, str], int]
    bob_bit: Callable[[Any, str], int]
    leaf_value: Callable[[str], Any]
    inputs_a: tuple = ()
    inputs_b: tuple = ()
    name: str = "tree"

    def __post_init__(self):
        if self.depth < 2 or self.depth % 2:
            raise ConfigurationError(f"tree depth must be even and >= 2, got {self.depth}")

    def bit(self, role: str, inp, path: str) -> int:
        b = (self.alice_bit if role == ALICE else self.bob_bit)(inp, path)
        if b not in (0, 1):
            raise ConfigurationError(f"bit function returned {b!r}")
        return b

    def walk(self, x, y) -> str:
        path = ""
        while len(path) < self.depth:
            who = owner(len(path))
            path += str(self.bit(who, x if who == ALICE else y, path))
        return path

    def evaluate(self, x, y):
        return self.leaf_value(self.walk(x, y))

    @classmethod
    def identity_exchange(cls, depth: int) -> "NoiselessProtocolTree":
        """Each party sends its ``depth/2``-bit input one bit per turn; the leaf is ``(x, y)``."""
        half = depth // 2

        def leaf(path: str):
            return int(path[0::2][::-1], 2), int(path[1::2][::-1], 2)

        return cls(
            depth,
            lambda x, path: (x >> (len(path) // 2)) & 1,
            lambda y, path: (y >> (len(path) // 2)) & 1,
            leaf,
            tuple(range(1 << half)),
            tuple(range(1 << half)),
            "identity_exchange",
        )

    @classmethod
    def pointer_chase(cls, depth: int, width: int = 4) -> "NoiselessProtocolTree":
        """Adaptive tree: the next bit is the input bit at a position chosen by the path so far."""

        def pick(v, path: str) -> int:
            pos = (int(path, 2) if path else 0) % width
            return (v >> pos) & 1

        return cls(depth, pick, pick, lambda path: path, tuple(range(1 << width)),
                   tuple(range(1 << width)), "pointer_chase")
