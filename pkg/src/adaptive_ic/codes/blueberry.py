"""Blueberry code: a secret, per-position random injection of a small input
alphabet into a large output alphabet.

Any replacement of a coded symbol lands outside the image, and is therefore
detected, unless it happens to hit the image of another input symbol.
Positions are unbounded; each position's map is derived lazily from the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..errors import ConfigurationError
from ..rng import derive_seed


class BlueberryTable:
    def __init__(self, in_size: int, out_size: int, seed: int, positions: int | None = None):
        if not 1 <= in_size <= out_size:
            raise ConfigurationError(f"need 1 <= |in| <= |out|, got {in_size}, {out_size}")
        self.in_size = in_size
        self.out_size = out_size
        self.seed = seed
        self.positions = positions
        self._maps: dict[int, tuple[list[int], dict[int, int]]] = {}

    @property
    def q(self) -> Fraction:
        return Fraction(self.in_size, self.out_size)

    def _map(self, position: int):
        m = self._maps.get(position)
        if m is None:
            if position < 0 or (self.positions is not None and position >= self.positions):
                raise ConfigurationError(f"position {position} outside the table")
            rng = random.Random(derive_seed("blueberry", self.seed, position))
            fwd = rng.sample(range(self.out_size), self.in_size)
            m = (fwd, {v: s for s, v in enumerate(fwd)})
            self._maps[position] = m
        return m

    def encode(self, position: int, symbol: int) -> int:
        if not 0 <= symbol < self.in_size:
            raise ConfigurationError(f"symbol {symbol} outside the input alphabet")
        return self._map(position)[0][symbol]

    def decode(self, position: int, received: int) -> int | None:
        """The input symbol, or ``None`` when ``received`` is not in the image."""
        return self._map(position)[1].get(received)


class IdentityTable:
    """Drop-in replacement with no secrecy, for the erasure-only channel."""

    def __init__(self, in_size: int):
        self.in_size = in_size
        self.out_size = in_size

    def encode(self, position: int, symbol: int) -> int:
        if not 0 <= symbol < self.in_size:
            raise ConfigurationError(f"symbol {symbol} outside the input alphabet")
        return symbol

    def decode(self, position: int, received: int) -> int | None:
        return received if 0 <= received < self.in_size else None


def bb_encode(table, position: int, symbol: int) -> int:
    return table.encode(position, symbol)


def bb_decode(table, position: int, received: int) -> int | None:
    return table.decode(position, received)
