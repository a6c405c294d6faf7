"""Additive structure of the small finite fields used by the codes.

Only addition is ever needed: messages are bit vectors, so encoding is a sum
of generator rows, and rolling changes only add/subtract symbols.
"""

from dataclasses import dataclass

from ..errors import ConfigurationError


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class Field:
    size: int

    def __post_init__(self):
        q = self.size
        if not (isinstance(q, int) and q >= 2 and (q & (q - 1) == 0 or _is_prime(q))):
            raise ConfigurationError(f"field size must be a prime or a power of two, got {q!r}")

    @property
    def char2(self) -> bool:
        return self.size & (self.size - 1) == 0

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.char2 else (a + b) % self.size

    def sub(self, a: int, b: int) -> int:
        return a ^ b if self.char2 else (a - b) % self.size

    def elements(self) -> range:
        return range(self.size)
