"""k-silence encoding.

Value ``i`` of a domain of size ``n`` becomes ``k*n`` slots that are silent
except block ``i``, which carries ``k`` copies of the designated letter.
Decoding is nearest-codeword: against codeword ``i`` the Hamming distance is
``k + total - 2*count_i``, so the winner is the block with the most letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..channel import SILENCE
from ..errors import ConfigurationError

SIGMA = 0


@dataclass(frozen=True)
class SEValue:
    index: int  # 1-based
    gap: int

    def __post_init__(self):
        if self.gap <= 0:
            raise ValueError("a decoded value always has a positive gap")


class SEErasure:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SE_ERASURE"


SE_ERASURE = SEErasure()
SilenceDecodeResult = SEValue | SEErasure


def _check(k: int, n: int) -> None:
    if k < 1 or n < 1:
        raise ConfigurationError(f"k and n must be positive, got k={k}, n={n}")


def se_encode(i: int, k: int, n: int, letter: int = SIGMA) -> tuple:
    _check(k, n)
    if not 1 <= i <= n:
        raise ConfigurationError(f"value index {i} outside 1..{n}")
    word = [SILENCE] * (k * n)
    word[(i - 1) * k : i * k] = [letter] * k
    return tuple(word)


def block_counts(word, k: int, n: int, letter: int = SIGMA) -> list[int]:
    """Occurrences of ``letter`` in each of the ``n`` blocks.

    Anything other than the letter (silence, erasure marks, other letters)
    is at the same distance from every codeword, so it is not counted.
    """
    return [sum(1 for s in word[b * k : (b + 1) * k] if s == letter) for b in range(n)]


def se_decode(word, k: int, n: int, letter: int = SIGMA) -> SilenceDecodeResult:
    _check(k, n)
    if len(word) != k * n:
        raise ConfigurationError(f"word has {len(word)} slots, expected {k * n}")
    counts = block_counts(word, k, n, letter)
    best = max(counts)
    if counts.count(best) > 1:
        return SE_ERASURE
    i = counts.index(best)
    runner_up = max((c for b, c in enumerate(counts) if b != i), default=0)
    return SEValue(i + 1, best - runner_up)


def se_candidates(word, k: int, n: int, letter: int = SIGMA) -> frozenset | None:
    """0-based blocks tied for the most letters, or ``None`` when every block ties."""
    counts = block_counts(word, k, n, letter)
    best = max(counts)
    tied = frozenset(b for b, c in enumerate(counts) if c == best)
    return None if len(tied) == n else tied
