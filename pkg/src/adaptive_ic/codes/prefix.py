"""Random linear codes with the prefix property.

A single ``n x max_len`` generator over GF(2^m) is drawn; the code of length
``L`` uses only its first ``L`` columns, so every shorter codeword of ``x`` is a
prefix of every longer one.  Messages are n-bit ints (bit ``i`` selects row
``i``).  The full codebook (``2^n`` rows) is kept, which is what makes
exhaustive nearest-codeword decoding cheap at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import ConfigurationError, GenerationError
from ..rng import derive_seed
from .field import Field

MAX_MESSAGE_BITS = 16


@dataclass(eq=False)
class PrefixCodeFamily:
    n: int
    field_size: int
    lengths: tuple
    eps: float
    seed: int
    generator: np.ndarray
    codebook: np.ndarray
    min_weight_profile: np.ndarray  # [L] = min distance of the length-L truncation
    verify_from: int | None = None
    attempts: int = 1
    verified_rel_distance: tuple = field(default=())

    @property
    def max_length(self) -> int:
        return self.generator.shape[1]

    def distance_at(self, length: int) -> int:
        return int(self.min_weight_profile[length])

    def encode_prefix(self, x: int, length: int) -> np.ndarray:
        if not 0 <= x < 1 << self.n:
            raise ConfigurationError(f"message {x!r} is not an {self.n}-bit value")
        if not 1 <= length <= self.max_length:
            raise ConfigurationError(f"length {length} outside 1..{self.max_length}")
        return self.codebook[x, :length]

    def decode_prefix(self, received) -> tuple[int, int]:
        """Nearest codeword of the truncation matching ``len(received)``; ties -> smallest message."""
        received = np.asarray(received)
        length = received.shape[0]
        if not 1 <= length <= self.max_length:
            raise ConfigurationError(f"received length {length} outside 1..{self.max_length}")
        dist = (self.codebook[:, :length] != received).sum(axis=1)
        best = int(np.argmin(dist))
        return best, int(dist[best])

    def describe(self) -> dict:
        return {
            "kind": "prefix_family",
            "n": self.n,
            "eps": self.eps,
            "lengths": list(self.lengths),
            "field_size": self.field_size,
            "seed": self.seed,
            "verify_from": self.verify_from,
        }

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PrefixCodeFamily":
        d = json.loads(text)
        if d.pop("kind", None) != "prefix_family":
            raise ConfigurationError("not a prefix-family description")
        return gen_prefix_family(**d)


def _codebook(gen: np.ndarray, fld: Field) -> np.ndarray:
    n = gen.shape[0]
    book = np.zeros((1 << n, gen.shape[1]), dtype=np.int64)
    for m in range(1, 1 << n):
        low = (m & -m).bit_length() - 1
        book[m] = book[m & (m - 1)] ^ gen[low] if fld.char2 else (book[m & (m - 1)] + gen[low]) % fld.size
    return book


def _min_weight_profile(book: np.ndarray) -> np.ndarray:
    # the code is linear over GF(2^m) with binary messages: c(a) - c(b) = c(a xor b),
    # so the pairwise minimum distance is the minimum nonzero-codeword weight.
    cum = np.cumsum(book[1:] != 0, axis=1)
    return np.concatenate([[0], cum.min(axis=0)])


def gen_prefix_family(
    n: int,
    eps: float,
    lengths,
    field_size: int = 16,
    seed: int = 0,
    verify_from: int | None = None,
    max_retries: int = 200,
) -> PrefixCodeFamily:
    """Sample generators until every listed truncation has relative distance >= 1 - 2*eps.

    ``verify_from`` additionally demands the bound at *every* truncation length
    from that value up to ``max(lengths)`` (needed when replies use arbitrary
    truncations).
    """
    lengths = tuple(int(v) for v in lengths)
    if not 1 <= n <= MAX_MESSAGE_BITS:
        raise ConfigurationError(f"n must be in 1..{MAX_MESSAGE_BITS} for exhaustive verification")
    if not lengths or any(v <= 0 for v in lengths) or any(a >= b for a, b in zip(lengths, lengths[1:])):
        raise ConfigurationError(f"lengths must be positive and strictly increasing: {lengths}")
    if not 0 < eps < 0.5:
        raise ConfigurationError(f"eps must be in (0, 1/2), got {eps}")
    fld = Field(field_size)
    if not fld.char2:
        raise ConfigurationError("prefix families use characteristic-2 fields (size a power of two)")
    max_len = lengths[-1]
    need = 1 - 2 * Fraction(str(eps))
    check = list(lengths)
    if verify_from is not None:
        if not 1 <= verify_from <= max_len:
            raise ConfigurationError(f"verify_from={verify_from} outside 1..{max_len}")
        check = sorted(set(check) | set(range(verify_from, max_len + 1)))

    for attempt in range(1, max_retries + 1):
        rng = np.random.default_rng(derive_seed("prefix", n, field_size, seed, attempt))
        gen = rng.integers(0, field_size, size=(n, max_len), dtype=np.int64)
        book = _codebook(gen, fld)
        prof = _min_weight_profile(book)
        if all(prof[L] >= need * L for L in check):
            rel = tuple(float(prof[L]) / L for L in lengths)
            return PrefixCodeFamily(
                n, field_size, lengths, eps, seed, gen, book, prof, verify_from, attempt, rel
            )
    raise GenerationError(
        f"no generator reached relative distance {float(need):.3f} in {max_retries} attempts; "
        "enlarge the field or the lengths"
    )


def ecc_encode(family: PrefixCodeFamily, i: int, x: int) -> np.ndarray:
    """Codeword of ``x`` under the ``i``-th listed code (0-based)."""
    if not 0 <= i < len(family.lengths):
        raise ConfigurationError(f"code index {i} outside 0..{len(family.lengths) - 1}")
    return family.encode_prefix(x, family.lengths[i])


def ecc_decode(family: PrefixCodeFamily, received, length_index: int) -> tuple[int, int]:
    """Exhaustive nearest-codeword decoding; returns ``(message, hamming distance)``."""
    if not 0 <= length_index < len(family.lengths):
        raise ConfigurationError(f"code index {length_index} outside 0..{len(family.lengths) - 1}")
    want = family.lengths[length_index]
    if len(received) != want:
        raise ConfigurationError(f"received {len(received)} symbols, code length is {want}")
    return family.decode_prefix(received)
