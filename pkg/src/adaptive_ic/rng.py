"""Seed derivation. Every random draw in a run comes from a seed derived here."""

import hashlib
import random


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from any sequence of ints/strings."""
    h = hashlib.blake2b(repr(parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") >> 1


def trial_seed(experiment_seed: int, trial: int) -> int:
    return derive_seed("trial", experiment_seed, trial)


def make_rng(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
