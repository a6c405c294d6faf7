from .attacks import MidpointAdversary, RollingAdversary, RollingChangeString, Shadow, rolling_change
from .basic import (
    NoNoise, PatternAdversary, RandomBudgeted, RandomDeletion, SilenceAll, count_patterns,
    enumerate_patterns,
)
from .targeted import SteerOneThird


def midpoint_adversary(x_alt, y_alt) -> MidpointAdversary:
    return MidpointAdversary(x_alt, y_alt)


def rolling_adversary(y, y_alt, clean_prefix: int = 10) -> RollingAdversary:
    return RollingAdversary(y, y_alt, clean_prefix)


def random_budgeted(p: float, seed: int = 0) -> RandomBudgeted:
    return RandomBudgeted(p, seed)
