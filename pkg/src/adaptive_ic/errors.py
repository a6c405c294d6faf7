"""Exception hierarchy shared by every module."""


class AdaptiveICError(Exception):
    pass


class ConfigurationError(AdaptiveICError, ValueError):
    """Invalid parameters, schedules or experiment configs."""


class ProtocolFault(AdaptiveICError):
    """A party behaved outside the channel contract (e.g. a letter outside the alphabet)."""


class GenerationError(AdaptiveICError):
    """Randomized construction did not verify within its retry budget."""


class PreconditionError(AdaptiveICError):
    """An object was used outside its stated precondition."""
