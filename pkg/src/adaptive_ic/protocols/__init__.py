from .br import BREmulator, parse, serialize
from .br_half import BRHalfProtocol, effective_noise, make_br_half
from .noiseless import NoiselessProtocolTree
from .one_third import OneThirdProtocol, make_one_third
from .sample import FullExchangeProtocol
from .shared_rand import EpochLog, SharedRandProtocol, epoch_logs, make_shared_rand
from .two_thirds import TwoThirdsProtocol, evaluate_toggle_patterns, make_two_thirds
