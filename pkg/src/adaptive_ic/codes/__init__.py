from .blueberry import BlueberryTable, IdentityTable, bb_decode, bb_encode
from .field import Field
from .prefix import PrefixCodeFamily, ecc_decode, ecc_encode, gen_prefix_family
from .silence import SE_ERASURE, SEValue, se_decode, se_encode
from .treecode import (
    HashTreeCode, TableTreeCode, TreeCode, TreeDecoder, TreeEncoder, tc_decode, tc_encode,
    tc_encode_step, tc_gen_hashed, tc_gen_verified, verify_distance,
)
