from .suite import CryptoSuite, DEFAULT_SUITE
from .hashing import (
    Digest,
    encode_fields,
    decode_fields,
    hash_bytes,
    hash_fields,
    xor,
    int_to_bytes,
    bytes_to_int,
)
from .symmetric import sym_encrypt, sym_decrypt, derive_key, CIPHERTEXT_OVERHEAD
from .fuzzy import (
    FuzzyPair,
    fuzzy_gen,
    fuzzy_rep,
    hamming,
    flip_bits,
    random_reading,
    bits_to_bytes,
    bytes_to_bits,
)
from .puf import PufDevice
from .group import ModGroup, tag_generate, encode_index
from .totp import totp_counter
from .entropy import shannon_entropy, is_low_entropy, simulated_sensor_stream
