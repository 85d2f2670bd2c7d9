"""
Hashing, field encoding and XOR over byte strings.

Multi-argument hash inputs such as h(mk || Y || sid) are encoded with a
4-byte big-endian length prefix per field, so that distinct field lists
never collide. The raw (unprefixed) concatenation is only used to build
concatenated wire values, where the fixed-length layout is the point.

"""

import numpy as np
from cryptography.hazmat.primitives import hashes

from ..errors import LengthMismatchError
from .suite import DEFAULT_SUITE

# A digest is a byte string of exactly suite.digest_length bytes.
Digest = bytes

_LENGTH_PREFIX = 4


def encode_fields(*fields, raw=False):
    """
    Encode a list of byte strings as one byte string.

    Parameters
    ----------
    fields: bytes
        The fields, in order.
    raw: bool (default False)
        If True, concatenate without length prefixes.

    Returns
    -------
    bytes

    """
    if raw:
        return b"".join(fields)
    return b"".join(len(f).to_bytes(_LENGTH_PREFIX, "big") + f for f in fields)


def decode_fields(blob):
    """
    Inverse of encode_fields (with length prefixes).

    """
    parts = []
    position = 0
    while position < len(blob):
        if position + _LENGTH_PREFIX > len(blob):
            raise LengthMismatchError("Truncated length prefix.")
        size = int.from_bytes(blob[position : position + _LENGTH_PREFIX], "big")
        position += _LENGTH_PREFIX
        if position + size > len(blob):
            raise LengthMismatchError("Field runs past the end of the encoding.")
        parts.append(blob[position : position + size])
        position += size
    return parts


def hash_bytes(data, suite=DEFAULT_SUITE):
    """
    Hash a byte string with the suite's hash back-end.

    Returns
    -------
    Digest
        suite.digest_length bytes.

    """
    digest = hashes.Hash(suite.hash_backend())
    digest.update(bytes(data))
    return digest.finalize()


def hash_fields(*fields, suite=DEFAULT_SUITE, raw=False):
    """Hash the (length-prefixed) encoding of several fields."""
    return hash_bytes(encode_fields(*fields, raw=raw), suite)


def xor(a, b):
    """
    Bytewise exclusive-or of two equal-length byte strings.

    """
    if len(a) != len(b):
        raise LengthMismatchError(f"Cannot XOR {len(a)} bytes with {len(b)} bytes.")
    return np.bitwise_xor(
        np.frombuffer(bytes(a), dtype=np.uint8), np.frombuffer(bytes(b), dtype=np.uint8)
    ).tobytes()


def int_to_bytes(value, length):
    """Fixed-width big-endian encoding of a non-negative integer."""
    return int(value).to_bytes(length, "big")


def bytes_to_int(data):
    return int.from_bytes(bytes(data), "big")
