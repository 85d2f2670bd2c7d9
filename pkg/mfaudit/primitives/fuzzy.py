"""
Code-offset fuzzy extractor over a repetition code.

Gen(w) picks a random codeword c and publishes the offset w XOR c together
with a short check digest; Rep(w', tau) decodes w' XOR offset back to the
nearest codeword, recovers w, and succeeds iff the check matches and w' lies
within Hamming distance t of w. The stable key sigma is a digest of w.

Readings are numpy arrays of 0/1 values of length suite.fuzzy_bits.

"""

from dataclasses import dataclass

import numpy as np

from ..errors import DecodeFailure, LengthMismatchError
from .hashing import hash_fields
from .suite import DEFAULT_SUITE


@dataclass(frozen=True)
class FuzzyPair:
    """Output of fuzzy_gen: the extracted key and the public helper string."""

    sigma: bytes
    tau: bytes


def block_length(suite=DEFAULT_SUITE):
    """
    Repetition length used for a suite: the smallest divisor of the reading
    length able to correct fuzzy_threshold errors per block.

    """
    n, t = suite.fuzzy_bits, suite.fuzzy_threshold
    for r in range(2 * t + 1, n + 1):
        if n % r == 0:
            return r
    return n  # Unreachable: n itself qualifies since n >= 2t+1.


def as_bits(reading, suite=DEFAULT_SUITE):
    """Validate a reading and return it as a uint8 array of bits."""
    bits = np.asarray(reading, dtype=np.uint8)
    if bits.ndim != 1 or bits.shape[0] != suite.fuzzy_bits:
        raise LengthMismatchError(
            f"Readings must have {suite.fuzzy_bits} bits, got shape {bits.shape}."
        )
    if np.any(bits > 1):
        raise ValueError("Readings must only contain 0 and 1.")
    return bits


def bits_to_bytes(bits):
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def bytes_to_bits(data, suite=DEFAULT_SUITE):
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
    return as_bits(bits, suite)


def hamming(a, b):
    """Hamming distance between two bit arrays."""
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


def _sigma(bits, suite):
    return hash_fields(b"fuzzy-sigma", bits_to_bytes(bits), suite=suite)


def _check(sigma, suite):
    return hash_fields(b"fuzzy-check", sigma, suite=suite)[
        : suite.digest_length - suite.fuzzy_bits // 8
    ]


def fuzzy_gen(reading, rng, suite=DEFAULT_SUITE):
    """
    Enrol a reading.

    Parameters
    ----------
    reading: array of bits
        suite.fuzzy_bits values in {0, 1}.
    rng: numpy.random.Generator
        Source of the random codeword.
    suite: CryptoSuite

    Returns
    -------
    FuzzyPair
        sigma (digest_length bytes) and tau (digest_length bytes).

    """
    bits = as_bits(reading, suite)
    r = block_length(suite)
    message = rng.integers(0, 2, size=suite.fuzzy_bits // r, dtype=np.uint8)
    codeword = np.repeat(message, r)
    offset = np.bitwise_xor(bits, codeword)
    sigma = _sigma(bits, suite)
    return FuzzyPair(sigma=sigma, tau=bits_to_bytes(offset) + _check(sigma, suite))


def fuzzy_rep(reading, tau, suite=DEFAULT_SUITE):
    """
    Reproduce sigma from a noisy reading and the helper string.

    Raises
    ------
    DecodeFailure
        If the reading is further than fuzzy_threshold from the enrolment.

    """
    bits = as_bits(reading, suite)
    if len(tau) != suite.digest_length:
        raise LengthMismatchError(f"Helper strings are {suite.digest_length} bytes.")
    offset_length = suite.fuzzy_bits // 8
    offset = bytes_to_bits(tau[:offset_length], suite)
    r = block_length(suite)
    noisy_codeword = np.bitwise_xor(bits, offset).reshape(-1, r)
    # Majority decoding per block; ties decode to 0 and are caught below.
    message = (2 * noisy_codeword.sum(axis=1) > r).astype(np.uint8)
    enrolled = np.bitwise_xor(np.repeat(message, r), offset)
    sigma = _sigma(enrolled, suite)
    if _check(sigma, suite) != bytes(tau[offset_length:]):
        raise DecodeFailure("Reading does not decode to the enrolled value.")
    if hamming(enrolled, bits) > suite.fuzzy_threshold:
        raise DecodeFailure("Reading is too far from the enrolled value.")
    return sigma


def random_reading(rng, suite=DEFAULT_SUITE):
    """A uniformly random reading."""
    return rng.integers(0, 2, size=suite.fuzzy_bits, dtype=np.uint8)


def flip_bits(reading, positions):
    """Copy of a reading with the given positions flipped."""
    noisy = np.array(reading, dtype=np.uint8, copy=True)
    noisy[list(positions)] ^= 1
    return noisy
