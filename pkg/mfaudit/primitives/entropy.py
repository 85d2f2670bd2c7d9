"""
Empirical Shannon entropy of symbol streams (e.g. sensor data used as an
authentication factor), and a generator of streams with a chosen entropy.

"""

import numpy as np
from scipy.stats import entropy

from ..errors import EmptySampleError
from .suite import DEFAULT_SUITE


def _as_symbols(samples):
    if isinstance(samples, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(samples), dtype=np.uint8)
    return np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples)


def shannon_entropy(samples):
    """
    Entropy, in bits per symbol, of the empirical distribution of samples.

    Parameters
    ----------
    samples: bytes or sequence of hashable symbols

    Returns
    -------
    float

    """
    symbols = _as_symbols(samples)
    if symbols.size == 0:
        raise EmptySampleError("Cannot compute the entropy of an empty sample.")
    _, counts = np.unique(symbols, return_counts=True)
    return float(entropy(counts, base=2))


def is_low_entropy(samples, threshold=DEFAULT_SUITE.entropy_threshold):
    """Whether a stream falls below the per-symbol entropy threshold."""
    return shannon_entropy(samples) < threshold


def simulated_sensor_stream(alphabet_bits, length, rng):
    """
    A byte stream drawn from 2^alphabet_bits distinct values with exactly
    equal counts, so that its empirical entropy is exactly alphabet_bits.

    Parameters
    ----------
    alphabet_bits: int
        Between 0 and 8.
    length: int
        Must be a multiple of 2^alphabet_bits.
    rng: numpy.random.Generator

    Returns
    -------
    bytes

    """
    assert 0 <= alphabet_bits <= 8, "Byte streams carry at most 8 bits per symbol."
    alphabet_size = 2 ** alphabet_bits
    assert length % alphabet_size == 0, "Length must be a multiple of the alphabet size."
    alphabet = rng.choice(256, size=alphabet_size, replace=False).astype(np.uint8)
    stream = np.repeat(alphabet, length // alphabet_size)
    rng.shuffle(stream)
    return stream.tobytes()
