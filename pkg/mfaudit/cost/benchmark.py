"""
Microbenchmarks of the workbench's own primitives, one per operation kind.

Each kind is timed over `trials` batches of a fixed number of calls after a
warm-up; the unit cost is the median per-call time. Runs single-threaded.

"""

import logging
import time

import numpy as np
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from ..errors import ConfigError
from ..primitives.fuzzy import fuzzy_gen, fuzzy_rep, random_reading
from ..primitives.group import ModGroup
from ..primitives.hashing import hash_fields, xor
from ..primitives.puf import PufDevice
from ..primitives.suite import DEFAULT_SUITE
from ..primitives.symmetric import derive_key, sym_encrypt
from .units import UnitCostTable

logger = logging.getLogger(__name__)

MIN_TRIALS = 100
# Calls per timed batch, and untimed calls before the first batch.
BATCH_SIZE = 20
WARMUP_CALLS = 50


def _operations(suite, rng):
    """One zero-argument callable per operation kind."""
    a, b = rng.bytes(suite.digest_length), rng.bytes(suite.digest_length)
    key = derive_key(a, suite)
    message = rng.bytes(2 * suite.digest_length)
    ctr = Cipher(algorithms.AES(key), modes.CTR(rng.bytes(16)))
    reading = random_reading(rng, suite)
    tau = fuzzy_gen(reading, rng, suite).tau
    device = PufDevice.manufacture("benchmark", rng, suite)
    grp = ModGroup(suite.modulus)
    x, y = grp.random_element(rng), grp.random_element(rng)
    own = ec.generate_private_key(ec.SECP256R1())
    peer = ec.generate_private_key(ec.SECP256R1()).public_key()
    return {
        "T_h": lambda: hash_fields(a, b, suite=suite),
        "T_x": lambda: xor(a, b),
        "T_ed": lambda: ctr.encryptor().update(message),
        "T_aed": lambda: sym_encrypt(key, message, suite),
        "T_fe": lambda: fuzzy_rep(reading, tau, suite),
        "T_p": lambda: device.response(a, rng, suite),
        "T_me": lambda: grp.exp(suite.generator, x),
        "T_m": lambda: grp.mul(x, y),
        "T_a": lambda: grp.add(x, y),
        "T_ecc": lambda: own.exchange(ec.ECDH(), peer),
    }


def time_operation(operation, trials, batch_size=BATCH_SIZE):
    """
    Median time of one call, in microseconds.

    Returns
    -------
    float

    """
    for _ in range(WARMUP_CALLS):
        operation()
    samples = np.empty(trials)
    for t in range(trials):
        start = time.perf_counter_ns()
        for _ in range(batch_size):
            operation()
        samples[t] = (time.perf_counter_ns() - start) / batch_size
    return float(np.median(samples)) / 1000.0


def measure_primitives(suite=DEFAULT_SUITE, trials=MIN_TRIALS, rng=None, seed=None, kinds=None):
    """
    Measure the unit cost of every operation kind.

    Parameters
    ----------
    suite: CryptoSuite
    trials: int
        Timed batches per kind, at least MIN_TRIALS.
    rng: numpy.random.Generator, optional
        Source of the benchmark inputs.
    kinds: iterable of str, optional
        Restrict the measurement to these kinds.

    Returns
    -------
    UnitCostTable

    Raises
    ------
    ConfigError
        If trials is below MIN_TRIALS.

    """
    if trials < MIN_TRIALS:
        raise ConfigError(f"Benchmarks need at least {MIN_TRIALS} trials, not {trials}.")
    rng = rng if rng is not None else np.random.default_rng(seed)
    operations = _operations(suite, rng)
    selected = list(kinds) if kinds is not None else list(operations)
    costs = {}
    for kind in selected:
        costs[kind] = time_operation(operations[kind], trials)
        logger.debug("%s: %.3f us.", kind, costs[kind])
    return UnitCostTable(costs)
