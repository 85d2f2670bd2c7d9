"""
Emulated physically unclonable functions.

A device is a keyed pseudorandom function of the challenge (HMAC-SHA256
under a per-device seed) whose output bits are perturbed by Bernoulli
noise, capped so that a response never differs from the reference (noise
free) response in more than noise_bits positions. Enrolment uses the
reference response, as if averaged over many measurements.

"""

from dataclasses import dataclass

import numpy as np
from cryptography.hazmat.primitives import hashes, hmac

from .fuzzy import bytes_to_bits
from .suite import DEFAULT_SUITE


@dataclass(frozen=True)
class PufDevice:
    """
    An emulated PUF.

    Parameters
    ----------
    device_id: str
        Opaque identifier.
    secret_seed: bytes
        Manufacturing variation, as a PRF key.
    noise_bits: int
        Maximum number of flipped bits per response.
    noise_rate: float
        Per-bit flip probability before capping.

    """

    device_id: str
    secret_seed: bytes
    noise_bits: int = DEFAULT_SUITE.puf_noise_bits
    noise_rate: float = DEFAULT_SUITE.puf_noise_rate

    @classmethod
    def manufacture(cls, device_id, rng, suite=DEFAULT_SUITE):
        """Create a device with a random seed drawn from rng."""
        return cls(
            device_id=device_id,
            secret_seed=rng.bytes(32),
            noise_bits=suite.puf_noise_bits,
            noise_rate=suite.puf_noise_rate,
        )

    def ideal_response(self, challenge, suite=DEFAULT_SUITE):
        """The noise-free response bits to a challenge."""
        prf = hmac.HMAC(self.secret_seed, hashes.SHA256())
        prf.update(bytes(challenge))
        output = prf.finalize()
        while len(output) * 8 < suite.fuzzy_bits:
            prf = hmac.HMAC(self.secret_seed, hashes.SHA256())
            prf.update(output)
            output += prf.finalize()
        return bytes_to_bits(output[: suite.fuzzy_bits // 8], suite)

    def response(self, challenge, rng, suite=DEFAULT_SUITE):
        """
        A noisy response to a challenge.

        Parameters
        ----------
        challenge: bytes
        rng: numpy.random.Generator
            Source of measurement noise.
        suite: CryptoSuite

        Returns
        -------
        numpy array of suite.fuzzy_bits bits.

        """
        bits = self.ideal_response(challenge, suite)
        flips = np.flatnonzero(rng.random(bits.shape[0]) < self.noise_rate)
        flips = flips[: self.noise_bits]
        noisy = bits.copy()
        noisy[flips] ^= 1
        return noisy
