"""
The cryptographic suite shared by every protocol in a run.

The protocols analysed never name their hash function or key sizes. All of
them therefore share one configurable suite, which is serialised in the
workbench configuration file.

"""

from dataclasses import dataclass, asdict, fields

from cryptography.hazmat.primitives import hashes

from ..errors import ConfigError

# Digest sizes of the fixed-length hash back-ends.
FIXED_DIGEST_LENGTHS = {"sha256": 32, "sha384": 48, "sha512": 64}
SUPPORTED_HASHES = tuple(FIXED_DIGEST_LENGTHS) + ("shake256",)

# Key lengths accepted by AES-GCM.
SUPPORTED_KEY_LENGTHS = (16, 24, 32)

# Mersenne prime 2^61 - 1.
DEFAULT_MODULUS = 2305843009213693951


@dataclass(frozen=True)
class CryptoSuite:
    """
    Parameters of every primitive used by the protocols and the attacks.

    Parameters
    ----------
    hash_algorithm: str
        One of "sha256", "sha384", "sha512" or "shake256".
    digest_length: int
        Length L_h of every digest, in bytes.
    key_length: int
        Symmetric (AES-GCM) key length, in bytes.
    fuzzy_bits: int
        Bit-length of fuzzy readings (biometrics, PUF responses, channel
        measurements).
    fuzzy_threshold: int
        Maximum Hamming distance t tolerated by the fuzzy extractor.
    puf_noise_bits: int
        Maximum number of flipped bits between two PUF responses.
    puf_noise_rate: float
        Probability that a PUF response bit flips (before capping).
    modulus: int
        Prime modulus p of the default group.
    generator: int
        Base used for one-way exponentiation.
    freshness_window: int
        Maximum timestamp skew (in simulated seconds) accepted by receivers.
    entropy_threshold: float
        Per-byte entropy under which a data stream is considered predictable.

    """

    hash_algorithm: str = "sha256"
    digest_length: int = 32
    key_length: int = 16
    fuzzy_bits: int = 32
    fuzzy_threshold: int = 3
    puf_noise_bits: int = 2
    puf_noise_rate: float = 0.05
    modulus: int = DEFAULT_MODULUS
    generator: int = 37
    freshness_window: int = 5
    entropy_threshold: float = 7.99

    def __post_init__(self):
        if self.hash_algorithm not in SUPPORTED_HASHES:
            raise ConfigError(f"Unsupported hash algorithm {self.hash_algorithm!r}.")
        expected = FIXED_DIGEST_LENGTHS.get(self.hash_algorithm)
        if expected is not None and expected != self.digest_length:
            raise ConfigError(
                f"{self.hash_algorithm} produces {expected}-byte digests, not {self.digest_length}."
            )
        if self.digest_length < 16:
            raise ConfigError("Digests shorter than 16 bytes are not supported.")
        if self.key_length not in SUPPORTED_KEY_LENGTHS:
            raise ConfigError(f"AES-GCM keys must be 16, 24 or 32 bytes, not {self.key_length}.")
        if self.fuzzy_bits <= 0 or self.fuzzy_bits % 8:
            raise ConfigError("fuzzy_bits must be a positive multiple of 8.")
        if self.fuzzy_bits < 2 * self.fuzzy_threshold + 1:
            raise ConfigError("fuzzy_bits is too small to correct fuzzy_threshold errors.")
        # The helper string holds the offset plus at least an 8-byte check.
        if self.fuzzy_bits // 8 > self.digest_length - 8:
            raise ConfigError("fuzzy_bits does not fit in a digest-length helper string.")
        if not 0 <= self.puf_noise_bits <= self.fuzzy_threshold:
            raise ConfigError("puf_noise_bits must lie in [0, fuzzy_threshold].")
        if not 0 <= self.puf_noise_rate <= 1:
            raise ConfigError("puf_noise_rate must be a probability.")
        if self.modulus < 3:
            raise ConfigError("The modulus must be a prime larger than 2.")
        if self.freshness_window < 0:
            raise ConfigError("freshness_window must be non-negative.")

    @property
    def element_length(self):
        """Byte length of an element of the default group."""
        return (self.modulus.bit_length() + 7) // 8

    def hash_backend(self):
        """A fresh `cryptography` hash algorithm object for this suite."""
        if self.hash_algorithm == "shake256":
            return hashes.SHAKE256(digest_size=self.digest_length)
        return {"sha256": hashes.SHA256, "sha384": hashes.SHA384, "sha512": hashes.SHA512}[
            self.hash_algorithm
        ]()

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        """
        Build a suite from a dictionary, rejecting unknown keys.

        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown suite keys: {', '.join(unknown)}.")
        return cls(**values)


DEFAULT_SUITE = CryptoSuite()
