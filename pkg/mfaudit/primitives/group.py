"""
Arithmetic modulo a prime, used for historical-data tags, group-masked
values and the one-way exponentiation that stands in for curve arithmetic.

"""

from dataclasses import dataclass

from .hashing import bytes_to_int, hash_fields, int_to_bytes
from .suite import DEFAULT_SUITE

# Width of the encoded tag index in tag inputs.
INDEX_LENGTH = 4


@dataclass(frozen=True)
class ModGroup:
    """
    Integers modulo a prime p.

    All operations reduce into [0, p).

    """

    p: int

    def __post_init__(self):
        assert self.p > 2, "The modulus must be an odd prime."

    @property
    def element_length(self):
        """Byte length of an encoded element."""
        return (self.p.bit_length() + 7) // 8

    def reduce(self, x):
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inverse(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("Zero has no inverse.")
        return pow(a, -1, self.p)

    def exp(self, base, exponent):
        """One-way exponentiation base^exponent mod p."""
        return pow(base % self.p, exponent, self.p)

    def to_scalar(self, data):
        """Map a byte string (typically a digest) to an element."""
        return bytes_to_int(data) % self.p

    def encode(self, x):
        return int_to_bytes(self.reduce(x), self.element_length)

    def decode(self, data):
        return self.reduce(bytes_to_int(data))

    def random_element(self, rng, nonzero=True):
        """A uniform element, drawn from rng (nonzero by default)."""
        low = 1 if nonzero else 0
        # Draw from bytes to support moduli beyond 64 bits.
        while True:
            x = bytes_to_int(rng.bytes(self.element_length + 8)) % self.p
            if x >= low:
                return x

    @classmethod
    def from_suite(cls, suite=DEFAULT_SUITE):
        return cls(suite.modulus)


def encode_index(i):
    return int_to_bytes(i, INDEX_LENGTH)


def tag_generate(K, d_i, i, grp, suite=DEFAULT_SUITE):
    """
    Authentication tag for one piece of historical data:
    t_i = K * h(d_i || i) + h(K || i) mod p.

    Parameters
    ----------
    K: int
        Tag generation key, 0 <= K < p.
    d_i: bytes
        The data piece.
    i: int
        Its index.
    grp: ModGroup
    suite: CryptoSuite

    Returns
    -------
    int

    """
    assert 0 <= K < grp.p, "The tag key must lie in [0, p)."
    data_scalar = grp.to_scalar(hash_fields(bytes(d_i), encode_index(i), suite=suite))
    key_scalar = grp.to_scalar(hash_fields(grp.encode(K), encode_index(i), suite=suite))
    return grp.add(grp.mul(K, data_scalar), key_scalar)
