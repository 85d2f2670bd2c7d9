"""Tests for the cryptographic building blocks."""

import hashlib
import itertools
from unittest import TestCase

import numpy as np

from mfaudit.errors import (
    AuthenticationFailure,
    ConfigError,
    DecodeFailure,
    EmptySampleError,
    InvalidIntervalError,
    LengthMismatchError,
)
from mfaudit.primitives import (
    CryptoSuite,
    DEFAULT_SUITE,
    ModGroup,
    PufDevice,
    decode_fields,
    encode_fields,
    flip_bits,
    fuzzy_gen,
    fuzzy_rep,
    hamming,
    hash_bytes,
    hash_fields,
    is_low_entropy,
    random_reading,
    shannon_entropy,
    simulated_sensor_stream,
    sym_decrypt,
    sym_encrypt,
    tag_generate,
    totp_counter,
    xor,
)
from mfaudit.primitives.fuzzy import block_length


def reference_tag(K, d, i, p):
    """Straight-line tag formula, on hashlib rather than the workbench hash."""

    def h(*fields):
        encoded = b"".join(len(f).to_bytes(4, "big") + f for f in fields)
        return int.from_bytes(hashlib.sha256(encoded).digest(), "big")

    element_length = (p.bit_length() + 7) // 8
    index = i.to_bytes(4, "big")
    return (K * (h(d, index) % p) + h(K.to_bytes(element_length, "big"), index) % p) % p


class HashTest(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_deterministic_and_fixed_length(self):
        for _ in range(1000):
            x = self.rng.bytes(int(self.rng.integers(0, 64)))
            self.assertEqual(hash_bytes(x), hash_bytes(x))
            self.assertEqual(len(hash_bytes(x)), DEFAULT_SUITE.digest_length)

    def test_distinct_inputs(self):
        digests = set()
        inputs = set()
        for _ in range(1000):
            x = self.rng.bytes(16)
            inputs.add(x)
            digests.add(hash_bytes(x))
        self.assertEqual(len(digests), len(inputs))

    def test_field_encoding_is_unambiguous(self):
        self.assertNotEqual(encode_fields(b"ab", b"c"), encode_fields(b"a", b"bc"))
        self.assertNotEqual(hash_fields(b"ab", b"c"), hash_fields(b"a", b"bc"))
        self.assertEqual(decode_fields(encode_fields(b"ab", b"", b"c")), [b"ab", b"", b"c"])

    def test_raw_encoding_concatenates(self):
        self.assertEqual(encode_fields(b"ab", b"c", raw=True), b"abc")

    def test_other_backends(self):
        for name, length in [("sha512", 64), ("shake256", 48)]:
            suite = CryptoSuite(hash_algorithm=name, digest_length=length)
            self.assertEqual(len(hash_bytes(b"x", suite)), length)


class XorTest(TestCase):
    def setUp(self):
        rng = np.random.default_rng(1)
        self.a, self.b, self.c = (rng.bytes(32) for _ in range(3))

    def test_group_laws(self):
        a, b, c = self.a, self.b, self.c
        zeros = bytes(32)
        self.assertEqual(xor(a, zeros), a)
        self.assertEqual(xor(a, a), zeros)
        self.assertEqual(xor(xor(a, b), a), b)
        self.assertEqual(xor(a, b), xor(b, a))
        self.assertEqual(xor(xor(a, b), c), xor(a, xor(b, c)))

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatchError):
            xor(self.a, self.b[:31])


class SymmetricTest(TestCase):
    def setUp(self):
        rng = np.random.default_rng(2)
        self.key = rng.bytes(16)
        self.other_key = rng.bytes(16)
        self.message = rng.bytes(48)

    def test_round_trip(self):
        ciphertext = sym_encrypt(self.key, self.message)
        self.assertEqual(sym_decrypt(self.key, ciphertext), self.message)

    def test_wrong_key(self):
        ciphertext = sym_encrypt(self.key, self.message)
        with self.assertRaises(AuthenticationFailure):
            sym_decrypt(self.other_key, ciphertext)

    def test_every_byte_is_authenticated(self):
        ciphertext = sym_encrypt(self.key, self.message)
        for position in range(len(ciphertext)):
            tampered = bytearray(ciphertext)
            tampered[position] ^= 0x01
            with self.assertRaises(AuthenticationFailure):
                sym_decrypt(self.key, bytes(tampered))

    def test_key_length_checked(self):
        with self.assertRaises(LengthMismatchError):
            sym_encrypt(self.key[:15], self.message)


class FuzzyExtractorTest(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.reading = random_reading(self.rng)
        self.pair = fuzzy_gen(self.reading, self.rng)

    def test_block_length(self):
        self.assertEqual(block_length(DEFAULT_SUITE), 8)

    def test_helper_length(self):
        self.assertEqual(len(self.pair.tau), DEFAULT_SUITE.digest_length)

    def test_exact_reading(self):
        self.assertEqual(fuzzy_rep(self.reading, self.pair.tau), self.pair.sigma)

    def test_every_flip_within_threshold(self):
        t = DEFAULT_SUITE.fuzzy_threshold
        for distance in range(1, t + 1):
            for positions in itertools.combinations(range(DEFAULT_SUITE.fuzzy_bits), distance):
                noisy = flip_bits(self.reading, positions)
                self.assertEqual(fuzzy_rep(noisy, self.pair.tau), self.pair.sigma)

    def test_beyond_threshold(self):
        n, t = DEFAULT_SUITE.fuzzy_bits, DEFAULT_SUITE.fuzzy_threshold
        for distance in range(t + 1, n + 1):
            for _ in range(20):
                positions = self.rng.choice(n, size=distance, replace=False)
                noisy = flip_bits(self.reading, positions)
                self.assertEqual(hamming(noisy, self.reading), distance)
                with self.assertRaises(DecodeFailure):
                    fuzzy_rep(noisy, self.pair.tau)

    def test_complement(self):
        with self.assertRaises(DecodeFailure):
            fuzzy_rep(1 - self.reading, self.pair.tau)

    def test_reading_length(self):
        with self.assertRaises(LengthMismatchError):
            fuzzy_gen(self.reading[:16], self.rng)


class PufTest(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(4)
        self.device = PufDevice.manufacture("dev-1", self.rng)
        self.other = PufDevice.manufacture("dev-2", self.rng)

    def test_noise_is_bounded(self):
        reference = self.device.ideal_response(b"challenge")
        for _ in range(200):
            response = self.device.response(b"challenge", self.rng)
            self.assertLessEqual(hamming(response, reference), self.device.noise_bits)

    def test_responses_reproduce_key(self):
        pair = fuzzy_gen(self.device.ideal_response(b"c"), self.rng)
        for _ in range(50):
            response = self.device.response(b"c", self.rng)
            self.assertEqual(fuzzy_rep(response, pair.tau), pair.sigma)

    def test_devices_differ(self):
        distances = [
            hamming(self.device.ideal_response(c), self.other.ideal_response(c))
            for c in (b"a", b"b", b"c", b"d")
        ]
        self.assertGreater(np.mean(distances), DEFAULT_SUITE.fuzzy_threshold)


class TagTest(TestCase):
    def test_zero_key(self):
        grp = ModGroup(DEFAULT_SUITE.modulus)
        expected = grp.to_scalar(hash_fields(grp.encode(0), (5).to_bytes(4, "big")))
        self.assertEqual(tag_generate(0, b"data", 5, grp), expected)

    def test_small_prime(self):
        grp = ModGroup(7)
        for K in range(7):
            self.assertEqual(tag_generate(K, b"d", 3, grp), reference_tag(K, b"d", 3, 7))

    def test_reference_formula(self):
        rng = np.random.default_rng(5)
        for p in (7, 101, 2**61 - 1):
            grp = ModGroup(p)
            for _ in range(334):
                K = grp.random_element(rng, nonzero=False)
                d = rng.bytes(int(rng.integers(1, 40)))
                i = int(rng.integers(0, 2**31))
                self.assertEqual(tag_generate(K, d, i, grp), reference_tag(K, d, i, p))

    def test_adversary_recomputes_tag(self):
        grp = ModGroup(DEFAULT_SUITE.modulus)
        rng = np.random.default_rng(6)
        K = grp.random_element(rng)
        stored = tag_generate(K, b"history", 12, grp)
        self.assertEqual(reference_tag(K, b"history", 12, grp.p), stored)


class GroupTest(TestCase):
    def test_reduction(self):
        grp = ModGroup(101)
        self.assertEqual(grp.add(100, 5), 4)
        self.assertEqual(grp.sub(3, 5), 99)
        self.assertEqual(grp.mul(grp.inverse(7), 7), 1)
        self.assertEqual(grp.decode(grp.encode(250)), 48)


class TotpTest(TestCase):
    def test_counter(self):
        self.assertEqual(totp_counter(100, 100, 30), 0)
        self.assertEqual(totp_counter(130, 100, 30), 1)
        self.assertEqual(totp_counter(100 + 3 * 30 - 1, 100, 30), 2)

    def test_invalid_interval(self):
        with self.assertRaises(InvalidIntervalError):
            totp_counter(10, 0, 0)
        with self.assertRaises(InvalidIntervalError):
            totp_counter(10, 0, -30)


class EntropyTest(TestCase):
    def test_constant(self):
        self.assertEqual(shannon_entropy(b"\x07" * 100), 0.0)

    def test_uniform_bytes(self):
        self.assertAlmostEqual(shannon_entropy(bytes(range(256)) * 4), 8.0)

    def test_empty(self):
        with self.assertRaises(EmptySampleError):
            shannon_entropy(b"")

    def test_sensor_stream_flagged(self):
        rng = np.random.default_rng(7)
        stream = simulated_sensor_stream(6, 4096, rng)
        entropy = shannon_entropy(stream)
        self.assertAlmostEqual(entropy, 6.0)
        self.assertTrue(4.52 <= entropy <= 7.80)
        self.assertTrue(is_low_entropy(stream, threshold=7.99))
        self.assertFalse(is_low_entropy(bytes(range(256)), threshold=7.99))


class SuiteTest(TestCase):
    def test_rejects_unknown_keys(self):
        with self.assertRaises(ConfigError):
            CryptoSuite.from_dict({"digest_length": 32, "colour": "blue"})

    def test_rejects_inconsistent_digest(self):
        with self.assertRaises(ConfigError):
            CryptoSuite(hash_algorithm="sha256", digest_length=64)

    def test_round_trip(self):
        self.assertEqual(CryptoSuite.from_dict(DEFAULT_SUITE.to_dict()), DEFAULT_SUITE)
