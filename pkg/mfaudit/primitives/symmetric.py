"""
Authenticated symmetric encryption (AES-GCM).

Ciphertexts are laid out as nonce || ciphertext || tag. When no nonce is
given, it is derived from the key and the plaintext, which makes encryption
deterministic: the same inputs always produce the same wire bytes, as the
term evaluator requires.

"""

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from ..errors import AuthenticationFailure, LengthMismatchError
from .hashing import hash_fields
from .suite import DEFAULT_SUITE

NONCE_LENGTH = 12
TAG_LENGTH = 16

# Bytes added by encryption on top of the plaintext.
CIPHERTEXT_OVERHEAD = NONCE_LENGTH + TAG_LENGTH


def _check_key(key, suite):
    if len(key) != suite.key_length:
        raise LengthMismatchError(
            f"Symmetric keys must be {suite.key_length} bytes, got {len(key)}."
        )


def sym_encrypt(key, plaintext, suite=DEFAULT_SUITE, nonce=None):
    """
    Encrypt and authenticate a plaintext.

    Parameters
    ----------
    key: bytes
        suite.key_length bytes.
    plaintext: bytes
    suite: CryptoSuite
    nonce: bytes (default None)
        12-byte nonce. If None, a deterministic nonce is derived from the
        key and the plaintext.

    Returns
    -------
    bytes
        nonce || ciphertext || tag.

    """
    _check_key(key, suite)
    if nonce is None:
        nonce = hash_fields(b"sym-nonce", key, plaintext, suite=suite)[:NONCE_LENGTH]
    assert len(nonce) == NONCE_LENGTH, "AES-GCM nonces are 12 bytes."
    return nonce + AESGCM(bytes(key)).encrypt(nonce, bytes(plaintext), None)


def sym_decrypt(key, ciphertext, suite=DEFAULT_SUITE):
    """
    Decrypt a ciphertext produced by sym_encrypt.

    Raises
    ------
    AuthenticationFailure
        If the key is wrong or the ciphertext was tampered with.

    """
    _check_key(key, suite)
    if len(ciphertext) < CIPHERTEXT_OVERHEAD:
        raise AuthenticationFailure("Ciphertext is too short.")
    nonce, body = bytes(ciphertext[:NONCE_LENGTH]), bytes(ciphertext[NONCE_LENGTH:])
    try:
        return AESGCM(bytes(key)).decrypt(nonce, body, None)
    except InvalidTag as err:
        raise AuthenticationFailure("Authentication tag mismatch.") from err


def derive_key(material, suite=DEFAULT_SUITE):
    """
    Derive a symmetric key from arbitrary key material (e.g. a digest).

    Material that already has the right length is used as is.

    """
    if len(material) == suite.key_length:
        return bytes(material)
    return hash_fields(b"sym-key", material, suite=suite)[: suite.key_length]
