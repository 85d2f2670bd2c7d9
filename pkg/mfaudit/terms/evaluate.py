"""
Evaluation of terms to concrete bytes.

An environment maps atom names to byte strings. It can be any mapping,
including lazy ones that compute values on lookup (the session driver uses
this for role views).

"""

from functools import reduce

from ..errors import LengthMismatchError, UnboundAtomError
from ..primitives.fuzzy import bytes_to_bits, fuzzy_rep
from ..primitives.group import ModGroup, tag_generate
from ..primitives.hashing import bytes_to_int, hash_fields, xor
from ..primitives.suite import DEFAULT_SUITE
from ..primitives.symmetric import derive_key, sym_decrypt, sym_encrypt
from .term import (
    Atom,
    ConcatSeq,
    FuzzyRep,
    GroupAdd,
    GroupMulOneWay,
    HashApp,
    ScalarOfHash,
    SymDec,
    SymEnc,
    TagApp,
    XorSum,
    Zero,
)


def lookup(env, atom):
    """Value of an atom in an environment, checked against its length."""
    try:
        value = env[atom.name]
    except UnboundAtomError:
        raise
    except KeyError:
        raise UnboundAtomError(f"Atom {atom.name} is not bound.") from None
    if atom.length is not None and len(value) != atom.length:
        raise LengthMismatchError(
            f"Atom {atom.name} is declared with {atom.length} bytes, bound to {len(value)}."
        )
    return bytes(value)


def evaluate(term, env, suite=DEFAULT_SUITE):
    """
    Compute the bytes a term denotes.

    Parameters
    ----------
    term: Term
    env: mapping str -> bytes
        Values of the atoms.
    suite: CryptoSuite

    Returns
    -------
    bytes

    Raises
    ------
    UnboundAtomError
        If an atom of the term has no value.
    LengthMismatchError
        If XOR operands differ in length, or an atom's value does not have
        its declared length.

    """
    if isinstance(term, Atom):
        return lookup(env, term)
    if isinstance(term, Zero):
        if term.length is None:
            raise LengthMismatchError("A zero of unknown length cannot be evaluated.")
        return bytes(term.length)
    if isinstance(term, XorSum):
        values = [
            evaluate(t, env, suite)
            for t in term.elements
            if not (isinstance(t, Zero) and t.length is None)
        ]
        return reduce(xor, values)
    if isinstance(term, HashApp):
        return hash_fields(*(evaluate(t, env, suite) for t in term.args), suite=suite)
    if isinstance(term, ConcatSeq):
        return b"".join(evaluate(t, env, suite) for t in term.parts)
    if isinstance(term, SymEnc):
        key = derive_key(evaluate(term.key, env, suite), suite)
        return sym_encrypt(key, evaluate(term.body, env, suite), suite)
    if isinstance(term, SymDec):
        key = derive_key(evaluate(term.key, env, suite), suite)
        return sym_decrypt(key, evaluate(term.ciphertext, env, suite), suite)
    if isinstance(term, FuzzyRep):
        reading = bytes_to_bits(evaluate(term.reading, env, suite), suite)
        return fuzzy_rep(reading, evaluate(term.helper, env, suite), suite)

    grp = ModGroup(term.modulus)
    if isinstance(term, GroupAdd):
        total = sum(c * grp.decode(evaluate(t, env, suite)) for c, t in term.terms)
        return grp.encode(total)
    if isinstance(term, GroupMulOneWay):
        scalar = grp.decode(evaluate(term.scalar, env, suite))
        base = grp.decode(evaluate(term.base, env, suite))
        return grp.encode(grp.exp(base, scalar))
    if isinstance(term, ScalarOfHash):
        return grp.encode(grp.to_scalar(evaluate(term.term, env, suite)))
    if isinstance(term, TagApp):
        key = grp.decode(evaluate(term.key, env, suite))
        data = evaluate(term.data, env, suite)
        index = bytes_to_int(evaluate(term.index, env, suite))
        return grp.encode(tag_generate(key, data, index, grp, suite))
    raise TypeError(f"Not a term: {term!r}")
