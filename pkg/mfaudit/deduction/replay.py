"""
Concrete replay of derivation traces.

Replaying a trace recomputes each step on bytes, starting only from the
values the adversary actually holds (wire values, leaked secrets). It is the
generic concrete attacker: if a trace replays, the attack works on this run.

"""

from functools import reduce

from ..errors import AuthenticationFailure, DecodeFailure, ReplayMismatch
from ..primitives.fuzzy import bytes_to_bits, fuzzy_rep
from ..primitives.group import ModGroup, tag_generate
from ..primitives.hashing import bytes_to_int, hash_fields, xor
from ..primitives.suite import DEFAULT_SUITE
from ..primitives.symmetric import derive_key, sym_decrypt, sym_encrypt
from ..terms import (
    FuzzyRep,
    GroupAdd,
    GroupMulOneWay,
    ScalarOfHash,
    TagApp,
    normalize,
    render,
)
from .knowledge import (
    CONCAT_JOIN,
    CONCAT_SPLIT,
    DECRYPT,
    ENCRYPT,
    EQUATION_UNFOLD,
    GROUP_SOLVE,
    HASH_APPLY,
    KNOWN,
    ONE_WAY_APPLY,
    XOR_COMBINE,
)
from .rules import split_offsets


def _one_way(term, value, suite):
    if isinstance(term, FuzzyRep):
        return fuzzy_rep(bytes_to_bits(value(term.reading), suite), value(term.helper), suite)
    grp = ModGroup(term.modulus)
    if isinstance(term, GroupMulOneWay):
        return grp.encode(grp.exp(grp.decode(value(term.base)), grp.decode(value(term.scalar))))
    if isinstance(term, ScalarOfHash):
        return grp.encode(grp.to_scalar(value(term.term)))
    if isinstance(term, TagApp):
        tag = tag_generate(
            grp.decode(value(term.key)),
            value(term.data),
            bytes_to_int(value(term.index)),
            grp,
            suite,
        )
        return grp.encode(tag)
    raise ReplayMismatch(f"{render(term)} is not built by one-way-apply.")


def _group(step, value):
    source = step.inputs[0]
    if isinstance(source, GroupAdd) and source.coefficient(step.output):
        # Solve source = sum(c * t) for the one operand that was unknown.
        grp = ModGroup(source.modulus)
        rest = sum(
            c * grp.decode(value(t)) for c, t in source.terms if t != step.output
        )
        c = source.coefficient(step.output)
        return grp.encode(grp.mul(grp.inverse(c), grp.sub(grp.decode(value(source)), rest)))
    term = step.output
    grp = ModGroup(term.modulus)
    return grp.encode(sum(c * grp.decode(value(t)) for c, t in term.terms))


def _apply(step, value, suite):
    rule, inputs, output = step.rule, step.inputs, step.output
    if rule == EQUATION_UNFOLD:
        return value(inputs[0])
    if rule == XOR_COMBINE:
        return reduce(xor, (value(t) for t in inputs))
    if rule == HASH_APPLY:
        return hash_fields(*(value(t) for t in output.args), suite=suite)
    if rule == ENCRYPT:
        return sym_encrypt(derive_key(value(output.key), suite), value(output.body), suite)
    if rule == DECRYPT:
        ciphertext, key = inputs
        return sym_decrypt(derive_key(value(key), suite), value(ciphertext), suite)
    if rule == CONCAT_JOIN:
        return b"".join(value(t) for t in output.parts)
    if rule == CONCAT_SPLIT:
        start, end = split_offsets(inputs[0], suite)[output]
        blob = value(inputs[0])
        return blob[start:] if end is None else blob[start:end]
    if rule == GROUP_SOLVE:
        return _group(step, value)
    if rule == ONE_WAY_APPLY:
        return _one_way(output, value, suite)
    raise ReplayMismatch(f"Cannot replay rule {rule}.")


def replay_steps(trace, known_values, suite=DEFAULT_SUITE):
    """
    Recompute every step of a trace.

    Parameters
    ----------
    trace: DerivationTrace
    known_values: dict Term -> bytes
        Concrete values of the adversary's initial facts.
    suite: CryptoSuite

    Returns
    -------
    dict Term -> bytes
        The value of every step output (and of the initial facts).

    Raises
    ------
    ReplayMismatch
        If a step needs a value that is neither known nor derived earlier, a
        decryption fails, or a derived value contradicts a known one.

    """
    values = {normalize(t): bytes(v) for t, v in known_values.items()}

    def value(term):
        try:
            return values[term]
        except KeyError:
            raise ReplayMismatch(f"No value for {render(term)}.") from None

    for step in trace.steps:
        if step.rule == KNOWN:
            value(step.output)
            continue
        try:
            result = _apply(step, value, suite)
        except (AuthenticationFailure, DecodeFailure) as err:
            raise ReplayMismatch(f"Step {step.rule} failed: {err}") from err
        previous = values.get(step.output)
        if previous is not None and previous != result:
            raise ReplayMismatch(
                f"Step {step.rule} gave a value for {render(step.output)} that "
                "differs from the known one."
            )
        values[step.output] = result
    return values


def replay(trace, known_values, suite=DEFAULT_SUITE):
    """Bytes of the goal of a trace, recomputed from the known values."""
    return replay_steps(trace, known_values, suite)[trace.output]
