"""
One-step deduction rules.

The rules are split by how they are driven:
 * analysis rules take one known term apart (decrypt, concat-split,
   group-solve);
 * xor-combine joins two known terms, and is kept only when the result is
   strictly smaller than the larger input or is a subterm of interest;
 * composition rules build a subterm of interest once all its arguments are
   known (hash-apply, encrypt, concat-join, xor-combine, group-solve and
   one-way-apply for GMUL, SOH, TAG and REP).

No rule inverts a hash or a one-way exponentiation.

"""

from ..terms import (
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
    is_group_valued,
    length_of,
    xor_elements,
    xor_of,
)
from .knowledge import (
    CONCAT_JOIN,
    CONCAT_SPLIT,
    DECRYPT,
    ENCRYPT,
    GROUP_SOLVE,
    HASH_APPLY,
    ONE_WAY_APPLY,
    XOR_COMBINE,
    Step,
)

_COMPOSE_RULE = {
    HashApp: HASH_APPLY,
    SymEnc: ENCRYPT,
    SymDec: DECRYPT,
    ConcatSeq: CONCAT_JOIN,
    XorSum: XOR_COMBINE,
    GroupAdd: GROUP_SOLVE,
    GroupMulOneWay: ONE_WAY_APPLY,
    ScalarOfHash: ONE_WAY_APPLY,
    TagApp: ONE_WAY_APPLY,
    FuzzyRep: ONE_WAY_APPLY,
}


def split_offsets(cat, suite):
    """
    Byte ranges (start, end) of the parts of a concatenation that can be cut
    out of its value: every earlier part has a known length, and the part
    itself has a known length or is the last one. end is None for "to the
    end of the value".

    """
    ranges = {}
    start = 0
    last = len(cat.parts) - 1
    for position, part in enumerate(cat.parts):
        size = length_of(part, suite)
        if size is None and position != last:
            break
        ranges.setdefault(part, (start, None if size is None else start + size))
        if size is None:
            break
        start += size
    return ranges


class RuleSet:
    """
    The deduction rules instantiated for one knowledge base and goal.

    Parameters
    ----------
    interest: list of Term
        The subterms of interest, in a stable order.
    suite: CryptoSuite
        Used for the lengths of digests and group elements.

    """

    def __init__(self, interest, suite):
        self.interest = list(interest)
        self.interest_set = set(self.interest)
        self.suite = suite
        self._lengths = {}

    def length(self, term):
        if term not in self._lengths:
            self._lengths[term] = length_of(term, self.suite)
        return self._lengths[term]

    def analyse(self, term, known):
        """Steps taking a known term apart, given everything known."""
        if isinstance(term, SymEnc):
            if term.key in known:
                yield Step(DECRYPT, (term, term.key), term.body)
        elif isinstance(term, ConcatSeq):
            for part in split_offsets(term, self.suite):
                yield Step(CONCAT_SPLIT, (term,), part)
        elif isinstance(term, GroupAdd):
            unknown = [t for _, t in term.terms if t not in known]
            if len(unknown) == 1 and is_group_valued(unknown[0], term.modulus):
                others = tuple(t for _, t in term.terms if t != unknown[0])
                yield Step(GROUP_SOLVE, (term,) + others, unknown[0])

    def combine(self, a, b):
        """xor-combine of two known terms, if it is kept."""
        if a == b or isinstance(a, Zero) or isinstance(b, Zero):
            return None
        size_a, size_b = self.length(a), self.length(b)
        if size_a is not None and size_b is not None and size_a != size_b:
            return None
        result = xor_of(a, b)
        if isinstance(result, Zero):
            return None
        shrinks = len(xor_elements(result)) < max(
            len(xor_elements(a)), len(xor_elements(b))
        )
        if shrinks or result in self.interest_set:
            return Step(XOR_COMBINE, (a, b), result)
        return None

    def compose(self, term, known):
        """Step building a subterm of interest from known arguments."""
        if isinstance(term, (Atom, Zero)):
            return None
        children = term.children()
        if not all(t in known for t in children):
            return None
        rule = _COMPOSE_RULE[type(term)]
        if rule == DECRYPT:
            return Step(DECRYPT, (term.ciphertext, term.key), term)
        return Step(rule, tuple(dict.fromkeys(children)), term)

    def one_step(self, known, frontier):
        """
        Every step applicable to the known terms, where xor-combine only pairs
        a term of the frontier with a known term. Returns a dict output ->
        first step producing it, for outputs not already known.

        """
        new = {}

        def add(step):
            if step is not None and step.output not in known and step.output not in new:
                new[step.output] = step

        for term in known:
            for step in self.analyse(term, known):
                add(step)
        for a in frontier:
            for b in known:
                add(self.combine(a, b))
        for term in self.interest:
            if term not in known:
                add(self.compose(term, known))
        return new
