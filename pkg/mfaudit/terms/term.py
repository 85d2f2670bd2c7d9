"""
Symbolic terms.

A term describes how a value is computed from atoms (named constants,
secrets and nonces) with the operators used by the protocols: XOR, hashing,
concatenation, authenticated encryption, arithmetic modulo a prime, the
one-way exponentiation standing in for curve arithmetic, historical-data
tags and fuzzy reproduction.

Terms are immutable and hashable. Equality is structural, so two terms are
only known to be equal after both have been put in normal form (see
mfaudit.terms.normalize).

"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..primitives.group import ModGroup
from ..primitives.suite import DEFAULT_MODULUS, DEFAULT_SUITE
from ..primitives.symmetric import CIPHERTEXT_OVERHEAD

# Kinds of atoms.
PUBLIC = "public"
SECRET = "secret"
NONCE = "nonce"
ATOM_KINDS = (PUBLIC, SECRET, NONCE)


class Term:
    """Base class of all terms."""

    def children(self):
        """Direct subterms, in order."""
        return ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(Term):
    """
    A named value. Atoms compare by name only: kind and length are
    declarations attached to the name.

    """

    name: str
    kind: str = field(default=SECRET, compare=False)
    length: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        assert self.kind in ATOM_KINDS, f"Unknown atom kind {self.kind}."

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Zero(Term):
    """The all-zero string, identity of XOR. All zeros compare equal."""

    length: Optional[int] = field(default=None, compare=False)

    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True, repr=False)
class XorSum(Term):
    """XOR of equal-length terms. Elements are kept sorted when normalised."""

    elements: Tuple[Term, ...]

    def children(self):
        return self.elements

    def __repr__(self):
        return f"XorSum({render(self)})"


@dataclass(frozen=True, repr=False)
class HashApp(Term):
    """H(a1, ..., an) over the length-prefixed encoding of the arguments."""

    args: Tuple[Term, ...]

    def children(self):
        return self.args

    def __repr__(self):
        return f"HashApp({render(self)})"


@dataclass(frozen=True, repr=False)
class ConcatSeq(Term):
    """Raw concatenation a1 || ... || an."""

    parts: Tuple[Term, ...]

    def children(self):
        return self.parts

    def __repr__(self):
        return f"ConcatSeq({render(self)})"


@dataclass(frozen=True, repr=False)
class SymEnc(Term):
    """Authenticated encryption of body under key."""

    key: Term
    body: Term

    def children(self):
        return (self.key, self.body)

    def __repr__(self):
        return f"SymEnc({render(self)})"


@dataclass(frozen=True, repr=False)
class SymDec(Term):
    """Decryption of a ciphertext; DEC(k, ENC(k, m)) normalises to m."""

    key: Term
    ciphertext: Term

    def children(self):
        return (self.key, self.ciphertext)

    def __repr__(self):
        return f"SymDec({render(self)})"


@dataclass(frozen=True, repr=False)
class GroupAdd(Term):
    """
    Linear combination sum(c * t) modulo a prime. Operands evaluate to
    encoded group elements. Coefficients are kept in [1, p).

    """

    terms: Tuple[Tuple[int, Term], ...]
    modulus: int = DEFAULT_MODULUS

    def children(self):
        return tuple(t for _, t in self.terms)

    def coefficient(self, term):
        for c, t in self.terms:
            if t == term:
                return c
        return 0

    def __repr__(self):
        return f"GroupAdd({render(self)})"


@dataclass(frozen=True, repr=False)
class GroupMulOneWay(Term):
    """base^scalar mod p, which the adversary cannot invert."""

    scalar: Term
    base: Term
    modulus: int = DEFAULT_MODULUS

    def children(self):
        return (self.scalar, self.base)

    def __repr__(self):
        return f"GroupMulOneWay({render(self)})"


@dataclass(frozen=True, repr=False)
class ScalarOfHash(Term):
    """A byte string (usually a digest) mapped to a group element."""

    term: Term
    modulus: int = DEFAULT_MODULUS

    def children(self):
        return (self.term,)

    def __repr__(self):
        return f"ScalarOfHash({render(self)})"


@dataclass(frozen=True, repr=False)
class TagApp(Term):
    """Historical-data tag K * h(d || i) + h(K || i) mod p."""

    key: Term
    data: Term
    index: Term
    modulus: int = DEFAULT_MODULUS

    def children(self):
        return (self.key, self.data, self.index)

    def __repr__(self):
        return f"TagApp({render(self)})"


@dataclass(frozen=True, repr=False)
class FuzzyRep(Term):
    """Rep(reading, helper): the key a fuzzy extractor reproduces."""

    reading: Term
    helper: Term

    def children(self):
        return (self.reading, self.helper)

    def __repr__(self):
        return f"FuzzyRep({render(self)})"


# Textual names of the function-style operators.
FUNCTION_NAMES = {
    HashApp: "H",
    ConcatSeq: "CAT",
    SymEnc: "ENC",
    SymDec: "DEC",
    GroupMulOneWay: "GMUL",
    ScalarOfHash: "SOH",
    TagApp: "TAG",
    FuzzyRep: "REP",
}


def _operand(term):
    # Infix terms are bracketed when they appear inside another infix term.
    if isinstance(term, (XorSum, GroupAdd)):
        return f"({render(term)})"
    return render(term)


def render(term):
    """
    Textual form of a term, in the syntax accepted by parse_term.

    """
    if isinstance(term, Atom):
        return term.name
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, XorSum):
        return " (+) ".join(_operand(t) for t in term.elements)
    if isinstance(term, GroupAdd):
        if not term.terms:
            return "0"
        pieces = []
        for position, (c, t) in enumerate(term.terms):
            if c == term.modulus - 1 and c != 1:
                sign, text = ".-", _operand(t)
            else:
                sign = ".+"
                text = _operand(t) if c == 1 else f"{c}*{_operand(t)}"
            if position == 0:
                pieces.append(text if sign == ".+" else f"0 .- {text}")
            else:
                pieces.append(f"{sign} {text}")
        text = " ".join(pieces)
        if len(term.terms) == 1 and term.terms[0][0] == 1:
            # A lone operand needs an explicit group context to round-trip.
            text = f"{text} .+ 0"
        if term.modulus != DEFAULT_MODULUS:
            text += f" mod {term.modulus}"
        return text
    name = FUNCTION_NAMES.get(type(term))
    if name is None:
        raise TypeError(f"Not a term: {term!r}")
    return f"{name}({', '.join(render(t) for t in term.children())})"


def subterms(term):
    """
    All subterms of a term (including itself), parents before children,
    without repetition.

    """
    seen = {}
    stack = [term]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen[current] = None
        stack.extend(reversed(current.children()))
    return list(seen)


def atoms_of(term):
    """Names of the atoms occurring in a term, in order of first occurrence."""
    return [t.name for t in subterms(term) if isinstance(t, Atom)]


def element_length(modulus):
    return ModGroup(modulus).element_length


def length_of(term, suite=DEFAULT_SUITE):
    """
    Byte length of the value of a term, or None if it cannot be told from
    the declarations alone.

    """
    if isinstance(term, (Atom, Zero)):
        return term.length
    if isinstance(term, XorSum):
        for t in term.elements:
            size = length_of(t, suite)
            if size is not None:
                return size
        return None
    if isinstance(term, (HashApp, FuzzyRep)):
        return suite.digest_length
    if isinstance(term, ConcatSeq):
        sizes = [length_of(t, suite) for t in term.parts]
        return None if None in sizes else sum(sizes)
    if isinstance(term, SymEnc):
        size = length_of(term.body, suite)
        return None if size is None else size + CIPHERTEXT_OVERHEAD
    if isinstance(term, SymDec):
        size = length_of(term.ciphertext, suite)
        return None if size is None else size - CIPHERTEXT_OVERHEAD
    if isinstance(term, (GroupAdd, GroupMulOneWay, ScalarOfHash, TagApp)):
        return element_length(term.modulus)
    raise TypeError(f"Not a term: {term!r}")


def is_group_valued(term, modulus):
    """Whether a term's value is always a canonical element modulo modulus."""
    if isinstance(term, (GroupAdd, GroupMulOneWay, ScalarOfHash, TagApp)):
        return term.modulus == modulus
    if isinstance(term, Atom):
        return term.length in (None, element_length(modulus))
    return False


def rebuild(term, children):
    """A term of the same operator (and modulus) with new children."""
    children = tuple(children)
    if isinstance(term, (Atom, Zero)):
        return term
    if isinstance(term, XorSum):
        return XorSum(children)
    if isinstance(term, HashApp):
        return HashApp(children)
    if isinstance(term, ConcatSeq):
        return ConcatSeq(children)
    if isinstance(term, GroupAdd):
        return GroupAdd(
            tuple((c, child) for (c, _), child in zip(term.terms, children)),
            term.modulus,
        )
    if isinstance(term, (GroupMulOneWay, ScalarOfHash, TagApp)):
        return type(term)(*children, modulus=term.modulus)
    return type(term)(*children)
