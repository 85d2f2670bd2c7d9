from .term import (
    PUBLIC,
    SECRET,
    NONCE,
    ATOM_KINDS,
    Term,
    Atom,
    Zero,
    XorSum,
    HashApp,
    ConcatSeq,
    SymEnc,
    SymDec,
    GroupAdd,
    GroupMulOneWay,
    ScalarOfHash,
    TagApp,
    FuzzyRep,
    render,
    subterms,
    atoms_of,
    length_of,
    is_group_valued,
    rebuild,
)
from .normalize import normalize, xor_of, group_sum, xor_elements
from .parser import parse_term, TermParser
from .evaluate import evaluate, lookup
