"""
Normal form of terms.

 * XOR sums are flattened, pairs of equal elements cancel, zeros vanish and
   the remaining elements are sorted by their textual form. An empty sum is
   Zero and a sum of one element is that element.
 * Concatenations are flattened.
 * Group sums are flattened, like operands are collected and coefficients
   reduced modulo p; zero coefficients vanish. A sum of one group-valued
   operand with coefficient 1 is that operand; any other lone operand
   keeps its sum, which reduces its value modulo p.
 * DEC(k, ENC(k, m)) is m.

Normalisation is idempotent and does not change the value of a term under
any environment.

"""

from collections import Counter

from .term import (
    Atom,
    ConcatSeq,
    GroupAdd,
    SymDec,
    SymEnc,
    Term,
    XorSum,
    Zero,
    element_length,
    is_group_valued,
    length_of,
    rebuild,
    render,
)


def sort_key(term):
    return render(term)


def normalize(term):
    """
    Normal form of a term.

    Parameters
    ----------
    term: Term

    Returns
    -------
    Term

    """
    assert isinstance(term, Term), f"Not a term: {term!r}"
    if isinstance(term, (Atom, Zero)):
        return term
    if isinstance(term, XorSum):
        return xor_of(*(normalize(t) for t in term.elements))
    if isinstance(term, ConcatSeq):
        parts = []
        for part in (normalize(t) for t in term.parts):
            if isinstance(part, ConcatSeq):
                parts.extend(part.parts)
            else:
                parts.append(part)
        return parts[0] if len(parts) == 1 else ConcatSeq(tuple(parts))
    if isinstance(term, GroupAdd):
        return group_sum(
            [(c, normalize(t)) for c, t in term.terms], term.modulus
        )
    if isinstance(term, SymDec):
        key, ciphertext = normalize(term.key), normalize(term.ciphertext)
        if isinstance(ciphertext, SymEnc) and ciphertext.key == key:
            return ciphertext.body
        return SymDec(key, ciphertext)
    # Every other operator is free.
    return rebuild(term, (normalize(t) for t in term.children()))


def xor_of(*terms):
    """
    Normal form of the XOR of already normalised terms.

    """
    counts = Counter()
    length = None
    for term in terms:
        elements = term.elements if isinstance(term, XorSum) else (term,)
        for element in elements:
            if isinstance(element, Zero):
                length = length if length is not None else element.length
                continue
            counts[element] += 1
    survivors = sorted((t for t, n in counts.items() if n % 2), key=sort_key)
    if not survivors:
        if length is None:
            for term in counts:
                length = length_of(term)
                if length is not None:
                    break
        return Zero(length)
    if len(survivors) == 1:
        return survivors[0]
    return XorSum(tuple(survivors))


def group_sum(terms, modulus):
    """
    Normal form of sum(c * t) mod modulus for normalised operands t.

    """
    totals = {}
    for c, term in terms:
        if isinstance(term, GroupAdd) and term.modulus == modulus:
            for inner_c, inner in term.terms:
                totals[inner] = (totals.get(inner, 0) + c * inner_c) % modulus
        elif isinstance(term, Zero):
            continue
        else:
            totals[term] = (totals.get(term, 0) + c) % modulus
    collected = sorted(
        ((c, t) for t, c in totals.items() if c), key=lambda ct: sort_key(ct[1])
    )
    if not collected:
        return Zero(element_length(modulus))
    if (
        len(collected) == 1
        and collected[0][0] == 1
        and is_group_valued(collected[0][1], modulus)
    ):
        return collected[0][1]
    return GroupAdd(tuple(collected), modulus)


def xor_elements(term):
    """Elements of a term seen as an XOR sum."""
    if isinstance(term, XorSum):
        return term.elements
    if isinstance(term, Zero):
        return ()
    return (term,)
