"""
Identity linkability of transcripts.

A session leaks who took part in it when an identifier travels in clear, or
sits as a separate part of a concatenation (which an eavesdropper slices off
once the other parts have a known length), or when a value computed from an
identifier is the same in every session, so that sessions can be linked.

A value masked with a hash of identifiers and values the eavesdropper sees
anyway is keyed by the identity alone: whoever holds a list of identities
(leaked from a gateway, or a compromised identity factor) recomputes the
mask of every session and tells whose session it is.

"""

from dataclasses import dataclass

from ..terms import ConcatSeq, HashApp, atoms_of, subterms

PLAIN_IDENTITY = "plain-identity"
CONCATENATED_IDENTITY = "concatenated-identity"
CONSTANT_IDENTIFIER = "constant-identifier"
IDENTITY_KEYED_MASK = "identity-keyed-mask"


@dataclass(frozen=True)
class LinkabilityFinding:
    """One way the wire reveals or links an identity."""

    name: str
    kind: str
    identities: tuple

    def __str__(self):
        who = ", ".join(self.identities)
        if self.kind == PLAIN_IDENTITY:
            return f"{self.name} is an identity sent in plain"
        if self.kind == CONCATENATED_IDENTITY:
            return f"{self.name} carries {who} as a separate part of a concatenation"
        if self.kind == IDENTITY_KEYED_MASK:
            return f"{self.name} is masked by a hash of {who} and values on the wire"
        return f"{self.name} depends on {who} and is the same in every session"


def identity_sources(model, name, role=None):
    """Identity atoms a value is computed from, following every definition."""
    identities = set(model.identity_atoms())
    found, seen, stack = [], set(), [name]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        if current in identities:
            found.append(current)
            continue
        term = model.definition(current, role)
        if term is not None:
            stack.extend(atoms_of(term))
    return sorted(found)


def _concatenated_identities(model, name, role):
    term = model.definition(name, role)
    if not isinstance(term, ConcatSeq):
        return []
    identities = set(model.identity_atoms())
    return sorted(
        {part.name for part in term.parts if getattr(part, "name", None) in identities}
    )


def observable_names(model):
    """Names an eavesdropper reads: plain wire values, public constants and counters."""
    names = {name for message in model.messages if message.plain for name in message.payload}
    names.update(
        spec.name for spec in model.atoms.values() if spec.kind in ("public", "counter")
    )
    return names


def _defined(model, name, role):
    """The definition a role computes a name with, unless the name is stored or drawn."""
    spec = model.atoms.get(name)
    if spec is not None and spec.kind != "derived":
        return None
    return model.definition(name, role)


def _keyed_by(model, names, role, observable, identities, seen):
    """
    Identities the values of names are computed from, or None if any of them
    needs something besides identities and observable values.

    """
    found = set()
    for name in names:
        if name in identities:
            found.add(name)
            continue
        if name in observable:
            continue
        term = _defined(model, name, role)
        if term is None or name in seen:
            return None
        inner = _keyed_by(model, atoms_of(term), role, observable, identities, seen | {name})
        if inner is None:
            return None
        found |= inner
    return found


def _hashes(model, name, role, observable):
    """Hash applications a wire value is built from, through unobserved definitions."""
    found, seen, stack = [], set(), [name]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        term = _defined(model, current, role)
        if term is None:
            continue
        for t in subterms(term):
            if isinstance(t, HashApp) and t not in found:
                found.append(t)
        stack.extend(a for a in atoms_of(term) if a not in observable)
    return found


def _identity_keyed_masks(model, name, role, observable):
    identities = set(model.identity_atoms())
    keyed = set()
    for term in _hashes(model, name, role, observable):
        found = _keyed_by(model, atoms_of(term), role, observable, identities, frozenset())
        if found:
            keyed |= found
    return sorted(keyed)


def identity_linkability_scan(transcripts, model):
    """
    Look for identities an eavesdropper can read or link.

    Parameters
    ----------
    transcripts: list of Transcript
        Sessions of one deployment. Cross-session linking needs at least two.
    model: ProtocolModel

    Returns
    -------
    list of LinkabilityFinding

    """
    transcripts = list(transcripts)
    identities = set(model.identity_atoms())
    observable = observable_names(model)
    findings = []
    for message in model.messages:
        if not message.plain:
            continue
        for name in message.payload:
            if name in identities:
                findings.append(LinkabilityFinding(name, PLAIN_IDENTITY, (name,)))
                continue
            parts = _concatenated_identities(model, name, message.sender)
            if parts:
                findings.append(LinkabilityFinding(name, CONCATENATED_IDENTITY, tuple(parts)))
                continue
            keyed = _identity_keyed_masks(model, name, message.sender, observable)
            if keyed:
                findings.append(LinkabilityFinding(name, IDENTITY_KEYED_MASK, tuple(keyed)))
                continue
            if len(transcripts) < 2:
                continue
            values = {t.observed().get(name) for t in transcripts}
            if len(values) != 1 or None in values:
                continue
            sources = identity_sources(model, name, message.sender)
            if sources:
                findings.append(LinkabilityFinding(name, CONSTANT_IDENTIFIER, tuple(sources)))
    return findings
