"""
The symbolic twin of a protocol: what an adversary starts from, as a
knowledge base for the closure engine.

"""

from ..deduction import ClosureLimits, KnowledgeBase
from ..primitives.hashing import bytes_to_int, int_to_bytes
from ..primitives.totp import totp_counter
from ..terms import PUBLIC, SECRET, Atom


def opaque_atom(name):
    """The placeholder standing for the body of an opaque message."""
    return Atom("~" + name, SECRET)


def wire_terms(model):
    """Every value sent on the wire, as terms (opaque ones as placeholders)."""
    terms = []
    for message in model.messages:
        for name in message.payload:
            terms.append(model.symbols[name] if message.plain else opaque_atom(name))
    return terms


def public_terms(model):
    """Values every party knows: public constants and clock-derived counters."""
    return [
        model.symbols[spec.name]
        for spec in model.atoms.values()
        if spec.symbolic_kind == PUBLIC or spec.kind == "counter"
    ]


def as_symbolic(model, adversary, limits=None):
    """
    The adversary's initial knowledge of a protocol.

    Parameters
    ----------
    model: ProtocolModel
        Use model.variant(name) to analyse an alternative reading.
    adversary: AdversaryModel
        Wire values are known when it has channel access; the names it
        compromises (factors, device reads, long-term leaks) are facts.
    limits: ClosureLimits, optional

    Returns
    -------
    (KnowledgeBase, Term)
        The knowledge base and the goal (the session key, or None for
        metadata-only descriptions).

    """
    facts = wire_terms(model) if adversary.channel is not None else []
    facts += [model.symbols[name] for name in adversary.compromised_names(model)]
    kb = KnowledgeBase(
        facts,
        model.equations,
        public_terms(model),
        limits if limits is not None else ClosureLimits(),
    )
    goal = model.symbols[model.sk] if model.sk is not None else None
    return kb, goal


def concrete_values(deployment, transcript, material=None):
    """
    Bytes of the adversary's initial facts, keyed by term.

    Parameters
    ----------
    deployment: DeploymentState
    transcript: Transcript
        The session the adversary observed.
    material: CompromisedMaterial, optional
        What it holds besides the wire. Historical data is looked up at the
        index sent on the wire, when the adversary holds that row.

    Returns
    -------
    dict Term -> bytes

    """
    model = deployment.model
    values = {}
    for name, value in transcript.observed().items():
        if name.startswith("~"):
            values[opaque_atom(name[1:])] = value
        else:
            values[model.symbols[name]] = value
    for name, value in deployment.public_values().items():
        values[model.symbols[name]] = value
    counters = model.atoms_of_kind("counter")
    if counters and transcript.messages:
        t0 = model.option("t0", 0, int)
        interval = model.option("interval", 30, int)
        counter = totp_counter(transcript.messages[0].time, t0, interval)
        for spec in counters:
            values[model.symbols[spec.name]] = int_to_bytes(
                counter, model.length_of(spec.name, deployment.suite)
            )
    if material is None:
        return values
    for name, value in material.values.items():
        values[model.symbols[name]] = value
    index = model.atoms_of_kind("history-index")
    observed = transcript.observed()
    if index and index[0].name in observed:
        row = material.history.get(bytes_to_int(observed[index[0].name]))
        if row is not None:
            for spec in model.atoms_of_kind("history-data"):
                values[model.symbols[spec.name]] = row[0]
            for spec in model.atoms_of_kind("history-tag"):
                values[model.symbols[spec.name]] = row[1]
    return values
