"""
Full man-in-the-middle relay.

The adversary sits between two roles and runs one session with each of
them. Towards the first role it plays the second, towards the second it
plays the first; every message is parsed in one world and re-emitted in the
other, recomputed from the protocol's own equations. Values one world cannot
compute (nonces and timestamps of the honest party) are taken from the
other.

For protocols that derive keys from channel readings (a reading declared as
a noisy copy of another), the adversary sets up a separate physical link
with each role: each role measures its link to the adversary, which holds a
close copy of both readings.

"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..errors import AttackInapplicable, UnboundAtomError
from ..primitives.fuzzy import bits_to_bytes, bytes_to_bits, fuzzy_gen, random_reading
from ..protocols.deployment import noisy_copy
from ..protocols.session import ROLE_FAILURES, Transcript, run_session
from ..terms import evaluate
from .adversary import FULL_MITM
from .channel import ChannelTap
from .compromise import compromise

logger = logging.getLogger(__name__)

# Values an impersonated role takes from the other world when it cannot
# compute them itself.
_SHARED_KINDS = ("nonce", "session", "timestamp", "counter", "history-index")


class _World:
    """The adversary playing `role` towards the opposite role."""

    def __init__(self, model, role, known, rng, suite):
        self.model = model
        self.role = role
        self.known = dict(known)
        self.rng = rng
        self.suite = suite
        self.peer = None
        self._active = set()

    def __getitem__(self, name):
        return self.resolve(name, ask_peer=True)

    def resolve(self, name, ask_peer=True):
        if name in self.known:
            return self.known[name]
        if name in self._active:
            raise UnboundAtomError(f"{name} depends on itself.")
        self._active.add(name)
        try:
            value = self._compute(name, ask_peer)
        finally:
            self._active.discard(name)
        self.known[name] = value
        return value

    def _compute(self, name, ask_peer):
        spec = self.model.atoms.get(name)
        if spec is not None and spec.owned_by(self.role) and spec.is_per_session:
            reading = spec.options.get("gen-of")
            if reading is not None:
                pair = fuzzy_gen(bytes_to_bits(self[reading], self.suite), self.rng, self.suite)
                for other in self.model.atoms.values():
                    if other.options.get("gen-of") == reading and other.is_per_session:
                        self.known[other.name] = (
                            pair.tau if other.kind == "helper" else pair.sigma
                        )
                return self.known[name]
        term = self.model.definition(name, self.role)
        if term is not None:
            return evaluate(term, self, self.suite)
        if ask_peer and spec is not None and spec.kind in _SHARED_KINDS:
            return self.peer.resolve(name, ask_peer=False)
        raise UnboundAtomError(f"The adversary cannot compute {name} as the {self.role}.")

    def receive(self, message):
        self.known.update(message.payload)

    def emit(self, message):
        values = {name: self[name] for name in message.names()}
        return message.with_values(**values)


@dataclass
class DualTranscript:
    """
    A relayed session.

    Parameters
    ----------
    transcript: Transcript
        The honest roles' record of the session.
    adversary_keys: dict role -> bytes
        The key the adversary holds for its session with each role.
    recovered: dict name -> bytes
        Session secrets the adversary computed on the way.
    steps: list of str
        What the relay did, message by message.

    """

    transcript: Transcript
    adversary_keys: Dict[str, Optional[bytes]] = field(default_factory=dict)
    recovered: Dict[str, bytes] = field(default_factory=dict)
    steps: List[str] = field(default_factory=list)

    @property
    def succeeded(self):
        """Both roles accepted, each with a key the adversary holds."""
        t = self.transcript
        return all(t.accepted.values()) and all(
            t.keys[role] is not None and t.keys[role] == self.adversary_keys.get(role)
            for role in t.keys
        )


def link_readings(model, rng, suite):
    """
    Readings of the two adversarial links.

    Returns
    -------
    (dict, dict)
        Overrides for the honest roles, and the readings the adversary holds
        in each world, keyed by the name the impersonated role uses.

    """
    overrides, held = {}, {}
    for spec in model.atoms.values():
        source = spec.options.get("noisy-of")
        if spec.kind != "reading" or source is None:
            continue
        near, far = model.atoms[source], spec
        for honest, impersonated in ((near, far), (far, near)):
            link = random_reading(rng, suite)
            for role in honest.owners:
                overrides.setdefault(role, {})[honest.name] = bits_to_bytes(link)
            held[impersonated.name] = bits_to_bytes(noisy_copy(link, rng, suite))
    return overrides, held


def mitm_session(deployment, adversary, rng, session_index=0):
    """
    Run one session with the adversary relaying every message.

    Parameters
    ----------
    deployment: DeploymentState
    adversary: AdversaryModel
        Needs full-mitm access. What it holds (through compromise) is known
        in both worlds; secrets it lacks are guessed at random.
    rng: numpy.random.Generator
    session_index: int

    Returns
    -------
    DualTranscript

    Raises
    ------
    AttackInapplicable
        If the adversary cannot relay, or the protocol does not run between
        exactly two roles.

    """
    model = deployment.model
    suite = deployment.suite
    if adversary.channel != FULL_MITM:
        raise AttackInapplicable("Relaying needs full-mitm channel access.")
    if len(model.roles) != 2:
        raise AttackInapplicable(f"{model.id} does not run between two roles.")
    material = compromise(deployment, adversary)
    known = dict(deployment.public_values())
    for spec in model.long_term_atoms():
        if spec.kind == "reading" or spec.name not in deployment.values:
            continue
        guess = rng.bytes(len(deployment.values[spec.name]))
        known[spec.name] = material.get(spec.name, guess)
    overrides, held = link_readings(model, rng, suite)
    first, second = model.roles
    # worlds[r] is the adversary playing the role opposite to r.
    worlds = {
        first: _World(model, second, dict(known, **held), rng, suite),
        second: _World(model, first, dict(known, **held), rng, suite),
    }
    worlds[first].peer, worlds[second].peer = worlds[second], worlds[first]
    steps = []

    def relay(message):
        parsed, emitted = worlds[message.sender], worlds[message.receiver]
        parsed.receive(message)
        if not message.plain:
            steps.append(f"message {message.index}: opaque, forwarded")
            return message
        try:
            forged = emitted.emit(message)
        except (UnboundAtomError,) + ROLE_FAILURES as err:
            steps.append(f"message {message.index}: forwarded unchanged ({err})")
            return message
        changed = [n for n in message.names() if forged.values()[n] != message.values()[n]]
        steps.append(
            f"message {message.index}: re-emitted"
            + (f" with {', '.join(changed)} replaced" if changed else " unchanged")
        )
        return forged

    transcript = run_session(
        deployment,
        channel=ChannelTap(FULL_MITM, relay),
        rng=rng,
        session_index=session_index,
        overrides=overrides,
    )
    adversary_keys = {}
    for role, world in worlds.items():
        try:
            adversary_keys[role] = world[model.sk]
        except (UnboundAtomError,) + ROLE_FAILURES:
            adversary_keys[role] = None
    recovered = {}
    for world in worlds.values():
        for name, value in world.known.items():
            spec = model.atoms.get(name)
            if spec is not None and spec.is_per_session and spec.kind != "timestamp":
                recovered.setdefault(name, value)
    result = DualTranscript(transcript, adversary_keys, recovered, steps)
    logger.debug("%s relayed session: %s.", model.id, "; ".join(steps))
    return result
