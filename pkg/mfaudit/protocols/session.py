"""
Honest execution of a protocol session over a (possibly hostile) channel.

Every role works in its own view: a value is taken, in order, from what the
role received, from what it stores or draws itself, from its own way of
computing it (`name@role := ...`), and from the shared definition. Checks run
after the message they name; a failed check makes the role reject and ends
the session.

"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from cryptography.hazmat.primitives import constant_time

from ..errors import (
    AuthenticationFailure,
    DecodeFailure,
    LengthMismatchError,
    UnboundAtomError,
    VerificationFailure,
)
from ..primitives.fuzzy import bits_to_bytes, bytes_to_bits, fuzzy_gen
from ..primitives.group import encode_index
from ..primitives.hashing import bytes_to_int, int_to_bytes
from ..primitives.totp import totp_counter
from ..terms import evaluate
from .model import EQUAL, FRESH, UNPACK, VERIFY

logger = logging.getLogger(__name__)

# Simulated seconds between the starts of consecutive sessions.
SESSION_SPACING = 60

# Failures that make a role reject rather than abort the run.
ROLE_FAILURES = (
    AuthenticationFailure,
    DecodeFailure,
    LengthMismatchError,
    VerificationFailure,
)


@dataclass(frozen=True)
class WireMessage:
    """
    A message as it travels on the channel.

    Parameters
    ----------
    index: int
        1-based position in the protocol.
    sender, receiver: str
    payload: tuple of (str, bytes)
        Names and values sent.
    plain: bool
        False for opaque (encrypted, body unknown) messages.
    time: int
        Clock value when the message was sent.

    """

    index: int
    sender: str
    receiver: str
    payload: Tuple[Tuple[str, bytes], ...]
    plain: bool = True
    time: int = 0

    def values(self):
        return dict(self.payload)

    def names(self):
        return [name for name, _ in self.payload]

    def with_values(self, **changes):
        """A copy with some payload values replaced."""
        unknown = set(changes) - set(self.names())
        assert not unknown, f"Message {self.index} carries no {sorted(unknown)}."
        payload = tuple((name, changes.get(name, value)) for name, value in self.payload)
        return replace(self, payload=payload)

    def to_dict(self):
        return {
            "index": self.index,
            "sender": self.sender,
            "receiver": self.receiver,
            "plain": self.plain,
            "time": self.time,
            "payload": {name: value.hex() for name, value in self.payload},
        }


@dataclass
class Transcript:
    """
    The record of one session.

    `messages` are the messages as their senders put them on the channel,
    `delivered` what the receivers got (None when the channel dropped the
    message). `ground_truth` holds the values drawn during the session, for
    scoring attacks; it is never shown to attacks. `rejected_at` gives the
    message whose checks a role failed.

    """

    protocol: str
    session_index: int
    seed: Optional[int]
    start_time: int
    messages: List[WireMessage] = field(default_factory=list)
    delivered: List[Optional[WireMessage]] = field(default_factory=list)
    keys: Dict[str, Optional[bytes]] = field(default_factory=dict)
    accepted: Dict[str, bool] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)
    rejected_at: Dict[str, int] = field(default_factory=dict)
    ground_truth: Dict[str, bytes] = field(default_factory=dict)

    @property
    def agreed(self):
        """Whether every role accepted with the same session key."""
        keys = set(self.keys.values())
        return all(self.accepted.values()) and len(keys) == 1 and None not in keys

    @property
    def session_key(self):
        """The agreed key, or None."""
        return next(iter(self.keys.values())) if self.agreed else None

    def observed(self):
        """
        What an eavesdropper learns: plain values by name and opaque values
        under `~name`.

        """
        values = {}
        for message in self.messages:
            for name, value in message.payload:
                values[name if message.plain else "~" + name] = value
        return values

    def message(self, index):
        return self.messages[index - 1]

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "session_index": self.session_index,
            "seed": self.seed,
            "start_time": self.start_time,
            "messages": [m.to_dict() for m in self.messages],
            "dropped": [i + 1 for i, m in enumerate(self.delivered) if m is None],
            "accepted": dict(self.accepted),
            "keys": {r: k.hex() if k else None for r, k in self.keys.items()},
            "failures": dict(self.failures),
        }


class Channel:
    """
    The network between the roles. The honest channel delivers every
    message unchanged; adversarial channels override `deliver`.

    """

    def deliver(self, message):
        """
        Parameters
        ----------
        message: WireMessage

        Returns
        -------
        WireMessage or None
            The message handed to the receiver, or None to drop it.

        """
        return message


class RoleView:
    """A role's view of the session, usable as an evaluation environment."""

    def __init__(self, session, role):
        self.session = session
        self.role = role

    def __getitem__(self, name):
        return self.session.resolve(self.role, name)


class _Session:
    def __init__(self, deployment, rng, start_time, overrides):
        self.deployment = deployment
        self.model = deployment.model
        self.suite = deployment.suite
        self.rng = rng
        self.clock = start_time
        self.overrides = overrides or {}
        self.shared = {}
        self.received = {role: {} for role in self.model.roles}
        self.cache = {role: {} for role in self.model.roles}
        self._active = set()

    def length(self, name):
        return self.model.length_of(name, self.suite) or self.suite.digest_length

    def resolve(self, role, name):
        if name in self.received[role]:
            return self.received[role][name]
        if name in self.overrides.get(role, {}):
            return self.overrides[role][name]
        cache = self.cache[role]
        if name not in cache:
            if (role, name) in self._active:
                raise UnboundAtomError(f"{role} cannot compute {name}: it depends on itself.")
            self._active.add((role, name))
            try:
                cache[name] = self._compute(role, name)
            finally:
                self._active.discard((role, name))
        return cache[name]

    def recompute(self, role, name):
        """A role's own value for a name, ignoring the one it received."""
        term = self.model.definition(name, role)
        if term is None:
            spec = self.model.atoms.get(name)
            value = self._own(role, spec) if spec and spec.owned_by(role) else None
            if value is None:
                raise UnboundAtomError(f"{role} cannot recompute {name}.")
            return value
        return evaluate(term, RoleView(self, role), self.suite)

    def _compute(self, role, name):
        spec = self.model.atoms.get(name)
        if spec is not None and spec.owned_by(role):
            value = self._own(role, spec)
            if value is not None:
                return value
        term = self.model.definition(name, role)
        if term is None:
            raise UnboundAtomError(f"{role} cannot compute {name}.")
        return evaluate(term, RoleView(self, role), self.suite)

    def _draw(self, spec):
        if spec.is_scalar:
            grp = self.model.group
            return grp.encode(grp.random_element(self.rng))
        return self.rng.bytes(self.length(spec.name))

    def _enrol(self, role, reading):
        """Per-session Gen on a role's reading."""
        bits = bytes_to_bits(self.resolve(role, reading), self.suite)
        pair = fuzzy_gen(bits, self.rng, self.suite)
        for spec in self.model.atoms.values():
            if spec.options.get("gen-of") == reading and spec.is_per_session:
                self.shared[spec.name] = pair.tau if spec.kind == "helper" else pair.sigma

    def _own(self, role, spec):
        """A value the role stores or draws itself, or None."""
        name, kind = spec.name, spec.kind
        if "gen-of" in spec.options and spec.is_per_session:
            if name not in self.shared:
                self._enrol(role, spec.options["gen-of"])
            return self.shared[name]
        if kind == "reading" and spec.is_per_session:
            device = self.deployment.devices[name]
            challenge = self.resolve(role, spec.options["puf"])
            return bits_to_bytes(device.response(challenge, self.rng, self.suite))
        if kind in ("nonce", "session"):
            if name not in self.shared:
                self.shared[name] = self._draw(spec)
            return self.shared[name]
        if kind == "timestamp":
            if name not in self.shared:
                self.shared[name] = int_to_bytes(self.clock, self.length(name))
            return self.shared[name]
        if kind == "counter":
            t0 = self.model.option("t0", 0, int)
            interval = self.model.option("interval", 30, int)
            return int_to_bytes(totp_counter(self.clock, t0, interval), self.length(name))
        if kind == "history-index":
            if name not in self.shared:
                rows = len(self.deployment.history)
                self.shared[name] = encode_index(int(self.rng.integers(rows)))
            return self.shared[name]
        if kind in ("history-data", "history-tag"):
            index = self.model.atoms_of_kind("history-index")[0].name
            row = self.deployment.history_row(bytes_to_int(self.resolve(role, index)))
            return row[0] if kind == "history-data" else row[1]
        return self.deployment.values.get(name)

    # Checks.

    def check(self, check):
        """Run one check; raise VerificationFailure if it fails."""
        role = check.role
        view = RoleView(self, role)
        if check.kind == VERIFY:
            received = self.received[role].get(check.name)
            if received is None:
                raise VerificationFailure(f"{check.name} was not received.")
            if not constant_time.bytes_eq(received, self.recompute(role, check.name)):
                raise VerificationFailure(f"{check.name} does not verify.")
        elif check.kind == EQUAL:
            left = evaluate(check.left, view, self.suite)
            right = evaluate(check.right, view, self.suite)
            if not constant_time.bytes_eq(left, right):
                raise VerificationFailure(f"{check.text} does not hold.")
        elif check.kind == FRESH:
            sent = bytes_to_int(view[check.name])
            if abs(self.clock - sent) > self.suite.freshness_window:
                raise VerificationFailure(f"{check.name} is stale.")
        elif check.kind == UNPACK:
            blob = evaluate(check.left, view, self.suite)
            position = 0
            for i, target in enumerate(check.targets):
                size = check.lengths[i] if check.lengths else None
                if i == len(check.targets) - 1:
                    end = len(blob)
                else:
                    end = position + (size or self.length(target))
                if end > len(blob):
                    raise VerificationFailure(f"{check.text}: value too short.")
                self.received[role][target] = blob[position:end]
                position = end

    def run_checks(self, role, index):
        for check in self.model.checks_after(index, role):
            try:
                self.check(check)
            except ROLE_FAILURES as err:
                return f"check '{check.text}' failed: {err}"
        return None


def run_session(
    deployment,
    channel=None,
    rng=None,
    session_index=0,
    seed=None,
    start_time=None,
    overrides=None,
):
    """
    Run one session of a deployed protocol.

    Parameters
    ----------
    deployment: DeploymentState
        Used exclusively for the duration of the session.
    channel: Channel, optional
        Defaults to the honest channel.
    rng: numpy.random.Generator, optional
        Defaults to a generator seeded with `seed`.
    session_index: int
        Sessions start SESSION_SPACING simulated seconds apart.
    seed: int, optional
        Recorded in the transcript.
    start_time: int, optional
        Overrides the start time implied by session_index.
    overrides: dict role -> dict name -> bytes, optional
        Values a role uses in place of its own for this session (for
        instance readings of a channel an adversary sits on).

    Returns
    -------
    Transcript

    """
    channel = channel if channel is not None else Channel()
    rng = rng if rng is not None else np.random.default_rng(seed)
    if start_time is None:
        start_time = deployment.epoch + SESSION_SPACING * session_index
    model = deployment.model
    transcript = Transcript(model.id, session_index, seed, start_time)
    with deployment.lock:
        session = _Session(deployment, rng, start_time, overrides)
        for message in model.messages:
            session.clock += 1
            try:
                payload = tuple(
                    (name, session.resolve(message.sender, name))
                    for name in message.payload
                )
            except ROLE_FAILURES as err:
                transcript.failures[message.sender] = (
                    f"could not compute message {message.index}: {err}"
                )
                break
            wire = WireMessage(
                message.index,
                message.sender,
                message.receiver,
                payload,
                message.plain,
                session.clock,
            )
            transcript.messages.append(wire)
            received = channel.deliver(wire)
            transcript.delivered.append(received)
            if received is None:
                logger.debug("%s: message %d dropped.", model.id, message.index)
                break
            session.received[message.receiver].update(received.payload)
            failure = session.run_checks(message.receiver, message.index)
            if failure is not None:
                transcript.failures[message.receiver] = failure
                transcript.rejected_at[message.receiver] = message.index
                break
        delivered = {m.index for m in transcript.delivered if m is not None}
        for role in model.roles:
            if role in transcript.failures:
                continue
            missing = [
                m.index
                for m in model.messages
                if m.receiver == role and m.index not in delivered
            ]
            if missing:
                transcript.failures[role] = f"message {missing[0]} never arrived"
                continue
            try:
                transcript.keys[role] = session.resolve(role, model.sk)
            except ROLE_FAILURES as err:
                transcript.failures[role] = f"could not compute {model.sk}: {err}"
        for role in model.roles:
            transcript.accepted[role] = role not in transcript.failures
            transcript.keys.setdefault(role, None)
            if not transcript.accepted[role]:
                transcript.keys[role] = None
        transcript.ground_truth = dict(session.shared)
    logger.debug(
        "%s session %d: accepted %s.", model.id, session_index, transcript.accepted
    )
    return transcript

