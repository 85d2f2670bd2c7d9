"""
Registration: the long-term state of one deployment of a protocol.

"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import MetadataOnlyProtocol, UnboundAtomError
from ..primitives.fuzzy import (
    bits_to_bytes,
    bytes_to_bits,
    flip_bits,
    fuzzy_gen,
    random_reading,
)
from ..primitives.group import encode_index
from ..primitives.puf import PufDevice
from ..primitives.suite import DEFAULT_SUITE
from ..terms import evaluate

logger = logging.getLogger(__name__)

# Simulated clock value at which the first session starts.
EPOCH = 1_700_000_000
# Rows of historical data stored when the description does not say.
DEFAULT_HISTORY_ROWS = 16


@dataclass
class DeploymentState:
    """
    Everything a deployment stores between sessions.

    Parameters
    ----------
    model: ProtocolModel
    suite: CryptoSuite
    values: dict name -> bytes
        Public and long-term values.
    history: list of (bytes, bytes)
        Rows (data piece, tag) of historical data, indexed by the history
        index. Empty when the protocol keeps none.
    devices: dict name -> PufDevice
        The PUF behind every PUF-measured reading.
    seed: int, optional
        Seed the deployment was registered with.
    epoch: int
        Clock value at the start of session 0.

    """

    model: object
    suite: object = DEFAULT_SUITE
    values: Dict[str, bytes] = field(default_factory=dict)
    history: List[Tuple[bytes, bytes]] = field(default_factory=list)
    devices: Dict[str, PufDevice] = field(default_factory=dict)
    seed: Optional[int] = None
    epoch: int = EPOCH
    lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    def stored_by(self, role):
        """Long-term values kept by a role."""
        return {
            spec.name: self.values[spec.name]
            for spec in self.model.stored_atoms(role)
            if spec.name in self.values
        }

    def public_values(self):
        return {spec.name: self.values[spec.name] for spec in self.model.public_atoms()}

    def long_term_values(self):
        return {
            spec.name: self.values[spec.name]
            for spec in self.model.long_term_atoms()
            if spec.name in self.values
        }

    def history_row(self, index):
        """The (data, tag) row at an index."""
        if not self.history:
            raise UnboundAtomError(f"{self.model.id} stores no historical data.")
        return self.history[index % len(self.history)]

    def snapshot(self):
        """A copy that later sessions cannot modify."""
        return DeploymentState(
            model=self.model,
            suite=self.suite,
            values=dict(self.values),
            history=list(self.history),
            devices=dict(self.devices),
            seed=self.seed,
            epoch=self.epoch,
        )


class _RegistrationEnv:
    """Registration values, with derived atoms computed on first use."""

    def __init__(self, model, values, suite):
        self.model = model
        self.values = values
        self.suite = suite
        self._active = set()

    def __getitem__(self, name):
        if name in self.values:
            return self.values[name]
        spec = self.model.atoms.get(name)
        term = self.model.equations.get(name)
        if spec is not None and spec.is_per_session or term is None:
            raise UnboundAtomError(f"{name} is not available at registration.")
        if name in self._active:
            raise UnboundAtomError(f"{name} is defined in terms of itself.")
        self._active.add(name)
        try:
            value = evaluate(term, self, self.suite)
        finally:
            self._active.discard(name)
        if spec is not None:
            self.values[name] = value
        return value


def _public_value(spec, model, suite, rng):
    text = spec.options.get("value")
    grp = model.group
    if text is None:
        if spec.is_scalar:
            return grp.encode(grp.random_element(rng))
        return rng.bytes(model.length_of(spec.name, suite))
    if text == "generator":
        return grp.encode(suite.generator)
    if spec.is_scalar:
        return grp.encode(int(text))
    return text.encode("utf-8")


def noisy_copy(bits, rng, suite=DEFAULT_SUITE):
    """A re-measurement of a reading: at most puf_noise_bits bits flipped."""
    count = int(rng.integers(0, suite.puf_noise_bits + 1))
    positions = rng.choice(suite.fuzzy_bits, size=count, replace=False)
    return flip_bits(bits, positions)


def enrolment_bits(model, name, values, devices, rng, suite=DEFAULT_SUITE):
    """The reading a fuzzy extractor is enrolled on."""
    spec = model.atoms[name]
    challenge = spec.options.get("puf")
    if challenge is None:
        return bytes_to_bits(values[name], suite)
    if name not in devices:
        devices[name] = PufDevice.manufacture(f"{model.id}/{name}", rng, suite)
    return devices[name].ideal_response(values[challenge], suite)


def _enrol(model, values, devices, rng, suite):
    """Fuzzy-extractor outputs drawn once, at registration."""
    by_reading = {}
    for spec in model.atoms.values():
        target = spec.options.get("gen-of")
        if target is not None and not spec.is_per_session:
            by_reading.setdefault(target, []).append(spec)
    for reading, specs in by_reading.items():
        bits = enrolment_bits(model, reading, values, devices, rng, suite)
        pair = fuzzy_gen(bits, rng, suite)
        for spec in specs:
            values[spec.name] = pair.tau if spec.kind == "helper" else pair.sigma


def _history(model, env, rng, suite):
    index = model.atoms_of_kind("history-index")
    data = model.atoms_of_kind("history-data")
    tags = model.atoms_of_kind("history-tag")
    if not data:
        return []
    data, index = data[0].name, index[0].name
    rows = model.option("history-rows", DEFAULT_HISTORY_ROWS, int)
    table = []
    for i in range(rows):
        d = rng.bytes(model.length_of(data, suite))
        row_env = _RegistrationEnv(
            model, dict(env.values, **{data: d, index: encode_index(i)}), suite
        )
        tag = evaluate(model.equations[tags[0].name], row_env, suite) if tags else b""
        table.append((d, tag))
    return table


def register(model, rng=None, suite=DEFAULT_SUITE, seed=None):
    """
    Draw the long-term state of a fresh deployment.

    Parameters
    ----------
    model: ProtocolModel
    rng: numpy.random.Generator, optional
        Defaults to a generator seeded with `seed`.
    suite: CryptoSuite
    seed: int, optional

    Returns
    -------
    DeploymentState

    Raises
    ------
    MetadataOnlyProtocol
        If the description cannot be executed.

    """
    if not model.is_executable:
        raise MetadataOnlyProtocol(f"{model.id} is described at metadata fidelity.")
    rng = rng if rng is not None else np.random.default_rng(seed)
    values, devices = {}, {}
    grp = model.group
    for spec in model.atoms.values():
        if spec.kind == "public":
            values[spec.name] = _public_value(spec, model, suite, rng)
        elif spec.kind == "secret" and "gen-of" not in spec.options:
            if spec.is_scalar:
                values[spec.name] = grp.encode(grp.random_element(rng))
            else:
                values[spec.name] = rng.bytes(model.length_of(spec.name, suite))
        elif spec.kind == "reading" and not spec.is_per_session:
            if "noisy-of" not in spec.options:
                values[spec.name] = bits_to_bytes(random_reading(rng, suite))
    for spec in model.atoms.values():
        source = spec.options.get("noisy-of")
        if spec.kind == "reading" and source is not None:
            bits = noisy_copy(bytes_to_bits(values[source], suite), rng, suite)
            values[spec.name] = bits_to_bytes(bits)
    _enrol(model, values, devices, rng, suite)
    env = _RegistrationEnv(model, values, suite)
    for spec in model.atoms_of_kind("derived"):
        values[spec.name] = env[spec.name]
    history = _history(model, env, rng, suite)
    logger.debug(
        "Registered a deployment of %s (%d values, %d history rows).",
        model.id,
        len(values),
        len(history),
    )
    return DeploymentState(model, suite, values, history, devices, seed)
