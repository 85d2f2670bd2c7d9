"""
Abstract base class for attacks on protocols, and helpers shared by attacks.

"""

from __future__ import annotations
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..protocols import DeploymentState, ProtocolModel, Transcript

from abc import ABC, abstractmethod

from ..deduction import derivable, replay
from ..errors import (
    OutOfRangeError,
    PrerequisiteUnmet,
    ReplayMismatch,
)
from ..protocols.symbolic import as_symbolic, concrete_values
from ..report.attack_summary import AttackOutcome
from ..threat_models.adversary import CHANNEL_ACCESS, EAVESDROP, AdversaryModel
from ..threat_models.compromise import compromise


def split_concat_fixed_len(blob, prefix_len):
    """
    Split a concatenation whose first part has a known, fixed length.

    Parameters
    ----------
    blob: bytes
    prefix_len: int
        Length of the first part, typically the digest length.

    Returns
    -------
    (bytes, bytes)

    Raises
    ------
    OutOfRangeError
        If prefix_len does not lie in [0, len(blob)].

    """
    if not 0 <= prefix_len <= len(blob):
        raise OutOfRangeError(
            f"Cannot split {len(blob)} bytes after position {prefix_len}."
        )
    return bytes(blob[:prefix_len]), bytes(blob[prefix_len:])


class Holdings:
    """
    Values an attack works with: what the adversary compromised, plus the
    public values of the deployment. Secrets it does not hold are replaced
    by random guesses of the right length, so that a non-strict run fails
    instead of raising.

    """

    def __init__(self, deployment, adversary, rng):
        self.deployment = deployment
        self.material = compromise(deployment, adversary)
        self.public = deployment.public_values()
        self.rng = rng
        self.guessed = []

    def __contains__(self, name):
        return name in self.material or name in self.public

    def __getitem__(self, name):
        if name in self.material:
            return self.material[name]
        if name in self.public:
            return self.public[name]
        self.guessed.append(name)
        length = len(self.deployment.values.get(name, b"")) or self.deployment.suite.digest_length
        return self.rng.bytes(length)


class Attack(ABC):
    """
    Abstract base class for all attacks on protocols.

    An attack declares the protocols it targets, the criteria its success
    counts against and what the adversary needs (compromised values and
    channel access). Attacks are run through `run`, usually via
    `run_attack`. Attacks that recover values also declare the symbolic
    goals of the same recovery, so that the deduction engine can re-derive
    them independently (see `run_symbolic`).

    """

    # Protocol ids this attack applies to.
    protocol_ids = ()
    # Criteria a successful run counts against.
    criteria = ()
    # Names the adversary must hold, per protocol id.
    required = {}
    # Least channel access needed.
    channel = EAVESDROP
    # Eavesdropped sessions handed to `run`.
    transcripts_needed = 1
    # Whether the attack runs on an executable deployment.
    needs_deployment = True

    @property
    def label(self):
        """
        A label to describe this attack in reports.

        """
        return "Unnamed Attack"

    def applies_to(self, model: ProtocolModel):
        return model.id in self.protocol_ids

    def default_adversary(self, model: ProtocolModel):
        """The weakest adversary this attack is meant to work with."""
        return AdversaryModel(channel=self.channel, label=self.label)

    def check_prerequisites(self, model: ProtocolModel, adversary: AdversaryModel):
        """
        Raises
        ------
        PrerequisiteUnmet
            If the adversary lacks channel access or a value the attack needs.

        """
        if CHANNEL_ACCESS.index(adversary.channel) < CHANNEL_ACCESS.index(self.channel):
            raise PrerequisiteUnmet(
                f"{self.label} needs {self.channel} access, the adversary has "
                f"{adversary.channel or 'none'}."
            )
        held = set(adversary.compromised_names(model))
        missing = [name for name in self.required.get(model.id, ()) if name not in held]
        if missing:
            raise PrerequisiteUnmet(
                f"{self.label} needs {', '.join(missing)}, which the adversary does not hold."
            )

    @abstractmethod
    def run(
        self,
        deployment: DeploymentState,
        transcripts: list[Transcript],
        adversary: AdversaryModel,
        rng,
    ):
        """
        Perform the attack.

        Returns
        -------
        AttackOutcome

        """
        pass

    def goal(self, model: ProtocolModel):
        """
        Symbolic goals of the attack, by name. Empty for attacks that do not
        recover values (structural findings, impersonation, relaying).

        """
        return {}

    def run_symbolic(self, deployment, transcript, adversary):
        """
        Re-derive the goals with the deduction engine and replay the
        derivations on the adversary's own bytes.

        Returns
        -------
        AttackOutcome
            recovered holds the values of the goals that were derived and
            replayed; trace the derivation of the last goal.

        """
        model = deployment.model
        kb, _ = as_symbolic(model, adversary)
        known = concrete_values(deployment, transcript, compromise(deployment, adversary))
        recovered, findings, trace = {}, [], None
        for name, term in self.goal(model).items():
            trace = derivable(kb, term, deployment.suite)
            if trace is None:
                findings.append(f"{name} is not derivable")
                continue
            try:
                recovered[name] = replay(trace, known, deployment.suite)
            except ReplayMismatch as err:
                findings.append(f"{name} does not replay: {err}")
        return AttackOutcome(
            self.label,
            model.id,
            recovered,
            trace=trace,
            criteria=self.criteria,
            findings=findings,
            success=bool(recovered) and not findings,
            seed=transcript.seed,
        )

    def outcome(self, model, recovered, expected, **kwargs):
        """An AttackOutcome labelled with this attack."""
        return AttackOutcome(
            self.label, model.id, recovered, expected, criteria=self.criteria, **kwargs
        )

    def __str__(self):
        return self.label
