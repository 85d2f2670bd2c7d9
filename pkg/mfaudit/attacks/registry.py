"""
The attack registry, and the entry point that runs an attack by id.

"""

import logging

import numpy as np

from ..errors import AttackInapplicable, UnknownProtocolError
from ..protocols.session import run_session
from ..threat_models.channel import ChannelTap
from .audit import MetadataAudit
from .deanonymisation import FixedLengthSplitAttack, PlainIdentityAttack
from .historical_data import EntropyAttack, TagChainAttack
from .impersonation import MissingClientAuthAttack, NullServerAttack
from .key_recovery import (
    BiometricSchemeKeyAttack,
    MaskedNonceKeyAttack,
    PseudonymKeyAttack,
    ServerSecretKeyAttack,
)
from .relay import ChannelReadingRelayAttack

logger = logging.getLogger(__name__)

# Every attack, by id, in a stable order.
ATTACKS = {
    attack.label: attack
    for attack in (
        MissingClientAuthAttack(),
        TagChainAttack(),
        EntropyAttack(),
        BiometricSchemeKeyAttack(),
        MaskedNonceKeyAttack(),
        FixedLengthSplitAttack(),
        ServerSecretKeyAttack(),
        PseudonymKeyAttack(),
        NullServerAttack(),
        PlainIdentityAttack(),
        MetadataAudit(),
        ChannelReadingRelayAttack(),
    )
}


def get_attack(attack_id):
    """
    Raises
    ------
    UnknownProtocolError
        If no attack is registered under this id.

    """
    try:
        return ATTACKS[attack_id]
    except KeyError:
        raise UnknownProtocolError(
            f"No attack {attack_id!r}; known attacks: {', '.join(ATTACKS)}."
        ) from None


def attacks_for(model):
    """Registered attacks that target a protocol."""
    return [attack for attack in ATTACKS.values() if attack.applies_to(model)]


def run_attack(
    attack_id,
    deployment,
    transcripts=(),
    adversary=None,
    rng=None,
    seed=None,
    strict=True,
):
    """
    Run a registered attack.

    Parameters
    ----------
    attack_id: str
    deployment: DeploymentState or ProtocolModel
        A model is enough for attacks that do not execute sessions.
    transcripts: list of Transcript
        Eavesdropped sessions. Missing ones are recorded on the spot.
    adversary: AdversaryModel, optional
        Defaults to the weakest adversary the attack is meant to work with.
    rng: numpy.random.Generator, optional
        Defaults to a generator seeded with `seed`.
    seed: int, optional
    strict: bool
        Check the attack's prerequisites first. A non-strict run lets an
        under-equipped adversary guess what it lacks (and fail).

    Returns
    -------
    AttackOutcome

    Raises
    ------
    AttackInapplicable
        If the attack does not target the protocol.
    PrerequisiteUnmet
        In strict mode, if the adversary lacks what the attack needs.

    """
    attack = get_attack(attack_id)
    model = getattr(deployment, "model", deployment)
    if not attack.applies_to(model):
        raise AttackInapplicable(f"{attack.label} does not target {model.id}.")
    adversary = adversary if adversary is not None else attack.default_adversary(model)
    if strict:
        attack.check_prerequisites(model, adversary)
    rng = rng if rng is not None else np.random.default_rng(seed)
    transcripts = list(transcripts)
    if attack.needs_deployment:
        while len(transcripts) < attack.transcripts_needed:
            transcripts.append(
                run_session(deployment, ChannelTap(), rng, session_index=len(transcripts))
            )
    outcome = attack.run(deployment, transcripts, adversary, rng)
    if outcome.seed is None:
        outcome.seed = seed
    logger.debug("%s against %s: %r.", attack.label, model.id, outcome)
    return outcome
