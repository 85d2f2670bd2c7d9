"""
Attacks on missing or one-sided authentication.

"""

from ..protocols.session import run_session
from ..threat_models.adversary import INTERCEPT_INJECT, AdversaryModel
from ..threat_models.channel import ChannelTap
from .base_classes import Attack


class ActiveAttack(Attack):
    channel = INTERCEPT_INJECT

    def default_adversary(self, model):
        return AdversaryModel(channel=self.channel, label=self.label)


class MissingClientAuthAttack(ActiveAttack):
    """
    The server never verifies anything the client sends: it answers a
    client impersonated with the identity from an old session.

    """

    protocol_ids = ("P1woFS", "P1FS")
    criteria = ("C1",)

    @property
    def label(self):
        return "A1-mutualauth"

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        unchecked = model.unauthenticated_roles()
        findings = [f"the {role} checks no authenticator" for role in unchecked]
        # Forge the first message: an identity seen before, fresh random values.
        first = model.messages[0]
        observed = transcripts[0].observed() if transcripts else {}
        forged = {}
        for name in first.payload:
            spec = model.atoms.get(name)
            if name in observed and spec is not None and spec.is_identity:
                forged[name] = observed[name]
            else:
                length = model.length_of(name, deployment.suite) or deployment.suite.digest_length
                forged[name] = rng.bytes(length)
        tap = ChannelTap(INTERCEPT_INJECT).inject(first.index, **forged)
        transcript = run_session(deployment, tap, rng, session_index=len(transcripts))
        receiver = first.receiver
        answered = receiver not in transcript.rejected_at and len(transcript.messages) > 1
        if answered:
            findings.append(f"the {receiver} answered a forged {first.sender}")
        success = receiver in unchecked and answered
        return self.outcome(
            model, {}, {}, findings=findings, success=success, seed=transcript.seed
        )


class NullServerAttack(ActiveAttack):
    """
    The client never checks the server: it accepts a session in which the
    server never took part.

    """

    protocol_ids = ("P7",)
    criteria = ("C1", "C7")

    @property
    def label(self):
        return "A7-serverimp"

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        unchecked = model.unauthenticated_roles()
        tap = ChannelTap(INTERCEPT_INJECT)
        for message in model.messages:
            if message.sender in unchecked:
                tap.drop(message.index)
        transcript = run_session(deployment, tap, rng, session_index=len(transcripts))
        fooled = [
            role
            for role in unchecked
            if transcript.accepted.get(role)
            and not any(
                m is not None and m.sender == role for m in transcript.delivered
            )
        ]
        findings = [f"the {role} accepted with nobody on the other end" for role in fooled]
        return self.outcome(
            model, {}, {}, findings=findings, success=bool(fooled), seed=transcript.seed
        )
