"""
Audit of protocols described at metadata fidelity: findings read off the
factor layout and the inputs of the session key, without running anything.

"""

from ..terms import atoms_of
from ..threat_models.adversary import AdversaryModel
from .base_classes import Attack


def protected_factor_findings(model):
    """
    Factors storing values computed from the factors they protect: holding
    such a factor verifies guesses of the protected ones offline.

    """
    findings = []
    for factor in model.factors:
        for protected_id in factor.protects:
            protected = set(model.factor(protected_id).holds)
            for name in factor.holds:
                term = model.definition(name)
                used = protected.intersection(atoms_of(term)) if term is not None else set()
                if used:
                    findings.append(
                        f"{factor.id} stores {name}, computed from {', '.join(sorted(used))} "
                        f"of {protected_id}"
                    )
    return findings


def key_input_findings(model):
    """Inputs of the session key that are either plain on the wire or long-term."""
    plain = {name for m in model.messages if m.plain for name in m.payload}
    sent = [name for name in model.sk_depends if name in plain]
    long_term = {spec.name for spec in model.long_term_atoms()}
    secret_ephemeral = [
        name for name in model.sk_depends if name not in long_term and name not in plain
    ]
    findings = []
    if sent:
        findings.append(f"session key input {', '.join(sent)} is sent in plain")
    if model.sk_depends and not secret_ephemeral:
        findings.append(
            "every other session key input is long-term: leaking them exposes past keys"
        )
    return findings


class MetadataAudit(Attack):
    """Factor dependence and forward secrecy, from metadata alone."""

    protocol_ids = ("P9",)
    criteria = ("C3", "C4", "C5")
    channel = None
    transcripts_needed = 0
    needs_deployment = False

    @property
    def label(self):
        return "A9-audit"

    def default_adversary(self, model):
        return AdversaryModel(channel=None, label=self.label)

    def run(self, deployment, transcripts, adversary, rng):
        model = getattr(deployment, "model", deployment)
        findings = protected_factor_findings(model) + key_input_findings(model)
        return self.outcome(model, {}, {}, findings=findings, success=bool(findings))
