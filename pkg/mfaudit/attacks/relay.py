"""
Man-in-the-middle on key agreement from channel readings.

With the stored identifier, the adversary unmasks the device's nonce and
helper string, runs the fuzzy extractor on its own link to the gateway and
ends up holding a key with each side. Once the long-term values leak, past
sessions fall the same way.

"""

from ..errors import DecodeFailure
from ..primitives.fuzzy import bytes_to_bits, fuzzy_rep
from ..primitives.hashing import hash_fields, xor
from ..threat_models.adversary import FULL_MITM, AdversaryModel
from ..threat_models.mitm import mitm_session
from .base_classes import Attack, Holdings

# Session values the relay recovers on the way.
RECOVERED_NAMES = ("R_A", "tau_i", "sigma", "R_B")


class ChannelReadingRelayAttack(Attack):
    """Relay a session between device and gateway with a key on each side."""

    protocol_ids = ("P10",)
    criteria = ("C1", "C4", "C5", "C7")
    required = {"P10": ("ID_s",)}
    channel = FULL_MITM

    @property
    def label(self):
        return "A10-mitm+pfs"

    def default_adversary(self, model):
        return AdversaryModel(
            channel=self.channel,
            compromised=("SSID",),
            longterm_leak=True,
            label=self.label,
        )

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        dual = mitm_session(deployment, adversary, rng, session_index=len(transcripts))
        live = dual.transcript
        recovered, expected = {}, {}
        for name in RECOVERED_NAMES:
            if name in live.ground_truth:
                expected[name] = live.ground_truth[name]
                if name in dual.recovered:
                    recovered[name] = dual.recovered[name]
        for role, key in dual.adversary_keys.items():
            recovered[f"SK@{role}"] = key
            expected[f"SK@{role}"] = live.keys.get(role)
        findings = list(dual.steps)
        if dual.succeeded:
            findings.append("both sides accepted, each with a key the adversary holds")

        known = Holdings(deployment, adversary, rng)
        if transcripts and adversary.longterm_leak:
            past = transcripts[0]
            expected["SK@past"] = past.session_key
            try:
                recovered["SK@past"] = self.past_key(past.observed(), known, deployment.suite)
                findings.append("a past session key was recomputed after the long-term leak")
            except DecodeFailure:
                findings.append("the leaked reading does not reproduce the past key")
        return self.outcome(model, recovered, expected, findings=findings, trace=dual.steps)

    @staticmethod
    def past_key(observed, known, suite):
        """Session key of an eavesdropped session, from ID_s and the device reading."""
        ID_s = known["ID_s"]
        TS_A, TS_B = observed["TS_A"], observed["TS_B"]
        R_A = xor(observed["M_1"], hash_fields(ID_s, TS_A, suite=suite))
        tau_i = xor(observed["M_2"], R_A)
        sigma = fuzzy_rep(bytes_to_bits(known["N0_d"], suite), tau_i, suite)
        R_B = xor(observed["M_4"], hash_fields(ID_s, TS_B, TS_A, R_A, suite=suite))
        return hash_fields(ID_s, TS_A, TS_B, R_A, R_B, sigma, suite=suite)
