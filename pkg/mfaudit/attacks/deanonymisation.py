"""
Attacks that recover a user's identity, together with the session key.

"""

from ..errors import AuthenticationFailure
from ..primitives.hashing import hash_fields
from ..primitives.symmetric import derive_key, sym_decrypt, sym_encrypt
from ..protocols.session import run_session
from ..threat_models.adversary import INTERCEPT_INJECT, AdversaryModel
from ..threat_models.channel import ChannelTap
from .base_classes import Attack, Holdings, split_concat_fixed_len


class FixedLengthSplitAttack(Attack):
    """
    Slice the identity off a concatenation whose first part is a digest,
    then recompute the session key with the smart-card contents.

    """

    protocol_ids = ("P4",)
    criteria = ("C4", "C5", "C6", "C7")
    required = {"P4": ("U_rg",)}

    @property
    def label(self):
        return "A4-sk+deanon"

    def default_adversary(self, model):
        return AdversaryModel(compromised=("PW", "SC"), label=self.label)

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        suite = deployment.suite
        transcript = transcripts[0]
        observed = transcript.observed()
        known = Holdings(deployment, adversary, rng)
        _, ID_ur = split_concat_fixed_len(observed["l_10"], suite.digest_length)
        K_ss = hash_fields(
            ID_ur,
            observed["ID_sn"],
            known["U_rg"],
            hash_fields(ID_ur, observed["N_ur"], suite=suite),
            observed["HRN"],
            observed["TS_1"],
            observed["TS_5"],
            suite=suite,
        )
        return self.outcome(
            model,
            {"ID_ur": ID_ur, model.sk: K_ss},
            {"ID_ur": deployment.values["ID_ur"], model.sk: transcript.session_key},
            findings=[f"ID_ur sliced off l_10 after {suite.digest_length} bytes"],
            seed=transcript.seed,
        )

    def goal(self, model):
        return {"ID_ur": model.symbols["ID_ur"], model.sk: model.symbols[model.sk]}


class PlainIdentityAttack(Attack):
    """
    Read the identity off the wire, recompute a past session key once the
    shared key leaks, and impersonate the user to the node with a captured
    identity digest.

    """

    protocol_ids = ("P8",)
    criteria = ("C1", "C4", "C5", "C6", "C7")
    required = {"P8": ("K_X",)}
    channel = INTERCEPT_INJECT

    @property
    def label(self):
        return "A8-anon+pfs"

    def default_adversary(self, model):
        return AdversaryModel(channel=self.channel, longterm_leak=True, label=self.label)

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        suite = deployment.suite
        transcript = transcripts[0]
        observed = transcript.observed()
        known = Holdings(deployment, adversary, rng)
        key = derive_key(known["K_X"], suite)
        recovered = {"ID_U": observed["ID_U"]}
        expected = {
            "ID_U": deployment.values["ID_U"],
            "R_U": transcript.ground_truth.get("R_U"),
            model.sk: transcript.session_key,
        }
        findings = ["ID_U is sent in plain"]
        try:
            H_U, R_U = split_concat_fixed_len(
                sym_decrypt(key, observed["E"], suite), suite.digest_length
            )
            R_N = sym_decrypt(key, observed["E_2"], suite)
        except AuthenticationFailure:
            findings.append("E does not decrypt under the adversary's K_X")
            return self.outcome(
                model, recovered, expected, findings=findings, seed=transcript.seed
            )
        recovered["R_U"] = R_U
        recovered[model.sk] = hash_fields(R_U, R_N, observed["T_1"], suite=suite)

        if adversary.can_inject:
            forged_key, node_key = self._impersonate(deployment, key, H_U, len(transcripts), rng)
            recovered["SK@node"] = forged_key
            expected["SK@node"] = node_key
            findings.append(
                "the node accepted a forged E" if node_key is not None else "the node rejected a forged E"
            )
        return self.outcome(model, recovered, expected, findings=findings, seed=transcript.seed)

    def _impersonate(self, deployment, key, H_U, session_index, rng):
        """
        Replace E in a fresh session by one built from the captured H_U.

        Returns
        -------
        (bytes, bytes or None)
            The key the adversary computes, and the node's key.

        """
        suite = deployment.suite
        R_U = rng.bytes(deployment.model.length_of("R_U", suite))
        tap = ChannelTap(INTERCEPT_INJECT)
        tap.inject(1, E=sym_encrypt(key, H_U + R_U, suite))
        transcript = run_session(deployment, tap, rng, session_index=session_index)
        node_key = transcript.keys.get("node")
        messages = {m.index: m.values() for m in tap.seen}
        if 2 not in messages:
            return None, node_key
        R_N = sym_decrypt(key, messages[2]["E_2"], suite)
        return hash_fields(R_U, R_N, messages[1]["T_1"], suite=suite), node_key

    def goal(self, model):
        return {"R_U": model.symbols["R_U"], model.sk: model.symbols[model.sk]}
