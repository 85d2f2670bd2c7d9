"""
Session-key recovery from an eavesdropped session and compromised factors.

Each attack recomputes the key the way the adversary would by hand, with
the primitives, from the wire values and what it compromised. Its symbolic
twin asks the deduction engine for the same key.

"""

from ..primitives.hashing import hash_fields, xor
from ..threat_models.adversary import AdversaryModel
from .base_classes import Attack, Holdings


class SessionKeyAttack(Attack):
    """
    Common structure of the key-recovery attacks: recompute the session key
    from the first eavesdropped session.

    """

    criteria = ("C4", "C5", "C7")
    # Factors the default adversary compromises.
    factors = ()
    device_read = ()

    def default_adversary(self, model):
        return AdversaryModel(
            compromised=self.factors, device_read=self.device_read, label=self.label
        )

    def recover(self, model, observed, known, suite):
        """
        Returns
        -------
        dict name -> bytes
            The session key under model.sk, and intermediate secrets.

        """
        raise NotImplementedError

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        transcript = transcripts[0]
        known = Holdings(deployment, adversary, rng)
        recovered = self.recover(model, transcript.observed(), known, deployment.suite)
        expected = {model.sk: transcript.session_key}
        for name in recovered:
            if name in transcript.ground_truth:
                expected[name] = transcript.ground_truth[name]
        findings = [f"guessed {', '.join(known.guessed)}"] if known.guessed else []
        return self.outcome(
            model, recovered, expected, findings=findings, seed=transcript.seed
        )

    def goal(self, model):
        return {model.sk: model.symbols[model.sk]}


class BiometricSchemeKeyAttack(SessionKeyAttack):
    """
    The key is the server's contribution masked with the user's nonce, and
    the nonce is masked with the identity only.

    """

    protocol_ids = ("P2",)
    required = {"P2": ("ID_i",)}
    factors = ("PW",)

    @property
    def label(self):
        return "A2-sk"

    def recover(self, model, observed, known, suite):
        V_1 = xor(observed["GID_i"], known["ID_i"])
        return {"V_1": V_1, model.sk: xor(observed["M_2"], V_1)}


class MaskedNonceKeyAttack(SessionKeyAttack):
    """Both nonces are masked with the long-term key alone."""

    protocol_ids = ("P3",)
    required = {"P3": ("mk",)}
    factors = ("LSK",)

    @property
    def label(self):
        return "A3-sk"

    def recover(self, model, observed, known, suite):
        mk = known["mk"]
        r1 = xor(observed["R1"], mk)
        r2 = xor(observed["R2"], mk)
        grp = model.group
        offset = grp.to_scalar(hash_fields(r1, r2, suite=suite))
        X = grp.encode(grp.sub(grp.decode(observed["Y"]), offset))
        sk = hash_fields(mk, r1, r2, X, observed["TID_c"], known["spk_s"], suite=suite)
        return {"r1": r1, "r2": r2, "X": X, model.sk: sk}


class ServerSecretKeyAttack(SessionKeyAttack):
    """The masked identity is sent in plain; the server secret does the rest."""

    protocol_ids = ("P5",)
    required = {"P5": ("x_s",)}
    device_read = ("server",)

    @property
    def label(self):
        return "A5-sk"

    def recover(self, model, observed, known, suite):
        MID = observed["MID"]
        w_i = hash_fields(MID, known["x_s"], suite=suite)
        return {"w_i": w_i, model.sk: hash_fields(w_i, MID, observed["Id_SN"], suite=suite)}


class PseudonymKeyAttack(SessionKeyAttack):
    """The first factor unmasks the user's nonce and timestamp."""

    protocol_ids = ("P6",)
    required = {"P6": ("ID_i", "PID_i")}
    factors = ("first",)

    @property
    def label(self):
        return "A6-sk"

    def recover(self, model, observed, known, suite):
        HID = hash_fields(known["PID_i"], suite=suite)
        R_rand2 = xor(observed["R_rand2'"], known["ID_i"])
        T_1 = xor(observed["T_1'"], HID)
        SID_j = observed["SID_j"]
        Y_RC = hash_fields(SID_j, HID, R_rand2, T_1, suite=suite)
        sk = hash_fields(Y_RC, SID_j, observed["T_3"], suite=suite)
        return {"R_rand2": R_rand2, "T_1": T_1, model.sk: sk}
