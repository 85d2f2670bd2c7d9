"""Tests for the attack library."""

from unittest import TestCase

import numpy as np

from mfaudit.attacks import (
    ATTACKS,
    FixedLengthSplitAttack,
    attacks_for,
    get_attack,
    key_input_findings,
    protected_factor_findings,
    run_attack,
    split_concat_fixed_len,
)
from mfaudit.config import WorkbenchConfig
from mfaudit.errors import (
    AttackInapplicable,
    OutOfRangeError,
    PrerequisiteUnmet,
    UnknownProtocolError,
)
from mfaudit.protocols import get_protocol, register, run_session
from mfaudit.threat_models import EAVESDROP, AdversaryModel, ChannelTap, attack_trials

TRIALS = WorkbenchConfig(trials=100)

KEY_RECOVERY = {
    "A2-sk": "P2",
    "A3-sk": "P3",
    "A4-sk+deanon": "P4",
    "A5-sk": "P5",
    "A6-sk": "P6",
}


def deploy(protocol_id, seed=0):
    rng = np.random.default_rng(seed)
    return register(get_protocol(protocol_id), rng, seed=seed), rng


class TestSplit(TestCase):
    def test_split(self):
        blob = bytes(range(40))
        self.assertEqual(split_concat_fixed_len(blob, 32), (blob[:32], blob[32:]))

    def test_bounds(self):
        blob = bytes(10)
        self.assertEqual(split_concat_fixed_len(blob, 0), (b"", blob))
        self.assertEqual(split_concat_fixed_len(blob, 10), (blob, b""))
        with self.assertRaises(OutOfRangeError):
            split_concat_fixed_len(blob, 11)
        with self.assertRaises(OutOfRangeError):
            split_concat_fixed_len(blob, -1)


class TestRegistry(TestCase):
    def test_ids(self):
        self.assertEqual(
            list(ATTACKS),
            [
                "A1-mutualauth",
                "A1-tagchain",
                "A1-entropy",
                "A2-sk",
                "A3-sk",
                "A4-sk+deanon",
                "A5-sk",
                "A6-sk",
                "A7-serverimp",
                "A8-anon+pfs",
                "A9-audit",
                "A10-mitm+pfs",
            ],
        )

    def test_unknown_attack(self):
        with self.assertRaises(UnknownProtocolError):
            get_attack("A99")

    def test_inapplicable(self):
        deployment, rng = deploy("P5")
        with self.assertRaises(AttackInapplicable):
            run_attack("A2-sk", deployment, rng=rng)

    def test_attacks_for(self):
        labels = [a.label for a in attacks_for(get_protocol("P1FS"))]
        self.assertEqual(labels, ["A1-mutualauth", "A1-tagchain", "A1-entropy"])
        self.assertEqual(attacks_for(get_protocol("HARDENED")), [])

    def test_strict_prerequisites(self):
        deployment, rng = deploy("P3")
        with self.assertRaises(PrerequisiteUnmet):
            run_attack("A3-sk", deployment, adversary=AdversaryModel(), rng=rng)

    def test_channel_prerequisite(self):
        deployment, rng = deploy("P10")
        adversary = AdversaryModel(channel=EAVESDROP, compromised=("SSID",))
        with self.assertRaises(PrerequisiteUnmet):
            run_attack("A10-mitm+pfs", deployment, adversary=adversary, rng=rng)


class TestKeyRecovery(TestCase):
    def test_success_in_every_trial(self):
        for attack_id, protocol_id in KEY_RECOVERY.items():
            with self.subTest(attack=attack_id):
                outcomes = attack_trials(attack_id, get_protocol(protocol_id), TRIALS)
                self.assertEqual(sum(o.success for o in outcomes), TRIALS.trials)
                model = get_protocol(protocol_id)
                self.assertIn(model.sk, outcomes[0].recovered)

    def test_failure_without_the_compromised_factor(self):
        for attack_id, protocol_id in KEY_RECOVERY.items():
            with self.subTest(attack=attack_id):
                outcomes = attack_trials(
                    attack_id,
                    get_protocol(protocol_id),
                    TRIALS,
                    adversary=AdversaryModel(),
                    strict=False,
                )
                self.assertEqual(sum(o.success for o in outcomes), 0)

    def test_recovered_key_is_the_honest_key(self):
        deployment, rng = deploy("P2", seed=9)
        transcript = run_session(deployment, ChannelTap(), rng)
        outcome = run_attack("A2-sk", deployment, [transcript], rng=rng)
        self.assertEqual(outcome.recovered["SK"], transcript.session_key)
        self.assertEqual(outcome.mismatched, [])

    def test_symbolic_twin_agrees(self):
        for attack_id, protocol_id in KEY_RECOVERY.items():
            with self.subTest(attack=attack_id):
                attack = get_attack(attack_id)
                deployment, rng = deploy(protocol_id, seed=4)
                adversary = attack.default_adversary(deployment.model)
                transcript = run_session(deployment, ChannelTap(), rng)
                scripted = run_attack(
                    attack_id, deployment, [transcript], adversary=adversary, rng=rng
                )
                symbolic = attack.run_symbolic(deployment, transcript, adversary)
                self.assertTrue(symbolic.success, symbolic.findings)
                for name, value in symbolic.recovered.items():
                    self.assertEqual(value, scripted.recovered[name])


class TestDeanonymisation(TestCase):
    def test_identity_is_sliced_off(self):
        deployment, rng = deploy("P4", seed=1)
        outcome = run_attack("A4-sk+deanon", deployment, rng=rng)
        self.assertEqual(outcome.recovered["ID_ur"], deployment.values["ID_ur"])
        self.assertIn("C6", FixedLengthSplitAttack.criteria)

    def test_plain_identity_and_past_key(self):
        outcomes = attack_trials("A8-anon+pfs", get_protocol("P8"), WorkbenchConfig(trials=10))
        self.assertTrue(all(o.success for o in outcomes))
        self.assertIn("ID_U is sent in plain", outcomes[0].findings)
        self.assertIn("the node accepted a forged E", outcomes[0].findings)


class TestImpersonation(TestCase):
    def test_server_answers_a_forged_client(self):
        for protocol_id in ("P1woFS", "P1FS"):
            with self.subTest(protocol=protocol_id):
                deployment, rng = deploy(protocol_id)
                outcome = run_attack("A1-mutualauth", deployment, rng=rng)
                self.assertTrue(outcome.success, outcome.findings)
                self.assertIn("the server checks no authenticator", outcome.findings)

    def test_client_accepts_a_null_server(self):
        outcomes = attack_trials("A7-serverimp", get_protocol("P7"), TRIALS)
        self.assertEqual(sum(o.success for o in outcomes), TRIALS.trials)


class TestHistoricalData(TestCase):
    def test_tag_chain(self):
        deployment, rng = deploy("P1woFS")
        outcome = run_attack("A1-tagchain", deployment, rng=rng)
        self.assertTrue(outcome.success)
        self.assertEqual(len(outcome.recovered), len(outcome.expected))

    def test_bounded_retrieval_recovers_part_of_the_tags(self):
        deployment, rng = deploy("P1woFS")
        adversary = AdversaryModel(compromised=("TGK", "HD"), history_fraction=0.5)
        outcome = run_attack("A1-tagchain", deployment, adversary=adversary, rng=rng)
        self.assertFalse(outcome.success)
        self.assertLess(len(outcome.recovered), len(outcome.expected))

    def test_sensor_entropy(self):
        deployment, rng = deploy("P1FS")
        outcome = run_attack("A1-entropy", deployment, rng=rng)
        self.assertTrue(outcome.success)


class TestMetadataAudit(TestCase):
    def test_findings(self):
        model = get_protocol("P9")
        self.assertTrue(protected_factor_findings(model) or key_input_findings(model))
        outcome = run_attack("A9-audit", model)
        self.assertTrue(outcome.success)
        self.assertEqual(outcome.protocol, "P9")


class TestRelay(TestCase):
    def test_dual_keys_and_past_session(self):
        outcomes = attack_trials("A10-mitm+pfs", get_protocol("P10"), TRIALS)
        self.assertEqual(sum(o.success for o in outcomes), TRIALS.trials)
        first = outcomes[0]
        for name in ("R_A", "tau_i", "SK@past"):
            self.assertIn(name, first.recovered)
        self.assertIn("both sides accepted, each with a key the adversary holds", first.findings)

    def test_no_identifier(self):
        outcome = attack_trials(
            "A10-mitm+pfs",
            get_protocol("P10"),
            WorkbenchConfig(trials=1),
            adversary=AdversaryModel(channel="full-mitm"),
            strict=False,
        )[0]
        self.assertFalse(outcome.success)
