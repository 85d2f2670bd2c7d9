"""Tests for adversaries, channel control and the experiment harness."""

from unittest import TestCase

import numpy as np

from mfaudit.config import WorkbenchConfig
from mfaudit.errors import (
    ConfigError,
    ExperimentOrderError,
    PrerequisiteUnmet,
    SelectorViolation,
)
from mfaudit.protocols import get_protocol, register, run_session
from mfaudit.threat_models import (
    EAVESDROP,
    FIRST_FACTOR,
    FULL_MITM,
    INTERCEPT_INJECT,
    AdversaryModel,
    ChannelTap,
    PfsExperiment,
    SilentIterator,
    attack_trials,
    collect_all,
    collect_results,
    compromise,
    honest_trials,
    mitm_session,
    n_minus_one,
    n_minus_one_findings,
    observe,
    pfs_experiment,
    replay_attempt,
)

SMALL = WorkbenchConfig(trials=5, sessions=2)


def deploy(protocol_id, seed=0):
    rng = np.random.default_rng(seed)
    return register(get_protocol(protocol_id), rng, seed=seed), rng


class CountingTracker(SilentIterator):
    instances = []

    def __init__(self, total=None, **kwargs):
        self.total = total
        self.count = 0
        self.closed = False
        CountingTracker.instances.append(self)

    def update(self, n=1):
        self.count += n

    def close(self):
        self.closed = True


class TestAdversaryModel(TestCase):
    def test_selecting_every_factor_of_a_role(self):
        model = get_protocol("P5")
        with self.assertRaises(SelectorViolation):
            AdversaryModel(compromised=("PW", "SC")).selected_factors(model)

    def test_device_read_lifts_the_restriction(self):
        model = get_protocol("P5")
        adversary = AdversaryModel(compromised=("PW", "SC"), device_read=("user",))
        self.assertEqual([f.id for f in adversary.selected_factors(model)], ["PW", "SC"])

    def test_unknown_factor(self):
        with self.assertRaises(SelectorViolation):
            AdversaryModel(compromised=("XYZ",)).selected_factors(get_protocol("P5"))

    def test_first_factor(self):
        model = get_protocol("P6")
        adversary = AdversaryModel(compromised=(FIRST_FACTOR,))
        self.assertEqual(adversary.selected_factors(model), [model.factors[0]])

    def test_compromised_names(self):
        model = get_protocol("P5")
        names = AdversaryModel(compromised=("SC",)).compromised_names(model)
        self.assertEqual(names, ["C_i"])
        leaked = AdversaryModel(longterm_leak=True).compromised_names(model)
        self.assertIn("x_s", leaked)

    def test_n_minus_one(self):
        model = get_protocol("P2")
        adversary = n_minus_one(model, "user", "BD")
        self.assertEqual(adversary.compromised, ("PW", "SC"))
        self.assertEqual(adversary.channel, EAVESDROP)

    def test_from_dict(self):
        adversary = AdversaryModel.from_dict({"channel": "full-mitm", "compromised": ["SSID"]})
        self.assertEqual(adversary.channel, FULL_MITM)
        self.assertEqual(adversary.compromised, ("SSID",))
        self.assertEqual(AdversaryModel.from_dict(adversary.to_dict()), adversary)

    def test_invalid_adversaries(self):
        with self.assertRaises(ConfigError):
            AdversaryModel.from_dict({"channel": "telepathy"})
        with self.assertRaises(ConfigError):
            AdversaryModel.from_dict({"budget": 3})
        with self.assertRaises(ConfigError):
            AdversaryModel(history_fraction=1.5)


class TestCompromise(TestCase):
    def test_values_of_held_factors(self):
        deployment, _ = deploy("P5")
        material = compromise(deployment, AdversaryModel(compromised=("SC",)))
        self.assertEqual(material["C_i"], deployment.values["C_i"])
        self.assertNotIn("x_s", material)
        self.assertNotIn("PW_i", material)

    def test_device_read(self):
        deployment, _ = deploy("P5")
        material = compromise(deployment, AdversaryModel(device_read=("server",)))
        self.assertEqual(material["x_s"], deployment.values["x_s"])

    def test_history_fraction(self):
        deployment, _ = deploy("P1woFS")
        rows = len(deployment.history)
        full = compromise(deployment, AdversaryModel(compromised=("HD",)))
        half = compromise(deployment, AdversaryModel(compromised=("HD",), history_fraction=0.5))
        self.assertEqual(len(full.history), rows)
        self.assertEqual(len(half.history), int(np.ceil(rows / 2)))
        for i, row in half.history.items():
            self.assertEqual(row, deployment.history[i])


class TestChannelTap(TestCase):
    def test_eavesdropping(self):
        deployment, rng = deploy("P5")
        tap = ChannelTap(EAVESDROP)
        transcript = run_session(deployment, tap, rng)
        self.assertTrue(transcript.agreed)
        self.assertEqual(len(tap.seen), len(transcript.messages))
        self.assertEqual(observe(transcript), transcript.observed())

    def test_eavesdropper_cannot_inject(self):
        with self.assertRaises(AssertionError):
            ChannelTap(EAVESDROP).inject(1, A_1=b"\x00" * 32)

    def test_tampering_is_detected(self):
        deployment, rng = deploy("P5")
        tap = ChannelTap(INTERCEPT_INJECT).inject(1, A_1=b"\x00" * 32)
        transcript = run_session(deployment, tap, rng)
        self.assertFalse(transcript.agreed)
        self.assertEqual(transcript.rejected_at["server"], 1)

    def test_dropping(self):
        deployment, rng = deploy("P5")
        transcript = run_session(deployment, ChannelTap(INTERCEPT_INJECT).drop(2), rng)
        self.assertIsNone(transcript.delivered[1])
        self.assertFalse(transcript.agreed)

    def test_replayed_first_message_is_stale(self):
        deployment, rng = deploy("P10", seed=2)
        old = run_session(deployment, rng=rng)
        tap = ChannelTap(INTERCEPT_INJECT).inject(1, old.message(1))
        replayed = run_session(deployment, tap, rng, session_index=1)
        self.assertFalse(replayed.accepted["gateway"])
        self.assertEqual(replayed.rejected_at["gateway"], 1)
        self.assertIn("TS_A is stale", replayed.failures["gateway"])
        self.assertIsNone(replayed.keys["device"])

    def test_relay_needs_full_mitm(self):
        with self.assertRaises(ValueError):
            ChannelTap(INTERCEPT_INJECT, relay=lambda m: m)


class TestForwardSecrecy(TestCase):
    def test_past_keys_fall_without_ephemeral_exchange(self):
        for protocol_id in ("P1woFS", "P8"):
            with self.subTest(protocol=protocol_id):
                deployment, rng = deploy(protocol_id, seed=5)
                outcome = pfs_experiment(deployment, rng=rng)
                self.assertTrue(outcome.success, outcome.findings)
                self.assertEqual(outcome.criteria, ("C5",))

    def test_ephemeral_exchange_protects_past_keys(self):
        deployment, rng = deploy("P1FS", seed=5)
        outcome = pfs_experiment(deployment, rng=rng)
        self.assertFalse(outcome.success)

    def test_order(self):
        deployment, _ = deploy("P8")
        with self.assertRaises(ExperimentOrderError):
            PfsExperiment(deployment).leak()

    def test_leak_is_added(self):
        deployment, _ = deploy("P8")
        experiment = PfsExperiment(deployment, AdversaryModel(channel=EAVESDROP))
        self.assertTrue(experiment.adversary.longterm_leak)


class TestManInTheMiddle(TestCase):
    def test_dual_key_establishment(self):
        deployment, rng = deploy("P10", seed=2)
        adversary = AdversaryModel(channel=FULL_MITM, compromised=("SSID",))
        dual = mitm_session(deployment, adversary, rng)
        self.assertTrue(dual.succeeded, dual.steps)
        for name in ("R_A", "tau_i"):
            self.assertEqual(dual.recovered[name], dual.transcript.ground_truth[name])


class TestHarness(TestCase):
    def test_replay_is_rejected_by_the_hardened_design(self):
        deployment, rng = deploy("HARDENED", seed=1)
        old = run_session(deployment, rng=rng)
        attempt = replay_attempt(deployment, old, 1, rng)
        self.assertFalse(attempt.accepted)
        self.assertIsNotNone(attempt.failure)

    def test_no_n_minus_one_findings_for_the_hardened_design(self):
        model = get_protocol("HARDENED")
        self.assertEqual(n_minus_one_findings(model, SMALL.suite), [])

    def test_collect_results(self):
        results = collect_results(get_protocol("P5"), SMALL)
        self.assertTrue(results.executed)
        self.assertEqual(len(results.transcripts), SMALL.sessions)
        self.assertTrue(all(t.agreed for t in results.transcripts))
        self.assertTrue(results.outcomes["A5-sk"].success)
        self.assertIn("A5-sk", [o.attack_id for o in results.successful_attacks("C4")])
        self.assertIsNotNone(results.pfs)
        self.assertIsNotNone(results.replay)
        self.assertEqual(results.to_dict()["protocol"], "P5")

    def test_metadata_protocol(self):
        results = collect_results(get_protocol("P9"), SMALL)
        self.assertFalse(results.executed)
        self.assertIsNone(results.pfs)
        self.assertTrue(results.outcomes["A9-audit"].success)

    def test_collect_all_keeps_order(self):
        models = [get_protocol(p) for p in ("P7", "P2", "P9")]
        CountingTracker.instances = []
        results = collect_all(models, SMALL.with_changes(workers=3), CountingTracker)
        self.assertEqual(list(results), ["P7", "P2", "P9"])
        tracker = CountingTracker.instances[-1]
        self.assertEqual((tracker.total, tracker.count, tracker.closed), (3, 3, True))

    def test_collect_results_is_deterministic(self):
        model = get_protocol("P2")
        self.assertEqual(
            collect_results(model, SMALL).to_dict(), collect_results(model, SMALL).to_dict()
        )

    def test_honest_trials(self):
        transcripts = honest_trials(get_protocol("P5"), SMALL.with_changes(seed=7))
        self.assertEqual(len(transcripts), SMALL.trials)
        self.assertEqual([t.seed for t in transcripts], list(range(7, 7 + SMALL.trials)))
        self.assertTrue(all(t.agreed for t in transcripts))

    def test_attack_trials(self):
        outcomes = attack_trials("A2-sk", get_protocol("P2"), SMALL)
        self.assertEqual(len(outcomes), SMALL.trials)
        self.assertTrue(all(o.success for o in outcomes))

    def test_attack_trials_check_prerequisites_first(self):
        with self.assertRaises(PrerequisiteUnmet):
            attack_trials("A2-sk", get_protocol("P2"), SMALL, adversary=AdversaryModel())
