"""Tests for attack summaries, the evaluation matrix and reports."""

import json
import os
import shutil
import tempfile
import warnings
from unittest import TestCase

import numpy as np

from mfaudit.config import WorkbenchConfig
from mfaudit.errors import EmptySampleError, MissingHarnessResults
from mfaudit.protocols import get_protocol, list_protocols, register, run_session
from mfaudit.report import (
    CRITERIA,
    FAIL_MARK,
    PASS_MARK,
    REPORT_SCHEMA,
    AttackOutcome,
    AttackReport,
    CriteriaMatrix,
    CriteriaReport,
    SessionReport,
    evaluate_protocol,
    identity_linkability_scan,
    load_reference_matrix,
    success_rate,
)
from mfaudit.report.linkability import (
    CONCATENATED_IDENTITY,
    IDENTITY_KEYED_MASK,
    PLAIN_IDENTITY,
)
from mfaudit.threat_models import attack_trials, collect_all, collect_results

CONFIG = WorkbenchConfig()


def sessions(protocol_id, count, seed=0):
    rng = np.random.default_rng(seed)
    deployment = register(get_protocol(protocol_id), rng, seed=seed)
    return [run_session(deployment, rng=rng, session_index=k) for k in range(count)]


def evaluate_all():
    models = [get_protocol(p) for p in list_protocols()]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = collect_all(models, CONFIG)
        return CriteriaMatrix.from_results(models, results)


class TestAttackSummary(TestCase):
    def test_success_is_a_byte_comparison(self):
        outcome = AttackOutcome("A", "P", {"SK": b"\x01"}, {"SK": b"\x01"})
        self.assertTrue(outcome.success)
        outcome = AttackOutcome("A", "P", {"SK": b"\x01"}, {"SK": b"\x02"})
        self.assertFalse(outcome.success)
        self.assertEqual(outcome.mismatched, ["SK"])

    def test_unagreed_key_cannot_be_recovered(self):
        outcome = AttackOutcome("A", "P", {"SK": b"\x01"}, {"SK": None})
        self.assertFalse(outcome.success)

    def test_explicit_verdict(self):
        self.assertTrue(AttackOutcome("A", "P", success=True).success)
        self.assertFalse(AttackOutcome("A", "P").success)

    def test_metrics(self):
        outcome = AttackOutcome("A", "P", {"SK": b"\x01"}, {"SK": b"\x01"}, seed=3)
        frame = outcome.get_metrics()
        self.assertEqual(frame.shape, (1, 8))
        self.assertEqual(outcome.to_dict()["recovered"], {"SK": "01"})

    def test_success_rate(self):
        outcomes = [AttackOutcome("A", "P", success=True) for _ in range(100)]
        rate = success_rate(outcomes)
        self.assertEqual((rate.successes, rate.trials, rate.rate), (100, 100, 1.0))
        self.assertEqual(rate.high, 1.0)
        self.assertGreater(rate.low, 0.95)
        self.assertLess(rate.low, 1.0)

    def test_success_rate_needs_outcomes(self):
        with self.assertRaises(EmptySampleError):
            success_rate([])


class TestLinkability(TestCase):
    def test_plain_identity(self):
        findings = identity_linkability_scan(sessions("P8", 3), get_protocol("P8"))
        self.assertIn(("ID_U", PLAIN_IDENTITY), [(f.name, f.kind) for f in findings])

    def test_concatenated_identity(self):
        findings = identity_linkability_scan(sessions("P4", 2), get_protocol("P4"))
        concatenated = [f for f in findings if f.kind == CONCATENATED_IDENTITY]
        self.assertEqual([(f.name, f.identities) for f in concatenated], [("l_10", ("ID_ur",))])

    def test_identity_keyed_mask(self):
        # M_1 = H(ID_s, TS_A) (+) R_A with TS_A sent in clear.
        findings = identity_linkability_scan(sessions("P10", 2), get_protocol("P10"))
        keyed = [(f.name, f.identities) for f in findings if f.kind == IDENTITY_KEYED_MASK]
        self.assertEqual(keyed, [("M_1", ("ID_s",))])

    def test_hashes_with_a_secret_input_are_not_flagged(self):
        for protocol_id in ("P2", "P5", "P6"):
            findings = identity_linkability_scan(
                sessions(protocol_id, 2), get_protocol(protocol_id)
            )
            self.assertEqual(findings, [], protocol_id)

    def test_hardened_design_is_unlinkable(self):
        self.assertEqual(
            identity_linkability_scan(sessions("HARDENED", 50), get_protocol("HARDENED")), []
        )


class TestCriteria(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.matrix = evaluate_all()

    def test_matrix_matches_the_reference(self):
        self.assertEqual(self.matrix.compare(load_reference_matrix()), [])

    def test_every_protocol_is_scored(self):
        self.assertEqual([row.protocol for row in self.matrix.rows], list_protocols())

    def test_hardened_design_passes_everything(self):
        row = self.matrix["HARDENED"]
        for criterion in CRITERIA:
            self.assertTrue(row.passed(criterion), criterion)

    def test_protocol_10_unlinkability_is_computed(self):
        cell = self.matrix["P10"].cells["C6"]
        self.assertFalse(cell.passed)
        self.assertFalse(cell.asserted)
        self.assertIn("check:linkability:identity-keyed-mask:M_1", cell.evidence)
        asserted = [(row.protocol, c) for row in self.matrix.rows for c in row.asserted]
        self.assertEqual(asserted, [("P9", "C1"), ("P9", "C7")])

    def test_asserted_cells_carry_citations(self):
        self.assertLessEqual(self.matrix.asserted_count, 4)
        for row in self.matrix.rows:
            for criterion in row.asserted:
                self.assertTrue(row.cells[criterion].citation)
                self.assertTrue(row.cells[criterion].verdict.startswith("asserted-"))

    def test_marks(self):
        row = self.matrix["P5"]
        self.assertEqual(row.mark("C1"), PASS_MARK)
        self.assertEqual(row.mark("C4"), FAIL_MARK)
        self.assertEqual(row.mark("C8"), "WA")
        self.assertEqual(self.matrix["P3"].mark("C8"), "SA")

    def test_failures_carry_evidence(self):
        for row in self.matrix.rows:
            for criterion in CRITERIA:
                cell = row.cells[criterion]
                if not cell.passed and not cell.asserted and criterion != "C8":
                    self.assertTrue(cell.evidence, f"{row.protocol} {criterion}")

    def test_frame(self):
        frame = self.matrix.to_frame(marks=False)
        self.assertEqual(len(frame), len(self.matrix.rows))

    def test_report_json_is_deterministic(self):
        first = CriteriaReport(self.matrix, load_reference_matrix()).to_json()
        second = CriteriaReport(evaluate_all(), load_reference_matrix()).to_json()
        self.assertEqual(first, second)
        data = json.loads(first)
        self.assertEqual(data["schema"], REPORT_SCHEMA)
        self.assertEqual(data["differences"], [])


class TestEvaluateProtocol(TestCase):
    def test_missing_results(self):
        with self.assertRaises(MissingHarnessResults):
            evaluate_protocol(get_protocol("P5"), None)

    def test_results_of_another_protocol(self):
        results = collect_results(get_protocol("P9"), CONFIG)
        with self.assertRaises(MissingHarnessResults):
            evaluate_protocol(get_protocol("P5"), results)

    def test_asserted_cells_warn(self):
        model = get_protocol("P9")
        results = collect_results(model, CONFIG)
        with self.assertWarns(UserWarning):
            row = evaluate_protocol(model, results)
        self.assertEqual(sorted(row.asserted), ["C1", "C7"])
        self.assertTrue(row.passed("C1"))
        self.assertFalse(row.passed("C7"))


class TestPublish(TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_attack_report(self):
        outcomes = attack_trials("A2-sk", get_protocol("P2"), WorkbenchConfig(trials=10))
        report = AttackReport({("A2-sk", "P2"): outcomes})
        report.publish(self.directory)
        for name in ("attacks.md", "attacks.json", "attack_runs.csv", "success_rates.png"):
            self.assertTrue(os.path.exists(os.path.join(self.directory, name)), name)
        data = json.loads(report.to_json())
        self.assertEqual(data["attacks"][0]["successes"], 10)
        self.assertIn("| A2-sk | P2 | 10 | 10 |", report.to_markdown())

    def test_session_report(self):
        report = SessionReport("P5", sessions("P5", 4))
        self.assertEqual(report.agreed, 4)
        self.assertEqual(report.disagreements, [])
        report.publish(self.directory)
        self.assertTrue(os.path.exists(os.path.join(self.directory, "sessions_P5.json")))
        self.assertIn("4/4 sessions agreed", report.to_markdown())
