"""Tests for the workbench configuration."""

import json
import os
import tempfile
from unittest import TestCase

from mfaudit.config import DEFAULT_CONFIG, WorkbenchConfig
from mfaudit.errors import ConfigError
from mfaudit.primitives import DEFAULT_SUITE
from mfaudit.threat_models import FULL_MITM


class TestWorkbenchConfig(TestCase):
    def test_defaults(self):
        self.assertEqual(DEFAULT_CONFIG.suite, DEFAULT_SUITE)
        self.assertIsNone(DEFAULT_CONFIG.adversary)
        self.assertEqual((DEFAULT_CONFIG.seed, DEFAULT_CONFIG.trials), (0, 100))
        self.assertEqual(DEFAULT_CONFIG.format, "json")

    def test_from_dict(self):
        config = WorkbenchConfig.from_dict(
            {
                "suite": {"hash_algorithm": "sha512", "digest_length": 64},
                "adversary": {"channel": "full-mitm", "compromised": ["SSID"]},
                "seed": 7,
                "format": "markdown",
            }
        )
        self.assertEqual(config.suite.hash_algorithm, "sha512")
        self.assertEqual(config.adversary.channel, FULL_MITM)
        self.assertEqual(config.seed, 7)
        self.assertEqual(WorkbenchConfig.from_dict(config.to_dict()), config)

    def test_unknown_keys(self):
        for values in (
            {"seeds": 3},
            {"suite": {"hash": "sha256"}},
            {"adversary": {"channels": "eavesdrop"}},
        ):
            with self.subTest(values=values):
                with self.assertRaises(ConfigError):
                    WorkbenchConfig.from_dict(values)

    def test_invalid_values(self):
        for values in (
            {"trials": 0},
            {"sessions": 1},
            {"workers": 0},
            {"format": "yaml"},
            {"suite": {"hash_algorithm": "md5"}},
            [],
        ):
            with self.subTest(values=values):
                with self.assertRaises(ConfigError):
                    WorkbenchConfig.from_dict(values)

    def test_with_changes_ignores_none(self):
        config = DEFAULT_CONFIG.with_changes(seed=5, trials=None)
        self.assertEqual((config.seed, config.trials), (5, DEFAULT_CONFIG.trials))
        with self.assertRaises(ConfigError):
            DEFAULT_CONFIG.with_changes(trials=0)


class TestLoad(TestCase):
    def setUp(self):
        handle, self.path = tempfile.mkstemp(suffix=".json")
        os.close(handle)

    def tearDown(self):
        os.remove(self.path)

    def write(self, text):
        with open(self.path, "w") as f:
            f.write(text)

    def test_load(self):
        self.write(json.dumps({"seed": 3, "sessions": 4}))
        config = WorkbenchConfig.load(self.path)
        self.assertEqual((config.seed, config.sessions), (3, 4))

    def test_syntax_error_has_position(self):
        self.write('{\n  "seed": 3,\n}\n')
        with self.assertRaises(ConfigError) as cm:
            WorkbenchConfig.load(self.path)
        self.assertIn(f"{self.path}:3:", str(cm.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            WorkbenchConfig.load(self.path + ".missing")
