"""
Workbench configuration.

A configuration is a JSON object. Every key is optional:

    {
      "suite": {"hash_algorithm": "sha256", "digest_length": 32, ...},
      "adversary": {"channel": "eavesdrop", "compromised": ["PW"], ...},
      "seed": 0,
      "trials": 100,
      "sessions": 3,
      "format": "json",
      "fixture_dir": null,
      "workers": 1
    }

Unknown keys, at any level, are rejected before anything runs.

"""

import json
from dataclasses import dataclass, fields, replace
from typing import Optional

from .errors import ConfigError
from .primitives.suite import DEFAULT_SUITE, CryptoSuite
from .threat_models.adversary import AdversaryModel

OUTPUT_FORMATS = ("json", "markdown")


@dataclass(frozen=True)
class WorkbenchConfig:
    """
    Parameters
    ----------
    suite: CryptoSuite
    adversary: AdversaryModel, optional
        Overrides the default adversary of attacks run from the command line.
        Evaluation always uses each attack's own premises.
    seed: int
        Seed of every run; trial k of a batch uses seed + k.
    trials: int
        Repetitions of batched runs.
    sessions: int
        Honest sessions per deployment in an evaluation (at least two, so
        that sessions can be compared).
    format: str
        "json" or "markdown".
    fixture_dir: str, optional
        Directory of protocol descriptions.
    workers: int
        Protocols evaluated in parallel.

    """

    suite: CryptoSuite = DEFAULT_SUITE
    adversary: Optional[AdversaryModel] = None
    seed: int = 0
    trials: int = 100
    sessions: int = 3
    format: str = "json"
    fixture_dir: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1.")
        if self.sessions < 2:
            raise ConfigError("sessions must be at least 2.")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1.")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"format must be one of {', '.join(OUTPUT_FORMATS)}.")

    def with_changes(self, **changes):
        """A copy with some settings replaced; None values are ignored."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self):
        return {
            "suite": self.suite.to_dict(),
            "adversary": self.adversary.to_dict() if self.adversary else None,
            "seed": self.seed,
            "trials": self.trials,
            "sessions": self.sessions,
            "format": self.format,
            "fixture_dir": self.fixture_dir,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, values):
        """
        Raises
        ------
        ConfigError
            On unknown keys or invalid values.

        """
        if not isinstance(values, dict):
            raise ConfigError("A configuration must be a JSON object.")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}.")
        values = dict(values)
        if "suite" in values:
            values["suite"] = CryptoSuite.from_dict(values["suite"] or {})
        if values.get("adversary") is not None:
            values["adversary"] = AdversaryModel.from_dict(values["adversary"])
        try:
            return cls(**values)
        except TypeError as err:
            raise ConfigError(str(err)) from None

    @classmethod
    def load(cls, path):
        """Read a configuration file."""
        try:
            with open(path) as f:
                values = json.load(f)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
        except OSError as err:
            raise ConfigError(f"Cannot read {path}: {err.strerror}.") from None
        return cls.from_dict(values)


DEFAULT_CONFIG = WorkbenchConfig()
