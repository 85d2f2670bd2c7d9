"""
Classes to summarise the output of an attack.

An AttackOutcome is produced by every attack run (and by the forward-secrecy
experiment). It records what the adversary recovered next to the honest
values, so that success is always a byte-for-byte comparison. A SuccessRate
aggregates the outcomes of repeated trials.

"""

from abc import ABC, abstractmethod
import os

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from ..errors import EmptySampleError


class AttackSummary(ABC):
    """Summarise the results of an attack against a protocol."""

    @abstractmethod
    def get_metrics(self):
        """
        Calculate metrics relevant for an attack.

        """
        pass

    @abstractmethod
    def get_metric_filename(self, postfix=""):
        """
        Returns the name of the file to save to.

        Parameters
        ----------
        postfix: str
            An optional string to append to the filename.

        """

    def write_metrics(self, output_path, postfix=""):
        """
        Write metrics to file.

        Parameters
        ----------
        output_path: str
            The directory where the metrics should be saved.
        postfix: str
            An optional string to append to the filename

        """
        file_name = self.get_metric_filename(postfix)
        self.get_metrics().to_csv(os.path.join(output_path, file_name), index=False)


def _trace_steps(trace):
    if trace is None:
        return []
    if hasattr(trace, "steps"):
        return [step.to_dict() for step in trace.steps]
    return [str(step) for step in trace]


class AttackOutcome(AttackSummary):
    """
    The result of one attack run.

    Parameters
    ----------
    attack_id: str
    protocol: str
    recovered: dict name -> bytes
        Values the adversary computed.
    expected: dict name -> bytes
        The honest counterparts of the recovered values. An attack succeeds
        iff it recovered every one of them, byte for byte.
    trace: DerivationTrace or list of str, optional
        How the values were obtained: a derivation, or a log of steps.
    criteria: tuple of str
        Criteria a success counts against.
    findings: list of str, optional
        Observations made on the way (plaintext identities, accepted
        forgeries, ...).
    success: bool, optional
        Verdict of attacks that do not recover values (structural checks,
        impersonation). Computed from recovered and expected otherwise.
    seed: int, optional

    """

    def __init__(
        self,
        attack_id,
        protocol,
        recovered=None,
        expected=None,
        trace=None,
        criteria=(),
        findings=None,
        success=None,
        seed=None,
    ):
        self.attack_id = attack_id
        self.protocol = protocol
        self.recovered = dict(recovered or {})
        self.expected = dict(expected or {})
        self.trace = trace
        self.criteria = tuple(criteria)
        self.findings = list(findings or [])
        self.seed = seed
        if success is None:
            # An expected value of None (a key never agreed on) cannot be recovered.
            success = bool(self.expected) and all(
                value is not None and self.recovered.get(name) == value
                for name, value in self.expected.items()
            )
        self.success = bool(success)

    @property
    def mismatched(self):
        """Names whose recovered value differs from the honest one."""
        return sorted(
            name for name, value in self.expected.items() if self.recovered.get(name) != value
        )

    def get_metrics(self):
        """
        Returns
        -------
        A dataframe
            One row. Columns: attack, protocol, seed, success, recovered,
            criteria, trace_length, findings.

        """
        return pd.DataFrame(
            [
                [
                    self.attack_id,
                    self.protocol,
                    self.seed,
                    self.success,
                    ",".join(sorted(self.recovered)),
                    ",".join(self.criteria),
                    len(_trace_steps(self.trace)),
                    "; ".join(self.findings),
                ]
            ],
            columns=[
                "attack",
                "protocol",
                "seed",
                "success",
                "recovered",
                "criteria",
                "trace_length",
                "findings",
            ],
        )

    def get_metric_filename(self, postfix=""):
        return f"result_{self.attack_id}_{self.protocol}_{postfix}.csv"

    def to_dict(self):
        return {
            "attack": self.attack_id,
            "protocol": self.protocol,
            "seed": self.seed,
            "success": self.success,
            "criteria": list(self.criteria),
            "recovered": {name: value.hex() for name, value in sorted(self.recovered.items())},
            "mismatched": self.mismatched,
            "findings": list(self.findings),
            "trace": _trace_steps(self.trace),
        }

    def __repr__(self):
        verdict = "success" if self.success else "failure"
        return f"AttackOutcome({self.attack_id} on {self.protocol}: {verdict})"


class SuccessRate(AttackSummary):
    """
    Success of an attack over repeated trials, with a Clopper-Pearson
    confidence interval.

    """

    def __init__(self, attack_id, protocol, successes, trials, confidence=0.95):
        if trials <= 0:
            raise EmptySampleError("A success rate needs at least one trial.")
        self.attack_id = attack_id
        self.protocol = protocol
        self.successes = int(successes)
        self.trials = int(trials)
        self.confidence = confidence
        interval = binomtest(self.successes, self.trials).proportion_ci(
            confidence_level=confidence, method="exact"
        )
        self.low, self.high = float(interval.low), float(interval.high)

    @property
    def rate(self):
        return self.successes / self.trials

    def get_metrics(self):
        return pd.DataFrame(
            [
                [
                    self.attack_id,
                    self.protocol,
                    self.successes,
                    self.trials,
                    self.rate,
                    self.low,
                    self.high,
                ]
            ],
            columns=["attack", "protocol", "successes", "trials", "rate", "ci_low", "ci_high"],
        )

    def get_metric_filename(self, postfix=""):
        return f"success_{self.attack_id}_{self.protocol}_{postfix}.csv"

    def to_dict(self):
        return {
            "attack": self.attack_id,
            "protocol": self.protocol,
            "successes": self.successes,
            "trials": self.trials,
            "rate": self.rate,
            "interval": [self.low, self.high],
        }

    def __str__(self):
        return (
            f"{self.attack_id} on {self.protocol}: {self.successes}/{self.trials} "
            f"({100 * self.rate:.0f}%, CI [{self.low:.2f}, {self.high:.2f}])"
        )


def success_rate(outcomes, confidence=0.95):
    """
    Aggregate outcomes of one attack on one protocol.

    Parameters
    ----------
    outcomes: list of AttackOutcome

    Returns
    -------
    SuccessRate

    """
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptySampleError("No outcomes to aggregate.")
    first = outcomes[0]
    successes = int(np.sum([o.success for o in outcomes]))
    return SuccessRate(first.attack_id, first.protocol, successes, len(outcomes), confidence)
