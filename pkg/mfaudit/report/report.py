"""
Classes to produce reports summarising the security of protocols.

Reports combine the outputs of several experiments (attack outcomes, the
evaluation matrix) and write them to a directory as markdown, JSON and
figures.

"""

from abc import ABC, abstractmethod
import os

import pandas as pd

from ..terms import render
from ..utils import dump_json
from .attack_summary import success_rate
from .utils import plot_criteria_heatmap, plot_success_rates

# Version tag of every JSON report.
REPORT_SCHEMA = "mfaudit-report/1"


class Report(ABC):
    """
    A report groups together the outputs of a range of experiments and
    summarises them in a concise and useful way.

    """

    @abstractmethod
    def publish(self, filepath):
        """
        Write the report (and its figures) to a directory.

        """
        pass

    @abstractmethod
    def to_dict(self):
        """The report as JSON-serialisable data."""

    def to_json(self):
        return dump_json(dict(self.to_dict(), schema=REPORT_SCHEMA))

    def _write(self, filepath, name, text):
        if not os.path.exists(filepath):
            os.makedirs(filepath)
        with open(os.path.join(filepath, name), "w") as f:
            f.write(text)


class CriteriaReport(Report):
    """
    Report the evaluation matrix, and how it compares with a reference.

    Parameters
    ----------
    matrix: CriteriaMatrix
    reference: dict, optional
        As returned by load_reference_matrix.

    """

    def __init__(self, matrix, reference=None):
        self.matrix = matrix
        self.reference = reference

    @property
    def differences(self):
        return self.matrix.compare(self.reference) if self.reference is not None else []

    def to_markdown(self):
        text = self.matrix.to_markdown()
        if self.reference is None:
            return text
        if not self.differences:
            return text + "\nEvery compared cell matches the reference matrix.\n"
        lines = ["", "Cells differing from the reference matrix:"]
        for protocol, criterion, expected, computed in self.differences:
            lines.append(
                f"- {protocol} {criterion}: expected {'pass' if expected else 'fail'}, "
                f"computed {'pass' if computed else 'fail'}"
            )
        return text + "\n".join(lines) + "\n"

    def to_dict(self):
        values = self.matrix.to_dict()
        if self.reference is not None:
            values["differences"] = [
                {"protocol": p, "criterion": c, "expected": e, "computed": v}
                for p, c, e, v in self.differences
            ]
        return values

    def publish(self, filepath):
        self._write(filepath, "criteria.md", self.to_markdown())
        self._write(filepath, "criteria.json", self.to_json())
        plot_criteria_heatmap(self.matrix.to_frame(marks=False), filepath)
        print(f"Evaluation of {len(self.matrix.rows)} protocols saved to directory {filepath}")


class AttackReport(Report):
    """
    Report the outcomes of repeated attack runs.

    Parameters
    ----------
    outcomes: dict (attack id, protocol) -> list of AttackOutcome
    confidence: float
        Confidence level of the success-rate intervals.

    """

    def __init__(self, outcomes, confidence=0.95):
        self.confidence = confidence
        self.outcomes = {key: list(value) for key, value in outcomes.items() if value}
        self.rates = {
            key: success_rate(value, confidence) for key, value in self.outcomes.items()
        }

    @property
    def attacks_data(self):
        """Metrics of every run, one row per outcome."""
        frames = [o.get_metrics() for runs in self.outcomes.values() for o in runs]
        return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()

    def rates_frame(self):
        frames = [rate.get_metrics() for rate in self.rates.values()]
        return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()

    def to_markdown(self):
        lines = [
            f"| attack | protocol | successes | trials | {100 * self.confidence:.0f}% interval |",
            "|---|---|---|---|---|",
        ]
        for rate in self.rates.values():
            lines.append(
                f"| {rate.attack_id} | {rate.protocol} | {rate.successes} | {rate.trials} "
                f"| [{rate.low:.3f}, {rate.high:.3f}] |"
            )
        for (attack_id, protocol), runs in self.outcomes.items():
            findings = runs[0].findings
            if findings:
                lines.append("")
                lines.append(f"{attack_id} on {protocol}, first run:")
                lines.extend(f"- {finding}" for finding in findings)
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "attacks": [
                dict(self.rates[key].to_dict(), first_run=runs[0].to_dict())
                for key, runs in self.outcomes.items()
            ]
        }

    def publish(self, filepath):
        self._write(filepath, "attacks.md", self.to_markdown())
        self._write(filepath, "attacks.json", self.to_json())
        if self.rates:
            self.attacks_data.to_csv(os.path.join(filepath, "attack_runs.csv"), index=False)
            plot_success_rates(self.rates_frame(), filepath)
        print(f"Results of {len(self.rates)} attacks saved to directory {filepath}")


class SessionReport(Report):
    """
    Report honest runs of a protocol.

    Parameters
    ----------
    protocol: str
    transcripts: list of Transcript
        One per trial.
    variant: str, optional
        The equations variant the runs used.

    """

    def __init__(self, protocol, transcripts, variant=None):
        self.protocol = protocol
        self.transcripts = list(transcripts)
        self.variant = variant

    @property
    def disagreements(self):
        """Transcripts whose roles did not all accept with one key."""
        return [t for t in self.transcripts if not t.agreed]

    @property
    def agreed(self):
        return len(self.transcripts) - len(self.disagreements)

    def to_markdown(self):
        name = self.protocol if self.variant is None else f"{self.protocol} ({self.variant})"
        lines = [f"{name}: {self.agreed}/{len(self.transcripts)} sessions agreed on a key."]
        for transcript in self.disagreements:
            reasons = "; ".join(f"{r}: {f}" for r, f in sorted(transcript.failures.items()))
            lines.append(f"- seed {transcript.seed}: {reasons or 'keys differ'}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "variant": self.variant,
            "trials": len(self.transcripts),
            "agreed": self.agreed,
            "first_session": self.transcripts[0].to_dict() if self.transcripts else None,
            "disagreements": [t.to_dict() for t in self.disagreements],
        }

    def publish(self, filepath):
        self._write(filepath, f"sessions_{self.protocol}.md", self.to_markdown())
        self._write(
            filepath,
            f"sessions_{self.protocol}.json",
            dump_json(
                dict(
                    self.to_dict(),
                    sessions=[t.to_dict() for t in self.transcripts],
                    schema=REPORT_SCHEMA,
                )
            ),
        )
        print(f"{len(self.transcripts)} sessions of {self.protocol} saved to directory {filepath}")


class DeductionReport(Report):
    """
    Report a derivability query.

    Parameters
    ----------
    goal: Term
    trace: DerivationTrace or None
        None when the goal is not derivable.
    source: str, optional
        The knowledge-base file queried.
    undecided: str, optional
        Why the search stopped before the goal or a fixpoint. The goal is
        then neither derived nor shown underivable.

    """

    def __init__(self, goal, trace, source=None, undecided=None):
        self.goal = goal
        self.trace = trace
        self.source = source
        self.undecided = undecided

    def to_markdown(self):
        if self.undecided is not None:
            return f"{render(self.goal)}: undecided. {self.undecided}\n"
        if self.trace is None:
            return f"{render(self.goal)}: not derivable\n"
        return f"{render(self.goal)}: derivable in {len(self.trace)} steps\n{self.trace}\n"

    def to_dict(self):
        return {
            "source": self.source,
            "goal": render(self.goal),
            "derivable": None if self.undecided is not None else self.trace is not None,
            "undecided": self.undecided,
            "trace": self.trace.to_dict()["steps"] if self.trace is not None else [],
        }

    def publish(self, filepath):
        self._write(filepath, "deduction.md", self.to_markdown())
        self._write(filepath, "deduction.json", self.to_json())
        print(f"Derivation of {render(self.goal)} saved to directory {filepath}")
