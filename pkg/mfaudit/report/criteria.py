"""
Scoring protocols against the eight evaluation criteria.

    C1  mutual authentication
    C2  factors from distinct categories
    C3  factors independent of each other
    C4  resilience to N-1 factor compromise
    C5  perfect forward secrecy
    C6  user anonymity and unlinkability
    C7  resilience to known attacks (replay, impersonation, MITM)
    C8  designed against a strong adversary

Every computed cell carries references to the evidence behind it: an attack
id, a structural check or a metadata field. Cells a description asserts
(because nothing executable backs them) override the computed verdict and
are counted.

"""

from dataclasses import dataclass, field
import json
import os
from typing import Dict, Optional, Tuple
import warnings

import pandas as pd

from ..errors import MissingHarnessResults
from ..protocols.model import STRONG_ADVERSARY
from .utils import FAIL_MARK, PASS_MARK

CRITERIA = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")

CRITERIA_NAMES = {
    "C1": "mutual authentication",
    "C2": "distinct factor categories",
    "C3": "independent factors",
    "C4": "N-1 factor compromise",
    "C5": "perfect forward secrecy",
    "C6": "anonymity and unlinkability",
    "C7": "known attacks",
    "C8": "strong adversary",
}

# The published evaluation matrix.
REFERENCE_MATRIX_PATH = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), "data", "reference_matrix.json"
)


@dataclass(frozen=True)
class CriterionEvidence:
    """
    One cell of the evaluation matrix.

    Parameters
    ----------
    criterion: str
    passed: bool
    evidence: tuple of str
        References such as "attack:A2-sk", "check:unauthenticated-roles:server"
        or "metadata:declared-adversary=WA". Empty for a computed pass with
        nothing against it.
    citation: str, optional
        Set for asserted cells: the claim the verdict is taken from.

    """

    criterion: str
    passed: bool
    evidence: Tuple[str, ...] = ()
    citation: Optional[str] = None

    @property
    def asserted(self):
        return self.citation is not None

    @property
    def verdict(self):
        if self.asserted:
            return "asserted-pass" if self.passed else "asserted-fail"
        return "pass" if self.passed else "fail"

    def to_dict(self):
        values = {"verdict": self.verdict, "evidence": list(self.evidence)}
        if self.citation is not None:
            values["citation"] = self.citation
        return values


@dataclass
class CriteriaRow:
    """The evaluation of one protocol."""

    protocol: str
    domain: str
    factors: str
    adversary: str
    cells: Dict[str, CriterionEvidence] = field(default_factory=dict)

    def passed(self, criterion):
        return self.cells[criterion].passed

    def mark(self, criterion):
        if criterion == "C8":
            return self.adversary
        return PASS_MARK if self.passed(criterion) else FAIL_MARK

    @property
    def asserted(self):
        return [c for c in CRITERIA if self.cells[c].asserted]

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "domain": self.domain,
            "factors": self.factors,
            "adversary": self.adversary,
            "cells": {c: self.cells[c].to_dict() for c in CRITERIA},
        }


def _attacks_against(results, criterion):
    return [f"attack:{o.attack_id}" for o in results.successful_attacks(criterion)]


def _mutual_authentication(model, results):
    evidence = [f"check:unauthenticated-roles:{role}" for role in model.unauthenticated_roles()]
    return evidence + _attacks_against(results, "C1")


def _distinct_categories(model, results):
    evidence = []
    for role in model.roles:
        categories = [f.category for f in model.factors_of(role)]
        repeated = sorted({c for c in categories if categories.count(c) > 1})
        evidence += [f"check:repeated-category:{role}:{c}" for c in repeated]
    return evidence


def _independent_factors(model, results):
    evidence = [f"check:factor-dependence:{a}->{b}" for a, b in model.factor_edges()]
    return evidence + _attacks_against(results, "C3")


def _n_minus_one(model, results):
    evidence = [
        f"check:n-1:{f.role}-without-{f.withheld}:{','.join(f.derivable)}"
        for f in results.n_minus_one
    ]
    return evidence + _attacks_against(results, "C4")


def _forward_secrecy(model, results):
    evidence = ["experiment:pfs"] if results.pfs is not None and results.pfs.success else []
    return evidence + _attacks_against(results, "C5")


def _anonymity(model, results):
    evidence = [f"check:linkability:{f.kind}:{f.name}" for f in results.linkability]
    return evidence + _attacks_against(results, "C6")


def _known_attacks(model, results):
    evidence = []
    if results.replay is not None and results.replay.accepted:
        evidence.append(f"check:replay:message-{results.replay.index}")
    return evidence + _attacks_against(results, "C7")


_CHECKS = {
    "C1": _mutual_authentication,
    "C2": _distinct_categories,
    "C3": _independent_factors,
    "C4": _n_minus_one,
    "C5": _forward_secrecy,
    "C6": _anonymity,
    "C7": _known_attacks,
}


def evaluate_protocol(model, results):
    """
    Score a protocol from the harness results.

    Parameters
    ----------
    model: ProtocolModel
    results: HarnessResults
        For this protocol, from collect_results.

    Returns
    -------
    CriteriaRow

    Raises
    ------
    MissingHarnessResults
        If there are no results for this protocol, or an executable protocol
        was never run.

    """
    if results is None or results.protocol != model.id:
        raise MissingHarnessResults(f"No harness results for {model.id}.")
    if model.is_executable and not results.executed:
        raise MissingHarnessResults(f"{model.id} has not been run by the harness.")
    row = CriteriaRow(model.id, model.domain, model.factors_label, model.declared_adversary)
    for criterion, check in _CHECKS.items():
        evidence = check(model, results)
        row.cells[criterion] = CriterionEvidence(criterion, not evidence, tuple(evidence))
    row.cells["C8"] = CriterionEvidence(
        "C8",
        model.declared_adversary == STRONG_ADVERSARY,
        (f"metadata:declared-adversary={model.declared_adversary}",),
    )
    for cell in model.asserted:
        computed = row.cells[cell.criterion]
        warnings.warn(
            f"{model.id} {cell.criterion} is asserted to "
            f"{'pass' if cell.passed else 'fail'} (computed: {computed.verdict})."
        )
        row.cells[cell.criterion] = CriterionEvidence(
            cell.criterion, cell.passed, computed.evidence, cell.citation
        )
    return row


def load_reference_matrix(path=None):
    """
    The published matrix, as {protocol: {criterion: bool}} where C8 is True
    for designs against a strong adversary.

    """
    with open(path or REFERENCE_MATRIX_PATH) as f:
        table = json.load(f)
    reference = {}
    for row in table["rows"]:
        cells = dict(zip(table["criteria"], row["passed"]))
        cells["C8"] = row["adversary"] == STRONG_ADVERSARY
        reference[row["protocol"]] = cells
    return reference


class CriteriaMatrix:
    """
    The evaluation of several protocols.

    Parameters
    ----------
    rows: iterable of CriteriaRow
        Kept in the order given.

    """

    def __init__(self, rows):
        self.rows = list(rows)

    @classmethod
    def from_results(cls, models, results):
        """
        Parameters
        ----------
        models: list of ProtocolModel
        results: dict protocol id -> HarnessResults

        """
        return cls(evaluate_protocol(m, results.get(m.id)) for m in models)

    def __getitem__(self, protocol):
        for row in self.rows:
            if row.protocol == protocol:
                return row
        raise KeyError(protocol)

    @property
    def asserted_count(self):
        return sum(len(row.asserted) for row in self.rows)

    def to_frame(self, marks=True):
        """
        Returns
        -------
        A dataframe
            One row per protocol. With marks, columns protocol, domain,
            factors, C1..C8 as printed; otherwise indexed by protocol with one
            boolean column per criterion.

        """
        if not marks:
            return pd.DataFrame(
                [[row.passed(c) for c in CRITERIA] for row in self.rows],
                index=[row.protocol for row in self.rows],
                columns=list(CRITERIA),
            )
        return pd.DataFrame(
            [
                [row.protocol, row.domain, row.factors] + [row.mark(c) for c in CRITERIA]
                for row in self.rows
            ],
            columns=["protocol", "domain", "factors"] + list(CRITERIA),
        )

    def compare(self, reference):
        """
        Cells that differ from a reference matrix.

        Parameters
        ----------
        reference: dict protocol -> dict criterion -> bool
            As returned by load_reference_matrix. Protocols absent from it
            are not compared.

        Returns
        -------
        list of (protocol, criterion, expected, computed)

        """
        differences = []
        for row in self.rows:
            expected = reference.get(row.protocol)
            if expected is None:
                continue
            for criterion in CRITERIA:
                if expected[criterion] != row.passed(criterion):
                    differences.append(
                        (row.protocol, criterion, expected[criterion], row.passed(criterion))
                    )
        return differences

    def to_markdown(self):
        frame = self.to_frame()
        lines = [
            "| " + " | ".join(frame.columns) + " |",
            "|" + "---|" * len(frame.columns),
        ]
        for values in frame.itertuples(index=False):
            lines.append("| " + " | ".join(str(v) for v in values) + " |")
        lines.append("")
        lines.append(f"Asserted cells: {self.asserted_count}.")
        for row in self.rows:
            for criterion in row.asserted:
                lines.append(f"- {row.protocol} {criterion}: \"{row.cells[criterion].citation}\"")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "criteria": {c: CRITERIA_NAMES[c] for c in CRITERIA},
            "rows": [row.to_dict() for row in self.rows],
            "asserted": self.asserted_count,
        }
