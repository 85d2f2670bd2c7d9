"""
Concrete compromise: the bytes an adversary obtains from the factors and
devices it holds.

"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..protocols.model import HISTORY_KINDS


@dataclass
class CompromisedMaterial:
    """
    Secrets in the adversary's hands.

    Parameters
    ----------
    values: dict name -> bytes
        Stored values, by name.
    history: dict int -> (bytes, bytes)
        Rows of historical data obtained, by index.
    names: list of str
        Every name the selector covers, including historical data names.

    """

    values: Dict[str, bytes] = field(default_factory=dict)
    history: Dict[int, Tuple[bytes, bytes]] = field(default_factory=dict)
    names: List[str] = field(default_factory=list)

    def __contains__(self, name):
        return name in self.values

    def __getitem__(self, name):
        return self.values[name]

    def get(self, name, default=None):
        return self.values.get(name, default)


def retrieved_rows(deployment, fraction):
    """
    Indices of the history rows a bounded retrieval yields: the first
    ceil(fraction * rows) rows, so that the result only depends on the
    deployment and the selector.

    """
    count = math.ceil(fraction * len(deployment.history))
    return list(range(count))


def compromise(deployment, adversary):
    """
    Everything the adversary holds in a deployment, before any session.

    Parameters
    ----------
    deployment: DeploymentState
    adversary: AdversaryModel

    Returns
    -------
    CompromisedMaterial

    Raises
    ------
    SelectorViolation
        If the adversary breaks the N-1 rule.

    """
    model = deployment.model
    names = adversary.compromised_names(model)
    material = CompromisedMaterial(names=names)
    history_names = {spec.name for spec in model.atoms_of_kind(*HISTORY_KINDS)}
    # Factors holding historical data yield the rows a bounded retrieval
    # allows; device reads of a table under full retrieval yield them all.
    history_held = [
        name
        for factor in adversary.selected_factors(model)
        for name in factor.holds
        if name in history_names
    ]
    read_roles = [
        role
        for role in adversary.device_read
        if any(spec.name in history_names for spec in model.stored_atoms(role))
    ]
    if history_held or read_roles or adversary.longterm_leak:
        fraction = 1.0 if adversary.longterm_leak else adversary.history_fraction
        for i in retrieved_rows(deployment, fraction):
            material.history[i] = deployment.history[i]
    for name in names:
        if name in deployment.values:
            material.values[name] = deployment.values[name]
    return material
