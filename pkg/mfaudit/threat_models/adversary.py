"""
What the adversary can do.

The adversary always knows the protocol design. On top of that it may read
or control the channel, hold some of the authentication factors, read whole
devices (the strong adversary) and learn every long-term secret once a
session is over (the forward-secrecy experiment).

An adversary may hold at most N-1 of the N factors of any role: holding all
of them is only allowed through a device read of that role.

"""

from dataclasses import asdict, dataclass, fields, replace
from typing import Optional, Tuple

from ..errors import ConfigError, SelectorViolation
from ..protocols.model import HISTORY_KINDS

EAVESDROP = "eavesdrop"
INTERCEPT_INJECT = "intercept-inject"
FULL_MITM = "full-mitm"
CHANNEL_ACCESS = (None, EAVESDROP, INTERCEPT_INJECT, FULL_MITM)

# Selector standing for the factor listed first in the factors label.
FIRST_FACTOR = "first"


@dataclass(frozen=True)
class AdversaryModel:
    """
    Capabilities of an adversary.

    Parameters
    ----------
    channel: str or None
        None, "eavesdrop", "intercept-inject" or "full-mitm".
    compromised: tuple of str
        Ids of compromised factors, or "first" for the first factor of the
        protocol.
    device_read: tuple of str
        Roles whose stored contents the adversary reads in full.
    longterm_leak: bool
        Whether every long-term secret leaks after the target session.
    history_fraction: float
        Share of stored historical data a device read (or historical-data
        factor) yields. 1.0 is the full retrieval of the strong adversary;
        smaller values model a bounded-retrieval assumption.
    label: str
        Used in reports.

    """

    channel: Optional[str] = EAVESDROP
    compromised: Tuple[str, ...] = ()
    device_read: Tuple[str, ...] = ()
    longterm_leak: bool = False
    history_fraction: float = 1.0
    label: str = ""

    def __post_init__(self):
        if self.channel not in CHANNEL_ACCESS:
            raise ConfigError(f"Unknown channel access {self.channel!r}.")
        if not 0.0 <= self.history_fraction <= 1.0:
            raise ConfigError("history_fraction must lie in [0, 1].")
        # Lists from JSON become tuples, so that models stay hashable.
        object.__setattr__(self, "compromised", tuple(self.compromised))
        object.__setattr__(self, "device_read", tuple(self.device_read))

    @property
    def can_inject(self):
        return self.channel in (INTERCEPT_INJECT, FULL_MITM)

    def selected_factors(self, model):
        """
        The factors this adversary holds in a protocol.

        Raises
        ------
        SelectorViolation
            If a selector names no factor of the protocol, or selects every
            factor of a role whose device is not read.

        """
        selected = []
        for selector in self.compromised:
            if selector == FIRST_FACTOR:
                if not model.factors:
                    raise SelectorViolation(f"{model.id} has no factors.")
                factor = model.factors[0]
            else:
                try:
                    factor = model.factor(selector)
                except KeyError as err:
                    raise SelectorViolation(err.args[0]) from None
            if factor not in selected:
                selected.append(factor)
        for role in model.roles:
            held = model.factors_of(role)
            if held and all(f in selected for f in held) and role not in self.device_read:
                raise SelectorViolation(
                    f"Selecting {', '.join(f.id for f in held)} takes every factor of "
                    f"the {role} of {model.id}."
                )
        return selected

    def compromised_names(self, model):
        """Names of every value the adversary holds, before any session."""
        names = []
        for factor in self.selected_factors(model):
            names.extend(factor.holds)
        for role in self.device_read:
            for spec in model.stored_atoms(role):
                if spec.kind in HISTORY_KINDS and self.history_fraction < 1.0:
                    continue
                names.append(spec.name)
        if self.longterm_leak:
            names.extend(spec.name for spec in model.long_term_atoms())
        return list(dict.fromkeys(names))

    def with_changes(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        values = asdict(self)
        values["compromised"] = list(self.compromised)
        values["device_read"] = list(self.device_read)
        return values

    @classmethod
    def from_dict(cls, values):
        """Build an adversary from a configuration block, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown adversary keys: {', '.join(unknown)}.")
        return cls(**values)

    def __str__(self):
        return self.label or (
            f"{self.channel or 'offline'} adversary holding "
            f"{', '.join(self.compromised) or 'no factor'}"
        )


def n_minus_one(model, role, withheld, channel=EAVESDROP):
    """An adversary holding every factor of a role but one."""
    held = [f.id for f in model.factors_of(role) if f.id != withheld]
    return AdversaryModel(
        channel=channel,
        compromised=tuple(held),
        label=f"{role} factors without {withheld}",
    )
