"""
Computation and communication cost of protocols, as published.

A cost expression lists how many operations of each kind one
authentication takes, e.g. "326T_h + 1T_aed". Counts may be affine in a
parameter z ("(2z + 3)T_m"). A trailing "#" means XOR operations were not
counted; bit counts marked "*" are estimates. Published times are kept as
reference data and never treated as ground truth.

"""

from dataclasses import dataclass, field
import json
import os
import re
from typing import Optional, Tuple

from ..errors import FixtureParseError, MissingParameter, MissingUnitCost

# Kinds of operations, in the order of the cost notation legend.
OP_KINDS = ("T_h", "T_ecc", "T_ed", "T_aed", "T_x", "T_fe", "T_p", "T_me", "T_a", "T_m")

OP_NAMES = {
    "T_h": "hash",
    "T_ecc": "elliptic curve point multiplication",
    "T_ed": "symmetric encryption or decryption",
    "T_aed": "authenticated encryption or decryption",
    "T_x": "XOR",
    "T_fe": "fuzzy extractor",
    "T_p": "PUF evaluation",
    "T_me": "modular exponentiation",
    "T_a": "modular addition",
    "T_m": "modular multiplication",
}

XOR_IGNORED = "#"
ESTIMATED = "*"

PUBLISHED_COSTS_PATH = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), "data", "published_costs.json"
)

_TERM = re.compile(r"(\d+|\(([^()]*)\))(T_[a-z]+)")
_SEPARATOR = re.compile(r"\s*\+\s*")


@dataclass(frozen=True)
class AffineCount:
    """A count constant + slope * z."""

    constant: int = 0
    slope: int = 0

    def __post_init__(self):
        assert self.constant >= 0 and self.slope >= 0, "Counts are non-negative."

    def value(self, z=None):
        if self.slope == 0:
            return self.constant
        if z is None:
            raise MissingParameter("This count depends on z, which was not supplied.")
        assert z >= 0, "z must be non-negative."
        return self.constant + self.slope * z

    def __str__(self):
        if self.slope == 0:
            return str(self.constant)
        z = "z" if self.slope == 1 else f"{self.slope}z"
        return f"({z})" if self.constant == 0 else f"({z} + {self.constant})"


def _affine(text, line, column):
    constant = slope = None
    for part in text.split("+"):
        part = part.strip()
        if re.fullmatch(r"\d*z", part) and slope is None:
            slope = int(part[:-1] or 1)
        elif re.fullmatch(r"\d+", part) and constant is None:
            constant = int(part)
        else:
            raise FixtureParseError(f"Malformed count ({text})", None, line, column)
    return AffineCount(constant or 0, slope or 0)


def parse_cost_expression(text, line=None):
    """
    Parse a cost expression.

    Returns
    -------
    (tuple of (str, AffineCount), bool)
        The terms in the order written, and whether XOR was ignored.

    Raises
    ------
    FixtureParseError
        On malformed expressions or unknown operation kinds.

    """
    body = text.strip()
    xor_ignored = body.endswith(XOR_IGNORED)
    if xor_ignored:
        body = body[:-1].rstrip()
    terms, position = [], 0
    while position < len(body):
        match = _TERM.match(body, position)
        if match is None:
            raise FixtureParseError(f"Expected a term in {text!r}", None, line, position + 1)
        kind = match.group(3)
        if kind not in OP_KINDS:
            raise FixtureParseError(
                f"Unknown operation {kind}", None, line, match.start(3) + 1
            )
        if match.group(2) is not None:
            count = _affine(match.group(2), line, match.start(2) + 1)
        else:
            count = AffineCount(int(match.group(1)))
        terms.append((kind, count))
        position = match.end()
        separator = _SEPARATOR.match(body, position)
        if position < len(body):
            if separator is None or separator.end() == len(body):
                raise FixtureParseError(f"Expected '+' in {text!r}", None, line, position + 1)
            position = separator.end()
    if not terms:
        raise FixtureParseError("Empty cost expression", None, line, 1)
    return tuple(terms), xor_ignored


def format_cost_expression(terms, xor_ignored=False):
    """The inverse of parse_cost_expression."""
    text = " + ".join(f"{count}{kind}" for kind, count in terms)
    return text + XOR_IGNORED if xor_ignored else text


def _flagged_number(text, flags, cast):
    """Split "1312*" into (1312, "*"); None stays None."""
    if text is None:
        return None, ""
    text = str(text)
    flag = text[-1] if text and text[-1] in flags else ""
    return cast(text[: len(text) - len(flag)]), flag


@dataclass(frozen=True)
class CostProfile:
    """
    Published cost of one protocol.

    Parameters
    ----------
    protocol: str
    terms: tuple of (str, AffineCount)
    xor_ignored: bool
    bits: int
        Communication cost of one authentication.
    bits_flag: str
        "*" when the bit count is an estimate.
    passes: int
        Messages exchanged.
    reference_time_ms: float, optional
        Published authentication time, on unknown hardware.
    reference_time_flag: str
        "#" when that time ignores XOR.
    storage: str, optional
        Published storage requirement, verbatim.

    """

    protocol: str
    terms: Tuple[Tuple[str, AffineCount], ...]
    xor_ignored: bool = False
    bits: int = 0
    bits_flag: str = ""
    passes: int = 0
    reference_time_ms: Optional[float] = None
    reference_time_flag: str = ""
    storage: Optional[str] = field(default=None)

    @property
    def needs_z(self):
        return any(count.slope for _, count in self.terms)

    @property
    def cost_text(self):
        return format_cost_expression(self.terms, self.xor_ignored)

    @property
    def bits_text(self):
        return f"{self.bits}{self.bits_flag}"

    @property
    def time_text(self):
        if self.reference_time_ms is None:
            return None
        return f"{self.reference_time_ms:g}{self.reference_time_flag}"

    def counts(self, z=None):
        """
        Operation counts by kind (affine counts expanded).

        Raises
        ------
        MissingParameter
            If a count depends on z and z is None.

        """
        counts = {}
        for kind, count in self.terms:
            counts[kind] = counts.get(kind, 0) + count.value(z)
        return counts

    def to_row(self):
        """The profile as printed in the published table."""
        return {
            "protocol": self.protocol,
            "cost": self.cost_text,
            "bits": self.bits_text,
            "passes": self.passes,
            "time_ms": self.time_text,
            "storage": self.storage,
        }

    @classmethod
    def from_row(cls, row):
        terms, xor_ignored = parse_cost_expression(row["cost"])
        bits, bits_flag = _flagged_number(row["bits"], ESTIMATED, int)
        time, time_flag = _flagged_number(row.get("time_ms"), XOR_IGNORED + ESTIMATED, float)
        return cls(
            protocol=row["protocol"],
            terms=terms,
            xor_ignored=xor_ignored,
            bits=bits,
            bits_flag=bits_flag,
            passes=int(row["passes"]),
            reference_time_ms=time,
            reference_time_flag=time_flag,
            storage=row.get("storage"),
        )


def load_profiles(path=None):
    """
    Published cost profiles, by protocol id, in table order.

    """
    with open(path or PUBLISHED_COSTS_PATH) as f:
        table = json.load(f)
    return {row["protocol"]: CostProfile.from_row(row) for row in table["rows"]}


def estimate_time(profile, units, z=None):
    """
    Estimated authentication time.

    Parameters
    ----------
    profile: CostProfile
    units: UnitCostTable or dict
        Microseconds per operation kind.
    z: int, optional
        Needed by profiles with affine counts.

    Returns
    -------
    float
        Milliseconds: the sum of count * unit cost over every kind.

    Raises
    ------
    MissingUnitCost
        If a kind with a nonzero count has no unit cost.
    MissingParameter
        If the profile needs z.

    """
    total = 0.0
    for kind, count in profile.counts(z).items():
        if count == 0:
            continue
        if kind not in units:
            raise MissingUnitCost(f"No unit cost for {kind} ({profile.protocol}).")
        total += count * units[kind]
    return total / 1000.0
