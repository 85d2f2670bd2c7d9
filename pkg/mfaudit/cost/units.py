"""
Unit costs: microseconds per operation kind.

Unit-cost files hold one `kind = microseconds` entry per line; `#` starts a
comment.

"""

from collections.abc import Mapping
import os

from ..errors import FixtureParseError
from .profile import OP_KINDS

DEFAULT_UNITS_PATH = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), "data", "default.units"
)


class UnitCostTable(Mapping):
    """
    A read-only mapping from operation kind to microseconds.

    Raises
    ------
    ValueError
        On unknown kinds or negative costs.

    """

    def __init__(self, costs):
        costs = {kind: float(value) for kind, value in dict(costs).items()}
        for kind, value in costs.items():
            if kind not in OP_KINDS:
                raise ValueError(f"Unknown operation kind {kind}.")
            if value < 0:
                raise ValueError(f"Negative unit cost for {kind}.")
        self._costs = costs

    def __getitem__(self, kind):
        return self._costs[kind]

    def __iter__(self):
        return iter(self._costs)

    def __len__(self):
        return len(self._costs)

    def scaled(self, factor):
        return UnitCostTable({kind: factor * value for kind, value in self._costs.items()})

    def to_text(self):
        lines = ["# Unit costs in microseconds per operation."]
        lines += [f"{kind} = {self._costs[kind]:.6g}" for kind in OP_KINDS if kind in self._costs]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"UnitCostTable({self._costs!r})"


def parse_units(text, path=None):
    """
    Raises
    ------
    FixtureParseError
        With the line and column of the malformed entry.

    """
    costs = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        column = len(content) - len(content.lstrip()) + 1
        kind, sep, value = content.partition("=")
        kind = kind.strip()
        if not sep:
            raise FixtureParseError("Expected 'kind = microseconds'", path, number, column)
        if kind not in OP_KINDS:
            raise FixtureParseError(f"Unknown operation kind {kind!r}", path, number, column)
        if kind in costs:
            raise FixtureParseError(f"Duplicate entry for {kind}", path, number, column)
        try:
            costs[kind] = float(value)
        except ValueError:
            start = content.index("=") + 1 + len(value) - len(value.lstrip())
            raise FixtureParseError(
                f"Not a number: {value.strip()!r}", path, number, start + 1
            ) from None
        if costs[kind] < 0:
            raise FixtureParseError(f"Negative unit cost for {kind}", path, number, column)
    return UnitCostTable(costs)


def load_units(path=None):
    """Read a unit-cost file (the packaged defaults when path is None)."""
    path = path or DEFAULT_UNITS_PATH
    with open(path) as f:
        return parse_units(f.read(), path)
