"""
Helpers shared by the file formats and reports.

"""

import json
import re
from dataclasses import dataclass

from .errors import FixtureParseError

_SECTION = re.compile(r"^([A-Za-z][\w-]*):\s*$")
_HEADER = re.compile(r"^([A-Za-z][\w-]*):\s+(\S.*?)\s*$")


@dataclass(frozen=True)
class Line:
    """A content line of a sectioned file."""

    section: str
    number: int
    text: str
    column: int

    def error(self, message, path=None, offset=0):
        """A FixtureParseError pointing at this line (offset is 0-based)."""
        return FixtureParseError(message, path, self.number, self.column + offset)


def read_sections(text, sections, header_keys=(), path=None):
    """
    Split a line-oriented file into header entries and section lines.

    `#` starts a comment. A line `name:` opens a section; a line
    `key: value` at the top level is a header entry if key is in
    header_keys.

    Parameters
    ----------
    text: str
    sections: iterable of str
        Allowed section names.
    header_keys: iterable of str
        Allowed header keys.
    path: str, optional
        Used in error messages.

    Returns
    -------
    (dict key -> (value, line number), list of Line)

    """
    sections, header_keys = set(sections), set(header_keys)
    header, lines = {}, []
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        column = len(content) - len(content.lstrip()) + 1
        stripped = content.strip()
        match = _SECTION.match(stripped)
        if match and column == 1:
            if match.group(1) not in sections:
                raise FixtureParseError(
                    f"Unknown section {match.group(1)}", path, number, column
                )
            current = match.group(1)
            continue
        match = _HEADER.match(stripped)
        if match and column == 1 and match.group(1) in header_keys:
            if match.group(1) in header:
                raise FixtureParseError(
                    f"Duplicate key {match.group(1)}", path, number, column
                )
            header[match.group(1)] = (match.group(2), number)
            current = None
            continue
        if current is None:
            raise FixtureParseError("Line outside of any section", path, number, column)
        lines.append(Line(current, number, stripped, column))
    return header, lines


def dump_json(data):
    """Deterministic JSON text: sorted keys, fixed indentation."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
