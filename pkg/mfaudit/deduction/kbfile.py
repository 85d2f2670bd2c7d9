"""
Knowledge-base files, as read by the `deduce` command.

One entry per line, `#` starts a comment. Sections:

    atoms:        name kind [length]     (kind: public, secret or nonce)
    facts:        term
    equations:    name := term
    goal:         term

Public atoms declared under `atoms:` are known to the adversary. Names that
are not declared are secret atoms of unknown length.

"""

from ..errors import TermSyntaxError
from ..terms import ATOM_KINDS, PUBLIC, Atom, TermParser
from ..utils import read_sections
from .knowledge import ClosureLimits, KnowledgeBase

SECTIONS = ("atoms", "facts", "equations", "goal")


def _parse(parser, line, text, offset, path):
    try:
        return parser.parse(text)
    except TermSyntaxError as err:
        column = (err.column or 1) - 1
        raise line.error(err.message, path, offset + column) from err


def parse_kb(text, path=None, limits=None):
    """
    Parse a knowledge-base file.

    Returns
    -------
    (KnowledgeBase, Term)
        The knowledge base and the goal (None if the file has no goal).

    Raises
    ------
    FixtureParseError
        With the line and column of the problem.

    """
    _, lines = read_sections(text, SECTIONS, path=path)
    symbols = {}
    parser = TermParser(symbols)
    public, facts, equations, goal = [], [], {}, None
    # Declarations first, wherever they appear.
    for line in sorted(lines, key=lambda l: l.section != "atoms"):
        if line.section == "atoms":
            fields = line.text.split()
            if len(fields) not in (2, 3) or fields[1] not in ATOM_KINDS:
                raise line.error("Expected 'name kind [length]'", path)
            if len(fields) == 3 and not fields[2].isdigit():
                raise line.error("Atom lengths are byte counts", path)
            length = int(fields[2]) if len(fields) == 3 else None
            atom = Atom(fields[0], fields[1], length)
            symbols[atom.name] = atom
            if atom.kind == PUBLIC:
                public.append(atom)
        elif line.section == "facts":
            facts.append(_parse(parser, line, line.text, 0, path))
        elif line.section == "equations":
            name, sep, rhs = line.text.partition(":=")
            if not sep or not name.strip():
                raise line.error("Expected 'name := term'", path)
            offset = len(name) + 2 + (len(rhs) - len(rhs.lstrip()))
            equations[name.strip()] = _parse(parser, line, rhs.strip(), offset, path)
        else:
            if goal is not None:
                raise line.error("Only one goal is allowed", path)
            goal = _parse(parser, line, line.text, 0, path)
    try:
        kb = KnowledgeBase(facts, equations, public, limits or ClosureLimits())
    except ValueError as err:
        raise lines[-1].error(str(err), path) if lines else err
    return kb, goal


def load_kb(path, limits=None):
    """Read and parse a knowledge-base file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_kb(f.read(), path, limits)
