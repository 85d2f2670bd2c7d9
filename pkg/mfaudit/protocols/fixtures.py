"""
Protocol descriptions (`.proto` files).

A description starts with header entries

    protocol: P2
    domain: Generic IoT
    factors-label: PW + SC + BD
    declared-adversary: WA           (WA or SA)
    fidelity: executable             (executable or metadata, optional)
    group: 2305843009213693951       (modulus, optional)

followed by sections, one entry per line:

    options:     key = value
    roles:       name
    factors:     ID category @holder,... storage [holds=a,b] [derived-from=X]
                 [protects=Y]
    env:         NAME kind [length] [@owner,...] [identity] [scalar]
                 [per-session] [value=v] [noisy-of=R] [puf=c] [gen-of=R]
    equations:   name := term         (shared definition)
                 name@role := term    (how one role computes name)
    variants:    variant: name := term
    messages:    sender -> receiver : A, B [opaque]
    checks:      role after k : verify NAME
                 role after k : TERM == TERM
                 role after k : fresh NAME
                 role after k : TERM => A[:length], B
    sk:          NAME
    sk-depends:  A, B, ...
    asserted:    C1 pass "citation"

Descriptions are looked up, in order, in the directory given on the command
line, the directory named by MFAUDIT_FIXTURES, and the descriptions shipped
with the package.

"""

import logging
import os
import re

from ..errors import FixtureParseError, TermSyntaxError, UnknownProtocolError
from ..primitives.group import ModGroup
from ..primitives.suite import DEFAULT_MODULUS
from ..terms import Atom, TermParser
from ..utils import read_sections
from .model import (
    ATOM_KINDS,
    EQUAL,
    EXECUTABLE,
    FACTOR_CATEGORIES,
    FLAGS,
    FRESH,
    METADATA,
    STORAGE_KINDS,
    STRONG_ADVERSARY,
    UNPACK,
    VERIFY,
    WEAK_ADVERSARY,
    AssertedCell,
    AtomSpec,
    Check,
    FactorDescriptor,
    Message,
    ProtocolModel,
)

logger = logging.getLogger(__name__)

HEADER_KEYS = (
    "protocol",
    "domain",
    "factors-label",
    "declared-adversary",
    "fidelity",
    "group",
)
SECTIONS = (
    "options",
    "roles",
    "factors",
    "env",
    "equations",
    "variants",
    "messages",
    "checks",
    "sk",
    "sk-depends",
    "asserted",
)
ATOM_OPTIONS = ("value", "noisy-of", "puf", "gen-of")
CRITERIA = tuple(f"C{i}" for i in range(1, 9))

# Environment variable naming a directory of descriptions.
FIXTURES_ENV = "MFAUDIT_FIXTURES"
PACKAGED_FIXTURES = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), "data", "protocols"
)
EXTENSION = ".proto"

_MESSAGE = re.compile(r"^(\w+)\s*->\s*(\w+)\s*:\s*(.*?)\s*(\[(plain|opaque)\])?$")
_CHECK = re.compile(r"^(\w+)\s+after\s+(\d+)\s*:\s*(.+)$")
_ASSERTED = re.compile(r'^(C[1-8])\s+(pass|fail)\s+"(.+)"$')


def _names(text):
    return tuple(n.strip() for n in text.split(",") if n.strip())


class _DescriptionReader:
    """State shared while reading one description."""

    def __init__(self, text, path):
        self.path = path
        self.header, self.lines = read_sections(text, SECTIONS, HEADER_KEYS, path)
        self.modulus = DEFAULT_MODULUS
        if "group" in self.header:
            value, number = self.header["group"]
            if not value.isdigit():
                raise FixtureParseError("group expects a prime modulus", path, number)
            self.modulus = int(value)
        self.symbols = {}
        self.parser = TermParser(self.symbols, strict=True, modulus=self.modulus)

    def section(self, name):
        return [line for line in self.lines if line.section == name]

    def required(self, key):
        if key not in self.header:
            raise FixtureParseError(f"Missing header entry {key}", self.path)
        return self.header[key][0]

    def term(self, line, text):
        """Parse a term written somewhere on a line."""
        offset = line.text.find(text)
        try:
            return self.parser.parse(text)
        except TermSyntaxError as err:
            column = (err.column or 1) - 1
            raise line.error(err.message, self.path, max(offset, 0) + column) from err

    # Sections.

    def roles(self):
        roles = []
        for line in self.section("roles"):
            for name in _names(line.text.replace(" ", ",")):
                if name in roles:
                    raise line.error(f"Duplicate role {name}", self.path)
                roles.append(name)
        if not roles:
            raise FixtureParseError("A protocol needs at least one role", self.path)
        return tuple(roles)

    def holders(self, line, token, roles):
        names = _names(token[1:])
        for name in names:
            if name not in roles:
                raise line.error(f"Unknown role {name}", self.path)
        return names

    def factors(self, roles):
        factors = []
        for line in self.section("factors"):
            fields = line.text.split()
            if len(fields) < 4:
                raise line.error("Expected 'ID category @holders storage ...'", self.path)
            factor_id, category, holders, storage = fields[:4]
            if category not in FACTOR_CATEGORIES:
                raise line.error(f"Unknown factor category {category}", self.path)
            if not holders.startswith("@"):
                raise line.error("Factor holders are written @role,role", self.path)
            if storage not in STORAGE_KINDS:
                raise line.error(f"Unknown storage {storage}", self.path)
            settings = {"holds": (), "derived-from": (), "protects": ()}
            for extra in fields[4:]:
                key, sep, value = extra.partition("=")
                if not sep or key not in settings:
                    raise line.error(f"Unexpected {extra!r}", self.path)
                settings[key] = _names(value)
            factors.append(
                FactorDescriptor(
                    id=factor_id,
                    category=category,
                    holders=self.holders(line, holders, roles),
                    storage=storage,
                    holds=settings["holds"],
                    derived_from=settings["derived-from"],
                    protects=settings["protects"],
                )
            )
        ids = [f.id for f in factors]
        for factor in factors:
            for other in factor.derived_from + factor.protects:
                if other not in ids:
                    raise FixtureParseError(
                        f"Factor {factor.id} refers to unknown factor {other}", self.path
                    )
        return tuple(factors)

    def atoms(self, roles):
        atoms = {}
        for line in self.section("env"):
            fields = line.text.split()
            if len(fields) < 2 or fields[1] not in ATOM_KINDS:
                raise line.error("Expected 'NAME kind ...'", self.path)
            name, kind = fields[:2]
            if name in atoms:
                raise line.error(f"Duplicate atom {name}", self.path)
            owners, length, flags, options = (), None, set(), {}
            for extra in fields[2:]:
                if extra.startswith("@"):
                    owners = self.holders(line, extra, roles)
                elif extra.isdigit():
                    length = int(extra)
                elif extra in FLAGS:
                    flags.add(extra)
                elif extra.partition("=")[0] in ATOM_OPTIONS and "=" in extra:
                    key, _, value = extra.partition("=")
                    options[key] = value
                else:
                    raise line.error(f"Unexpected {extra!r}", self.path)
            spec = AtomSpec(name, kind, owners, length, frozenset(flags), options)
            atoms[name] = spec
            # Scalars are group elements whatever the suite.
            size = (length or ModGroup(self.modulus).element_length) if spec.is_scalar else length
            self.symbols[name] = Atom(name, spec.symbolic_kind, size)
        for spec in atoms.values():
            for key in ("noisy-of", "gen-of"):
                target = spec.options.get(key)
                if target is not None and target not in atoms:
                    raise FixtureParseError(
                        f"Atom {spec.name} refers to unknown atom {target}", self.path
                    )
        return atoms

    def declare_defined(self):
        """Names defined by an equation are secret atoms unless declared."""
        for line in self.section("equations") + self.section("variants"):
            text = line.text.split(":", 1)[1] if line.section == "variants" else line.text
            name = text.partition(":=")[0].strip().partition("@")[0]
            if name and name not in self.symbols:
                self.symbols[name] = Atom(name)

    def equation(self, line, text, roles):
        lhs, sep, rhs = text.partition(":=")
        if not sep or not lhs.strip() or not rhs.strip():
            raise line.error("Expected 'name := term'", self.path)
        name, _, role = lhs.strip().partition("@")
        if role and role not in roles:
            raise line.error(f"Unknown role {role}", self.path)
        return name, role or None, self.term(line, rhs.strip())

    def equations(self, roles):
        shared, per_role = {}, {}
        for line in self.section("equations"):
            name, role, term = self.equation(line, line.text, roles)
            table, key = (per_role, (name, role)) if role else (shared, name)
            if key in table:
                raise line.error(f"{lhs_text(name, role)} is defined twice", self.path)
            table[key] = term
        return shared, per_role

    def variants(self, roles):
        variants = {}
        for line in self.section("variants"):
            variant, sep, rest = line.text.partition(":")
            if not sep or ":=" not in rest:
                raise line.error("Expected 'variant: name := term'", self.path)
            name, role, term = self.equation(line, rest, roles)
            if role:
                raise line.error("Variants redefine shared equations only", self.path)
            variants.setdefault(variant.strip(), {})[name] = term
        return variants

    def messages(self, roles):
        messages = []
        for line in self.section("messages"):
            match = _MESSAGE.match(line.text)
            if match is None:
                raise line.error("Expected 'sender -> receiver : A, B'", self.path)
            sender, receiver, payload, _, mode = match.groups()
            for role in (sender, receiver):
                if role not in roles:
                    raise line.error(f"Unknown role {role}", self.path)
            names = _names(payload)
            for name in names:
                if name not in self.symbols:
                    raise line.error(f"Undeclared name {name}", self.path)
            messages.append(
                Message(len(messages) + 1, sender, receiver, names, mode != "opaque")
            )
        return tuple(messages)

    def checks(self, roles, n_messages):
        checks = []
        for line in self.section("checks"):
            match = _CHECK.match(line.text)
            if match is None:
                raise line.error("Expected 'role after k : check'", self.path)
            role, after, body = match.groups()
            after = int(after)
            if role not in roles:
                raise line.error(f"Unknown role {role}", self.path)
            if not 1 <= after <= n_messages:
                raise line.error(f"There is no message {after}", self.path)
            words = body.split()
            if words[0] in (VERIFY, FRESH) and len(words) == 2:
                if words[1] not in self.symbols:
                    raise line.error(f"Undeclared name {words[1]}", self.path)
                check = Check(role, after, words[0], name=words[1], text=body)
            elif "==" in body:
                left, _, right = body.partition("==")
                check = Check(
                    role,
                    after,
                    EQUAL,
                    left=self.term(line, left.strip()),
                    right=self.term(line, right.strip()),
                    text=body,
                )
            elif "=>" in body:
                source, _, targets = body.partition("=>")
                targets, lengths = self.unpack_targets(line, targets)
                check = Check(
                    role,
                    after,
                    UNPACK,
                    left=self.term(line, source.strip()),
                    targets=targets,
                    lengths=lengths,
                    text=body,
                )
            else:
                raise line.error(f"Unknown check {body!r}", self.path)
            checks.append(check)
        return tuple(checks)

    def unpack_targets(self, line, text):
        """Names (with optional `:length`) bound by an unpack check."""
        names, lengths = [], []
        for target in _names(text):
            name, _, length = target.partition(":")
            if length and not length.isdigit():
                raise line.error(f"Bad length in {target!r}", self.path)
            self.symbols.setdefault(name, Atom(name))
            names.append(name)
            lengths.append(int(length) if length else None)
        return tuple(names), tuple(lengths)

    def single(self, section):
        lines = self.section(section)
        if len(lines) > 1:
            raise lines[1].error(f"Section {section} takes one entry", self.path)
        return lines[0] if lines else None

    def asserted(self):
        cells = []
        for line in self.section("asserted"):
            match = _ASSERTED.match(line.text)
            if match is None:
                raise line.error('Expected \'C<k> pass|fail "citation"\'', self.path)
            criterion, verdict, citation = match.groups()
            cells.append(AssertedCell(criterion, verdict == "pass", citation))
        return tuple(cells)

    def options(self):
        options = {}
        for line in self.section("options"):
            key, sep, value = line.text.partition("=")
            if not sep or not key.strip():
                raise line.error("Expected 'key = value'", self.path)
            options[key.strip()] = value.strip()
        return options


def lhs_text(name, role):
    return f"{name}@{role}" if role else name


def parse_protocol(text, path=None):
    """
    Parse a protocol description.

    Returns
    -------
    ProtocolModel

    Raises
    ------
    FixtureParseError
        With the line (and column, for terms) of the problem.

    """
    reader = _DescriptionReader(text, path)
    fidelity = reader.header.get("fidelity", (EXECUTABLE, None))[0]
    if fidelity not in (EXECUTABLE, METADATA):
        raise FixtureParseError(f"Unknown fidelity {fidelity}", path)
    adversary = reader.required("declared-adversary")
    if adversary not in (WEAK_ADVERSARY, STRONG_ADVERSARY):
        raise FixtureParseError(f"Unknown adversary class {adversary}", path)
    roles = reader.roles()
    factors = reader.factors(roles)
    atoms = reader.atoms(roles)
    reader.declare_defined()
    equations, role_equations = reader.equations(roles)
    variants = reader.variants(roles)
    messages = reader.messages(roles)
    checks = reader.checks(roles, len(messages))
    for factor in factors:
        for name in factor.holds:
            if name not in reader.symbols:
                raise FixtureParseError(
                    f"Factor {factor.id} holds undeclared {name}", path
                )
    sk_line = reader.single("sk")
    sk = sk_line.text.strip() if sk_line else None
    if sk is not None and sk not in reader.symbols:
        raise sk_line.error(f"Undeclared session key {sk}", path)
    depends = reader.single("sk-depends")
    if fidelity == EXECUTABLE and sk is None:
        raise FixtureParseError("Executable descriptions name their session key", path)
    model = ProtocolModel(
        id=reader.required("protocol"),
        domain=reader.required("domain"),
        factors_label=reader.required("factors-label"),
        declared_adversary=adversary,
        fidelity=fidelity,
        roles=roles,
        factors=factors,
        atoms=atoms,
        symbols=reader.symbols,
        equations=equations,
        role_equations=role_equations,
        messages=messages,
        checks=checks,
        sk=sk,
        sk_depends=_names(depends.text) if depends else (),
        asserted=reader.asserted(),
        options=reader.options(),
        variants=variants,
        modulus=reader.modulus,
        path=path,
    )
    logger.debug("Parsed %r from %s.", model, path or "text")
    return model


def load_protocol(path):
    """Read and parse a protocol description file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_protocol(f.read(), path)


def fixture_directory(override=None):
    """The directory descriptions are read from."""
    if override:
        return override
    return os.environ.get(FIXTURES_ENV) or PACKAGED_FIXTURES


def list_protocols(directory=None):
    """Ids of the available descriptions, in file-name order."""
    directory = fixture_directory(directory)
    return sorted(
        name[: -len(EXTENSION)]
        for name in os.listdir(directory)
        if name.endswith(EXTENSION)
    )


def get_protocol(protocol_id, directory=None):
    """
    Load the description of a protocol by id.

    Raises
    ------
    UnknownProtocolError
        If the directory has no description with this id.

    """
    path = os.path.join(fixture_directory(directory), protocol_id + EXTENSION)
    if not os.path.isfile(path):
        raise UnknownProtocolError(f"No protocol named {protocol_id}.")
    model = load_protocol(path)
    if model.id != protocol_id:
        raise FixtureParseError(f"File describes {model.id}, not {protocol_id}", path)
    return model
