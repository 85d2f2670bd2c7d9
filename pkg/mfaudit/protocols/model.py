"""
Protocol models: factors, atoms, equations, messages and checks.

A ProtocolModel is the parsed form of a protocol description (a `.proto`
fixture). It holds everything needed to run honest sessions (the atom
declarations and equations) and everything needed to reason about them
symbolically (the terms behind every name).

"""

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from ..primitives.group import INDEX_LENGTH, ModGroup
from ..primitives.suite import DEFAULT_SUITE
from ..terms import NONCE, PUBLIC, SECRET, Atom

# Factor categories.
KNOWLEDGE = "knowledge"
POSSESSION = "possession"
INHERENT = "inherent"
LOCATION = "location"
HISTORICAL_DATA = "historical-data"
PUF = "puf"
FIRMWARE_INTEGRITY = "firmware-integrity"
FACTOR_CATEGORIES = (
    KNOWLEDGE,
    POSSESSION,
    INHERENT,
    LOCATION,
    HISTORICAL_DATA,
    PUF,
    FIRMWARE_INTEGRITY,
)

# Where a factor is kept.
STORAGE_KINDS = ("device", "card", "server-db", "memorized")

# Kinds of atoms in protocol descriptions. Registration kinds are drawn once
# per deployment, session kinds once per session.
REGISTRATION_KINDS = ("public", "secret", "derived", "reading", "helper")
HISTORY_KINDS = ("history-index", "history-data", "history-tag")
SESSION_KINDS = ("nonce", "session", "timestamp", "counter")
ATOM_KINDS = REGISTRATION_KINDS + HISTORY_KINDS + SESSION_KINDS

# Atom flags.
IDENTITY = "identity"
SCALAR = "scalar"
PER_SESSION = "per-session"
FLAGS = (IDENTITY, SCALAR, PER_SESSION)

# Fidelity of a protocol description.
EXECUTABLE = "executable"
METADATA = "metadata"

# Adversary classes a protocol is designed against.
WEAK_ADVERSARY = "WA"
STRONG_ADVERSARY = "SA"

# Kinds of checks.
VERIFY = "verify"
EQUAL = "equal"
FRESH = "fresh"
UNPACK = "unpack"


@dataclass(frozen=True)
class FactorDescriptor:
    """
    One authentication factor of a protocol.

    Parameters
    ----------
    id: str
        Short name, as in the factors label (e.g. "PW", "SC", "TGK").
    category: str
        One of FACTOR_CATEGORIES.
    holders: tuple of str
        Roles holding the factor.
    storage: str
        One of STORAGE_KINDS.
    holds: tuple of str
        Atoms an adversary obtains by compromising the factor.
    derived_from: tuple of str
        Factors this one is computed from.
    protects: tuple of str
        Factors whose material this one stores or protects.

    """

    id: str
    category: str
    holders: Tuple[str, ...]
    storage: str
    holds: Tuple[str, ...] = ()
    derived_from: Tuple[str, ...] = ()
    protects: Tuple[str, ...] = ()

    def edges(self):
        """Dependence edges (source, target): target relies on source."""
        return [(source, self.id) for source in self.derived_from] + [
            (self.id, target) for target in self.protects
        ]


@dataclass(frozen=True)
class AtomSpec:
    """
    Declaration of a named value.

    Parameters
    ----------
    name: str
    kind: str
        One of ATOM_KINDS.
    owners: tuple of str
        Roles that store (registration kinds) or draw (session kinds) the
        value. Public atoms are known to every role.
    length: int, optional
        Length in bytes. When absent it follows from the kind and the suite.
    flags: frozenset of str
        A subset of FLAGS.
    options: dict str -> str
        `value`, `noisy-of`, `puf` and `gen-of` settings.

    """

    name: str
    kind: str
    owners: Tuple[str, ...] = ()
    length: Optional[int] = None
    flags: frozenset = frozenset()
    options: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def symbolic_kind(self):
        if self.kind == "public":
            return PUBLIC
        if self.kind in SESSION_KINDS:
            return NONCE
        return SECRET

    @property
    def is_identity(self):
        return IDENTITY in self.flags

    @property
    def is_scalar(self):
        return SCALAR in self.flags

    @property
    def is_per_session(self):
        if self.kind == "reading" and "puf" in self.options:
            return True
        return self.kind in SESSION_KINDS or PER_SESSION in self.flags

    @property
    def is_long_term(self):
        """Whether the value is stored at registration and is not public."""
        if self.kind == "public" or self.is_per_session:
            return False
        return self.kind in REGISTRATION_KINDS or self.kind in (
            "history-data",
            "history-tag",
        )

    def owned_by(self, role):
        return self.kind == "public" or role in self.owners


@dataclass(frozen=True)
class Message:
    """
    A protocol message.

    `payload` lists the names sent. Opaque messages stand for encrypted
    traffic whose body the description does not give: an eavesdropper sees
    their ciphertext but learns nothing from it.

    """

    index: int
    sender: str
    receiver: str
    payload: Tuple[str, ...]
    plain: bool = True


@dataclass(frozen=True)
class Check:
    """
    A check a role makes once it has received a message.

    Parameters
    ----------
    role: str
    after: int
        1-based index of the message after which the check runs.
    kind: str
        VERIFY (recompute `name` locally and compare it with the received
        value), EQUAL (compare two terms), FRESH (the timestamp `name` lies
        within the freshness window) or UNPACK (decrypt or evaluate `left`
        and bind its concatenated parts to `targets`, cut at `lengths`).
    name: str, optional
    left, right: Term, optional
    targets: tuple of str
    lengths: tuple of (int or None)
    text: str
        The check as written in the description.

    """

    role: str
    after: int
    kind: str
    name: Optional[str] = None
    left: Optional[object] = None
    right: Optional[object] = None
    targets: Tuple[str, ...] = ()
    lengths: Tuple[Optional[int], ...] = ()
    text: str = ""

    @property
    def authenticates(self):
        """Whether the check ties a received value to a secret."""
        return self.kind in (VERIFY, EQUAL)


@dataclass(frozen=True)
class AssertedCell:
    """An evaluation verdict taken from the protocol's own analysis."""

    criterion: str
    passed: bool
    citation: str


@dataclass
class ProtocolModel:
    """
    A protocol description.

    Parameters
    ----------
    id: str
    domain: str
    factors_label: str
        The factor combination as printed in the evaluation matrix.
    declared_adversary: str
        WEAK_ADVERSARY or STRONG_ADVERSARY.
    fidelity: str
        EXECUTABLE or METADATA.
    roles: tuple of str
    factors: tuple of FactorDescriptor
    atoms: dict name -> AtomSpec
    symbols: dict name -> Atom
        The atom behind every name (declared or defined by an equation).
    equations: dict name -> Term
        Definitions shared by every role.
    role_equations: dict (name, role) -> Term
        How a role computes a value when it differs from the definition.
    messages: tuple of Message
    checks: tuple of Check
    sk: str, optional
        Name of the session key (None for metadata-only descriptions).
    sk_depends: tuple of str
        Inputs of the session key, for metadata-only descriptions.
    asserted: tuple of AssertedCell
    options: dict str -> str
    variants: dict name -> dict name -> Term
    modulus: int
    path: str, optional

    """

    id: str
    domain: str
    factors_label: str
    declared_adversary: str
    fidelity: str
    roles: Tuple[str, ...]
    factors: Tuple[FactorDescriptor, ...]
    atoms: Dict[str, AtomSpec]
    symbols: Dict[str, Atom]
    equations: Dict[str, object]
    role_equations: Dict[Tuple[str, str], object]
    messages: Tuple[Message, ...]
    checks: Tuple[Check, ...]
    sk: Optional[str] = None
    sk_depends: Tuple[str, ...] = ()
    asserted: Tuple[AssertedCell, ...] = ()
    options: Dict[str, str] = field(default_factory=dict)
    variants: Dict[str, Dict[str, object]] = field(default_factory=dict)
    modulus: int = DEFAULT_SUITE.modulus
    path: Optional[str] = None

    @property
    def is_executable(self):
        return self.fidelity == EXECUTABLE

    @property
    def group(self):
        return ModGroup(self.modulus)

    def factor(self, factor_id):
        for factor in self.factors:
            if factor.id == factor_id:
                return factor
        raise KeyError(f"{self.id} has no factor {factor_id}.")

    def factors_of(self, role):
        """Factors held by a role, in description order."""
        return [f for f in self.factors if role in f.holders]

    def factor_edges(self):
        return [edge for f in self.factors for edge in f.edges()]

    def option(self, name, default=None, cast=str):
        value = self.options.get(name)
        return default if value is None else cast(value)

    def length_of(self, name, suite=DEFAULT_SUITE):
        """Byte length of the value bound to a name in a deployment."""
        spec = self.atoms.get(name)
        if spec is None:
            return None
        if spec.length is not None:
            return spec.length
        if spec.is_scalar or spec.kind == "history-tag":
            return self.group.element_length
        if spec.kind == "reading":
            return suite.fuzzy_bits // 8
        if spec.kind == "history-index":
            return INDEX_LENGTH
        return suite.digest_length

    def atoms_of_kind(self, *kinds):
        return [spec for spec in self.atoms.values() if spec.kind in kinds]

    def public_atoms(self):
        return self.atoms_of_kind("public")

    def long_term_atoms(self):
        """Atoms stored at registration that an adversary cannot look up."""
        return [spec for spec in self.atoms.values() if spec.is_long_term]

    def stored_atoms(self, role):
        """Long-term atoms a role keeps on its device (or database)."""
        return [spec for spec in self.long_term_atoms() if role in spec.owners]

    def identity_atoms(self):
        return [spec.name for spec in self.atoms.values() if spec.is_identity]

    def checks_after(self, index, role=None):
        return [
            c
            for c in self.checks
            if c.after == index and (role is None or c.role == role)
        ]

    def unauthenticated_roles(self):
        """Roles that never check an authenticator of their peer."""
        return [
            role
            for role in self.roles
            if not any(c.role == role and c.authenticates for c in self.checks)
        ]

    def definition(self, name, role=None):
        """The term a role uses to compute a name, or None for stored values."""
        if role is not None and (name, role) in self.role_equations:
            return self.role_equations[(name, role)]
        return self.equations.get(name)

    def variant(self, name):
        """
        A copy of this model with the equations of a named variant.

        Raises
        ------
        KeyError
            If the description has no such variant.

        """
        if name not in self.variants:
            raise KeyError(f"{self.id} has no variant {name!r}.")
        equations = dict(self.equations)
        equations.update(self.variants[name])
        return replace(self, equations=equations)

    def __repr__(self):
        return f"ProtocolModel({self.id!r}, {len(self.messages)} messages)"
