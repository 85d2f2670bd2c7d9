from .model import (
    FACTOR_CATEGORIES,
    EXECUTABLE,
    METADATA,
    WEAK_ADVERSARY,
    STRONG_ADVERSARY,
    FactorDescriptor,
    AtomSpec,
    Message,
    Check,
    AssertedCell,
    ProtocolModel,
)
from .fixtures import (
    parse_protocol,
    load_protocol,
    get_protocol,
    list_protocols,
    fixture_directory,
)
from .deployment import DeploymentState, register
from .session import Channel, RoleView, WireMessage, Transcript, run_session
from .symbolic import (
    as_symbolic,
    concrete_values,
    opaque_atom,
    wire_terms,
    public_terms,
)
