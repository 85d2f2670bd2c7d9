"""
Exceptions raised across the workbench.

Every error derives from WorkbenchError. Errors caused by bad values also
derive from ValueError, so callers that only care about invalid input may
catch that instead.

"""


class WorkbenchError(Exception):
    """Base class for all errors raised by mfaudit."""


# Primitives.


class LengthMismatchError(WorkbenchError, ValueError):
    """Byte strings that must have equal (or declared) lengths do not."""


class AuthenticationFailure(WorkbenchError):
    """Authenticated decryption rejected the key or the ciphertext."""


class DecodeFailure(WorkbenchError):
    """A fuzzy reading is too far from the enrolment reading."""


class InvalidIntervalError(WorkbenchError, ValueError):
    """A TOTP interval is not strictly positive."""


class EmptySampleError(WorkbenchError, ValueError):
    """Entropy was requested for an empty sample."""


# Terms and deduction.


class UnboundAtomError(WorkbenchError, KeyError):
    """An atom has no value in the environment (or role view)."""

    def __str__(self):
        # KeyError quotes its argument, which reads badly in messages.
        return str(self.args[0]) if self.args else "unbound atom"


class TermSyntaxError(WorkbenchError, ValueError):
    """A textual term could not be parsed."""

    def __init__(self, message, column=None):
        self.message = message
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class ClosureLimitExceeded(WorkbenchError):
    """Knowledge closure grew past the configured size limit."""


class ReplayMismatch(WorkbenchError):
    """Replaying a derivation step did not reproduce the expected bytes."""


# Protocols and adversaries.


class FixtureParseError(WorkbenchError, ValueError):
    """A protocol description or knowledge-base file is malformed."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        location = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{location}: {message}" if location else message)


class VerificationFailure(WorkbenchError):
    """A role rejected a message during a session."""


class SelectorViolation(WorkbenchError, ValueError):
    """An adversary selects every factor of a role without reading its device."""


class UnknownProtocolError(WorkbenchError, KeyError):
    """No fixture exists for the requested protocol (or attack) id."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown protocol"


class MetadataOnlyProtocol(WorkbenchError):
    """The protocol is modelled at metadata fidelity and cannot be executed."""


# Attacks, evaluation and cost.


class PrerequisiteUnmet(WorkbenchError):
    """The adversary lacks what an attack needs."""


class AttackInapplicable(WorkbenchError, ValueError):
    """The attack does not target this protocol."""


class OutOfRangeError(WorkbenchError, ValueError):
    """A split position lies outside the blob."""


class MissingHarnessResults(WorkbenchError):
    """A protocol was scored before its experiments were run."""


class MissingUnitCost(WorkbenchError, KeyError):
    """An operation with a nonzero count has no unit cost."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing unit cost"


class MissingParameter(WorkbenchError, KeyError):
    """A cost profile needs a parameter (such as z) that was not supplied."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing parameter"


class ConfigError(WorkbenchError, ValueError):
    """The workbench configuration is invalid."""


class ExperimentOrderError(WorkbenchError):
    """Long-term secrets were requested before the target session completed."""
