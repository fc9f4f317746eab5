"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ConfigError -> 2,
AssumptionViolationError -> 3, BoundViolationError -> 4.
"""


class ZenoBenchError(Exception):
    """Base class for all errors raised by this package."""


class PauliParseError(ZenoBenchError):
    """A Pauli string label could not be parsed."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class DimensionError(ZenoBenchError):
    """Operands have incompatible sizes."""


class CapacityError(ZenoBenchError):
    """Requested object exceeds the configured dense-computation caps."""


class DomainError(ZenoBenchError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateMeasurementError(DomainError):
    """Measurement strength makes the closed-form bound degenerate (zeta -> 1)."""


class InvalidCodeError(ZenoBenchError):
    """Generator set does not define a valid stabilizer code."""


class RankError(InvalidCodeError):
    """Generators are dependent over GF(2)."""


class PhaseError(InvalidCodeError):
    """Generator or enumerated element carries a disallowed phase."""


class MembershipError(ZenoBenchError):
    """Operator is not an element of the code's stabilizer group."""


class ModelError(ZenoBenchError):
    """Hamiltonian or state data fails a structural validity check."""


class AssumptionViolationError(ZenoBenchError):
    """The model violates a hypothesis of the distance bound."""


class ConfigError(ZenoBenchError):
    """Experiment configuration is malformed; carries the offending field path."""

    def __init__(self, field_path, message):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


class BoundViolationError(ZenoBenchError):
    """A simulated distance exceeded its analytic bound beyond tolerance."""


class VerificationError(ZenoBenchError):
    """A property suite or dimension check failed."""
