from typing import Optional


class BeamHopError(Exception):
    """Base class for all simulator errors"""


class ConfigurationError(BeamHopError, ValueError):
    """Invalid, missing or unknown experiment configuration"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class DomainError(BeamHopError, ValueError):
    """Argument outside the mathematical domain of a link/geometry function"""


class StateError(BeamHopError, RuntimeError):
    """Simulation state is missing something an operation needs"""


class InvariantViolation(BeamHopError, RuntimeError):
    """A simulation invariant was broken; `invariant` names which one"""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"invariant '{invariant}' violated: {detail}")


class OutputError(BeamHopError, OSError):
    """Result emission failed for a given path"""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot write {path}: {reason}")
