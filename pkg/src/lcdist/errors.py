"""Exception types shared across the package.

Each error corresponds to one contract violation; callers can catch the
narrow class or the shared :class:`LcdistError` base.
"""


class LcdistError(Exception):
    """Base class for all package errors."""


class IndexOutOfRangeError(LcdistError, IndexError):
    """A vertex or node index is outside the addressed object."""


class SelfLoopError(LcdistError, ValueError):
    """An edge or two-qubit operation addressed a vertex pair (a, a)."""


class DuplicateEdgeError(LcdistError, ValueError):
    """The same unordered pair appeared twice in an edge list."""


class StateTooSmallError(LcdistError, ValueError):
    """A measurement would remove the last remaining qubit."""


class NotANeighborError(LcdistError, ValueError):
    """An X-measurement helper vertex is not adjacent to the target."""


class CoLocationViolationError(LcdistError, ValueError):
    """Fusion of two qubits that sit on different network nodes."""


class DisconnectedError(LcdistError, ValueError):
    """A connected graph state was required."""


class TooLargeError(LcdistError, ValueError):
    """Qubit count exceeds what the requested enumeration supports."""


class LengthMismatchError(LcdistError, ValueError):
    """A per-qubit list does not match the state's qubit count."""


class UnknownGeneratorError(LcdistError, KeyError):
    """Unrecognized single-qubit Clifford generator name."""


class WitnessInconsistentError(LcdistError, ValueError):
    """A recorded pivot sequence cannot be replayed on the given state."""


class MissingPairError(LcdistError, ValueError):
    """The pair-probability matrix lacks an entry needed by the objective."""


class InvalidParamsError(LcdistError, ValueError):
    """Invalid network-generation or noise parameters."""


class ConnectivityFailureError(LcdistError, RuntimeError):
    """Random network generation failed to produce a connected graph."""


class InvalidLengthError(LcdistError, ValueError):
    """A fiber length must be strictly positive."""


class UnreachableError(LcdistError, ValueError):
    """No path exists between the requested network nodes."""


class RecoveryVerificationFailedError(LcdistError, RuntimeError):
    """The compressed recovery circuit does not map the plan's state back."""


class MappingInvalidError(LcdistError, ValueError):
    """A qubit-to-node mapping is not injective or refers to missing nodes."""


class InvalidNError(LcdistError, ValueError):
    """Baseline cost formulas require at least two nodes."""


class ConfigError(LcdistError, ValueError):
    """Experiment configuration is malformed or contains unknown keys."""
