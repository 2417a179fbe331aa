"""Exception hierarchy shared across the package."""


class InvbellError(Exception):
    """Base class for all domain errors raised by this package."""


class IndexClash(InvbellError):
    """Control and target of a controlled gate refer to the same qubit."""


class DimensionMismatch(InvbellError):
    """Operator and operand dimensions are incompatible."""


class BadWeights(InvbellError):
    """Mixture weights are negative, empty, or do not sum to one."""


class EmptyKeep(InvbellError):
    """Partial trace asked to keep no qubits at all."""


class ZeroConditioning(InvbellError):
    """Conditioning event has probability zero; no conditional is defined."""


class MissingSupport(InvbellError):
    """An analysis requires positive probability on every (q1, q2) pair."""
