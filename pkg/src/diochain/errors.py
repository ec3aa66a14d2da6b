"""Exception types shared across the library."""


class DiochainError(Exception):
    """Base class for all library-specific failures."""


class PrecisionExhausted(DiochainError):
    """Interval refinement hit the precision cap without deciding.

    In practice this means an input assertion (irrationality, linear
    independence) is probably false: the theory guarantees that honestly
    distinct values separate at some finite precision.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class UnknownName(DiochainError, ValueError):
    """Unrecognised builtin constant name."""


class InconsistentInput(DiochainError, ValueError):
    """An input violated a precondition in a detectable way."""


class ZeroDenominator(DiochainError, ZeroDivisionError):
    """Projective action or quotient with vanishing denominator."""


class ZeroBetaEll(DiochainError, ZeroDivisionError):
    """G_m norm requested with beta_ell = 0."""


class DimensionTooLarge(DiochainError, ValueError):
    """Lattice enumeration refused: dimension above the desk-scale cap."""


class BoundViolated(DiochainError):
    """A quantity that is a theorem-backed bound failed its check.

    Signals an implementation bug, never a property of the input.
    """


class BoundExceeded(DiochainError):
    """No admissible Dirichlet certificate in the scanned policy range.

    Carries the best near-miss so callers can inspect how close the scan
    came to the required sup-norm bound.
    """

    def __init__(self, message, near_miss=None):
        super().__init__(message)
        self.near_miss = near_miss


class DegenerateScalar(DiochainError):
    """All eliminants vanished during minimal-polynomial recovery."""


class NoRepetition(DiochainError):
    """No exact tuple repetition found in the supplied chain range."""
