"""Exception hierarchy for qincompat.

Every error raised on bad input or an unsupported regime derives from
:class:`QincompatError`, so callers (and the CLI) can catch one base class
and report the concrete error name.
"""


class QincompatError(Exception):
    """Base class for all qincompat errors."""


class DomainError(QincompatError):
    """Input lies outside the operation's declared domain."""


class InvalidDimension(QincompatError):
    """Requested Hilbert-space dimension is not supported."""


class RankDeficient(QincompatError):
    """Density matrix has an eigenvalue at or below the rank tolerance."""


class DegenerateChart(QincompatError):
    """Parameter chart is singular at the requested point."""


class NumericalOverflow(QincompatError):
    """Intermediate quantity exceeds floating-point range."""


class SingularQfim(QincompatError):
    """Quantum Fisher information matrix is singular."""


class InvalidReparametrization(QincompatError):
    """Reparametrization matrix is not invertible."""


class InvalidPOVM(QincompatError):
    """Measurement probabilities are negative or malformed."""


class PureStateSingular(QincompatError):
    """Gaussian information formulas diverge for a pure state."""


class TruncationError(QincompatError):
    """Fock-space cutoff is too small for the requested state."""
