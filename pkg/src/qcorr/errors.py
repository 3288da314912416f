"""Exception types shared across the package."""


class QCorrError(Exception):
    """Base class for all package-specific errors."""


class NotHermitianError(QCorrError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class NegativeEigenvalueError(QCorrError):
    """A matrix expected to be positive semidefinite has a clearly negative eigenvalue."""


class EntropyDomainError(QCorrError):
    """Argument of an entropy function lies outside its domain."""


class InvalidStateError(QCorrError):
    """A density matrix violates a state invariant (hermiticity, trace or positivity)."""


class InvalidProbabilitiesError(QCorrError):
    """A probability vector has negative entries or does not sum to one."""


class OutOfTetrahedronError(QCorrError):
    """Bloch coefficients fall outside the Bell-diagonal state tetrahedron."""


class BracketInvalidError(QCorrError):
    """An event-refinement bracket does not actually bracket the event."""


class SingularDesignError(QCorrError):
    """A tomography projector set does not span the full operator space."""
