"""Exception types shared across the package."""


class DrinfeldLValuesError(Exception):
    """Base class for all package errors."""


class NotAUnit(DrinfeldLValuesError):
    """Element is not invertible in its ring."""


class WildInertia(DrinfeldLValuesError):
    """Operation undefined because p divides the inertia order."""


class PrecisionLoss(DrinfeldLValuesError):
    """Requested result cannot be certified at the available precision."""


class PrecisionInsufficient(PrecisionLoss):
    """A certificate needs more t^-1-adic precision than supplied."""


class DegreeMismatch(DrinfeldLValuesError):
    """Polynomial degrees violate an operation's precondition."""


class NontrivialGroup(DrinfeldLValuesError):
    """Operation only defined for the trivial Galois group."""


class TailNotCertified(DrinfeldLValuesError):
    """Decay of exponential coefficients could not be certified."""


class NormalBasisSearchFailed(DrinfeldLValuesError):
    """Seeded search for a normal basis generator hit its attempt bound."""


class SearchExhausted(DrinfeldLValuesError):
    """Seeded search for a taming generator hit its attempt bound."""


class UnsupportedConductor(DrinfeldLValuesError):
    """Cyclotomic constructor cannot build this conductor; carries the obstruction."""


class DiscretenessViolated(DrinfeldLValuesError):
    """A lattice vector was found inside the stated discreteness ball."""


class NoCommonNucleus(DrinfeldLValuesError):
    """No common nucleus found within the built chain; increase i_max."""


class NotStabilized(DrinfeldLValuesError):
    """Class-module computation did not stabilize at the given depth."""


class SpanMismatch(DrinfeldLValuesError):
    """Lattices do not span a common F_q(t)-space."""


class NotAdmissible(DrinfeldLValuesError):
    """Candidate lattice fails the admissibility certificate."""


class ConvergenceDomainExceeded(DrinfeldLValuesError):
    """Series argument is outside the certified convergence domain."""


class FixtureError(DrinfeldLValuesError):
    """Fixture file is malformed; message carries line/field diagnostics."""
