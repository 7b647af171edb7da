"""Exception types shared across the package.

The split matters for the command line tool: ``UsageError`` maps to exit
code 1, anything derived from ``PhysicsDomainError`` maps to exit code 2.
Library callers can catch ``KGCoulombError`` to get everything at once.
"""


class KGCoulombError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(KGCoulombError):
    """Bad arguments or argument combinations (CLI exit code 1)."""


class PhysicsDomainError(KGCoulombError):
    """Valid-looking input that lands outside the physical domain (CLI exit code 2)."""


class SupercriticalCouplingError(PhysicsDomainError):
    """Coupling Z*alpha exceeds 1/2, where the bound-state formulas turn complex."""


class ParameterPoleError(PhysicsDomainError):
    """Parameters sit exactly on a pole of a mapping (e.g. theta + theta' = 1)."""


class OutOfDomainError(PhysicsDomainError):
    """Evaluation point outside the validated domain of a series or grid."""


class OscillationError(PhysicsDomainError):
    """A power-law fit was requested on data that oscillates in sign."""


class ResonantExponentsError(KGCoulombError):
    """Frobenius exponents differ by a nonnegative integer; the requested
    series would hit a vanishing pivot in the recurrence."""


class IrregularPointError(KGCoulombError):
    """A series expansion was requested at an irregular singular point."""


class ConvergenceError(KGCoulombError):
    """An iterative computation hit its term or iteration cap without settling."""


class IntegrationError(KGCoulombError):
    """The ODE integrator reported failure."""


class RootFindingError(KGCoulombError):
    """Root refinement failed or a bracket could not be established."""
