"""Exception types shared across the library.

The CLI maps these onto stable exit codes, so new failure modes should
subclass one of the four categories below rather than raising bare
exceptions.
"""


class DunklError(Exception):
    """Base class for all library errors."""


class ConfigError(DunklError):
    """Invalid group descriptor, multiplicities, or run configuration."""


class SeriesRegimeError(DunklError):
    """Series truncation cannot reach the requested tolerance in the
    allowed number of terms; the caller should switch to the ODE path."""


class ConditionError(DunklError):
    """An integrability or admissibility condition required by the
    asymptotic engine failed."""


class AdmissibilityError(ConditionError):
    """A curve leaves the chamber cone or has a derivative outside the
    chamber."""


class NumericError(DunklError):
    """Quadrature non-convergence, integrator step underflow, or a
    singular linear system."""
