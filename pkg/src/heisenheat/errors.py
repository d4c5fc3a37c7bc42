"""Exception types shared across the package.

The CLI maps ConfigurationError to exit code 2 and NumericalFailureError
to exit code 3; everything else is a bug.
"""


class ConfigurationError(ValueError):
    """Invalid configuration or arguments, detected before any heavy compute."""


class NumericalFailureError(RuntimeError):
    """A numerical contract was violated (non-convergent quadrature, broken
    invariant, unresolvable discretization)."""


class PoisonedFieldError(ValueError):
    """A grid field contains NaN/inf; downstream operations must reject it."""


class BudgetInfeasibleError(RuntimeError):
    """The global-construction budget integral diverges for these (p, gamma, q);
    a legitimate outcome in the subcritical regime, not a numerical failure."""


class InconclusiveError(RuntimeError):
    """A diagnostic guard tripped (box truncation, degenerate fit); the
    measurement is reported as inconclusive rather than trusted."""
