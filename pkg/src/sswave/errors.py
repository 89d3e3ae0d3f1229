"""Exception hierarchy shared across the package.

Validation problems (bad user input, malformed config) raise
:class:`ValidationError`; anything that goes wrong *during* a computation
(divergent series, failed integration, fit refusal) derives from
:class:`NumericalError` so callers can map the two families onto distinct
exit codes.
"""


class ValidationError(ValueError):
    """Invalid parameters or configuration, detected before computing."""


class NumericalError(RuntimeError):
    """A computation failed or refused to produce a trustworthy result."""


class ConvergenceError(NumericalError):
    """An iterative computation exceeded its term or restart budget."""


class IntegrationError(NumericalError):
    """An ODE or PDE integration failed, with the failure location."""


class SeamMismatchError(NumericalError):
    """Two representations of the same function disagree at their seam."""


class FitError(NumericalError):
    """A least-squares fit refused its input (gate violated)."""
