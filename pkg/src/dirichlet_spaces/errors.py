"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class onto a distinct exit code, so library code should
raise the most specific one that applies.
"""


class DirichletSpacesError(Exception):
    """Base class for every error raised on purpose by this package."""


class PreconditionError(DirichletSpacesError, ValueError):
    """An input violates the documented domain of an operation."""


class ToleranceError(DirichletSpacesError, ArithmeticError):
    """A requested accuracy could not be certified.

    ``achieved`` carries the best error bound obtained before giving up, when
    one is available.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SaturationError(DirichletSpacesError, ArithmeticError):
    """A truncation-saturation diagnostic failed (grid too close to 1/2)."""

    def __init__(self, message, slope=None, refit_slope=None):
        super().__init__(message)
        self.slope = slope
        self.refit_slope = refit_slope
