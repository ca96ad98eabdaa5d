"""Exception hierarchy.

Every failure raised by the library derives from :class:`HermitePadeError`.
Input-validation failures also derive from :class:`ValueError` so callers
that only know about the standard exceptions still catch them.
"""


class HermitePadeError(Exception):
    pass


class InvalidInputError(HermitePadeError, ValueError):
    pass


class SingularSeriesError(HermitePadeError, ZeroDivisionError):
    """A series operation needs a nonvanishing constant term."""


class DegenerateDeterminantError(HermitePadeError):
    """A polynomial determinant vanished to working precision."""

    def __init__(self, message, family=None):
        super().__init__(message)
        self.family = family


class RootFinderError(HermitePadeError):
    """Simultaneous iteration did not converge; ``roots`` holds the last iterate."""

    def __init__(self, message, roots=None, converged=None):
        super().__init__(message)
        self.roots = roots
        self.converged = converged


class NearPoleError(HermitePadeError):
    def __init__(self, message, modulus=None, which=None):
        super().__init__(message)
        self.modulus = modulus
        self.which = which


class AmbiguousBranchError(HermitePadeError):
    pass


class BoundaryError(HermitePadeError, ValueError):
    """Evaluation point lies on (or too close to) a cut or support."""


class SupportViolationError(HermitePadeError, ValueError):
    pass


class RefineGridError(HermitePadeError):
    pass


class InvalidPathError(HermitePadeError, ValueError):
    pass


class StepRefinementError(HermitePadeError):
    pass


class InsufficientClusterError(HermitePadeError):
    pass


class SheetUnreachableError(HermitePadeError):
    """The path ends on a sheet the chosen approximation scheme cannot reach."""

    def __init__(self, message, family=None, crossing=None, sheet=None):
        super().__init__(message)
        self.family = family
        self.crossing = crossing
        self.sheet = sheet
