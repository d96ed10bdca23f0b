"""Exception hierarchy shared by all localzeta modules.

Every failure mode of the library maps to exactly one class below; the CLI
turns them into its documented exit codes.
"""


class LocalZetaError(Exception):
    """Base class for all library errors."""


class ParseError(LocalZetaError):
    """A function-spec file or coefficient string could not be parsed."""


class FlatInput(LocalZetaError):
    """The polynomial part is identically zero, so Newton data is undefined."""


class NonCompactFace(LocalZetaError):
    """A face-restricted operation was applied to an unbounded face."""


class TruncationUnderflow(LocalZetaError):
    """A series operation needed more truncated coefficients than available."""


class PrecisionExhausted(LocalZetaError):
    """Ball arithmetic could not separate quantities at the maximal precision."""


class UnresolvedRealness(LocalZetaError):
    """A branch realness decision stayed UNRESOLVED but was required.

    ``branch`` identifies the offending branch when known.
    """

    def __init__(self, message, branch=None):
        super().__init__(message)
        self.branch = branch


class NonRealCenter(LocalZetaError):
    """A blowup center had a coordinate that is not certified real."""


class VerificationFailed(LocalZetaError):
    """An independent total-transform check found a mismatch."""


class IterationLimit(LocalZetaError):
    """An iterative search hit its round budget.

    ``last_value`` carries the best lower bound obtained so far.
    """

    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


class BudgetExceeded(LocalZetaError):
    """A numeric probe exceeded its evaluation budget."""


class SingularSample(LocalZetaError):
    """A quadrature node hit an exact zero of the integrand twice."""
