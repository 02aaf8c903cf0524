"""Exception types shared across the package."""


class AffequilError(Exception):
    """Base class for all library errors."""


class NonFiniteError(AffequilError):
    """An input or an accumulated product contains NaN/Inf entries, or a
    product left the representable floating-point range."""


class ConvergenceFailureError(AffequilError):
    """The eigenvalue iteration did not converge."""


class BadRankError(AffequilError):
    """Wedge order k outside 1..d."""


class SingularMatrixError(AffequilError):
    """Matrix fails the relative determinant test for invertibility."""


class OutOfRangeSError(AffequilError):
    """Exponent s outside the range the requested construction supports."""


class EnumerationBudgetError(AffequilError):
    """A word enumeration would exceed the configured budget."""


class NotContractingError(AffequilError):
    """Operation requires max_i ||A_i|| < 1."""


class NotAWitnessError(AffequilError):
    """The supplied word does not separate the top eigenvalue ratios."""


class BracketError(AffequilError):
    """Bisection endpoints do not bracket a sign change."""


class HypothesisViolationError(AffequilError):
    """Construction parameters violate one of the stated inequalities."""


class ConfigError(AffequilError):
    """Configuration file is malformed; message names the offending field."""
