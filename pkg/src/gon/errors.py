"""Error taxonomy shared by every module.

Each exception carries a short machine-readable ``code`` used by the CLI to
tag report rows and pick exit codes.
"""


class GonError(Exception):
    """Base class; ``code`` is a stable lowercase tag."""

    code = "error"


class DomainError(GonError):
    """Input outside the documented domain (negative n, p not prime, ...)."""

    code = "domain"


class DegenerateError(GonError):
    """Singular basis, self-intersecting or zero-area polygon."""

    code = "degenerate-basis"


class DimensionError(GonError):
    """Dimension outside the supported 2..8 range, or operand mismatch."""

    code = "dimension"


class BudgetError(GonError):
    """A search or enumeration exceeded its configured cap."""

    code = "budget"


class PrecisionError(GonError):
    """A certified bound could not be reached at representable precision."""

    code = "precision"


class HypothesisError(GonError):
    """A theorem's hypothesis failed or could not be certified."""

    code = "hypothesis"


class UnboundedError(GonError):
    """Operation requires a bounded body."""

    code = "unbounded"


class NonConvexError(GonError):
    """Polygon input must be convex (and non-degenerate) for this operation."""

    code = "non-convex"


class NotFoundError(GonError):
    """Legitimate search exhausted without a witness (defect signal)."""

    code = "not-found"


class UnsupportedError(GonError):
    """Body class or combination outside the implemented table."""

    code = "unsupported"


class InadmissibleError(GonError):
    """Witness lattice has a nonzero point strictly inside the body."""

    code = "inadmissible"
