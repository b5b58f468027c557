class EmptySupport(ValueError):
    """The truncation parameter leaves no lattice point in the support."""


class InfeasibleRadius(ValueError):
    """The removed ball swallows the whole ellipsoid; the alternative is empty."""


class SolverFailure(RuntimeError):
    """Root bracketing or bisection for the Lagrange parameter failed."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class GridDegenerate(ValueError):
    """An adaptive grid band has an empty index set."""


class OutsideAlternative(ValueError):
    """A signal handed to a power estimate does not belong to the alternative set."""

    def __init__(self, message, membership=None):
        super().__init__(message)
        self.membership = membership
