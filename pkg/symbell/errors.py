"""Exceptions raised by the symbell solvers."""


class SymbellError(Exception):
    """Base class for every error raised on purpose by symbell."""


class BudgetExceededError(SymbellError):
    """An enumeration or tensor would exceed its configured cost cap."""

    def __init__(self, what, cost, budget):
        self.what = what
        self.cost = cost
        self.budget = budget
        super().__init__("{} needs {} units of work, budget is {}".format(what, cost, budget))


class VerificationError(SymbellError):
    """A recomputed value disagrees with an expected or claimed one."""


class SingularSystemError(SymbellError, ValueError):
    """Vertices handed to facet extraction do not span a hyperplane."""


class CertificationError(SymbellError):
    """An exact local bound contradicts the facet it should certify."""
