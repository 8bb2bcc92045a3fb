"""Exception types shared across the toolkit."""


class CarlabError(Exception):
    """Base class for all toolkit errors."""


class ExclusionZoneError(CarlabError, ValueError):
    """A field has non-vanishing samples inside its declared exclusion disk."""


class DegenerateDenominatorError(CarlabError, ValueError):
    """A ratio denominator vanished; usually a sampling or support bug."""


class UnresolvedBandError(CarlabError, ValueError):
    """A dyadic band does not fit the grid's usable frequency range."""


class AnnulusLeakageError(CarlabError, ValueError):
    """Input field carries frequency energy outside the covered annulus."""

    def __init__(self, leakage: float, message: str = ""):
        self.leakage = leakage
        super().__init__(message or f"out-of-annulus energy fraction {leakage:.3e}")


class ContractionRefusal(CarlabError, RuntimeError):
    """Fixed-point iteration refused: estimated operator norm too large."""

    def __init__(self, estimate: float, limit: float):
        self.estimate = estimate
        self.limit = limit
        super().__init__(
            f"composite operator norm estimate {estimate:.3f} exceeds the "
            f"contraction limit {limit:.3f}; iteration would likely diverge"
        )


class ConvergenceError(CarlabError, RuntimeError):
    """Iteration hit its step limit before reaching the requested tolerance."""
