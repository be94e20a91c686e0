"""Exception types raised across the package."""


class GrowthTightError(Exception):
    """Base class for all package errors."""


class CompletionExceededCap(GrowthTightError):
    pass


class NoGeodesic(GrowthTightError):
    pass


class SampleSizeZero(GrowthTightError):
    pass


class PathTooLong(GrowthTightError):
    pass


class MemoryBudgetExceeded(GrowthTightError):
    def __init__(self, completed_radius: int, budget: int):
        super().__init__(
            f"element budget {budget} exceeded; largest completed radius is {completed_radius}"
        )
        self.completed_radius = completed_radius
        self.budget = budget


class WindowTooSmall(GrowthTightError):
    pass


class SeriesDiverged(GrowthTightError):
    pass


class CoverageGapAtBoundary(GrowthTightError):
    pass


class HypothesisUnmet(GrowthTightError):
    pass


class NotHyperbolic(GrowthTightError):
    pass


class KappaTooSmall(GrowthTightError):
    pass


class SearchExhausted(GrowthTightError):
    pass


class BlockNotInNet(GrowthTightError):
    pass


class UnsupportedModel(GrowthTightError):
    """Raised when a group cannot be given certified normal forms."""
