"""Exception types shared across the toolkit."""


class CausetError(Exception):
    """Base class for all toolkit errors."""


class CycleError(CausetError):
    """The input relation contains a directed cycle."""


class NotComparable(CausetError):
    """Interval endpoints are not comparable."""


class TooLarge(CausetError):
    """Exact computation would exceed the configured state/memory budget."""


class QTooLarge(CausetError):
    """Pattern poset too large for density estimation."""


class DimensionMismatch(CausetError):
    """Events live in different dimensions."""


class NotTimelike(CausetError):
    """Proper time requested for a non-causal pair."""


class NotSpacelike(CausetError):
    """Spacelike distance requested for a causal pair."""


class InvalidBeta(CausetError):
    """Boost velocity outside (-1, 1)."""


class DegenerateInterval(CausetError):
    """Diamond endpoints are not causally related or coincide."""


class TooFewPoints(CausetError):
    """Not enough points for the requested statistic."""


class TooManyPoints(CausetError):
    """Point set exceeds the desk-scale ceiling for exact order construction."""


class WrongDimension(CausetError):
    """Operation requires a specific spacetime dimension."""


class DegenerateWeights(CausetError):
    """Growth weight sequence has no usable mass."""


class InvalidP(CausetError):
    """Edge probability outside (0, 1)."""


class NotNaturallyLabelled(CausetError):
    """Identity is not a linear extension of the labelled poset."""


class InvalidStem(CausetError):
    """Sequence is not an ordered stem (some prefix is not a down-set)."""


class WrongD(CausetError):
    """Operation requires a specific number of linear orders."""


class NoSolution(CausetError):
    """Tuning equation has no solution in the supported parameter range."""


class UnknownCommand(CausetError):
    """CLI command name not registered."""


class SchemaError(CausetError):
    """Experiment parameters fail schema validation."""


class ReplayMismatch(CausetError):
    """Replayed statistics differ from the recorded ones."""
