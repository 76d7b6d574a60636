"""Exception hierarchy shared across the package."""


class SatcurvError(Exception):
    """Base class for all domain errors; CLI maps these to exit code 1."""


class MissingHeader(SatcurvError):
    pass


class ClauseCountMismatch(SatcurvError):
    pass


class VarOutOfRange(SatcurvError):
    pass


class EmptyClause(SatcurvError):
    pass


class InvalidSpec(SatcurvError):
    pass


class NotAnEdge(SatcurvError):
    pass


class EmptyGraph(SatcurvError):
    pass


class BipartitenessViolated(SatcurvError):
    pass


class IncompleteAssignment(SatcurvError):
    pass


class DegenerateVariance(SatcurvError):
    pass


class DimensionMismatch(SatcurvError):
    pass


class TimeBudgetExceeded(SatcurvError):
    pass
