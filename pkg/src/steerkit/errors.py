"""Exception hierarchy.

Every error carries a short ``code`` used verbatim in CLI reports.
"""


class SteerError(Exception):
    code = "SteerError"


class DimensionMismatch(SteerError, ValueError):
    code = "DimensionMismatch"


class NonHermitian(SteerError, ValueError):
    code = "NonHermitian"


class NotPSD(SteerError, ValueError):
    code = "NotPSD"


class ZeroState(SteerError, ValueError):
    code = "ZeroState"


class NotNormalized(SteerError, ValueError):
    code = "NotNormalized"


class InconsistentInput(SteerError, ValueError):
    code = "InconsistentInput"


class NotUnit(SteerError, ValueError):
    code = "NotUnit"


class NotProjector(SteerError, ValueError):
    code = "NotProjector"


class ZeroProbability(SteerError, ValueError):
    code = "ZeroProbability"


class NullComponent(SteerError, ValueError):
    code = "NullComponent"


class OutsideSupport(SteerError, ValueError):
    code = "OutsideSupport"


class InvalidModel(SteerError, ValueError):
    code = "InvalidModel"


class UnsupportedCombination(SteerError, ValueError):
    code = "UnsupportedCombination"


class NotInDomain(SteerError, ValueError):
    code = "NotInDomain"


class ParseError(SteerError, ValueError):
    code = "ParseError"
