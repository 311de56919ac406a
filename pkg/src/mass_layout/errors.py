"""Exception hierarchy.

Everything raised on bad input derives from ``DataError``; capacity problems
derive from ``InfeasibleError``. The CLI maps the two families onto distinct
exit codes.
"""


class MassError(Exception):
    """Base class for all errors raised by this package."""


class DataError(MassError, ValueError):
    """Input data failed parsing or validation."""


class InfeasibleError(MassError):
    """The floor plan cannot hold the requested facilities."""


# load matrix parsing
class LoadMatrixError(DataError):
    pass


class NonSquare(LoadMatrixError):
    pass


class DuplicateName(LoadMatrixError):
    pass


class NegativeLoad(LoadMatrixError):
    pass


class DiagonalNotVacant(LoadMatrixError):
    pass


class MalformedCell(LoadMatrixError):
    pass


class HeaderMismatch(LoadMatrixError):
    pass


class TooManyFacilities(LoadMatrixError):
    pass


# assignment
class NoUncoveredCell(DataError):
    pass


class NegativeEntry(DataError):
    pass


class SizeMismatch(DataError):
    pass


class InvalidCover(DataError):
    pass


class IterationGuardExceeded(MassError, RuntimeError):
    """The Hungarian loop ran past its round guard. Indicates a bug."""


# floor plan / layout
class NoCapacity(InfeasibleError):
    pass


class Infeasible(InfeasibleError):
    pass


class Unplaced(DataError):
    pass


# oracle
class TooLarge(DataError):
    pass
