"""Exception hierarchy.

``InputError`` subclasses signal bad arguments (CLI exit code 2),
``NumericalError`` subclasses signal a computation that could not finish
(CLI exit code 3).
"""


class QorrelateError(Exception):
    pass


class InputError(QorrelateError, ValueError):
    pass


class NumericalError(QorrelateError, ArithmeticError):
    pass


class NotHermitian(InputError):
    pass


class NotPSD(InputError):
    pass


class NotOrthogonal(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DimensionTooSmall(InputError):
    pass


class ParameterOutOfRange(InputError):
    pass


class IncompleteMeasurement(InputError):
    pass


class InconsistentData(InputError):
    pass


class NotSCM(InputError):
    pass


class NonpositiveXi(InputError):
    pass


class SingularMatrix(NumericalError):
    pass


class RankDeficientMarginal(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass
