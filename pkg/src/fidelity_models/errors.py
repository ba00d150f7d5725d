"""Exception hierarchy.

Errors fall into three families, which the command-line front end maps to
distinct exit codes: usage problems (bad input documents, unparsable
sweeps), model errors (no valid model, no settling, a sweep that never
fails), and numerical failures inside the kernels.
"""


class FidelityError(Exception):
    """Base class for every error raised by this package."""


# usage / input errors -------------------------------------------------------

class UsageError(FidelityError):
    pass


class ParseError(UsageError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class BoundsError(UsageError):
    pass


class ParameterError(UsageError, ValueError):
    """Invalid, unknown or missing parameter in a model input."""


class UnknownTag(ParameterError):
    pass


class IncompatibleParameter(UsageError):
    pass


# model errors ---------------------------------------------------------------

class ModelError(FidelityError):
    pass


class UnknownModel(ModelError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PreconditionViolation(ModelError):
    pass


class MissingParameter(ModelError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NoValidModel(ModelError):
    pass


class OutOfDomain(ModelError, ValueError):
    pass


class NonPositiveDimension(ModelError, ValueError):
    pass


class MissingShearData(ModelError):
    pass


class ZeroDamping(ModelError):
    pass


class NoSettling(ModelError):
    pass


class NeverFails(ModelError):
    pass


class TipOverDuringSettling(ModelError):
    pass


# numerical failures ---------------------------------------------------------

class NumericalError(FidelityError):
    pass


class StepUnderflow(NumericalError):
    pass


class StepBudgetExhausted(NumericalError):
    pass


class NoSignChange(NumericalError, ValueError):
    pass


class IterationBudget(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class NonFinite(NumericalError):
    pass
