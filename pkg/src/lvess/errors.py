"""Exception types raised by lvess."""


class LvessError(Exception):
    """Base class for all library errors."""


class InvariantError(LvessError, ValueError):
    """A model or option violates a structural invariant."""


class ParseError(LvessError, ValueError):
    """A model file could not be parsed."""

    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.field = field
        self.line = line


class EvaluationError(LvessError, ArithmeticError):
    """A numerical evaluation produced a non-finite value."""


class NoBalancing(LvessError):
    """No positive C makes diag(C) @ b symmetric."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBalanced(LvessError):
    """The supplied constants do not balance the interaction matrix."""


class NotSymmetric(LvessError):
    pass


class NotPositiveDefinite(LvessError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class HypothesisViolation(LvessError):
    """The model fails a hypothesis the requested computation relies on."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoConvergence(LvessError):
    def __init__(self, message, best=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class TooManySubsets(LvessError):
    pass


class NotStationary(LvessError):
    pass


class MaxStepsExceeded(LvessError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepUnderflow(LvessError):
    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class NonFiniteState(LvessError):
    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state
