"""Exception types raised by the solver layers."""


class IonShockError(Exception):
    """Base class for all errors raised by :mod:`ionshock`."""


class DomainError(IonShockError, ValueError):
    """An input lies outside the physical domain of an operation."""


class InadmissibleShockError(IonShockError, ValueError):
    """No admissible forward shock exists for the requested parameters."""


class ConvergenceError(IonShockError, RuntimeError):
    """A root search failed to bracket or converge.

    Parameters
    ----------
    message : str
        Human readable description.
    trace : list of tuple, optional
        The ``(coordinate, residual)`` pairs visited while bracketing, kept
        for diagnostics.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])

    def __str__(self):
        msg = super().__str__()
        if not self.trace:
            return msg
        tail = ", ".join(f"({x:.6g}, {r:.6g})" for x, r in self.trace[-8:])
        return f"{msg}; bracket trace (last {min(8, len(self.trace))}): {tail}"
