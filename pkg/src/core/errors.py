"""
Exception hierarchy shared by the lagexp library.

Library code raises these; pipeline steps log them and report failure, and the
CLI turns them into click errors and exit codes.
"""
from typing import Optional, Sequence


class LagexpError(Exception):
    """Base class for all lagexp errors"""
    pass


class InvalidInputError(LagexpError):
    """Raised when an argument violates an operation's precondition"""
    pass


class IndexOutOfRangeError(LagexpError):
    """Raised when an index exceeds a semigroup cap, term list or order"""
    pass


class FieldSchemaError(LagexpError):
    """Raised when a field expansion is rejected at ingestion"""
    pass


class MissingTermError(LagexpError):
    """Raised when a requested expansion term is not stored"""
    pass


class IntegrationError(LagexpError):
    """Raised when the trajectory integrator cannot continue"""

    def __init__(self, message: str, t_last: Optional[float] = None,
                 x_last: Optional[Sequence[float]] = None):
        self.t_last = t_last
        self.x_last = None if x_last is None else list(x_last)
        if t_last is not None:
            message = f"{message} (last good state t={t_last!r}, x={self.x_last!r})"
        super().__init__(message)


class HorizonInsufficientError(LagexpError):
    """Raised when the integration window is too short to pin down x*"""
    pass


class FitError(LagexpError):
    """Raised when a decay-rate fit has too few usable points"""
    pass


class CFLViolationError(LagexpError):
    """Raised when a spectral step would violate the CFL condition"""

    def __init__(self, dt: float, suggested_dt: float):
        self.dt = dt
        self.suggested_dt = suggested_dt
        super().__init__(
            f"CFL condition violated for dt={dt:.6g}; use dt <= {suggested_dt:.6g}"
        )


class SimulationBlowupError(LagexpError):
    """Raised when a simulated state stops being finite"""
    pass


class TransientNotDecayedError(LagexpError):
    """Raised when the lowest eigenshell does not yet dominate the flow"""
    pass


class InterpolationRangeError(LagexpError):
    """Raised when a time lies outside the stored simulation window"""
    pass


class DerivativeOrderError(LagexpError):
    """Raised when a derivative order beyond a field's m_max is requested"""
    pass
