"""Error types shared by the analysis, integration and oracle layers.

Parameter and precondition problems are ValueErrors so callers that only know
the builtin hierarchy still catch them; numerical breakdown is a RuntimeError.
"""

from __future__ import annotations

from typing import Any, Optional, Tuple


class InvalidParameters(ValueError):
    pass


class MissingEquilibrium(ValueError):
    pass


class OutOfChart(ValueError):
    pass


class ParityMismatch(ValueError):
    pass


class EquilibriumStart(ValueError):
    pass


class IntegrationFailure(RuntimeError):
    """Step-size underflow or solver breakdown; carries the last valid state."""

    def __init__(self, message: str, last_time: float, last_state: Optional[Tuple[float, float]] = None) -> None:
        super().__init__(message)
        self.last_time = float(last_time)
        self.last_state = last_state
        # Samples integrated before the failure, when the integrator has them.
        self.partial: Optional[Any] = None

    def __reduce__(self) -> Tuple[Any, ...]:
        # Crosses process boundaries in parallel verification.
        return type(self), (str(self), self.last_time, self.last_state)
