from __future__ import annotations

import math

from .errors import DomainError


def check_probability(p: float, name: str = "p") -> float:
    """Return ``p`` as a float after rejecting NaN and values outside [0, 1]."""
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must be a probability in [0, 1], got {p!r}")
    return p


def odds(p: float) -> float:
    """``p / (1 - p)`` with the conventions ``odds(0) = 0`` and ``odds(1) = inf``."""
    if p == 1.0:
        return math.inf
    return p / (1.0 - p)
