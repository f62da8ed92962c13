"""Reference problems used by the tests, the acceptance suite and the docs."""

from __future__ import annotations

from .measure import BanditProblem, JumpAtom

__all__ = ["brownian_problem", "krc_problem", "mixed_problem"]


def brownian_problem(safe_rate: float = 0.5, discount: float = 1.0, sigma: float = 1.0,
                     mu_high: float = 1.0, mu_low: float = 0.0) -> BanditProblem:
    """Pure drift-plus-Brownian arm; defaults give ``alpha = 1`` and ``p* = 1/3``."""
    return BanditProblem.from_atoms(safe_rate, discount, sigma, mu_high, mu_low)


def krc_problem(rate: float = 1.0, discount: float = 1.0, safe_rate: float = 0.5,
                size: float = 1.0) -> BanditProblem:
    """Pure Poisson arm whose Low type never jumps; ``alpha = discount / rate``."""
    return BanditProblem.from_atoms(safe_rate, discount, 0.0, 0.0, 0.0, [JumpAtom(size, rate, 0.0)])


def mixed_problem(safe_rate: float = 1.0, discount: float = 1.0) -> BanditProblem:
    """Brownian signal plus one informative unit jump (rates 1 and 0.5); ``alpha ~ 0.857``."""
    return BanditProblem.from_atoms(safe_rate, discount, 1.0, 1.0, 0.0, [JumpAtom(1.0, 1.0, 0.5)])
