"""Optimal cut-off and value function of the single-agent Lévy bandit.

With exponent ``alpha`` from :func:`~levy_bandit.alpha_solver.solve_alpha`
the optimal policy plays risky while the posterior exceeds

    p* = alpha (s - g2) / ((alpha + 1)(g1 - s) + alpha (s - g2))

and the value is ``s`` below the cut-off and
``p g1 + (1 - p) g2 + C (1 - p) ((1 - p) / p)**alpha`` above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import check_probability
from .alpha_solver import solve_alpha
from .belief import jump_update
from .errors import DomainError, NumericError
from .measure import BanditProblem

__all__ = [
    "ValueProfile",
    "build_profile",
    "profile_from_alpha",
    "value",
    "value_curve",
    "value_derivatives",
    "fde_residual",
]

_PASTE_TOL = 1e-10


@dataclass(frozen=True)
class ValueProfile:
    """Cut-off, option-value constant and payoff data of an optimal policy.

    Attributes:
        alpha: Exponent of the option value.
        cutoff: Optimal cut-off ``p*``.
        c_alpha: Option-value constant ``C_alpha``.
        g_high: Mean payoff rate of the High type.
        g_low: Mean payoff rate of the Low type.
        safe_rate: Payoff of the safe arm.
        myopic_cutoff: Belief at which the risky arm's expected flow equals ``s``.
    """

    alpha: float
    cutoff: float
    c_alpha: float
    g_high: float
    g_low: float
    safe_rate: float
    myopic_cutoff: float


def profile_from_alpha(alpha: float, safe_rate: float, g_high: float, g_low: float) -> ValueProfile:
    """Closed-form policy data for a given exponent and payoff rates."""
    s, g1, g2 = safe_rate, g_high, g_low
    if not (alpha > 0.0 and g2 < s < g1):
        raise DomainError(f"need alpha > 0 and g_low < s < g_high (alpha={alpha}, {g2} < {s} < {g1})")
    cutoff = alpha * (s - g2) / ((alpha + 1.0) * (g1 - s) + alpha * (s - g2))
    c_alpha = (s - g2 - cutoff * (g1 - g2)) / ((1.0 - cutoff) * ((1.0 - cutoff) / cutoff) ** alpha)
    profile = ValueProfile(alpha, cutoff, c_alpha, g1, g2, s, (s - g2) / (g1 - g2))
    pasted = _risky_branch(profile, cutoff)
    if abs(pasted - s) > _PASTE_TOL * max(1.0, abs(s)):
        raise NumericError(f"value branches disagree at the cut-off: {pasted!r} vs {s!r}")
    return profile


def build_profile(problem: BanditProblem) -> ValueProfile:
    """Solve for ``alpha`` and assemble the optimal policy of a validated problem."""
    alpha = solve_alpha(problem).root
    return profile_from_alpha(alpha, problem.safe_rate, problem.g_high, problem.g_low)


def _risky_branch(profile: ValueProfile, p: float) -> float:
    if p == 1.0:
        return profile.g_high
    q = 1.0 - p
    return p * profile.g_high + q * profile.g_low + profile.c_alpha * q * (q / p) ** profile.alpha


def value(profile: ValueProfile, p: float) -> float:
    """Optimal expected discounted payoff at prior ``p``."""
    p = check_probability(p)
    if p <= profile.cutoff:
        return profile.safe_rate
    return _risky_branch(profile, p)


def value_curve(profile: ValueProfile, grid) -> np.ndarray:
    """Vectorised :func:`value` over an array of beliefs."""
    p = np.asarray(grid, dtype=float)
    if np.isnan(p).any() or (p < 0.0).any() or (p > 1.0).any():
        raise DomainError("beliefs must lie in [0, 1]")
    out = np.full(p.shape, profile.safe_rate)
    risky = p > profile.cutoff
    pr = p[risky]
    q = 1.0 - pr
    with np.errstate(divide="ignore", invalid="ignore"):
        option = profile.c_alpha * q * (q / pr) ** profile.alpha
    out[risky] = pr * profile.g_high + q * profile.g_low + np.where(q > 0.0, option, 0.0)
    return out


def value_derivatives(profile: ValueProfile, p: float) -> tuple[float, float, float]:
    """``(U, U', U'')`` of the risky branch at ``p`` in ``(0, 1)``, analytically."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"derivatives need p in (0, 1), got {p!r}")
    a, c = profile.alpha, profile.c_alpha
    q = 1.0 - p
    u = _risky_branch(profile, p)
    du = profile.g_high - profile.g_low - c * q ** a * p ** (-a - 1.0) * (a + p)
    d2u = c * a * (a + 1.0) * q ** (a - 1.0) * p ** (-a - 2.0)
    return u, du, d2u


def fde_residual(problem: BanditProblem, profile: ValueProfile, p: float) -> float:
    """Signed residual of the continuation equation for ``p`` in ``(p*, 1)``.

    The jump integral is the atom sum of
    ``(p rate_high + (1 - p) rate_low) U(P_h)``; ``U'`` and ``U''`` come from
    :func:`value_derivatives`, not from differencing.
    """
    if not profile.cutoff < p < 1.0:
        raise DomainError(f"residual is defined on (cutoff, 1), got {p!r}")
    u, du, d2u = value_derivatives(profile, p)
    q = 1.0 - p
    nu1, nu2 = problem.high.jump_rate, problem.low.jump_rate
    jump_term = math.fsum(
        (p * a.rate_high + q * a.rate_low) * value(profile, jump_update(p, a)) for a in problem.atoms
    )
    bracket = (
        jump_term
        - p * q * (nu1 - nu2) * du
        - (p * nu1 + q * nu2) * u
        + 0.5 * d2u * p * p * q * q * problem.drift_signal ** 2
    )
    rhs = p * problem.g_high + q * problem.g_low + bracket / problem.discount
    return u - rhs
