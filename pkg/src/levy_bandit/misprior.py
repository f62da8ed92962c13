"""Payoff of a cut-off rule run under a possibly wrong prior.

A decision maker with subjective prior ``q0`` plays risky until their
belief falls to ``p'``.  With ``x = ((1 - q0) / q0) * (p' / (1 - p'))`` the
expected payoff under the true prior ``p0`` is

    (s - g1) p0 x**(alpha + 1) + (s - g2) (1 - p0) x**alpha + p0 g1 + (1 - p0) g2

and ``s`` when ``q0 < p'``.  Because ``x`` is ``exp`` of minus the log-odds
gap, the same value can be written through the boundary intercept ``E``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ._util import check_probability
from .alpha_solver import solve_alpha
from .errors import DomainError
from .measure import BanditProblem

__all__ = [
    "MispriorInput",
    "misprior_value",
    "misprior_value_for",
    "misprior_value_from_intercept",
]


@dataclass(frozen=True)
class MispriorInput:
    """True prior, subjective prior and cut-off of a misinformed decision maker.

    Attributes:
        true_prior: Prior ``p0`` that generates the type.
        subjective_prior: Prior ``q0`` held by the decision maker.
        cutoff: Belief ``p'`` at which they switch to the safe arm.
    """

    true_prior: float
    subjective_prior: float
    cutoff: float

    def __post_init__(self):
        for name in ("true_prior", "subjective_prior", "cutoff"):
            object.__setattr__(self, name, check_probability(getattr(self, name), name))


def misprior_value_for(
    exponent: float, safe_rate: float, g_high: float, g_low: float, inp: MispriorInput
) -> float:
    """Closed form for explicit exponent and payoff rates.

    Shared with the information model, which substitutes its own exponent
    and paid totals.
    """
    p0, q0, cut = inp.true_prior, inp.subjective_prior, inp.cutoff
    s = safe_rate
    blind = p0 * g_high + (1.0 - p0) * g_low
    if cut == 0.0:
        return blind
    if cut == 1.0 or q0 < cut:
        return s
    if q0 == 1.0:
        return blind
    x = ((1.0 - q0) / q0) * (cut / (1.0 - cut))
    return (s - g_high) * p0 * x ** (exponent + 1.0) + (s - g_low) * (1.0 - p0) * x ** exponent + blind


def misprior_value(problem: BanditProblem, inp: MispriorInput, alpha: Optional[float] = None) -> float:
    """Expected payoff of the cut-off rule at ``inp.cutoff`` under prior ``inp.subjective_prior``.

    Args:
        problem: Validated bandit problem.
        inp: Priors and cut-off.
        alpha: Exponent of ``problem``; solved for when omitted.
    """
    if alpha is None:
        alpha = solve_alpha(problem).root
    return misprior_value_for(alpha, problem.safe_rate, problem.g_high, problem.g_low, inp)


def misprior_value_from_intercept(problem: BanditProblem, p0: float, intercept: float, alpha: float) -> float:
    """Same payoff written through the boundary intercept ``E >= 0``.

    The factors are ``exp(-|D| (alpha + 1) E)`` and ``exp(-|D| alpha E)``
    with ``D = (mu_high - mu_low) / sigma``.
    """
    p0 = check_probability(p0, "p0")
    if problem.drift_gap == 0.0:
        raise DomainError("intercept form needs mu_high != mu_low")
    if not intercept >= 0.0:
        raise DomainError(f"intercept must be nonnegative, got {intercept!r}")
    d = abs(problem.drift_signal)
    s, g1, g2 = problem.safe_rate, problem.g_high, problem.g_low
    return (
        p0 * g1
        + (1.0 - p0) * g2
        + (s - g1) * p0 * math.exp(-d * (alpha + 1.0) * intercept)
        + (s - g2) * (1.0 - p0) * math.exp(-d * alpha * intercept)
    )
