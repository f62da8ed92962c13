"""Posterior over the arm type and the equivalent linear stopping boundary.

The filter is kept in log-odds.  Observing the risky arm on ``[0, t]``
moves the log-odds of High by

    (mu_high - mu_low) / sigma**2 * Y - (mu_high**2 - mu_low**2) / (2 sigma**2) * t
        - (nu_high - nu_low) * t + sum over jumps of ln(rate_high / rate_low)

where ``Y`` is the drift-plus-Brownian part of the payoff.  Dividing the gap
to a cut-off by ``(mu_high - mu_low) / sigma`` gives the boundary form: keep
playing risky while ``Y / sigma > F t - E - sum of jump credits``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from scipy.special import expit, logit

from ._util import check_probability
from .errors import DomainError
from .measure import BanditProblem, JumpAtom

__all__ = [
    "Posterior",
    "BoundaryParams",
    "log_odds",
    "log_odds_drift",
    "posterior_from_history",
    "jump_update",
    "boundary_params",
]

JumpRef = Union[float, JumpAtom]


@dataclass(frozen=True)
class Posterior:
    """Belief in High together with its log-odds.

    Attributes:
        belief: Probability of the High type.
        log_odds: ``ln(belief / (1 - belief))``; infinite at 0 and 1.
    """

    belief: float
    log_odds: float

    @classmethod
    def from_log_odds(cls, value: float) -> "Posterior":
        return cls(float(expit(value)), float(value))


def log_odds(p: float) -> float:
    """``logit(p)`` with ``-inf`` at 0 and ``+inf`` at 1."""
    return float(logit(check_probability(p)))


def log_odds_drift(problem: BanditProblem) -> tuple[float, float]:
    """Coefficients ``(a, c)`` of the continuous filter ``dl = a dY - c dt``.

    Both Brownian terms are 0 in the pure-jump case.
    """
    nu_gap = problem.high.jump_rate - problem.low.jump_rate
    if problem.drift_gap == 0.0:
        return 0.0, nu_gap
    var = problem.sigma ** 2
    mu1, mu2 = problem.high.drift, problem.low.drift
    return problem.drift_gap / var, (mu1 * mu1 - mu2 * mu2) / (2.0 * var) + nu_gap


def _atom_lookup(problem: BanditProblem) -> dict[float, JumpAtom]:
    return {a.size: a for a in problem.atoms}


def _resolve(lookup: Mapping[float, JumpAtom], ref: JumpRef) -> JumpAtom:
    size = ref.size if isinstance(ref, JumpAtom) else float(ref)
    try:
        return lookup[size]
    except KeyError:
        raise DomainError(f"no atom of size {size!r} in this problem") from None


def posterior_from_history(
    problem: BanditProblem,
    q0: float,
    t: float,
    continuous_payoff: float,
    jumps: Iterable[JumpRef] = (),
) -> Posterior:
    """Posterior after observing the risky arm for time ``t``.

    Args:
        problem: Validated bandit problem.
        q0: Prior belief in High.  Priors 0 and 1 are absorbing.
        t: Observation time, ``>= 0``.
        continuous_payoff: Drift-plus-Brownian payoff accumulated over ``[0, t]``.
        jumps: Sizes (or atoms) of the observed jumps.

    Raises:
        DomainError: on a negative time, an unknown jump size, or a nonzero
            continuous payoff when ``sigma == 0``.
    """
    q0 = check_probability(q0, "q0")
    if not t >= 0.0:
        raise DomainError(f"observation time must be nonnegative, got {t!r}")
    if problem.sigma == 0.0 and continuous_payoff != 0.0:
        raise DomainError("continuous payoff must be 0 when sigma is 0")
    lookup = _atom_lookup(problem)
    credits = [_resolve(lookup, j).log_ratio for j in jumps]
    if q0 in (0.0, 1.0):
        return Posterior(q0, log_odds(q0))
    a, c = log_odds_drift(problem)
    value = log_odds(q0) + a * continuous_payoff - c * t
    value += math.fsum(credits) if credits else 0.0
    return Posterior.from_log_odds(value)


def jump_update(p: float, atom: JumpAtom) -> float:
    """Belief right after a jump of the atom's size, ``p rh / (p rh + (1 - p) rl)``."""
    p = check_probability(p)
    if p in (0.0, 1.0):
        return p
    if atom.rate_low == 0.0:
        return 1.0
    # Odds form avoids 0/0 when p * rate_high underflows.
    return 1.0 / (1.0 + ((1.0 - p) / p) * (atom.rate_low / atom.rate_high))


@dataclass(frozen=True)
class BoundaryParams:
    """Linear description of a cut-off rule in normalised orientation.

    The tracked statistic is ``orientation * Y / sigma``; risky play continues
    while it exceeds ``slope_F * t - intercept_E - (sum of jump credits)``.
    With ``orientation = -1`` (Low drifts higher) the raw inequality is
    flipped so that ``intercept_E`` and every credit stay nonnegative.

    Attributes:
        slope_F: Slope of the boundary in time.
        intercept_E: Boundary intercept at ``t = 0``.
        jump_credit: Boundary drop caused by one jump, keyed by jump size.
        orientation: ``+1`` if ``mu_high > mu_low`` else ``-1``.
        sigma: Shared volatility used to scale the statistic.
    """

    slope_F: float
    intercept_E: float
    jump_credit: Mapping[float, float] = field(default_factory=dict)
    orientation: int = 1
    sigma: float = 1.0

    def statistic(self, continuous_payoff: float) -> float:
        return self.orientation * continuous_payoff / self.sigma

    def boundary(self, t: float, jumps: Iterable[float] = ()) -> float:
        """``F t - E - sum of G_h`` over the observed jump sizes."""
        credit = math.fsum(self.jump_credit[float(h)] for h in jumps)
        return self.slope_F * t - self.intercept_E - credit

    def continues(self, t: float, continuous_payoff: float, jumps: Iterable[float] = ()) -> bool:
        """Boundary form of the rule ``belief > cut-off``."""
        return self.statistic(continuous_payoff) > self.boundary(t, jumps)


def boundary_params(problem: BanditProblem, q0: float, cutoff_p: float) -> BoundaryParams:
    """Boundary parameters for the rule "play risky while belief > ``cutoff_p``".

    Raises:
        DomainError: when the drifts coincide (no Brownian channel to threshold)
            or either probability is outside ``(0, 1)``.
    """
    if problem.drift_gap == 0.0:
        raise DomainError("boundary form needs mu_high != mu_low")
    for name, p in (("q0", q0), ("cutoff_p", cutoff_p)):
        if not 0.0 < check_probability(p, name) < 1.0:
            raise DomainError(f"{name} must lie in (0, 1), got {p!r}")
    sigma = problem.sigma
    gap = problem.drift_gap
    orientation = 1 if gap > 0.0 else -1
    scale = sigma / abs(gap)
    nu_gap = problem.high.jump_rate - problem.low.jump_rate
    slope = (problem.high.drift + problem.low.drift) / (2.0 * sigma) + sigma * nu_gap / gap
    intercept = scale * (log_odds(q0) - log_odds(cutoff_p))
    credits = {a.size: scale * a.log_ratio for a in problem.atoms}
    return BoundaryParams(orientation * slope, intercept, credits, orientation, sigma)
