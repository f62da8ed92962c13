"""Who fares better: a decision maker biased up or down by the same amount.

``V(eps)`` is the true-prior payoff of someone who plays the optimal cut-off
rule from the subjective prior ``p0 + eps``, and ``W(eps) = V(eps) - V(-eps)``.
The verdict always comes from evaluating ``W``; the exponent regime is a
cross-check whose prediction must not be contradicted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.special import logit

from .errors import NumericError, PreconditionError, RangeError
from .measure import BanditProblem
from .misprior import MispriorInput, misprior_value_for
from .valuation import ValueProfile, build_profile

__all__ = [
    "Verdict",
    "Regime",
    "BiasVerdict",
    "TIE_TOL",
    "biased_value",
    "bias_gap",
    "classify_regime",
    "compare_bias",
    "compare_bias_geometric",
]

TIE_TOL = 1e-12


class Verdict(str, enum.Enum):
    OPTIMIST_BETTER = "OptimistBetter"
    PESSIMIST_BETTER = "PessimistBetter"
    TIE = "Tie"


class Regime(str, enum.Enum):
    ALPHA_ABOVE_1 = "AlphaAbove1"
    ALPHA_BELOW_1_LOW_P = "AlphaBelow1_LowP"
    ALPHA_BELOW_1_HIGH_P = "AlphaBelow1_HighP"
    BOUNDARY = "Boundary"


_PREDICTION = {
    Regime.ALPHA_ABOVE_1: Verdict.OPTIMIST_BETTER,
    Regime.ALPHA_BELOW_1_LOW_P: Verdict.OPTIMIST_BETTER,
    Regime.ALPHA_BELOW_1_HIGH_P: Verdict.PESSIMIST_BETTER,
}


@dataclass(frozen=True)
class BiasVerdict:
    """Outcome of an optimist/pessimist comparison.

    Attributes:
        w_value: ``V(eps) - V(-eps)``.
        verdict: Sign of ``w_value``, with ``Tie`` when ``|w_value| <= 1e-12``.
        regime: Exponent regime of the comparison, or ``Boundary``.
    """

    w_value: float
    verdict: Verdict
    regime: Regime


def _value(profile: ValueProfile, p0: float, eps: float) -> float:
    q0 = p0 + eps
    if not 0.0 <= q0 <= 1.0:
        raise RangeError(f"biased prior p0 + eps = {q0!r} is outside [0, 1]")
    inp = MispriorInput(p0, q0, profile.cutoff)
    return misprior_value_for(profile.alpha, profile.safe_rate, profile.g_high, profile.g_low, inp)


def biased_value(problem: BanditProblem, p0: float, eps: float, profile: ValueProfile | None = None) -> float:
    """True-prior payoff of the optimal rule run from the subjective prior ``p0 + eps``.

    Raises:
        RangeError: if ``p0 + eps`` is outside ``[0, 1]``.
    """
    return _value(profile or build_profile(problem), p0, eps)


def _gap(profile: ValueProfile, p0: float, eps: float) -> float:
    up, down = p0 + eps, p0 - eps
    for q in (up, down):
        if not 0.0 <= q <= 1.0:
            raise RangeError(f"biased prior {q!r} is outside [0, 1]")
    cut = profile.cutoff
    if eps == 0.0:
        return 0.0
    if not (cut < down and up < 1.0):
        return _value(profile, p0, eps) - _value(profile, p0, -eps)
    # Both priors act: the common p0 g1 + (1 - p0) g2 cancels, and
    # x_up**k - x_down**k = x_down**k expm1(k (ln x_up - ln x_down)) keeps tiny gaps resolvable.
    a = profile.alpha
    log_down = math.log((1.0 - down) / down) + math.log(cut / (1.0 - cut))
    shift = logit(down) - logit(up)
    high = (profile.safe_rate - profile.g_high) * p0 * math.exp((a + 1.0) * log_down) * math.expm1((a + 1.0) * shift)
    low = (profile.safe_rate - profile.g_low) * (1.0 - p0) * math.exp(a * log_down) * math.expm1(a * shift)
    return high + low


def bias_gap(problem: BanditProblem, p0: float, eps: float, profile: ValueProfile | None = None) -> float:
    """``W(eps) = V(eps) - V(-eps)``; exactly 0 at ``eps = 0``.

    When both biased priors exceed the cut-off the gap is evaluated without
    the shared blind-play term, so its sign survives even when ``|W|`` is far
    below the rounding error of either payoff.
    """
    return _gap(profile or build_profile(problem), p0, eps)


def classify_regime(alpha: float, p0: float, eps: float) -> Regime:
    """Exponent regime of a comparison whose biased priors both exceed the cut-off."""
    lo, hi = p0 - eps, p0 + eps
    if alpha > 1.0:
        return Regime.ALPHA_ABOVE_1
    if alpha < 1.0:
        turn = (alpha + 2.0) / 3.0
        if hi <= turn:
            return Regime.ALPHA_BELOW_1_LOW_P
        if lo > turn and hi < 1.0:
            return Regime.ALPHA_BELOW_1_HIGH_P
    return Regime.BOUNDARY


def _verdict(w: float) -> Verdict:
    if abs(w) <= TIE_TOL:
        return Verdict.TIE
    return Verdict.OPTIMIST_BETTER if w > 0.0 else Verdict.PESSIMIST_BETTER


def compare_bias(problem: BanditProblem, p0: float, eps: float, profile: ValueProfile | None = None) -> BiasVerdict:
    """Compare an optimist at ``p0 + eps`` with a pessimist at ``p0 - eps``.

    Raises:
        PreconditionError: unless ``eps > 0``, ``p0 - eps > p*`` and ``p0 + eps <= 1``.
        NumericError: if the direct sign contradicts the regime's prediction.
    """
    profile = profile or build_profile(problem)
    if not eps > 0.0:
        raise PreconditionError(f"eps must be positive, got {eps!r}")
    if not p0 - eps > profile.cutoff:
        raise PreconditionError(f"pessimist prior {p0 - eps!r} does not exceed the cut-off {profile.cutoff!r}")
    if not p0 + eps <= 1.0:
        raise PreconditionError(f"optimist prior {p0 + eps!r} exceeds 1")
    w = _gap(profile, p0, eps)
    verdict = _verdict(w)
    regime = classify_regime(profile.alpha, p0, eps)
    predicted = _PREDICTION.get(regime)
    if predicted is not None and verdict not in (predicted, Verdict.TIE):
        raise NumericError(f"W = {w!r} contradicts the {regime.value} prediction {predicted.value}")
    return BiasVerdict(w, verdict, regime)


def compare_bias_geometric(problem: BanditProblem, p0: float, rel_eps: float,
                           profile: ValueProfile | None = None) -> BiasVerdict:
    """Comparison with priors ``(1 +- rel_eps) p0``: an absolute bias of ``rel_eps * p0``."""
    return compare_bias(problem, p0, rel_eps * p0, profile)
