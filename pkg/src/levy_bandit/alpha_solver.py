"""Exponents of the value function: roots of the information equation.

For a pair of arm types observed by the decision maker, the information
terms of the pair are

    sum_h nu_low(h) (nu_low(h)/nu_high(h))**eta + eta (nu_high - nu_low)
        - nu_low + 0.5 eta (eta + 1) ((mu_high - mu_low) / sigma)**2

and the exponent is the unique positive root of "information terms minus r".
With a second observed-but-unpaid stream the terms of both streams add.
Each term vanishes at ``eta = 0`` and is nondecreasing in ``eta``, so the
root is bracketed by doubling and then polished by safeguarded Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterable

from .errors import NoSignChange, NumericError
from .measure import BanditProblem, JumpAtom

if TYPE_CHECKING:
    from .info import InfoProblem

__all__ = [
    "RootResult",
    "InformationTerms",
    "information_terms",
    "f_eval",
    "f_prime",
    "f_ab_eval",
    "solve_alpha",
    "solve_beta",
    "solve_increasing",
]

RESIDUAL_TOL = 1e-12
WIDTH_TOL = 1e-12
_MAX_UPPER = 2.0 ** 64
_POLISH_STEPS = 3


@dataclass(frozen=True)
class RootResult:
    """Outcome of a bracketed root search.

    Attributes:
        root: Positive root.
        residual: Function value at ``root``.
        iterations: Function evaluations after bracketing.
        bracket: Final ``(lo, hi)`` interval with ``f(lo) <= 0 <= f(hi)``.
    """

    root: float
    residual: float
    iterations: int
    bracket: tuple[float, float]


@dataclass(frozen=True)
class InformationTerms:
    """Information content of one observed High/Low pair of processes.

    Only atoms with a positive Low rate enter the power sum; atoms that the
    Low type never produces contribute ``0 * 0**eta = 0`` for ``eta > 0``.
    """

    rates_low: tuple[float, ...]
    ratios: tuple[float, ...]
    log_ratios: tuple[float, ...]
    rate_low_total: float
    rate_gap: float
    drift_signal_sq: float

    def value(self, eta: float) -> float:
        if eta == 0.0:
            powers = self.rates_low
        else:
            powers = [rl * q ** eta for rl, q in zip(self.rates_low, self.ratios)]
        jump = math.fsum(powers) - self.rate_low_total
        return jump + eta * self.rate_gap + 0.5 * (eta + 1.0) * eta * self.drift_signal_sq

    def derivative(self, eta: float) -> float:
        jump = -math.fsum(rl * lr * q ** eta
                          for rl, q, lr in zip(self.rates_low, self.ratios, self.log_ratios))
        return jump + self.rate_gap + (eta + 0.5) * self.drift_signal_sq

    @property
    def is_null(self) -> bool:
        return self.rate_gap == 0.0 and self.drift_signal_sq == 0.0 and all(q == 1.0 for q in self.ratios)


def _terms(atoms: Iterable[JumpAtom], drift_gap: float, sigma: float) -> InformationTerms:
    atoms = tuple(atoms)
    active = [a for a in atoms if a.rate_low > 0.0]
    signal = 0.0 if drift_gap == 0.0 else drift_gap / sigma
    return InformationTerms(
        rates_low=tuple(a.rate_low for a in active),
        ratios=tuple(a.rate_low / a.rate_high for a in active),
        log_ratios=tuple(a.log_ratio for a in active),
        rate_low_total=math.fsum(a.rate_low for a in active),
        rate_gap=math.fsum(a.rate_high for a in atoms) - math.fsum(a.rate_low for a in atoms),
        drift_signal_sq=signal * signal,
    )


def information_terms(problem: BanditProblem) -> InformationTerms:
    return _terms(problem.atoms, problem.drift_gap, problem.sigma)


def f_eval(problem: BanditProblem, eta: float) -> float:
    """Left side of the exponent equation at ``eta``; equals ``-r`` at 0."""
    return information_terms(problem).value(eta) - problem.discount


def f_prime(problem: BanditProblem, eta: float) -> float:
    """Analytic derivative of :func:`f_eval` in ``eta``."""
    return information_terms(problem).derivative(eta)


def f_ab_eval(info_problem: "InfoProblem", eta: float) -> float:
    """Two-stream exponent function: stream a terms plus stream b terms minus r."""
    a = info_problem.stream_a.terms()
    b = info_problem.stream_b.terms()
    return a.value(eta) + b.value(eta) - info_problem.discount


def solve_increasing(
    func: Callable[[float], float],
    deriv: Callable[[float], float],
    *,
    residual_tol: float = RESIDUAL_TOL,
    width_tol: float = WIDTH_TOL,
    max_iter: int = 400,
) -> RootResult:
    """Root of an increasing function on ``(0, inf)`` with ``func(0) < 0``.

    The upper end of ``[0, 1]`` is doubled until ``func`` turns positive;
    then Newton steps are taken from the current iterate and replaced by
    bisection whenever they leave the bracket.  Once the residual is within
    ``residual_tol`` up to three further Newton steps polish the iterate, and
    points half a tolerance either side of it close the bracket to
    ``width_tol`` relative width.
    """
    lo, hi = 0.0, 1.0
    fhi = func(hi)
    while fhi <= 0.0:
        if fhi == 0.0:
            return RootResult(hi, 0.0, 0, (hi, hi))
        lo = hi
        hi *= 2.0
        if hi > _MAX_UPPER:
            raise NoSignChange(f"function still nonpositive at {hi / 2:g}")
        fhi = func(hi)

    x, fx = hi, fhi
    evals = 0
    polish_left = _POLISH_STEPS
    while evals < max_iter:
        if fx == 0.0:
            return RootResult(x, 0.0, evals, (x, x))
        xtol = width_tol * max(1.0, x)
        d = deriv(x)
        newton = x - fx / d if d > 0.0 else math.nan
        if abs(fx) <= residual_tol:
            if polish_left and lo < newton < hi and abs(newton - x) > 0.01 * xtol:
                polish_left -= 1
                fn = func(newton)
                evals += 1
                if abs(fn) <= abs(fx):
                    lo, hi = (newton, hi) if fn < 0.0 else (lo, newton)
                    x, fx = newton, fn
                    continue
            # Residual is met and x is polished; probe both sides to close the bracket.
            a, b = max(lo, x - 0.5 * xtol), min(hi, x + 0.5 * xtol)
            fa = func(a) if a > lo else -1.0
            fb = func(b) if b < hi else 1.0
            evals += 2
            if fa <= 0.0 <= fb:
                return RootResult(x, fx, evals, (a, b))
            lo, hi = (a if fa <= 0.0 else lo), (b if fb >= 0.0 else hi)
            candidate = 0.5 * (lo + hi)
        else:
            candidate = newton if lo < newton < hi else 0.5 * (lo + hi)
        if candidate == x or candidate in (lo, hi):
            break
        fc = func(candidate)
        evals += 1
        if fc < 0.0:
            lo = candidate
        else:
            hi = candidate
        x, fx = candidate, fc
    raise NumericError(f"root search stalled at {x!r} with residual {fx:.3e}, bracket ({lo!r}, {hi!r})")


def solve_alpha(problem: BanditProblem) -> RootResult:
    """Positive root of :func:`f_eval`.  The problem is assumed validated."""
    terms = information_terms(problem)
    r = problem.discount
    return solve_increasing(lambda eta: terms.value(eta) - r, terms.derivative)


def solve_beta(info_problem: "InfoProblem") -> RootResult:
    """Positive root of the two-stream exponent equation."""
    a = info_problem.stream_a.terms()
    b = info_problem.stream_b.terms()
    r = info_problem.discount
    return solve_increasing(
        lambda eta: a.value(eta) + b.value(eta) - r,
        lambda eta: a.derivative(eta) + b.derivative(eta),
    )
