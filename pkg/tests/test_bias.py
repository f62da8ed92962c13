import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import problems, random_problem, regime_case
from levy_bandit.bias import (
    Regime,
    Verdict,
    bias_gap,
    biased_value,
    classify_regime,
    compare_bias,
    compare_bias_geometric,
)
from levy_bandit.errors import PreconditionError, RangeError
from levy_bandit.fixtures import brownian_problem, krc_problem
from levy_bandit.misprior import MispriorInput, misprior_value
from levy_bandit.valuation import build_profile, value


def half_alpha():
    """Pure Poisson with alpha = r / rate = 0.5, cut-off 0.1 and turning point 5/6."""
    return krc_problem(rate=2.0)


class TestBiasedValue:
    def test_no_bias(self):
        p = brownian_problem()
        assert biased_value(p, 0.6, 0.0) == value(build_profile(p), 0.6)

    def test_pessimist_below_cutoff(self):
        assert biased_value(brownian_problem(), 0.4, -0.1) == 0.5

    def test_brownian_optimist(self):
        assert biased_value(brownian_problem(), 0.5, 0.1) == pytest.approx(0.55556, abs=1e-5)

    @pytest.mark.parametrize("eps", [0.6, -0.6])
    def test_out_of_range(self, eps):
        with pytest.raises(RangeError):
            biased_value(brownian_problem(), 0.5, eps)


class TestCompareBias:
    def test_alpha_two(self):
        v = compare_bias(brownian_problem(discount=3.0), 0.6, 0.1)
        assert v.regime is Regime.ALPHA_ABOVE_1
        assert v.verdict is Verdict.OPTIMIST_BETTER

    def test_half_alpha_low(self):
        v = compare_bias(half_alpha(), 0.5, 0.2)
        assert v.regime is Regime.ALPHA_BELOW_1_LOW_P
        assert v.verdict is Verdict.OPTIMIST_BETTER

    def test_half_alpha_high(self):
        v = compare_bias(half_alpha(), 0.91, 0.05)
        assert v.regime is Regime.ALPHA_BELOW_1_HIGH_P
        assert v.verdict is Verdict.PESSIMIST_BETTER
        assert v.w_value < 0.0

    def test_alpha_one_is_boundary(self):
        assert compare_bias(brownian_problem(), 0.6, 0.1).regime is Regime.BOUNDARY

    def test_straddling_turning_point(self):
        assert compare_bias(half_alpha(), 0.83, 0.05).regime is Regime.BOUNDARY

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            compare_bias(brownian_problem(), 0.4, 0.1)
        with pytest.raises(PreconditionError):
            compare_bias(brownian_problem(), 0.95, 0.1)
        with pytest.raises(PreconditionError):
            compare_bias(brownian_problem(), 0.6, 0.0)

    def test_verdict_consistent_with_sign(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            problem, prof, p0, eps, _ = regime_case(rng)
            v = compare_bias(problem, p0, eps, prof)
            if abs(v.w_value) <= 1e-12:
                assert v.verdict is Verdict.TIE
            else:
                assert (v.verdict is Verdict.OPTIMIST_BETTER) == (v.w_value > 0)


class TestGap:
    def test_zero_exact(self):
        assert bias_gap(half_alpha(), 0.5, 0.0) == 0.0

    def test_first_order_vanishes(self):
        for p, p0 in ((half_alpha(), 0.5), (brownian_problem(discount=3.0), 0.7)):
            assert abs(bias_gap(p, p0, 1e-5) / 1e-5) < 1e-8

    def test_regime_signs(self):
        rng = np.random.default_rng(8)
        expected = {Regime.ALPHA_ABOVE_1: 1.0, Regime.ALPHA_BELOW_1_LOW_P: 1.0,
                    Regime.ALPHA_BELOW_1_HIGH_P: -1.0}
        for _ in range(60):
            problem, prof, p0, eps, regime = regime_case(rng)
            assert classify_regime(prof.alpha, p0, eps) is regime
            w = bias_gap(problem, p0, eps, prof)
            assert math.copysign(1.0, w) == expected[regime]


    def test_sign_survives_below_rounding(self):
        # alpha ~ 27.8: the naive difference of payoffs rounds to 0.
        p = brownian_problem(discount=400.0)
        assert biased_value(p, 0.9, 0.03) - biased_value(p, 0.9, -0.03) == 0.0
        w = bias_gap(p, 0.9, 0.03)
        assert w == pytest.approx(6.382874644028985e-26, rel=1e-12)
        v = compare_bias(p, 0.9, 0.03)
        assert v.verdict is Verdict.TIE and v.regime is Regime.ALPHA_ABOVE_1

class TestGeometric:
    @pytest.mark.parametrize("p0,rel", [(0.5, 0.3), (0.9, 0.05), (0.7, 0.2)])
    def test_same_as_absolute(self, p0, rel):
        p = half_alpha()
        geo = compare_bias_geometric(p, p0, rel)
        prof = build_profile(p)
        up = misprior_value(p, MispriorInput(p0, (1 + rel) * p0, prof.cutoff))
        down = misprior_value(p, MispriorInput(p0, (1 - rel) * p0, prof.cutoff))
        assert geo.w_value == pytest.approx(up - down, abs=1e-14)
        assert geo.verdict is compare_bias(p, p0, rel * p0).verdict


@given(problems())
@settings(max_examples=80)
def test_turning_point_feasible(problem):
    prof = build_profile(problem)
    if 3 * prof.g_high + prof.g_low >= 4 * prof.safe_rate:
        assert prof.cutoff < (prof.alpha + 2) / 3
