import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import problems, random_problem
from levy_bandit.errors import DomainError
from levy_bandit.fixtures import brownian_problem, krc_problem, mixed_problem
from levy_bandit.valuation import (
    build_profile,
    fde_residual,
    profile_from_alpha,
    value,
    value_curve,
    value_derivatives,
)

# mpmath evaluation of the closed form at 40 digits for the mixed fixture (s = 1).
MIXED_CUTOFF = 0.18747056600299607
MIXED_C_ALPHA = 0.076643090954568768
MIXED_U_07 = 1.5611249673003476


class TestBuildProfile:
    def test_krc(self):
        prof = build_profile(krc_problem())
        assert prof.cutoff == pytest.approx(1 / 3, abs=1e-12)

    def test_brownian(self):
        prof = build_profile(brownian_problem())
        assert prof.cutoff == pytest.approx(1 / 3, abs=1e-12)
        assert prof.c_alpha == pytest.approx(1 / 8, abs=1e-12)
        assert prof.myopic_cutoff == 0.5

    def test_mixed_against_oracle(self):
        prof = build_profile(mixed_problem())
        assert prof.cutoff == pytest.approx(MIXED_CUTOFF, abs=1e-12)
        assert prof.c_alpha == pytest.approx(MIXED_C_ALPHA, abs=1e-12)

    @given(problems())
    @settings(max_examples=60)
    def test_profile_invariants(self, problem):
        prof = build_profile(problem)
        assert 0.0 < prof.cutoff < prof.myopic_cutoff < 1.0
        assert prof.c_alpha > 0.0
        assert value(prof, prof.cutoff) == prof.safe_rate
        assert value(prof, 1.0) == prof.g_high
        assert prof.myopic_cutoff == pytest.approx(
            (problem.safe_rate - problem.g_low) / (problem.g_high - problem.g_low), rel=1e-15)


class TestValue:
    def test_endpoints(self):
        prof = build_profile(brownian_problem())
        assert value(prof, 0.0) == 0.5
        assert value(prof, 1.0) == 1.0

    def test_brownian_half(self):
        assert value(build_profile(brownian_problem()), 0.5) == pytest.approx(0.5625, abs=1e-14)

    def test_mixed_oracle(self):
        assert value(build_profile(mixed_problem()), 0.7) == pytest.approx(MIXED_U_07, abs=1e-12)

    def test_branches_agree_at_cutoff(self):
        prof = build_profile(mixed_problem())
        eps = 1e-9
        assert value(prof, prof.cutoff + eps) == pytest.approx(prof.safe_rate, abs=1e-12)

    @pytest.mark.parametrize("p", [-0.1, 1.1, math.nan])
    def test_rejects_non_probabilities(self, p):
        with pytest.raises(DomainError):
            value(build_profile(brownian_problem()), p)

    def test_curve_matches_scalar(self):
        prof = build_profile(mixed_problem())
        grid = np.linspace(0.0, 1.0, 257)
        curve = value_curve(prof, grid)
        np.testing.assert_allclose(curve, [value(prof, p) for p in grid], rtol=1e-14, atol=0)

    def test_curve_rejects_nan(self):
        with pytest.raises(DomainError):
            value_curve(build_profile(brownian_problem()), [0.5, math.nan])

    @given(problems(), st.floats(0.0, 1.0))
    def test_option_value_nonnegative(self, problem, p):
        prof = build_profile(problem)
        floor = max(prof.safe_rate, p * prof.g_high + (1 - p) * prof.g_low)
        assert value(prof, p) >= floor - 1e-12

    def test_shape_on_fine_grid(self):
        prof = build_profile(mixed_problem())
        u = value_curve(prof, np.linspace(0.0, 1.0, 10_001))
        assert np.all(np.diff(u) >= -1e-12)
        assert np.all(np.diff(u, 2) >= -1e-9)

    def test_smooth_pasting(self):
        prof = build_profile(mixed_problem())
        quotients = [(value(prof, prof.cutoff + e) - prof.safe_rate) / e for e in (1e-4, 1e-5, 1e-6)]
        assert quotients[0] > quotients[1] > quotients[2]
        assert quotients[2] < 1e-2

    def test_decreasing_in_alpha(self):
        # Raising r raises alpha; hold payoffs fixed by reusing the same rates.
        low = build_profile(mixed_problem(discount=0.5))
        high = build_profile(mixed_problem(discount=2.0))
        assert low.alpha < high.alpha
        for p in np.linspace(high.cutoff + 1e-3, 0.999, 50):
            assert value(low, p) > value(high, p)

    def test_profile_rejects_bad_order(self):
        with pytest.raises(DomainError):
            profile_from_alpha(1.0, 2.0, 1.0, 0.0)


class TestDerivatives:
    @pytest.mark.parametrize("p", [0.25, 0.5, 0.9])
    def test_against_finite_differences(self, p):
        prof = build_profile(mixed_problem())
        h = 1e-5
        u, du, d2u = value_derivatives(prof, p)
        up, um = value(prof, p + h), value(prof, p - h)
        assert du == pytest.approx((up - um) / (2 * h), rel=1e-7)
        assert d2u == pytest.approx((up - 2 * u + um) / h ** 2, rel=1e-4)

    def test_right_derivative_vanishes_at_cutoff(self):
        prof = build_profile(mixed_problem())
        _, du, _ = value_derivatives(prof, prof.cutoff)
        assert abs(du) < 1e-12


class TestFdeResidual:
    def test_brownian(self):
        p = brownian_problem()
        assert abs(fde_residual(p, build_profile(p), 0.5)) < 1e-9

    def test_mixed(self):
        p = mixed_problem()
        assert abs(fde_residual(p, build_profile(p), 0.7)) < 1e-9

    def test_near_one(self):
        p = mixed_problem()
        assert abs(fde_residual(p, build_profile(p), 1 - 1e-6)) < 1e-6

    def test_detects_wrong_exponent(self):
        p = mixed_problem()
        prof = build_profile(p)
        wrong = profile_from_alpha(prof.alpha * 1.01, p.safe_rate, p.g_high, p.g_low)
        assert abs(fde_residual(p, wrong, 0.7)) > 1e-5

    def test_domain(self):
        p = brownian_problem()
        with pytest.raises(DomainError):
            fde_residual(p, build_profile(p), 0.2)

    def test_random_problems(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            p = random_problem(rng)
            prof = build_profile(p)
            for q in np.linspace(prof.cutoff, 1.0, 12)[1:-1]:
                assert abs(fde_residual(p, prof, q)) < 1e-8
