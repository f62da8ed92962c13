import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import expit

from helpers import problems
from levy_bandit.belief import (
    BoundaryParams,
    boundary_params,
    jump_update,
    log_odds,
    posterior_from_history,
)
from levy_bandit.errors import DomainError
from levy_bandit.fixtures import brownian_problem, krc_problem, mixed_problem
from levy_bandit.measure import BanditProblem, JumpAtom


class TestPosterior:
    def test_no_information(self):
        post = posterior_from_history(mixed_problem(), 0.3, 0.0, 0.0)
        assert post.belief == pytest.approx(0.3, abs=1e-15)

    def test_uninformative_observations(self):
        p = BanditProblem.from_atoms(0.5, 1.0, 1.0, 0.0, 0.0, [JumpAtom(1.0, 1.0, 1.0)])
        post = posterior_from_history(p, 0.4, 3.0, 1.7, [1.0, 1.0])
        assert post.belief == pytest.approx(0.4, abs=1e-15)

    def test_krc_jump_reveals_high(self):
        post = posterior_from_history(krc_problem(), 0.2, 1.0, 0.0, [1.0])
        assert post.belief == 1.0
        assert post.log_odds == math.inf

    def test_krc_deterministic_decay(self):
        post = posterior_from_history(krc_problem(rate=2.0), 0.5, 0.75, 0.0)
        assert post.log_odds == pytest.approx(-1.5, abs=1e-15)

    def test_hand_formula_mixed(self):
        # mu 1/0, sigma 1, rates 1/0.5: l = l0 + Y - t/2 - t/2 + n ln 2.
        post = posterior_from_history(mixed_problem(), 0.5, 2.0, 1.3, [1.0, JumpAtom(1.0, 1.0, 0.5)])
        assert post.log_odds == pytest.approx(1.3 - 2.0 + 2 * math.log(2.0), abs=1e-14)
        assert post.belief == pytest.approx(expit(post.log_odds), abs=1e-14)

    def test_sigma_zero_rejects_continuous_payoff(self):
        with pytest.raises(DomainError):
            posterior_from_history(krc_problem(), 0.5, 1.0, 0.1)

    def test_unknown_jump_size(self):
        with pytest.raises(DomainError):
            posterior_from_history(mixed_problem(), 0.5, 1.0, 0.0, [2.0])

    def test_absorbing_priors(self):
        assert posterior_from_history(mixed_problem(), 0.0, 1.0, 5.0, [1.0]).belief == 0.0
        assert posterior_from_history(mixed_problem(), 1.0, 1.0, -5.0).belief == 1.0

    @given(st.floats(0.01, 0.99), st.floats(0.0, 3.0), st.floats(0.0, 3.0),
           st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.integers(0, 3), st.integers(0, 3))
    def test_additive_over_segments(self, q0, t1, t2, y1, y2, n1, n2):
        p = mixed_problem()
        first = posterior_from_history(p, q0, t1, y1, [1.0] * n1)
        both = posterior_from_history(p, q0, t1 + t2, y1 + y2, [1.0] * (n1 + n2))
        chained = posterior_from_history(p, first.belief, t2, y2, [1.0] * n2)
        assert both.log_odds == pytest.approx(first.log_odds + (chained.log_odds - log_odds(first.belief)),
                                              abs=1e-9)
        assert chained.log_odds == pytest.approx(both.log_odds, abs=1e-9)


class TestJumpUpdate:
    def test_equal_rates(self):
        assert jump_update(0.3, JumpAtom(1.0, 1.0, 1.0)) == pytest.approx(0.3, abs=1e-16)

    def test_bayes_arithmetic(self):
        assert jump_update(0.5, JumpAtom(1.0, 1.0, 0.5)) == pytest.approx(2 / 3, abs=1e-15)

    def test_degenerate(self):
        assert jump_update(1.0, JumpAtom(1.0, 1.0, 0.5)) == 1.0
        assert jump_update(0.0, JumpAtom(1.0, 1.0, 0.0)) == 0.0

    @given(st.floats(0.0, 1.0), st.floats(0.01, 5.0), st.floats(0.0, 1.0))
    def test_good_news(self, p, rh, share):
        atom = JumpAtom(1.0, rh, rh * share)
        post = jump_update(p, atom)
        assert post >= p - 1e-15
        if 0.0 < p < 1.0 and share < 1.0 and post - p > 1e-12:
            assert atom.informative


class TestBoundary:
    def test_mixed_slope_and_credit(self):
        b = boundary_params(mixed_problem(), 0.5, 0.2)
        assert b.slope_F == pytest.approx(1.0, abs=1e-15)
        assert b.jump_credit[1.0] == pytest.approx(math.log(2.0), abs=1e-15)

    def test_zero_gap_intercept(self):
        assert boundary_params(mixed_problem(), 0.3, 0.3).intercept_E == 0.0

    def test_requires_drift_gap(self):
        with pytest.raises(DomainError):
            boundary_params(krc_problem(), 0.5, 0.3)

    def test_probabilities_open_interval(self):
        with pytest.raises(DomainError):
            boundary_params(mixed_problem(), 1.0, 0.3)

    def test_negative_gap_normalised(self):
        # Low drifts up but jumps less: High is still better on average.
        p = BanditProblem.from_atoms(1.0, 1.0, 1.0, 0.0, 0.5, [JumpAtom(1.0, 2.0, 0.2)])
        b = boundary_params(p, 0.6, 0.3)
        assert b.orientation == -1
        assert b.intercept_E > 0.0
        assert all(g > 0.0 for g in b.jump_credit.values())

    @given(problems(brownian=True), st.floats(0.02, 0.98), st.floats(0.02, 0.98),
           st.floats(0.0, 5.0), st.floats(-5.0, 5.0), st.integers(0, 2))
    def test_equivalent_to_threshold(self, problem, q0, cut, t, y, n):
        jumps = [problem.atoms[0].size] * n if problem.atoms else []
        b = boundary_params(problem, q0, cut)
        post = posterior_from_history(problem, q0, t, y, jumps)
        margin = b.statistic(y) - b.boundary(t, jumps)
        if abs(post.log_odds - log_odds(cut)) > 1e-9 and abs(margin) > 1e-9:
            assert (post.log_odds > log_odds(cut)) == b.continues(t, y, jumps)
        if math.isfinite(margin):
            scale = abs(problem.drift_signal)
            assert scale * margin == pytest.approx(post.log_odds - log_odds(cut), abs=1e-8)


class TestMartingale:
    def test_one_step_mean(self):
        """Expected next belief equals the prior under the mixture of types."""
        problem = mixed_problem()
        rng = np.random.default_rng(11)
        n, dt, p = 1_000_000, 0.05, 0.4
        high = rng.random(n) < p
        mu = np.where(high, 1.0, 0.0)
        y = mu * dt + np.sqrt(dt) * rng.standard_normal(n)
        jumps = rng.poisson(np.where(high, 1.0, 0.5) * dt)
        lo = log_odds(p) + y - 0.5 * dt - 0.5 * dt + jumps * math.log(2.0)
        nxt = expit(lo)
        se = nxt.std(ddof=1) / math.sqrt(n)
        assert abs(nxt.mean() - p) < 3 * se
        one = posterior_from_history(problem, p, dt, float(y[0]), [1.0] * int(jumps[0]))
        assert one.belief == pytest.approx(nxt[0], abs=1e-14)
