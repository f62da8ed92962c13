"""Random valid problems shared by the property and acceptance tests."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from levy_bandit.errors import ValidationError
from levy_bandit.info import InfoProblem, SignalStream
from levy_bandit.measure import BanditProblem, JumpAtom, validate


def random_atoms(rng: np.random.Generator, max_atoms: int = 3) -> list[JumpAtom]:
    atoms = []
    sizes = set()
    for _ in range(int(rng.integers(0, max_atoms + 1))):
        size = round(float(rng.uniform(-1.0, 2.0)), 3)
        if size == 0.0 or size in sizes:
            continue
        sizes.add(size)
        rate_high = float(rng.uniform(0.1, 2.0))
        share = 0.0 if rng.random() < 0.25 else float(rng.uniform(0.0, 1.0))
        atoms.append(JumpAtom(size, rate_high, rate_high * share))
    return atoms


def random_problem(rng: np.random.Generator, *, brownian: bool | None = None) -> BanditProblem:
    """A problem satisfying every assumption; ``brownian`` forces or forbids a drift gap."""
    while True:
        atoms = random_atoms(rng)
        with_drift = rng.random() < 0.8 if brownian is None else brownian
        mu_low = float(rng.uniform(-1.0, 1.0))
        if with_drift:
            sigma = float(rng.uniform(0.3, 2.0))
            gap = float(rng.uniform(0.2, 2.0)) * (1.0 if rng.random() < 0.85 else -0.3)
        else:
            sigma = 0.0 if rng.random() < 0.5 else float(rng.uniform(0.3, 2.0))
            gap = 0.0
        probe = BanditProblem.from_atoms(0.0, 1.0, sigma, mu_low + gap, mu_low, atoms)
        g1, g2 = probe.g_high, probe.g_low
        if g1 - g2 < 0.05:
            continue
        s = g2 + float(rng.uniform(0.05, 0.95)) * (g1 - g2)
        r = float(rng.uniform(0.1, 5.0))
        problem = BanditProblem.from_atoms(s, r, sigma, mu_low + gap, mu_low, atoms)
        try:
            validate(problem)
        except ValidationError:
            continue
        return problem


def random_stream(rng: np.random.Generator) -> SignalStream:
    """An informative observed stream."""
    while True:
        atoms = random_atoms(rng, 2)
        if rng.random() < 0.6:
            sigma = float(rng.uniform(0.3, 2.0))
            mu_low = float(rng.uniform(-1.0, 1.0))
            stream = SignalStream(sigma, mu_low + float(rng.uniform(-1.0, 1.0)), mu_low, atoms)
        else:
            stream = SignalStream(0.0, 0.0, 0.0, atoms)
        if stream.informative:
            return stream


def random_info_problem(rng: np.random.Generator) -> tuple[InfoProblem, InfoProblem]:
    """``(base, enriched)``: the same a-stream and c-expectations, with and without a b-stream."""
    base_problem = random_problem(rng)
    g_c = (float(rng.uniform(-0.5, 0.5)),) * 2
    base = InfoProblem.from_bandit(base_problem, None, g_c)
    base = InfoProblem(base.safe_rate + g_c[0], base.discount, base.stream_a, base.stream_b, *g_c)
    enriched = InfoProblem(base.safe_rate, base.discount, base.stream_a, random_stream(rng), *g_c)
    return base, enriched


@st.composite
def problems(draw, brownian: bool | None = None) -> BanditProblem:
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_problem(np.random.default_rng(seed), brownian=brownian)


def regime_case(rng: np.random.Generator, margin: float = 1e-10):
    """``(problem, profile, p0, eps, regime)`` with both biased priors strictly inside one regime."""
    from levy_bandit.bias import Regime
    from levy_bandit.valuation import build_profile

    while True:
        problem = random_problem(rng)
        prof = build_profile(problem)
        a = prof.alpha
        if abs(a - 1.0) < 1e-6:
            continue
        if a > 1.0:
            lo_edge, hi_edge, regime = prof.cutoff, 1.0, Regime.ALPHA_ABOVE_1
        else:
            turn = (a + 2.0) / 3.0
            if rng.random() < 0.5:
                lo_edge, hi_edge, regime = prof.cutoff, turn, Regime.ALPHA_BELOW_1_LOW_P
            else:
                lo_edge, hi_edge, regime = turn, 1.0, Regime.ALPHA_BELOW_1_HIGH_P
        lo_edge, hi_edge = lo_edge + margin, hi_edge - margin
        if hi_edge - lo_edge < 1e-3:
            continue
        lo, hi = np.sort(rng.uniform(lo_edge, hi_edge, 2))
        if hi - lo < 1e-3:
            continue
        return problem, prof, 0.5 * (lo + hi), 0.5 * (hi - lo), regime
