"""Monte Carlo engine for cut-off strategies on the Lévy bandit.

Each replication owns a counter-based Philox stream keyed by
``(index, seed)``, so a replication's draws do not depend on which process
runs it or in which order.  The first draw picks the type; the path is then
generated in blocks of steps on a fixed schedule.  Within a step the
continuous part is an exact Gaussian increment; jumps of each atom arrive
after exponential gaps, so per-step counts are Poisson and each jump is
discounted at its own arrival time.  The subjective log-odds are updated with the same
coefficients as :func:`~levy_bandit.belief.posterior_from_history`, and the
decision maker moves to the safe arm for good at the first step end where
the belief is at or below the cut-off.

The continuous part is discounted with the exact average of ``r exp(-r t)``
over each step, so its expected contribution matches continuous time.  Paths still on the risky arm at the horizon are closed with
``exp(-r T) g`` of the true type.
"""

from __future__ import annotations

import csv
import enum
import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np
from scipy.special import expit

from .belief import BoundaryParams, boundary_params, log_odds, log_odds_drift
from .errors import BoundaryMismatch, ConfigError
from .measure import BanditProblem

__all__ = [
    "ArmKind",
    "SimConfig",
    "SimOutcome",
    "SimEstimate",
    "DtSweep",
    "check_config",
    "replication_rng",
    "simulate_path",
    "estimate_value",
    "dt_sweep",
    "dump_path",
    "PATH_COLUMNS",
]

PATH_COLUMNS = ("t", "payoff", "continuous", "jump_size", "belief", "boundary")
_BLOCK_SCHEDULE = (1024, 2048, 4096, 8192)
_MAX_JUMP_PROB = 0.1
_EQUALITY_BAND = 1e-9


class ArmKind(str, enum.Enum):
    HIGH = "High"
    LOW = "Low"


@dataclass(frozen=True)
class SimConfig:
    """Discretisation, sample size and strategy of a simulation run.

    Attributes:
        dt: Time step.
        horizon: Simulated time before the tail is closed analytically.
        replications: Number of independent paths.
        seed: 64-bit base seed.
        prior_true: Probability that a path's type is High.
        prior_subjective: Prior used by the decision maker's filter.
        cutoff: Belief at or below which the decision maker stops.
    """

    dt: float
    horizon: float
    replications: int
    seed: int
    prior_true: float
    prior_subjective: float
    cutoff: float

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.horizon / self.dt + 1e-9))

    @property
    def simulated_horizon(self) -> float:
        return self.n_steps * self.dt

    def with_dt(self, dt: float) -> "SimConfig":
        return SimConfig(dt, self.horizon, self.replications, self.seed,
                         self.prior_true, self.prior_subjective, self.cutoff)


@dataclass(frozen=True)
class SimOutcome:
    """One replication.

    Attributes:
        discounted_payoff: Normalised discounted payoff of the path.
        stop_time: Time of the switch to the safe arm, ``None`` if never within the horizon.
        true_type: Type drawn for the path.
        jump_count: Number of jumps observed while on the risky arm.
        jump_sizes: Sizes of those jumps in order of arrival.
        continuous_payoff: Drift-plus-Brownian payoff observed on the risky arm.
        log_odds: Subjective log-odds when the path ended.
    """

    discounted_payoff: float
    stop_time: Optional[float]
    true_type: ArmKind
    jump_count: int
    jump_sizes: tuple[float, ...]
    continuous_payoff: float
    log_odds: float


@dataclass(frozen=True)
class SimEstimate:
    """Sample mean of replication payoffs.

    Attributes:
        mean: Pairwise-summed sample mean.
        std_error: Sample standard deviation over ``sqrt(replications)``.
        replications: Sample size.
        truncation_bound: ``exp(-r T) (|g_high| + |g_low| + |s|)`` for the simulated horizon ``T``.
    """

    mean: float
    std_error: float
    replications: int
    truncation_bound: float

    @property
    def tolerance(self) -> float:
        """Acceptance radius ``3 std_error + truncation_bound``."""
        return 3.0 * self.std_error + self.truncation_bound


def check_config(problem: BanditProblem, config: SimConfig) -> None:
    """Reject configurations the engine cannot run faithfully.

    Raises:
        ConfigError: on a nonpositive step or horizon, an empty sample, a seed
            outside 64 bits, a prior outside ``[0, 1]`` or a step so coarse
            that a High jump arrives with probability ``>= 0.1`` per step.
    """
    if not (math.isfinite(config.dt) and config.dt > 0.0):
        raise ConfigError(f"dt must be positive, got {config.dt!r}")
    if not (math.isfinite(config.horizon) and config.horizon > 0.0):
        raise ConfigError(f"horizon must be positive, got {config.horizon!r}")
    if int(config.replications) != config.replications or config.replications < 1:
        raise ConfigError(f"replications must be a positive integer, got {config.replications!r}")
    if int(config.seed) != config.seed or not 0 <= config.seed < 2 ** 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {config.seed!r}")
    for name in ("prior_true", "prior_subjective", "cutoff"):
        p = getattr(config, name)
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{name} must lie in [0, 1], got {p!r}")
    rate = max(problem.high.jump_rate, problem.low.jump_rate)
    if rate * config.dt >= _MAX_JUMP_PROB:
        raise ConfigError(f"per-step jump intensity {rate * config.dt:.3g} must stay below {_MAX_JUMP_PROB}")


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream of replication ``index``; independent of scheduling."""
    return np.random.Generator(np.random.Philox(key=(int(index) << 64) | int(seed)))


def truncation_bound(problem: BanditProblem, config: SimConfig) -> float:
    tail = math.exp(-problem.discount * config.simulated_horizon)
    return tail * (abs(problem.g_high) + abs(problem.g_low) + abs(problem.safe_rate))


def _blocks(n_steps: int):
    start, i = 0, 0
    while start < n_steps:
        size = min(_BLOCK_SCHEDULE[min(i, len(_BLOCK_SCHEDULE) - 1)], n_steps - start)
        yield start, size
        start += size
        i += 1


def _step_sums(idx: np.ndarray, weights: np.ndarray, m: int) -> np.ndarray:
    """Per-step sums of event weights; an infinite weight marks its step infinite."""
    out = np.zeros(m)
    if idx.size == 0:
        return out
    finite = np.isfinite(weights)
    if finite.any():
        out += np.bincount(idx[finite], weights=weights[finite], minlength=m)
    if not finite.all():
        out[idx[~finite]] = np.inf
    return out


_NO_EVENTS = np.zeros(0, dtype=np.intp)
_NO_TIMES = np.zeros(0)


@functools.lru_cache(maxsize=8)
def _discount_weights(r: float, dt: float, n_steps: int) -> np.ndarray:
    """Average of ``r exp(-r t)`` over each step, ``exp(-r i dt) (1 - exp(-r dt)) / dt``."""
    weights = np.exp(-r * dt * np.arange(n_steps)) * (-math.expm1(-r * dt) / dt)
    weights.flags.writeable = False
    return weights


class _Arrivals:
    """Jump arrival times per atom, drawn as exponential gaps on demand."""

    def __init__(self, rng: np.random.Generator, rates: np.ndarray):
        self.rng = rng
        self.scales = [1.0 / x if x > 0.0 else math.inf for x in rates]
        self.next = [rng.exponential(sc) if sc != math.inf else math.inf for sc in self.scales]

    def until(self, t_end: float) -> tuple[np.ndarray, np.ndarray]:
        """Arrival times before ``t_end`` and their atom indices, in time order."""
        if not self.scales:
            return _NO_TIMES, _NO_EVENTS
        times: list[float] = []
        which: list[int] = []
        for j, sc in enumerate(self.scales):
            t = self.next[j]
            while t < t_end:
                times.append(t)
                which.append(j)
                t += self.rng.exponential(sc)
            self.next[j] = t
        order = np.argsort(np.array(times), kind="stable")
        return np.array(times)[order], np.array(which, dtype=np.intp)[order]


Recorder = Callable[[dict], None]


def _run(problem: BanditProblem, config: SimConfig, index: int, *,
         check_boundary: bool = False, recorder: Optional[Recorder] = None) -> SimOutcome:
    rng = replication_rng(config.seed, index)
    is_high = rng.random() < config.prior_true
    kind = ArmKind.HIGH if is_high else ArmKind.LOW
    arm = problem.high if is_high else problem.low
    g_true = problem.g_high if is_high else problem.g_low
    s, r, dt = problem.safe_rate, problem.discount, config.dt
    q0, cut = config.prior_subjective, config.cutoff

    if q0 <= cut:
        return SimOutcome(s, 0.0, kind, 0, (), 0.0, log_odds(q0))

    atoms = problem.atoms
    sizes = np.array([a.size for a in atoms])
    ratios = np.array([a.log_ratio for a in atoms])
    arrivals = _Arrivals(rng, np.array([a.rate_high if is_high else a.rate_low for a in atoms]))
    sigma = problem.sigma
    coef_y, coef_t = log_odds_drift(problem)
    level, l_cut = log_odds(q0), log_odds(cut)

    bparams: Optional[BoundaryParams] = None
    if (check_boundary or recorder is not None) and problem.drift_gap != 0.0 and 0.0 < q0 < 1.0 and 0.0 < cut < 1.0:
        bparams = boundary_params(problem, q0, cut)
        credits = np.array([bparams.jump_credit[a.size] for a in atoms])
    check = check_boundary and bparams is not None

    discount_weights = _discount_weights(r, dt, config.n_steps)
    payoff_parts: list[float] = []
    cont = raw = credit_total = 0.0
    jump_sizes: list[float] = []
    stop_time: Optional[float] = None
    sqrt_dt = math.sqrt(dt)

    for start, m in _blocks(config.n_steps):
        if sigma > 0.0:
            dy = rng.standard_normal(m)
            dy *= sigma * sqrt_dt
            dy += arm.drift * dt
        else:
            dy = np.full(m, arm.drift * dt)
        times, which = arrivals.until((start + m) * dt)
        inc = dy * coef_y
        inc -= coef_t * dt
        if which.size:
            # Arrival in step i means i dt <= time < (i + 1) dt; clamp guards rounding at block edges.
            idx = np.clip((times / dt).astype(np.intp) - start, 0, m - 1)
            inc += _step_sums(idx, ratios[which], m)
        else:
            idx = _NO_EVENTS
        path = np.cumsum(inc)
        path += level
        below = path <= l_cut
        first = int(np.argmax(below))
        stopped = bool(below[first])
        take = first + 1 if stopped else m
        taken = idx < take

        payoff_parts.append(float(np.sum(discount_weights[start:start + take] * dy[:take])))
        if taken.any():
            payoff_parts.append(float(np.sum(r * np.exp(-r * times[taken]) * sizes[which[taken]])))

        if bparams is None and recorder is None:
            jump_sizes.extend(float(h) for h in sizes[which[taken]])
            cont += float(np.sum(dy[:take]))
            level = float(path[take - 1])
            if stopped:
                stop_time = (start + take) * dt
                break
            continue

        y_path = cont + np.cumsum(dy[:take])
        step_ends = np.arange(start + 1, start + take + 1) * dt
        jump_pay = _step_sums(idx, sizes[which], m)
        if bparams is not None:
            g_path = credit_total + np.cumsum(_step_sums(idx, credits[which], m)[:take])
            bound = bparams.slope_F * step_ends - bparams.intercept_E - g_path
            if check:
                stat = bparams.orientation * y_path / sigma
                by_rule = path[:take] > l_cut
                by_boundary = stat > bound
                bad = (by_rule != by_boundary) & (np.abs(path[:take] - l_cut) > _EQUALITY_BAND) \
                    & (np.abs(stat - bound) > _EQUALITY_BAND)
                if bad.any():
                    j = int(np.flatnonzero(bad)[0])
                    raise BoundaryMismatch(
                        f"replication {index}, t={step_ends[j]:.6g}: threshold rule {bool(by_rule[j])} "
                        f"but boundary rule {bool(by_boundary[j])}")
            credit_total = float(g_path[-1])
        if recorder is not None:
            raw_path = raw + np.cumsum(dy[:take] + jump_pay[:take])
            recorder({
                "t": step_ends,
                "payoff": raw_path,
                "continuous": y_path,
                "jump_size": jump_pay[:take],
                "log_odds": path[:take],
                "boundary": bound if bparams is not None else None,
            })
            raw = float(raw_path[-1])

        jump_sizes.extend(float(h) for h in sizes[which[taken]])
        cont += float(np.sum(dy[:take]))
        level = float(path[take - 1])
        if stopped:
            stop_time = (start + take) * dt
            break

    total = math.fsum(payoff_parts)
    if stop_time is not None:
        total += s * math.exp(-r * stop_time)
    else:
        total += g_true * math.exp(-r * config.simulated_horizon)
    return SimOutcome(total, stop_time, kind, len(jump_sizes), tuple(jump_sizes), cont, level)


def simulate_path(problem: BanditProblem, config: SimConfig, replication_index: int,
                  check_boundary: bool = False) -> SimOutcome:
    """Simulate replication ``replication_index``; deterministic in ``(seed, index)``.

    Args:
        problem: Validated bandit problem.
        config: Simulation settings.
        replication_index: Index of the replication's random stream.
        check_boundary: Also evaluate the linear boundary rule at every step
            and fail if it disagrees with the threshold rule away from equality.

    Raises:
        ConfigError: for an invalid ``config``.
        BoundaryMismatch: if ``check_boundary`` finds a disagreement.
    """
    check_config(problem, config)
    return _run(problem, config, replication_index, check_boundary=check_boundary)


def _payoff_chunk(problem: BanditProblem, config: SimConfig, start: int, stop: int) -> np.ndarray:
    return np.array([_run(problem, config, i).discounted_payoff for i in range(start, stop)])


def _payoffs(problem: BanditProblem, config: SimConfig, workers: int) -> np.ndarray:
    n = config.replications
    if workers <= 1 or n < 2:
        return _payoff_chunk(problem, config, 0, n)
    chunk = max(1, -(-n // (4 * workers)))
    bounds = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_payoff_chunk, problem, config, a, b) for a, b in bounds]
        return np.concatenate([f.result() for f in futures])


def estimate_value(problem: BanditProblem, config: SimConfig, workers: int = 1) -> SimEstimate:
    """Mean discounted payoff over ``config.replications`` independent paths.

    Payoffs are gathered in replication order and reduced with numpy's
    pairwise summation, so the estimate is bit-identical for any ``workers``.
    """
    check_config(problem, config)
    values = _payoffs(problem, config, int(workers))
    n = values.size
    mean = float(np.sum(values) / n)
    std_error = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return SimEstimate(mean, std_error, n, truncation_bound(problem, config))


@dataclass(frozen=True)
class DtSweep:
    """Estimates at ``dt`` and ``dt / 2`` with the same seeds.

    Attributes:
        coarse: Estimate at ``dt``.
        fine: Estimate at ``dt / 2``.
        difference: ``|coarse.mean - fine.mean|``.
        ci_width: ``2 (3 max(std_error) + truncation_bound)``.
    """

    coarse: SimEstimate
    fine: SimEstimate
    difference: float
    ci_width: float

    @property
    def converged(self) -> bool:
        return self.difference < self.ci_width


def dt_sweep(problem: BanditProblem, config: SimConfig, workers: int = 1) -> DtSweep:
    """Halve the step and compare; both runs share each replication's type draw."""
    coarse = estimate_value(problem, config, workers)
    fine = estimate_value(problem, config.with_dt(config.dt / 2.0), workers)
    width = 2.0 * (3.0 * max(coarse.std_error, fine.std_error) + max(coarse.truncation_bound, fine.truncation_bound))
    return DtSweep(coarse, fine, abs(coarse.mean - fine.mean), width)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def dump_path(problem: BanditProblem, config: SimConfig, replication_index: int, stream: TextIO) -> SimOutcome:
    """Write the per-step record of one replication as CSV.

    Rows cover every step taken on the risky arm, ending with the step at
    which the decision maker stops.  ``boundary`` is empty when the linear
    boundary is undefined.
    """
    check_config(problem, config)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PATH_COLUMNS)

    def record(block: dict) -> None:
        beliefs = expit(block["log_odds"])
        bound = block["boundary"]
        for i in range(block["t"].size):
            writer.writerow([
                _fmt(block["t"][i]), _fmt(block["payoff"][i]), _fmt(block["continuous"][i]),
                _fmt(block["jump_size"][i]), _fmt(beliefs[i]), "" if bound is None else _fmt(bound[i]),
            ])

    return _run(problem, config, replication_index, recorder=record)
