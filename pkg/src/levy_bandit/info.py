"""Information pricing with three streams generated by the risky arm.

Stream ``a`` is observed and paid, stream ``b`` is observed but unpaid,
stream ``c`` is paid but unobserved.  Learning runs on ``a`` and ``b``, so
the exponent ``beta`` solves "a-terms + b-terms = r"; payoffs use the paid
totals ``g^a + g^c``.  Stream ``c`` therefore enters only through its two
expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .alpha_solver import InformationTerms, _terms, solve_beta
from .errors import ValidationError
from .measure import (
    BanditProblem,
    JumpAtom,
    _ATOM_SCHEMA,
    atoms_from_list,
    atoms_to_list,
    check_schema,
)
from .misprior import MispriorInput, misprior_value_for

__all__ = [
    "SignalStream",
    "InfoProblem",
    "InfoValueProfile",
    "validate_info",
    "info_value",
    "info_optimal_cutoff",
    "price_of_information",
    "info_problem_from_dict",
    "info_problem_to_dict",
    "INFO_SCHEMA",
]


@dataclass(frozen=True)
class SignalStream:
    """One High/Low pair of Lévy processes sharing a volatility.

    Attributes:
        sigma: Brownian volatility of the stream under both types.
        mu_high: Drift under High.
        mu_low: Drift under Low.
        atoms: Jump table with per-type rates.
    """

    sigma: float
    mu_high: float
    mu_low: float
    atoms: tuple[JumpAtom, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @classmethod
    def null(cls) -> "SignalStream":
        """A stream that carries no information and pays nothing."""
        return cls(0.0, 0.0, 0.0, ())

    @classmethod
    def of_problem(cls, problem: BanditProblem) -> "SignalStream":
        return cls(problem.sigma, problem.high.drift, problem.low.drift, problem.atoms)

    @property
    def g_high(self) -> float:
        return math.fsum(a.size * a.rate_high for a in self.atoms) + self.mu_high

    @property
    def g_low(self) -> float:
        return math.fsum(a.size * a.rate_low for a in self.atoms) + self.mu_low

    @property
    def informative(self) -> bool:
        return self.mu_high != self.mu_low or any(a.informative for a in self.atoms)

    def terms(self) -> InformationTerms:
        return _terms(self.atoms, self.mu_high - self.mu_low, self.sigma)


@dataclass(frozen=True)
class InfoProblem:
    """Safe arm against a risky arm emitting streams ``a``, ``b`` and ``c``.

    Attributes:
        safe_rate: Payoff ``s`` of the safe arm.
        discount: Discount rate ``r``.
        stream_a: Observed and paid stream.
        stream_b: Observed, unpaid stream.
        g_c_high: Expected rate of the unobserved paid stream under High.
        g_c_low: Same under Low.
    """

    safe_rate: float
    discount: float
    stream_a: SignalStream
    stream_b: SignalStream = field(default_factory=SignalStream.null)
    g_c_high: float = 0.0
    g_c_low: float = 0.0

    @classmethod
    def from_bandit(
        cls,
        problem: BanditProblem,
        stream_b: SignalStream | None = None,
        g_c: tuple[float, float] = (0.0, 0.0),
    ) -> "InfoProblem":
        return cls(problem.safe_rate, problem.discount, SignalStream.of_problem(problem),
                   stream_b or SignalStream.null(), g_c[0], g_c[1])

    @property
    def paid_g_high(self) -> float:
        return self.stream_a.g_high + self.g_c_high

    @property
    def paid_g_low(self) -> float:
        return self.stream_a.g_low + self.g_c_low

    def stream_a_problem(self) -> BanditProblem:
        """Single-stream problem formed by ``a`` alone (payoff excludes ``c``)."""
        a = self.stream_a
        return BanditProblem.from_atoms(self.safe_rate, self.discount, a.sigma, a.mu_high, a.mu_low, a.atoms)


@dataclass(frozen=True)
class InfoValueProfile:
    """Optimal cut-off of the three-stream problem.

    Attributes:
        beta: Exponent from the two observed streams.
        cutoff: Optimal cut-off at the correct prior.
        paid_g_high: ``g^a_high + g^c_high``.
        paid_g_low: ``g^a_low + g^c_low``.
    """

    beta: float
    cutoff: float
    paid_g_high: float
    paid_g_low: float


def _check_stream(name: str, stream: SignalStream) -> None:
    values = [stream.sigma, stream.mu_high, stream.mu_low]
    values += [x for a in stream.atoms for x in (a.size, a.rate_high, a.rate_low)]
    if not all(math.isfinite(v) for v in values):
        raise ValidationError("finite", f"stream {name}: all parameters must be finite")
    if stream.sigma < 0.0:
        raise ValidationError("sigma", f"stream {name}: volatility must be nonnegative")
    for atom in stream.atoms:
        if atom.size == 0.0 or atom.rate_high < 0.0 or atom.rate_low < 0.0:
            raise ValidationError("atom", f"stream {name}: malformed atom {atom}")
        if atom.rate_low > atom.rate_high:
            raise ValidationError("A3", f"stream {name}: Low rate exceeds High rate at size {atom.size}")
        if atom.rate_high == 0.0:
            raise ValidationError("atom", f"stream {name}: atom at size {atom.size} has zero High rate")
    if stream.mu_high != stream.mu_low and stream.sigma == 0.0:
        raise ValidationError("sigma-zero-with-drift-gap", f"stream {name}: drifts differ but sigma is 0")


def validate_info(problem: InfoProblem) -> None:
    """Per-stream A2/A3, paid-total A1 and joint informativeness.

    Raises:
        ValidationError: tagged with the first violated condition.
    """
    numbers = [problem.safe_rate, problem.discount, problem.g_c_high, problem.g_c_low]
    if not all(math.isfinite(v) for v in numbers):
        raise ValidationError("finite", "all parameters must be finite")
    if problem.discount <= 0.0:
        raise ValidationError("discount", "discount rate must be positive")
    _check_stream("a", problem.stream_a)
    _check_stream("b", problem.stream_b)
    g1, g2, s = problem.paid_g_high, problem.paid_g_low, problem.safe_rate
    if not g2 < s < g1:
        raise ValidationError("A1", f"need paid totals g_low < s < g_high, got {g2} < {s} < {g1}")
    if not (problem.stream_a.informative or problem.stream_b.informative):
        raise ValidationError("uninformative", "neither observed stream distinguishes the types")


def info_optimal_cutoff(problem: InfoProblem) -> InfoValueProfile:
    """Exponent ``beta`` and the optimal cut-off for the paid totals."""
    beta = solve_beta(problem).root
    s, g1, g2 = problem.safe_rate, problem.paid_g_high, problem.paid_g_low
    cutoff = beta * (s - g2) / ((beta + 1.0) * (g1 - s) + beta * (s - g2))
    return InfoValueProfile(beta, cutoff, g1, g2)


def info_value(problem: InfoProblem, p0: float, q0: float, cutoff_p: float, beta: float | None = None) -> float:
    """Payoff of the cut-off rule at ``cutoff_p`` under subjective prior ``q0``."""
    if beta is None:
        beta = solve_beta(problem).root
    inp = MispriorInput(p0, q0, cutoff_p)
    if inp.subjective_prior <= inp.cutoff and inp.cutoff > 0.0:
        return problem.safe_rate
    return misprior_value_for(beta, problem.safe_rate, problem.paid_g_high, problem.paid_g_low, inp)


def _optimal_value(problem: InfoProblem, p0: float) -> float:
    prof = info_optimal_cutoff(problem)
    return info_value(problem, p0, p0, prof.cutoff, beta=prof.beta)


def price_of_information(base: InfoProblem, enriched: InfoProblem, p0: float) -> float:
    """Gain in optimal payoff at the correct prior ``p0`` from ``base`` to ``enriched``."""
    return _optimal_value(enriched, p0) - _optimal_value(base, p0)


_STREAM_SCHEMA = {
    "type": "object",
    "properties": {
        "sigma": {"type": "number"},
        "mu_high": {"type": "number"},
        "mu_low": {"type": "number"},
        "atoms": {"type": "array", "items": _ATOM_SCHEMA},
    },
    "required": ["sigma", "mu_high", "mu_low"],
    "additionalProperties": False,
}

INFO_SCHEMA = {
    "type": "object",
    "properties": {
        "safe_rate": {"type": "number"},
        "discount": {"type": "number"},
        "stream_a": _STREAM_SCHEMA,
        "stream_b": _STREAM_SCHEMA,
        "g_c_high": {"type": "number"},
        "g_c_low": {"type": "number"},
    },
    "required": ["safe_rate", "discount", "stream_a"],
    "additionalProperties": False,
}


def _stream_from_dict(doc: Mapping[str, Any]) -> SignalStream:
    return SignalStream(float(doc["sigma"]), float(doc["mu_high"]), float(doc["mu_low"]),
                        atoms_from_list(doc.get("atoms", ())))


def _stream_to_dict(stream: SignalStream) -> dict[str, Any]:
    return {"sigma": stream.sigma, "mu_high": stream.mu_high, "mu_low": stream.mu_low,
            "atoms": atoms_to_list(stream.atoms)}


def info_problem_from_dict(doc: Mapping[str, Any]) -> InfoProblem:
    """Build an info problem from its JSON document (schema-checked, not validated)."""
    check_schema(doc, INFO_SCHEMA)
    b = _stream_from_dict(doc["stream_b"]) if "stream_b" in doc else SignalStream.null()
    return InfoProblem(float(doc["safe_rate"]), float(doc["discount"]), _stream_from_dict(doc["stream_a"]),
                       b, float(doc.get("g_c_high", 0.0)), float(doc.get("g_c_low", 0.0)))


def info_problem_to_dict(problem: InfoProblem) -> dict[str, Any]:
    return {
        "safe_rate": problem.safe_rate,
        "discount": problem.discount,
        "stream_a": _stream_to_dict(problem.stream_a),
        "stream_b": _stream_to_dict(problem.stream_b),
        "g_c_high": problem.g_c_high,
        "g_c_low": problem.g_c_low,
    }
