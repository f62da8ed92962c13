"""Risky-arm types as Lévy processes with a finite, discrete jump measure.

A risky arm of type ``i`` pays ``X_i(t) = mu_i t + sigma Z(t) + L_i(t)`` where
``L_i`` is a compound Poisson process.  The jump measure is a finite list of
atoms: jumps of size ``h`` arrive at rate ``nu_i({h})``.  Keeping the support
discrete makes the likelihood ratio of Low to High exact per atom and turns
every jump integral into a finite sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping

import jsonschema

from .errors import SchemaError, ValidationError

__all__ = [
    "JumpAtom",
    "LevyArmType",
    "BanditProblem",
    "expected_rate",
    "validate",
    "problem_from_dict",
    "problem_to_dict",
    "PROBLEM_SCHEMA",
]


@dataclass(frozen=True)
class JumpAtom:
    """One point of the shared jump table.

    Attributes:
        size: Payoff carried by the jump (nonzero).
        rate_high: Arrival rate of jumps of this size under the High type.
        rate_low: Arrival rate under the Low type.
    """

    size: float
    rate_high: float
    rate_low: float

    @property
    def log_ratio(self) -> float:
        """``ln(rate_high / rate_low)``; infinite when Low never produces this jump."""
        if self.rate_low == 0.0:
            return math.inf
        return math.log(self.rate_high / self.rate_low)

    @property
    def informative(self) -> bool:
        return self.rate_high != self.rate_low


@dataclass(frozen=True)
class LevyArmType:
    """Lévy–Itô triple of one arm type.

    Attributes:
        drift: Linear drift ``mu``.
        sigma: Brownian volatility (``>= 0``).
        jumps: ``(size, rate)`` pairs of the type's own jump measure.
    """

    drift: float
    sigma: float
    jumps: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple((float(h), float(v)) for h, v in self.jumps))

    @property
    def jump_rate(self) -> float:
        """Total jump intensity (mass of the Lévy measure)."""
        return math.fsum(rate for _, rate in self.jumps)

    @property
    def mean_jump(self) -> float:
        """Expected jump size; zero when the type never jumps."""
        total = self.jump_rate
        if total == 0.0:
            return 0.0
        return math.fsum(h * rate for h, rate in self.jumps) / total


def expected_rate(arm: LevyArmType) -> float:
    """Mean payoff per unit time, ``jump_rate * mean_jump + drift``."""
    return math.fsum(h * rate for h, rate in arm.jumps) + arm.drift


@dataclass(frozen=True)
class BanditProblem:
    """Safe arm paying ``safe_rate`` against a risky arm of unknown type.

    Construction does not check the modelling assumptions; call
    :func:`validate` for that.  Use :meth:`from_atoms` to build a problem
    from the shared jump table used by the JSON format.
    """

    safe_rate: float
    discount: float
    high: LevyArmType
    low: LevyArmType

    @classmethod
    def from_atoms(
        cls,
        safe_rate: float,
        discount: float,
        sigma: float,
        mu_high: float,
        mu_low: float,
        atoms: Iterable[JumpAtom] = (),
    ) -> "BanditProblem":
        atoms = tuple(atoms)
        high = LevyArmType(mu_high, sigma, tuple((a.size, a.rate_high) for a in atoms))
        low = LevyArmType(mu_low, sigma, tuple((a.size, a.rate_low) for a in atoms if a.rate_low != 0.0))
        return cls(float(safe_rate), float(discount), high, low)

    @cached_property
    def atoms(self) -> tuple[JumpAtom, ...]:
        """Shared jump table: every size charged by either type, rates merged per size."""
        sizes: dict[float, list[float]] = {}
        for h, rate in self.high.jumps:
            sizes.setdefault(h, [0.0, 0.0])[0] += rate
        for h, rate in self.low.jumps:
            sizes.setdefault(h, [0.0, 0.0])[1] += rate
        return tuple(JumpAtom(h, rh, rl) for h, (rh, rl) in sizes.items())

    @property
    def sigma(self) -> float:
        return self.high.sigma

    @property
    def g_high(self) -> float:
        return expected_rate(self.high)

    @property
    def g_low(self) -> float:
        return expected_rate(self.low)

    @property
    def drift_gap(self) -> float:
        return self.high.drift - self.low.drift

    @property
    def drift_signal(self) -> float:
        """``(mu_high - mu_low) / sigma``, defined as 0 when the drifts coincide."""
        if self.drift_gap == 0.0:
            return 0.0
        return self.drift_gap / self.sigma

    def replace(self, **changes: Any) -> "BanditProblem":
        """Copy with some JSON-level fields changed (``safe_rate``, ``mu_high``, ...)."""
        doc = problem_to_dict(self)
        doc.update(changes)
        return problem_from_dict(doc)


def _fail(tag: str, message: str):
    raise ValidationError(tag, message)


def validate(problem: BanditProblem) -> None:
    """Check a problem against assumptions A1–A3 and informativeness.

    Structural checks on the numbers and atoms run first; the modelling
    assumptions follow in order, ending with the zero-volatility rule.

    Raises:
        ValidationError: carrying the tag of the first violated condition.
    """
    numbers = [problem.safe_rate, problem.discount, problem.high.drift, problem.low.drift,
               problem.high.sigma, problem.low.sigma]
    numbers += [x for a in problem.atoms for x in (a.size, a.rate_high, a.rate_low)]
    if not all(math.isfinite(x) for x in numbers):
        _fail("finite", "all parameters must be finite numbers")
    if problem.discount <= 0.0:
        _fail("discount", f"discount rate must be positive, got {problem.discount}")
    if problem.high.sigma < 0.0 or problem.low.sigma < 0.0:
        _fail("sigma", "volatility must be nonnegative")
    for atom in problem.atoms:
        if atom.size == 0.0:
            _fail("atom", "jump size 0 is not a jump")
        if atom.rate_high < 0.0 or atom.rate_low < 0.0:
            _fail("atom", f"negative jump rate at size {atom.size}")

    g1, g2, s = problem.g_high, problem.g_low, problem.safe_rate
    if not g2 < s < g1:
        _fail("A1", f"need g_low < safe_rate < g_high, got {g2} < {s} < {g1}")
    if problem.high.sigma != problem.low.sigma:
        _fail("A2", f"volatilities differ: {problem.high.sigma} vs {problem.low.sigma}")
    for atom in problem.atoms:
        if atom.rate_low > atom.rate_high:
            _fail("A3", f"Low rate {atom.rate_low} exceeds High rate {atom.rate_high} at size {atom.size}")
    for atom in problem.atoms:
        if atom.rate_high == 0.0:
            _fail("atom", f"atom at size {atom.size} has zero High rate")
    if problem.drift_gap == 0.0 and not any(a.informative for a in problem.atoms):
        _fail("uninformative", "equal drifts and identical jump measures make the types indistinguishable")
    if problem.drift_gap != 0.0 and problem.sigma == 0.0:
        _fail("sigma-zero-with-drift-gap", "drifts differ but sigma is 0, so the type is revealed instantly")


_ATOM_SCHEMA = {
    "type": "object",
    "properties": {
        "size": {"type": "number"},
        "rate_high": {"type": "number"},
        "rate_low": {"type": "number"},
    },
    "required": ["size", "rate_high", "rate_low"],
    "additionalProperties": False,
}

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "safe_rate": {"type": "number"},
        "discount": {"type": "number"},
        "sigma": {"type": "number"},
        "mu_high": {"type": "number"},
        "mu_low": {"type": "number"},
        "atoms": {"type": "array", "items": _ATOM_SCHEMA},
    },
    "required": ["safe_rate", "discount", "sigma", "mu_high", "mu_low"],
    "additionalProperties": False,
}


def check_schema(doc: Any, schema: Mapping[str, Any]) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None


def atoms_from_list(items: Iterable[Mapping[str, float]]) -> tuple[JumpAtom, ...]:
    return tuple(JumpAtom(float(a["size"]), float(a["rate_high"]), float(a["rate_low"])) for a in items)


def problem_from_dict(doc: Mapping[str, Any]) -> BanditProblem:
    """Build a problem from its JSON document (schema-checked, not validated)."""
    check_schema(doc, PROBLEM_SCHEMA)
    return BanditProblem.from_atoms(
        doc["safe_rate"], doc["discount"], float(doc["sigma"]),
        float(doc["mu_high"]), float(doc["mu_low"]), atoms_from_list(doc.get("atoms", ())),
    )


def atoms_to_list(atoms: Iterable[JumpAtom]) -> list[dict[str, float]]:
    return [{"size": a.size, "rate_high": a.rate_high, "rate_low": a.rate_low} for a in atoms]


def problem_to_dict(problem: BanditProblem) -> dict[str, Any]:
    if problem.high.sigma != problem.low.sigma:
        raise ValidationError("A2", "the JSON format stores a single sigma")
    return {
        "safe_rate": problem.safe_rate,
        "discount": problem.discount,
        "sigma": problem.sigma,
        "mu_high": problem.high.drift,
        "mu_low": problem.low.drift,
        "atoms": atoms_to_list(problem.atoms),
    }
