"""Command line front end.

Every verb reads a JSON problem document, writes its CSV next to an echo of
the parsed problem (``problem.json``) in ``--out`` and prints a short
summary.  Exit status: 0 success, 1 malformed input, 2 a violated
assumption or out-of-domain option, 3 a numerical failure or a simulation
that disagrees with the closed form.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import re
import sys
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .bias import compare_bias
from .errors import BanditError, DomainError, NumericError, SchemaError, ValidationError
from .info import (
    InfoProblem,
    SignalStream,
    info_optimal_cutoff,
    info_problem_from_dict,
    info_problem_to_dict,
    info_value,
    validate_info,
)
from .measure import BanditProblem, problem_from_dict, problem_to_dict, validate
from .misprior import MispriorInput, misprior_value
from .sim import SimConfig, dump_path, estimate_value
from .valuation import build_profile, value_curve

__all__ = ["main", "build_parser", "CliFailure"]

EXIT_OK, EXIT_SCHEMA, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3


class CliFailure(BanditError):
    """A run finished but its result fails a check (exit 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def _fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _echo(out: Path, doc: dict) -> None:
    with (out / "problem.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_problem(args) -> BanditProblem:
    problem = problem_from_dict(_read_json(args.problem))
    validate(problem)
    _echo(args.out, problem_to_dict(problem))
    return problem


def _probability(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return p


def _cutoff(text: str) -> str | float:
    return "optimal" if text == "optimal" else _probability(text)


def _summary(**items: float) -> None:
    for key, val in items.items():
        print(f"{key}={val:.6f}")


def cmd_solve(args) -> int:
    problem = _load_problem(args)
    prof = build_profile(problem)
    _summary(alpha=prof.alpha, cutoff=prof.cutoff, c_alpha=prof.c_alpha, myopic=prof.myopic_cutoff)
    _write_csv(args.out / "solve.csv", ("alpha", "cutoff", "c_alpha", "myopic", "g_high", "g_low"),
               [(prof.alpha, prof.cutoff, prof.c_alpha, prof.myopic_cutoff, prof.g_high, prof.g_low)])
    return EXIT_OK


def cmd_value(args) -> int:
    problem = _load_problem(args)
    prof = build_profile(problem)
    if args.grid < 2:
        raise DomainError("--grid needs at least 2 points")
    grid = np.arange(args.grid) / (args.grid - 1)
    values = value_curve(prof, grid)
    rows = [(p, v, "safe" if p <= prof.cutoff else "risky") for p, v in zip(grid, values)]
    _write_csv(args.out / "curve.csv", ("p", "value", "branch"), rows)
    _summary(cutoff=prof.cutoff, value_at_half=float(value_curve(prof, [0.5])[0]))
    return EXIT_OK


def _sim_config(args, problem: BanditProblem, cutoff: float) -> SimConfig:
    horizon = args.horizon if args.horizon is not None else 20.0 / problem.discount
    q0 = args.q0 if args.q0 is not None else args.p0
    return SimConfig(args.dt, horizon, args.reps, args.seed, args.p0, q0, cutoff)


def _resolve_cutoff(args, problem: BanditProblem) -> float:
    return build_profile(problem).cutoff if args.cutoff == "optimal" else args.cutoff


def cmd_simulate(args) -> int:
    problem = _load_problem(args)
    config = _sim_config(args, problem, _resolve_cutoff(args, problem))
    estimate = estimate_value(problem, config, workers=args.workers)
    if args.expect is not None:
        closed = args.expect
    else:
        prof = build_profile(problem)
        inp = MispriorInput(config.prior_true, config.prior_subjective, config.cutoff)
        closed = misprior_value(problem, inp, alpha=prof.alpha)
    diff = abs(estimate.mean - closed)
    _write_csv(args.out / "sim.csv",
               ("mean", "std_error", "reps", "truncation_bound", "closed_form", "abs_diff"),
               [(estimate.mean, estimate.std_error, estimate.replications, estimate.truncation_bound, closed, diff)])
    _summary(mean=estimate.mean, std_error=estimate.std_error, closed_form=closed, abs_diff=diff)
    if not diff <= estimate.tolerance:
        raise CliFailure(f"CI violation: |mean - closed form| = {diff:.6g} exceeds "
                         f"3*std_error + truncation_bound = {estimate.tolerance:.6g}")
    return EXIT_OK


_ATOM_PARAM = re.compile(r"^atoms\.(\d+)\.(size|rate_high|rate_low)$")
_TOP_PARAMS = ("safe_rate", "discount", "sigma", "mu_high", "mu_low")


def _setter(name: str) -> Callable[[dict, float], None]:
    if name in _TOP_PARAMS:
        def set_top(doc: dict, x: float) -> None:
            doc[name] = x
        return set_top
    match = _ATOM_PARAM.match(name)
    if match is None:
        raise DomainError(f"unknown sweep parameter {name!r}; use one of {', '.join(_TOP_PARAMS)} "
                          "or atoms.<i>.<size|rate_high|rate_low>")
    i, field = int(match.group(1)), match.group(2)

    def set_atom(doc: dict, x: float) -> None:
        atoms = doc.get("atoms", [])
        if i >= len(atoms):
            raise DomainError(f"sweep parameter {name!r}: problem has {len(atoms)} atoms")
        atoms[i][field] = x
    return set_atom


def _axis(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise DomainError("--steps must be at least 1")
    return np.linspace(start, stop, steps)


def cmd_sweep(args) -> int:
    doc = _read_json(args.problem)
    validate(problem_from_dict(doc))
    _echo(args.out, problem_to_dict(problem_from_dict(doc)))
    names = [args.param] + ([args.param2] if args.param2 else [])
    setters = [_setter(n) for n in names]
    axes = [_axis(args.start, args.stop, args.steps)]
    if args.param2:
        axes.append(_axis(args.start2, args.stop2, args.steps2))
    rows = []
    for point in itertools.product(*axes):
        trial = json.loads(json.dumps(doc))
        for set_value, x in zip(setters, point):
            set_value(trial, float(x))
        problem = problem_from_dict(trial)
        try:
            validate(problem)
        except ValidationError as exc:
            rows.append((*point, "", "", "", "", problem.g_high, problem.g_low, exc.tag))
            continue
        prof = build_profile(problem)
        rows.append((*point, prof.alpha, prof.cutoff, prof.c_alpha, prof.myopic_cutoff,
                     prof.g_high, prof.g_low, "ok"))
    _write_csv(args.out / "sweep.csv",
               (*names, "alpha", "cutoff", "c_alpha", "myopic", "g_high", "g_low", "status"), rows)
    print(f"points={len(rows)} ok={sum(r[-1] == 'ok' for r in rows)}")
    return EXIT_OK


def cmd_price_info(args) -> int:
    enriched = info_problem_from_dict(_read_json(args.problem))
    validate_info(enriched)
    base = InfoProblem(enriched.safe_rate, enriched.discount, enriched.stream_a, SignalStream.null(),
                       enriched.g_c_high, enriched.g_c_low)
    validate_info(base)
    _echo(args.out, info_problem_to_dict(enriched))
    pb, pe = info_optimal_cutoff(base), info_optimal_cutoff(enriched)
    if args.grid < 2:
        raise DomainError("--grid needs at least 2 points")
    rows = []
    for p0 in np.arange(args.grid) / (args.grid - 1):
        vb = info_value(base, p0, p0, pb.cutoff, beta=pb.beta)
        ve = info_value(enriched, p0, p0, pe.cutoff, beta=pe.beta)
        rows.append((p0, vb, ve, ve - vb))
    _write_csv(args.out / "info.csv", ("p0", "base_value", "enriched_value", "price"), rows)
    _summary(beta_base=pb.beta, beta_enriched=pe.beta, cutoff_base=pb.cutoff, cutoff_enriched=pe.cutoff)
    return EXIT_OK


def cmd_bias_compare(args) -> int:
    problem = _load_problem(args)
    prof = build_profile(problem)
    eps = args.eps
    if not eps > 0.0:
        raise DomainError("--eps must be positive")
    if args.p0 is not None:
        priors = [args.p0]
    else:
        if args.grid < 2:
            raise DomainError("--grid needs at least 2 points")
        grid = np.arange(args.grid) / (args.grid - 1)
        priors = [p for p in grid if p - eps > prof.cutoff and p + eps <= 1.0]
    rows = []
    for p0 in priors:
        verdict = compare_bias(problem, float(p0), eps, profile=prof)
        rows.append((p0, eps, verdict.w_value, verdict.verdict.value, verdict.regime.value))
    _write_csv(args.out / "bias.csv", ("p0", "eps", "w", "verdict", "regime"), rows)
    _summary(alpha=prof.alpha, cutoff=prof.cutoff, turning_point=(prof.alpha + 2.0) / 3.0)
    print(f"rows={len(rows)}")
    return EXIT_OK


def cmd_dump_path(args) -> int:
    problem = _load_problem(args)
    config = _sim_config(args, problem, _resolve_cutoff(args, problem))
    with (args.out / "path.csv").open("w", newline="", encoding="utf-8") as fh:
        outcome = dump_path(problem, config, args.index, fh)
    stop = "none" if outcome.stop_time is None else f"{outcome.stop_time:.6f}"
    print(f"type={outcome.true_type.value} stop_time={stop} jumps={outcome.jump_count}")
    return EXIT_OK


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dt", type=float, default=1e-3, help="time step")
    p.add_argument("--horizon", type=float, default=None, help="simulated horizon (default 20/r)")
    p.add_argument("--reps", type=int, default=10_000, help="replications")
    p.add_argument("--seed", type=int, default=0, help="64-bit base seed")
    p.add_argument("--p0", type=_probability, default=0.5, help="true prior")
    p.add_argument("--q0", type=_probability, default=None, help="subjective prior (default p0)")
    p.add_argument("--cutoff", type=_cutoff, default="optimal", help="cut-off belief or 'optimal'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levy-bandit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--problem", required=True, help="JSON problem document")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.set_defaults(func=func)
        return p

    verb("solve", cmd_solve, "exponent, cut-off and value constant")
    p = verb("value", cmd_value, "value curve on a uniform grid")
    p.add_argument("--grid", type=int, default=101)

    p = verb("simulate", cmd_simulate, "Monte Carlo estimate against the closed form")
    _add_sim_flags(p)
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.add_argument("--expect", type=float, default=None,
                   help="override the closed-form value (fault injection)")

    p = verb("sweep", cmd_sweep, "policy over a grid of one or two parameters")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--param2")
    p.add_argument("--from2", dest="start2", type=float)
    p.add_argument("--to2", dest="stop2", type=float)
    p.add_argument("--steps2", type=int)

    p = verb("price-info", cmd_price_info, "value of the extra observed stream over p0")
    p.add_argument("--grid", type=int, default=101)

    p = verb("bias-compare", cmd_bias_compare, "optimist minus pessimist payoff")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--p0", type=_probability, default=None)
    p.add_argument("--grid", type=int, default=101)

    p = verb("dump-path", cmd_dump_path, "per-step record of one replication")
    _add_sim_flags(p)
    p.add_argument("--index", type=int, default=0, help="replication index")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "sweep" and args.param2 and None in (args.start2, args.stop2, args.steps2):
        parser.error("--param2 needs --from2, --to2 and --steps2")
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValidationError as exc:
        print(f"validation error: assumption {exc.tag} violated: {exc.message}", file=sys.stderr)
        return EXIT_VALIDATION
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericError, CliFailure) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
