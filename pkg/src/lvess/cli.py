"""Command-line front end.

Subcommands::

    lvess check     --model m.json [--out report.json]
    lvess ess       --model m.json [--tol 1e-10] [--enumerate] [--out ess.json]
    lvess enumerate --model m.json [--tol 1e-10] [--out points.json]
    lvess embed     --model lv.json [--out embedding.json]
    lvess simulate  --model m.json [--n0 0.1,0.1 | --seed 7] [--t-end 100] [--out traj.csv]

Exit status is 0 on success, 1 when a hypothesis fails or a solver does not
converge, and 2 on malformed input.

``simulate`` writes the trajectory CSV (columns ``t,n_1..n_N,F,dFdt``) to
``--out`` or stdout, and a JSON summary to ``--summary`` if given,
otherwise to stdout when ``--out`` is a file and to stderr when the CSV
goes to stdout.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from .assumptions import check_assumptions
from .equilibrium import enumerate_stationary_points, solve_ess
from .errors import (HypothesisViolation, InvariantError, LvessError, MaxStepsExceeded,
                     NoBalancing, NoConvergence, NonFiniteState, NotBalanced,
                     NotPositiveDefinite, ParseError, StepUnderflow, TooManySubsets)
from .io import load_model
from .models import LotkaVolterraModel
from .simulator import SimOptions, simulate
from .symmetry import embed_lotka_volterra, to_generalized

log = logging.getLogger("lvess")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SUBCOMMANDS = ("check", "ess", "simulate", "embed", "enumerate")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    model: str
    out: str | None = None
    summary: str | None = None
    tol: float = 1e-10
    t_end: float = 100.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 1_000_000
    record_stride: int = 1
    n0: tuple | None = None
    seed: int | None = None
    enumerate: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InvariantError(f"unknown subcommand {self.subcommand!r}")
        if not self.model:
            raise InvariantError("model path is empty")
        if self.out == "" or self.summary == "":
            raise InvariantError("output path is empty")
        for name in ("tol", "t_end", "rel_tol", "abs_tol"):
            if not getattr(self, name) > 0:
                raise InvariantError(f"--{name.replace('_', '-')} must be positive")


class _Failure(Exception):
    """A hypothesis or solver failure that should exit with status 1."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(type(obj).__name__)


def _sanitize(obj):
    # JSON has no infinities; spell them out
    if isinstance(obj, float) and not np.isfinite(obj):
        return "nan" if np.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _emit(text: str, path: str | None, stream=None) -> None:
    if path is None:
        (stream or sys.stdout).write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(payload) -> str:
    return json.dumps(_sanitize(payload), indent=2, default=_json_default) + "\n"


def _generalized(raw):
    try:
        return to_generalized(raw)
    except (NoBalancing, NotBalanced) as exc:
        raise _Failure(f"hypothesis (ii) fails: {exc}") from exc
    except NotPositiveDefinite as exc:
        raise _Failure(f"interaction matrix is not positive definite after symmetrization: {exc}") from exc


def _parse_n0(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise InvariantError(f"--n0 must be a comma-separated list of numbers, got {text!r}") from None


def _cmd_check(cfg, raw):
    report = check_assumptions(_generalized(raw), tol=cfg.tol)
    _emit(_dump_json(report.to_dict()), cfg.out)
    if not report.ok:
        raise _Failure("hypotheses (i)-(iii) do not all hold")


def _cmd_ess(cfg, raw):
    model = _generalized(raw)
    try:
        result = solve_ess(model, tol=cfg.tol)
    except (HypothesisViolation, NoConvergence) as exc:
        raise _Failure(str(exc)) from exc
    payload = result.to_dict()
    if cfg.enumerate:
        payload = {"ess": payload, "stationary_points": _points(model, cfg.tol)}
    _emit(_dump_json(payload), cfg.out)


def _points(model, tol):
    try:
        return [p.to_dict() for p in enumerate_stationary_points(model, tol=tol)]
    except TooManySubsets as exc:
        raise _Failure(str(exc)) from exc


def _cmd_enumerate(cfg, raw):
    _emit(_dump_json(_points(_generalized(raw), cfg.tol)), cfg.out)


def _cmd_embed(cfg, raw):
    if not isinstance(raw, LotkaVolterraModel):
        raise InvariantError("embed needs a lotka_volterra model file")
    try:
        result = embed_lotka_volterra(raw)
    except (NoBalancing, NotBalanced, NotPositiveDefinite) as exc:
        raise _Failure(str(exc)) from exc
    _emit(_dump_json(result.to_dict()), cfg.out)


def _cmd_simulate(cfg, raw):
    model = _generalized(raw)
    if cfg.n0 is not None:
        n0 = np.array(cfg.n0, dtype=float)
        if n0.shape != (model.N,):
            raise InvariantError(f"--n0 has {n0.size} entries, model has {model.N} species")
        if np.any(n0 < 0) or not np.all(np.isfinite(n0)):
            raise InvariantError("--n0 must be finite and nonnegative")
    else:
        n0 = np.random.default_rng(cfg.seed).uniform(0.05, 1.0, model.N)
    opts = SimOptions(t_end=cfg.t_end, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
                      max_steps=cfg.max_steps, record_stride=cfg.record_stride)
    try:
        traj = simulate(model, n0, opts)
    except MaxStepsExceeded as exc:
        traj = exc.trajectory
        log.error("%s", exc)
    except (StepUnderflow, NonFiniteState) as exc:
        raise _Failure(str(exc)) from exc

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"n_{i + 1}" for i in range(model.N)] + ["F", "dFdt"])
    for t, n, f, d in zip(traj.times, traj.states, traj.F_values, traj.dissipation):
        writer.writerow([_fmt(t)] + [_fmt(v) for v in n] + [_fmt(f), _fmt(d)])
    _emit(buf.getvalue(), cfg.out)

    summary = traj.summary()
    summary["n0"] = n0.tolist()
    text = _dump_json(summary)
    if cfg.summary is not None:
        _emit(text, cfg.summary)
    else:
        _emit(text, None, sys.stdout if cfg.out is not None else sys.stderr)
    if traj.terminated_by == "max_steps":
        raise _Failure("maximum number of steps exceeded")


_COMMANDS = {
    "check": _cmd_check,
    "ess": _cmd_ess,
    "simulate": _cmd_simulate,
    "embed": _cmd_embed,
    "enumerate": _cmd_enumerate,
}


def run(config: RunConfig) -> int:
    """Execute one subcommand; returns the exit status."""
    try:
        raw = load_model(config.model)
        _COMMANDS[config.subcommand](config, raw)
    except (ParseError, InvariantError, OSError, ValueError) as exc:
        kind = type(exc).__name__
        print(f"lvess: {kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Failure as exc:
        print(f"lvess: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except LvessError as exc:
        print(f"lvess: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvess", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--model", required=True, help="model JSON file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--tol", type=float, default=1e-10, help="solver tolerance")
        return p

    common(sub.add_parser("check", help="check hypotheses (i)-(iv)"))
    p = common(sub.add_parser("ess", help="compute the ESS"))
    p.add_argument("--enumerate", action="store_true", help="also list all stationary points")
    common(sub.add_parser("enumerate", help="list stationary points on every support"))
    common(sub.add_parser("embed", help="spectral embedding of a Lotka-Volterra model"))
    p = common(sub.add_parser("simulate", help="integrate and write a CSV trajectory"))
    p.add_argument("--n0", help="initial state, comma separated")
    p.add_argument("--seed", type=int, help="seed for a random initial state when --n0 is absent")
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--rel-tol", type=float, default=1e-8)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.add_argument("--record-stride", type=int, default=1)
    p.add_argument("--summary", help="path for the JSON summary")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            subcommand=args.subcommand,
            model=args.model,
            out=args.out,
            summary=getattr(args, "summary", None),
            tol=args.tol,
            t_end=getattr(args, "t_end", 100.0),
            rel_tol=getattr(args, "rel_tol", 1e-8),
            abs_tol=getattr(args, "abs_tol", 1e-10),
            max_steps=getattr(args, "max_steps", 1_000_000),
            record_stride=getattr(args, "record_stride", 1),
            n0=_parse_n0(args.n0) if getattr(args, "n0", None) else None,
            seed=getattr(args, "seed", None),
            enumerate=getattr(args, "enumerate", False),
        )
    except InvariantError as exc:
        print(f"lvess: InvariantError: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
