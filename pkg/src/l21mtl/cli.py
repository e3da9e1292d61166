"""Command-line front end.

    l21mtl --command gen   --out DIR [--n N --k K --m-per-task M --sparsity S --noise SIGMA --seed SEED]
    l21mtl --command solve --input data.csv --out DIR (--rho R | --z Z) [--reformulation amtfl1|amtfl2]
    l21mtl --command path  --input data.csv --out DIR --params 1,0.5,0.1 [--warm]
    l21mtl --command bench --input data.csv --out DIR (--rho R | --z Z)

Exit status: 0 converged, 1 error, 2 iteration cap (or benchmark target missed).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence


from .core import InvalidInputError
from .data import (ensure_dir, generate_synthetic, load_dataset, save_dataset, write_matrix,
                   write_table)
from .losses import LOSSES
from .mtfl import (Amtfl1Spec, Amtfl2Spec, selected_rows, solve, solve_path, weights_of)
from .projections import L21Ball
from .solver import SolverConfig, SolverError

log = logging.getLogger("l21mtl")

EXIT_OK, EXIT_ERROR, EXIT_CAP = 0, 1, 2

TRACE_HEADER = ["iteration", "objective", "gamma", "linesearch_trials", "elapsed_seconds"]
PATH_HEADER = ["param", "objective", "iterations", "selected_rows"]
BENCH_HEADER = ["method", "iterations", "seconds", "objective", "reached_target"]


@dataclass
class RunConfig:
    command: str
    loss: str = "least-squares"
    reformulation: str = "amtfl1"
    rho: Optional[float] = None
    z: Optional[float] = None
    params: Optional[List[float]] = None
    warm: bool = False
    l0: float = 1.0
    tol: float = 1e-4
    max_iters: int = 1000
    input: Optional[str] = None
    out: str = "."
    seed: int = 0
    n: int = 28
    k: int = 20
    m_per_task: int = 50
    sparsity: float = 0.5
    noise: float = 0.1
    target_gap: float = 1e-4

    def solver_config(self, **overrides) -> SolverConfig:
        kw = dict(L0=self.l0, rel_gap_tol=self.tol, max_iterations=self.max_iters)
        kw.update(overrides)
        return SolverConfig(**kw)


def _spec(cfg: RunConfig, dataset, param=None):
    loss = LOSSES[cfg.loss]
    if cfg.reformulation == "amtfl1":
        rho = cfg.rho if param is None else param
        if rho is None:
            raise InvalidInputError("--rho is required for amtfl1")
        if cfg.z is not None and param is None:
            raise InvalidInputError("--z does not apply to amtfl1; use --rho")
        return Amtfl1Spec(loss, dataset, rho)
    z = cfg.z if param is None else param
    if z is None:
        raise InvalidInputError("--z is required for amtfl2")
    if cfg.rho is not None and param is None:
        raise InvalidInputError("--rho does not apply to amtfl2; use --z")
    return Amtfl2Spec(loss, dataset, L21Ball(z))


def _load(cfg: RunConfig):
    if not cfg.input:
        raise InvalidInputError(f"--input is required for --command {cfg.command}")
    return load_dataset(cfg.input)


def _trace_rows(result):
    return [list(r) for r in result.trace]


def _cmd_gen(cfg: RunConfig) -> int:
    out = ensure_dir(cfg.out)
    d, W = generate_synthetic(cfg.n, cfg.k, cfg.m_per_task, cfg.sparsity, cfg.noise, cfg.seed)
    save_dataset(d, os.path.join(out, "dataset.csv"))
    write_matrix(W, os.path.join(out, "true_weights.csv"))
    log.info("wrote %d tasks, %d features, %d samples to %s", d.k, d.n, d.m, out)
    return EXIT_OK


def _cmd_solve(cfg: RunConfig) -> int:
    d = _load(cfg)
    spec = _spec(cfg, d)
    res = solve(spec, cfg.solver_config())
    out = ensure_dir(cfg.out)
    write_matrix(weights_of(spec, res.solution), os.path.join(out, "weights.csv"))
    write_table(os.path.join(out, "trace.csv"), TRACE_HEADER, _trace_rows(res))
    log.info("objective %.10g after %d iterations (converged=%s)",
             res.final_objective, res.iterations, res.converged)
    return EXIT_OK if res.converged else EXIT_CAP


def _cmd_path(cfg: RunConfig) -> int:
    if not cfg.params:
        raise InvalidInputError("--params is required for --command path")
    d = _load(cfg)
    template = _spec(cfg, d, param=cfg.params[0])
    path = solve_path(template, cfg.params, cfg.warm, cfg.solver_config())
    out = ensure_dir(cfg.out)
    rows = []
    for i, p in enumerate(path.points, start=1):
        write_matrix(p.W, os.path.join(out, f"weights_{i:03d}.csv"))
        rows.append([p.param, p.objective, p.iterations, int(selected_rows(p.W).sum())])
    write_table(os.path.join(out, "path_summary.csv"), PATH_HEADER, rows)
    log.info("%s path: %d problems, %d total iterations",
             path.mode, len(path.points), path.total_iterations)
    return EXIT_OK if all(p.converged for p in path.points) else EXIT_CAP


def _cmd_bench(cfg: RunConfig) -> int:
    d = _load(cfg)
    spec = _spec(cfg, d)
    # reference optimum from a tightly converged accelerated run
    ref = solve(spec, cfg.solver_config(rel_gap_tol=1e-12, max_iterations=20 * cfg.max_iters))
    target = ref.final_objective + cfg.target_gap * max(1.0, abs(ref.final_objective))
    rows, reached_all = [], True
    for method in ("nesterov", "gradient"):
        t0 = time.perf_counter()
        res = solve(spec, cfg.solver_config(target_objective=target), method=method)
        secs = time.perf_counter() - t0
        rows.append([method, res.iterations, secs, res.final_objective, int(res.converged)])
        reached_all &= res.converged
        log.info("%s: %d iterations, %.4fs", method, res.iterations, secs)
    out = ensure_dir(cfg.out)
    write_table(os.path.join(out, "bench.csv"), BENCH_HEADER, rows)
    return EXIT_OK if reached_all else EXIT_CAP


COMMANDS = {"gen": _cmd_gen, "solve": _cmd_solve, "path": _cmd_path, "bench": _cmd_bench}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (InvalidInputError, SolverError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _float_list(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # exit status 2 is reserved for "iteration cap reached"
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="l21mtl", description="l2,1-regularized multi-task feature learning")
    p.add_argument("--command", required=True, choices=sorted(COMMANDS))
    p.add_argument("--loss", default="least-squares", choices=sorted(LOSSES))
    p.add_argument("--reformulation", default="amtfl1", choices=["amtfl1", "amtfl2"])
    p.add_argument("--rho", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--params", type=_float_list, help="comma list: decreasing rho or increasing z")
    p.add_argument("--warm", action="store_true", help="warm-start each path problem")
    p.add_argument("--l0", type=float, default=1.0, help="initial step-scale guess")
    p.add_argument("--tol", type=float, default=1e-4, help="relative objective change to stop at")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--input")
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target-gap", type=float, default=1e-4,
                   help="bench: relative gap above the reference optimum that counts as reached")
    g = p.add_argument_group("gen")
    g.add_argument("--n", type=int, default=28)
    g.add_argument("--k", type=int, default=20)
    g.add_argument("--m-per-task", type=int, default=50)
    g.add_argument("--sparsity", type=float, default=0.5)
    g.add_argument("--noise", type=float, default=0.1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    kw = vars(args)
    kw.pop("verbose")
    return run(RunConfig(**kw))


if __name__ == "__main__":
    sys.exit(main())
