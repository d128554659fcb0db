"""Seeded parameter sweeps: generate, solve, re-verify, one row per run.

Rows have a fixed column set (`COLUMNS`).  ``params`` packs the generator
parameters of the cell as ``key=value`` pairs joined by ``;`` and ``error``
holds ``ExceptionType: message`` for failed runs.  ``wall_time`` is only
filled when timing is requested, so that default output is byte-stable.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

from .errors import InputError
from .generators import (
    gen_clique_grid,
    gen_disjoint_cliques,
    gen_random_list_coloring,
    gen_random_local_sparse,
    reduce_list_coloring,
)
from .graph import MultipartiteGraph, is_independent_transversal, is_ks_free_transversal
from .ksfree import BACKENDS, run_ksfree
from .lll import moser_tardos_it
from .nibble import DEFAULT_RETRY_CAP, solve_it_detailed
from .oracle import DEFAULT_NODE_BUDGET, brute_force_transversal
from .seeding import derive_seed

COLUMNS = (
    "cell",
    "rep",
    "generator",
    "params",
    "solver",
    "epsilon",
    "s",
    "instance_seed",
    "solver_seed",
    "success",
    "verified",
    "iterations",
    "resamples",
    "error",
    "wall_time",
)

GENERATORS = {
    "random": lambda seed, r, n, delta, local: gen_random_local_sparse(r, n, delta, local, seed),
    "disjoint-cliques": lambda seed, delta: gen_disjoint_cliques(delta),
    "clique-grid": lambda seed, delta, n: gen_clique_grid(delta, n),
    "list-coloring": lambda seed, vertices, degree, list_size, palette: reduce_list_coloring(
        gen_random_list_coloring(vertices, degree, list_size, palette, seed)
    ),
}
SOLVERS = ("lll", "nibble", "ksfree", "oracle")


@dataclass
class SolverConfig:
    epsilon: float = 0.5
    gamma: float = 0.5
    s: int = 2
    seed: int = 0
    backend: str = "lll"
    retry_cap: int = DEFAULT_RETRY_CAP
    max_resamples: int = 10**6
    max_retries: int = 1000
    node_budget: int = DEFAULT_NODE_BUDGET
    early_exit: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.gamma < 1:
            raise InputError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.s < 2:
            raise InputError(f"s must be at least 2, got {self.s}")
        if self.backend not in BACKENDS:
            raise InputError(f"unknown backend {self.backend!r}")
        for name in ("retry_cap", "max_resamples", "max_retries", "node_budget"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.seed < 0:
            raise InputError("seed must be non-negative")


@dataclass
class ExperimentSpec:
    generator: str
    grid: dict[str, list]
    solver: str = "lll"
    configs: list[SolverConfig] = field(default_factory=lambda: [SolverConfig()])
    repetitions: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise InputError(f"unknown generator {self.generator!r}; choose from {', '.join(GENERATORS)}")
        if self.solver not in SOLVERS:
            raise InputError(f"unknown solver {self.solver!r}; choose from {', '.join(SOLVERS)}")
        if not self.grid or any(not isinstance(v, list) or not v for v in self.grid.values()):
            raise InputError("grid must map each parameter to a non-empty list")
        if not self.configs:
            raise InputError("configs must be non-empty")
        if self.repetitions < 1:
            raise InputError("repetitions must be at least 1")
        self.configs = [c if isinstance(c, SolverConfig) else SolverConfig(**c) for c in self.configs]

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentSpec":
        if not isinstance(doc, dict):
            raise InputError("experiment spec must be a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise InputError(f"unknown experiment fields: {sorted(extra)}")
        doc = dict(doc)
        try:
            doc["configs"] = [SolverConfig(**c) for c in doc.get("configs", [{}])]
            return cls(**doc)
        except TypeError as exc:
            raise InputError(f"experiment spec: {exc}") from exc

    def cells(self) -> list[tuple[dict, SolverConfig]]:
        keys = sorted(self.grid)
        combos = [dict(zip(keys, vals)) for vals in itertools.product(*(self.grid[k] for k in keys))]
        return [(p, c) for p in combos for c in self.configs]


def _solve(g: MultipartiteGraph, solver: str, cfg: SolverConfig, seed: int):
    """Returns (transversal or None, iterations, resamples, s used for verification)."""
    if solver == "lll":
        rep = moser_tardos_it(g, seed, cfg.max_resamples)
        return rep.transversal, 0, rep.resample_count, 2
    if solver == "nibble":
        sol = solve_it_detailed(
            g,
            cfg.epsilon,
            seed,
            retry_cap=cfg.retry_cap,
            early_exit=cfg.early_exit,
            max_resamples=cfg.max_resamples,
        )
        return sol.transversal, len(sol.trace), sol.finisher_resamples, 2
    if solver == "ksfree":
        opts = {"node_budget": cfg.node_budget} if cfg.backend == "oracle" else {}
        res = run_ksfree(g, cfg.s, cfg.epsilon, cfg.backend, seed, **opts)
        return res.transversal, res.coloring.moves, 0, cfg.s
    res = brute_force_transversal(g, cfg.s, "decide", cfg.node_budget)
    return res.witness, res.nodes_explored, 0, cfg.s


def _run_row(args) -> dict:
    spec, cell, rep, params, cfg, timing = args
    inst_seed = derive_seed(spec.master_seed, cell, rep)
    solver_seed = derive_seed(spec.master_seed, cell, rep, 1, cfg.seed)
    row = {
        "cell": cell,
        "rep": rep,
        "generator": spec.generator,
        "params": ";".join(f"{k}={params[k]}" for k in sorted(params)),
        "solver": spec.solver if spec.solver != "ksfree" else f"ksfree/{cfg.backend}",
        "epsilon": cfg.epsilon,
        "s": cfg.s,
        "instance_seed": inst_seed,
        "solver_seed": solver_seed,
        "success": False,
        "verified": False,
        "iterations": 0,
        "resamples": 0,
        "error": "",
        "wall_time": "",
    }
    start = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g = GENERATORS[spec.generator](inst_seed, **params)
            t, iters, resamples, s = _solve(g, spec.solver, cfg, solver_seed)
        row["iterations"], row["resamples"] = iters, resamples
        if t is None:
            row["error"] = "no transversal found"
        else:
            ok = is_independent_transversal(g, t) if s == 2 else is_ks_free_transversal(g, t, s)
            row["verified"] = ok
            row["success"] = ok
            if not ok:
                row["error"] = "solver output failed verification"
    except Exception as exc:  # rows record failures instead of aborting the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
    if timing:
        row["wall_time"] = round(time.perf_counter() - start, 6)
    return row


def run_experiment(spec: ExperimentSpec, *, timing: bool = False, workers: int = 1) -> list[dict]:
    """One row per (cell, repetition), ordered by cell index then repetition."""
    jobs = [
        (spec, cell, rep, params, cfg, timing)
        for cell, (params, cfg) in enumerate(spec.cells())
        for rep in range(spec.repetitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_row, jobs))
    return [_run_row(j) for j in jobs]


def rows_to_csv(rows: list[dict], columns=COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
