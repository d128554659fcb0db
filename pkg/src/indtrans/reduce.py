"""Shrinking the local degree of an instance to a constant.

Random halving keeps one vertex from each consecutive pair inside a part,
which roughly halves degrees and local degrees.  After ``j`` halvings,
subsampling keeps each vertex with probability ``Delta^(-2/3)``, which drives
the local degree below 10.  Every random step is rejection-sampled against
explicit predicates, and the predicates are re-checked on the returned graph.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, SolverFailure
from .graph import MultipartiteGraph, _induced, compute_stats
from .seeding import derive_seed, rng_for

DEFAULT_MAX_RETRIES = 1000
SUBSAMPLE_LOCAL_CAP = 10


@dataclass
class ReductionSchedule:
    j: int
    delta_seq: list[float]
    d_seq: list[float]
    gamma: float
    epsilon: float
    case: str
    claims: dict[str, bool] = field(default_factory=dict)

    @property
    def delta(self) -> float:
        return self.delta_seq[0]

    def failed_claims(self) -> list[str]:
        return [k for k, ok in self.claims.items() if not ok]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "j": self.j,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "delta_seq": self.delta_seq,
            "d_seq": self.d_seq,
            "claims": self.claims,
        }


def _halving_step(x: float) -> float:
    return x / 2 + x ** (2 / 3)


def evaluate_claims(delta_seq, d_seq, delta, gamma, epsilon) -> dict[str, bool]:
    j = len(delta_seq) - 1
    dj = delta_seq[-1]
    return {
        "delta_j_lower": dj > gamma ** (-4 / 3) / 2,
        "delta_j_upper": dj <= (1 + epsilon / 4) * delta / 2**j,
        "d_j_small": d_seq[-1] <= 8 * dj**0.25,
        "d_t_large": all(d > math.log(x) ** 4 for d, x in zip(d_seq[:-1], delta_seq[:-1])),
        "cube_root_telescope": dj ** (1 / 3) <= delta ** (1 / 3) / 2 ** (j / 3) + 4,
    }


def plan_reduction(delta: int, gamma: float, epsilon: float) -> ReductionSchedule:
    """Choose the number of halvings and the degree bounds after each one.

    With ``gamma^(-4/3) >= delta`` no halving is needed.  Otherwise ``j`` is
    the integer with ``2^(j-1) < gamma^(4/3) delta <= 2^j``.  The asymptotic
    claims about the resulting sequences are evaluated and stored in
    ``claims``; at small ``delta`` some of them are expected to be false.
    """
    if not 0 < gamma < 1:
        raise InputError(f"gamma must lie in (0, 1), got {gamma}")
    if delta < 1:
        raise InputError(f"delta must be at least 1, got {delta}")
    if not epsilon > 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= 1:
        warnings.warn("epsilon >= 1 is outside the range the halving bounds are derived for", stacklevel=2)
    x = gamma ** (4 / 3) * delta
    # x is often an exact power of two computed with rounding error
    tol = 1 + 1e-12
    if x <= tol:
        case, j = "direct", 0
    else:
        case = "halving"
        j = max(0, math.ceil(math.log2(x)))
        while 2**j * tol < x:
            j += 1
        while j > 0 and 2 ** (j - 1) * tol >= x:
            j -= 1
    delta_seq = [float(delta)]
    d_seq = [gamma * delta]
    for _ in range(j):
        delta_seq.append(_halving_step(delta_seq[-1]))
        d_seq.append(_halving_step(d_seq[-1]))
    claims = evaluate_claims(delta_seq, d_seq, delta, gamma, epsilon) if j else {}
    return ReductionSchedule(j, delta_seq, d_seq, float(gamma), float(epsilon), case, claims)


def _local_into(g: MultipartiteGraph, target: np.ndarray) -> int:
    """Largest number of ``target`` neighbors any vertex has inside one other part."""
    if g.num_edges == 0:
        return 0
    rows = np.repeat(np.arange(g.num_vertices), g.degrees())
    cols = g.indices
    other = g.part_index[cols]
    sel = target[cols] & (g.part_index[rows] != other)
    if not sel.any():
        return 0
    keys = rows[sel] * g.num_parts + other[sel]
    bounds = np.flatnonzero(np.diff(keys)) + 1
    return int(np.diff(np.concatenate([[0], bounds, [len(keys)]])).max())


def _count_into(g: MultipartiteGraph, target: np.ndarray) -> np.ndarray:
    eu, ev = g.edge_index
    n = g.num_vertices
    return np.bincount(eu[target[ev]], minlength=n) + np.bincount(ev[target[eu]], minlength=n)


def _truncate(g: MultipartiteGraph, target_sizes: np.ndarray) -> MultipartiteGraph:
    """Keep the ``target_sizes[k]`` smallest ids of each part."""
    order = np.lexsort((g.vertex_ids, g.part_index))
    rank = np.empty(g.num_vertices, np.int64)
    rank[order] = np.arange(g.num_vertices) - g.offsets[g.part_index[order]]
    keep = rank < target_sizes[g.part_index]
    return g if keep.all() else _induced(g, keep)


@dataclass
class StageReport:
    stage: str
    attempts: int
    stats: dict

    def to_json(self) -> dict:
        return {"stage": self.stage, "attempts": self.attempts, **self.stats}


def _halve(g, d, seed, max_retries, delta):
    sizes = g.part_sizes()
    if np.any(sizes % 2):
        raise InputError(f"part {int(np.flatnonzero(sizes % 2)[0])} has odd size; halving needs even parts")
    base = compute_stats(g)
    if base.local_degree > d:
        raise InputError(f"local degree {base.local_degree} exceeds the declared bound d = {d:g}")
    delta = base.max_degree if delta is None else delta
    deg_cap = _halving_step(delta) if delta > 0 else 0.0
    loc_cap = _halving_step(d) if d > 0 else 0.0
    pairs = g.num_vertices // 2
    best = None
    for attempt in range(max_retries):
        coin = rng_for(seed, attempt).integers(2, size=pairs)
        keep = np.zeros(g.num_vertices, bool)
        keep[2 * np.arange(pairs) + coin] = True
        sub = _induced(g, keep)
        st = compute_stats(sub)
        if st.max_degree <= deg_cap and st.local_degree <= loc_cap:
            return sub, attempt + 1, st
        excess = max(st.max_degree - deg_cap, 0) + max(st.local_degree - loc_cap, 0)
        if best is None or excess < best[0]:
            best = (excess, st)
    raise SolverFailure(
        f"no halving out of {max_retries} met degree <= {deg_cap:g} and local degree <= {loc_cap:g}",
        stage="halving",
        stats={**best[1].as_dict(), "degree_cap": deg_cap, "local_cap": loc_cap},
    )


def random_halving(
    g: MultipartiteGraph,
    d: float,
    seed: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
    *,
    delta: float | None = None,
) -> MultipartiteGraph:
    """Keep one vertex from each consecutive pair of every part.

    Redraws until max degree ``<= delta/2 + delta^(2/3)`` and local degree
    ``<= d/2 + d^(2/3)``; ``delta`` defaults to the max degree of ``g``.
    """
    return _halve(g, d, seed, max_retries, delta)[0]


def _subsample(g, epsilon, seed, max_retries, delta):
    if not epsilon > 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    base = compute_stats(g)
    if delta is None:
        delta = base.max_degree
    elif delta < base.max_degree:
        raise InputError(f"declared delta {delta:g} is below the observed max degree {base.max_degree}")
    # an edgeless graph still needs a finite sampling rate
    delta = max(float(delta), 1.0)
    root = delta ** (1 / 3)
    if base.local_degree > root:
        raise InputError(f"local degree {base.local_degree} exceeds delta^(1/3) = {root:.4g}")
    target = math.ceil((1 + epsilon) * delta)
    if g.num_parts and base.min_part_size < target:
        raise InputError(f"smallest part has {base.min_part_size} vertices, need (1+eps)*delta = {target}")
    g = _truncate(g, np.full(g.num_parts, target))

    p = delta ** (-2 / 3)
    deg_cap = (1 + epsilon / 3) * root
    size_floor = (1 + 2 * epsilon / 3) * root
    best = None
    for attempt in range(max_retries):
        keep = rng_for(seed, attempt).random(g.num_vertices) < p
        worst_deg = int(_count_into(g, keep).max()) if g.num_vertices else 0
        worst_local = _local_into(g, keep)
        kept = np.bincount(g.part_index[keep], minlength=g.num_parts)
        smallest = int(kept.min()) if kept.size else 0
        ok = (
            worst_deg <= deg_cap,
            worst_local < SUBSAMPLE_LOCAL_CAP,
            smallest >= size_floor or not g.num_parts,
        )
        if all(ok):
            sub = _induced(g, keep)
            st = compute_stats(sub)
            if st.max_degree > deg_cap or st.local_degree >= SUBSAMPLE_LOCAL_CAP or st.min_part_size < size_floor:
                raise RuntimeError("subsample acceptance disagrees with the recomputed stats")
            return sub, attempt + 1, st, {"delta": delta, "degree_cap": deg_cap, "part_floor": size_floor}
        score = (sum(not x for x in ok), worst_deg - deg_cap + worst_local + max(size_floor - smallest, 0))
        if best is None or score < best[0]:
            best = (score, {"max_degree": worst_deg, "local_degree": worst_local, "min_part_size": smallest})
    raise SolverFailure(
        f"no subsample out of {max_retries} passed the degree, local degree and part size checks",
        stage="subsample",
        stats={**best[1], "delta": delta, "degree_cap": deg_cap, "part_floor": size_floor},
    )


def subsample_sparsify(
    g: MultipartiteGraph,
    epsilon: float,
    seed: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
    *,
    delta: float | None = None,
) -> MultipartiteGraph:
    """Truncate parts to ``ceil((1+eps) delta)`` and keep each vertex with
    probability ``delta^(-2/3)``.

    A draw is accepted when every vertex of the truncated graph has at most
    ``(1+eps/3) delta^(1/3)`` kept neighbors and fewer than 10 kept neighbors
    in any other part, and every part keeps at least ``(1+2eps/3) delta^(1/3)``
    vertices.  ``delta`` defaults to the observed max degree (at least 1).
    """
    return _subsample(g, epsilon, seed, max_retries, delta)[0]


@dataclass
class ReductionResult:
    graph: MultipartiteGraph
    schedule: ReductionSchedule
    stages: list[StageReport]
    final_delta: float

    def to_json(self) -> dict:
        return {
            "schedule": self.schedule.to_json(),
            "stages": [s.to_json() for s in self.stages],
            "final_delta": self.final_delta,
            "stats": compute_stats(self.graph).as_dict(),
        }


def _tagged(stage, fn, *args):
    try:
        return fn(*args)
    except SolverFailure as exc:
        raise SolverFailure(str(exc.args[0]), stage=stage, stats=exc.stats) from exc
    except InputError as exc:
        raise SolverFailure(f"precondition failed: {exc}", stage=stage) from exc


def reduce_local_degree_detailed(
    g: MultipartiteGraph,
    gamma: float,
    epsilon: float,
    seed: int,
    *,
    delta: int | None = None,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> ReductionResult:
    base = compute_stats(g)
    if delta is None:
        delta = base.max_degree
    elif delta < base.max_degree:
        raise InputError(f"declared delta {delta} is below the observed max degree {base.max_degree}")
    delta = max(int(delta), 1)
    if base.local_degree > gamma * delta:
        raise InputError(f"local degree {base.local_degree} exceeds gamma*delta = {gamma * delta:g}")
    if g.num_parts and base.min_part_size < (1 + epsilon) * delta:
        raise InputError(f"smallest part has {base.min_part_size} vertices, need (1+eps)*delta")
    plan = plan_reduction(delta, gamma, epsilon)
    stages = []

    if plan.j:
        block = 2**plan.j
        g = _tagged("truncate", _truncate, g, g.part_sizes() // block * block)
        for t in range(plan.j):
            g, attempts, st = _tagged(
                f"halving[{t}]", _halve, g, plan.d_seq[t], derive_seed(seed, 1, t), max_retries, plan.delta_seq[t]
            )
            stages.append(StageReport(f"halving[{t}]", attempts, st.as_dict()))

    declared = max(plan.delta_seq[-1], compute_stats(g).max_degree)
    g, attempts, st, info = _tagged(
        "subsample", _subsample, g, epsilon / 2, derive_seed(seed, 2), max_retries, declared
    )
    stages.append(StageReport("subsample", attempts, {**st.as_dict(), **info}))

    final_delta = max(st.max_degree, info["degree_cap"])
    if st.local_degree > SUBSAMPLE_LOCAL_CAP - 1 or (g.num_parts and st.min_part_size < (1 + epsilon / 8) * final_delta):
        raise SolverFailure(
            "reduced graph misses the local degree or part size bound",
            stage="verify",
            stats={**st.as_dict(), "final_delta": final_delta},
        )
    return ReductionResult(g, plan, stages, final_delta)


def reduce_local_degree(
    g: MultipartiteGraph,
    gamma: float,
    epsilon: float,
    seed: int,
    **options,
) -> MultipartiteGraph:
    """Halve ``j`` times, then subsample with ``epsilon/2``.

    The result has local degree at most 9 and parts of size at least
    ``(1+eps/8)`` times its declared degree bound.  ``delta`` may be passed
    to declare a degree bound larger than the observed max degree.
    """
    return reduce_local_degree_detailed(g, gamma, epsilon, seed, **options).graph
