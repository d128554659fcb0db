"""Semi-random construction of independent transversals for small local degree.

Each round activates a random set of live parts, picks a random vertex in
each, keeps the picks that have no earlier-indexed conflicting pick, retires
their parts and deletes every neighbor of every pick.  Rounds continue until
the live graph has parts at least ``2e`` times its maximum degree, at which
point the resampling solver in `indtrans.lll` finishes the job.

The schedule ``S_t`` (part sizes) and ``D_t`` (degrees) gives the health
condition P(t) a round has to restore.  A round that breaks P(t+1) is thrown
away and redrawn with a fresh seed.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InputError, SolverFailure
from .graph import (
    MultipartiteGraph,
    Transversal,
    _induced,
    compute_stats,
    is_independent_transversal,
    require_cross_part_edges,
    restrict_parts,
)
from .lll import DEFAULT_MAX_RESAMPLES, moser_tardos_it
from .seeding import derive_seed, rng_for

log = logging.getLogger(__name__)

DEFAULT_RETRY_CAP = 50
LOCAL_DEGREE_WARN = 10
FINISHER_STREAM = 2**31 - 1
HANDOFF_RATIO = 1 / (2 * math.e)


@dataclass
class NibbleSchedule:
    """``S[t-1]`` and ``D[t-1]`` hold the thresholds for round ``t``, for ``t = 1..t_star+1``."""

    epsilon: float
    delta: int
    S: list[float]
    D: list[float]
    t_star: int
    activation_p: float

    @property
    def log_delta(self) -> float:
        return math.log(self.delta)

    def _extend(self, t):
        L = self.log_delta
        while len(self.S) < t:
            self.S.append(self.S[-1] * (1 - 1 / ((1 + 3 * self.epsilon / 4) * L)))
            self.D.append(self.D[-1] * (1 - 1 / ((1 + self.epsilon / 4) * L)))

    def S_at(self, t: int) -> float:
        self._extend(t)
        return self.S[t - 1]

    def D_at(self, t: int) -> float:
        self._extend(t)
        return self.D[t - 1]

    def final_ratio(self) -> float:
        return self.D_at(self.t_star + 1) / self.S_at(self.t_star + 1)


def build_schedule(delta: int, epsilon: float) -> NibbleSchedule:
    if delta < 3:
        raise InputError(f"delta must be >= 3 so that 1/log(delta) < 1, got {delta}")
    if not epsilon > 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    L = math.log(delta)
    t_star = math.ceil(10 / epsilon * L)
    sched = NibbleSchedule(
        epsilon=float(epsilon),
        delta=int(delta),
        S=[(1 + epsilon) * delta],
        D=[float(delta)],
        t_star=t_star,
        activation_p=1 / L,
    )
    sched._extend(t_star + 1)
    ratio = sched.final_ratio()
    if not ratio < HANDOFF_RATIO:
        raise RuntimeError(f"schedule ratio {ratio} does not reach 1/(2e)")
    return sched


@dataclass
class NibbleState:
    """Live part of the instance plus the transversal built so far.

    Vertex masks and counters are indexed by the internal indices of
    ``graph`` (the original instance); finished parts keep no live vertices.
    """

    graph: MultipartiteGraph
    schedule: NibbleSchedule
    alive: np.ndarray
    finished: np.ndarray
    live_degree: np.ndarray
    live_size: np.ndarray
    partial: Transversal = field(default_factory=Transversal)
    t: int = 1
    last_round: dict = field(default_factory=dict)

    @classmethod
    def start(cls, g: MultipartiteGraph, schedule: NibbleSchedule) -> "NibbleState":
        return cls(
            graph=g,
            schedule=schedule,
            alive=np.ones(g.num_vertices, bool),
            finished=np.zeros(g.num_parts, bool),
            live_degree=g.degrees().copy(),
            live_size=g.part_sizes().copy(),
        )

    def live_parts(self) -> np.ndarray:
        return np.flatnonzero(~self.finished)

    @property
    def live_graph(self) -> MultipartiteGraph:
        """Induced live subgraph; finished parts stay as empty parts."""
        return _induced(self.graph, self.alive)

    def min_part(self) -> int:
        live = self.live_size[~self.finished]
        return int(live.min()) if live.size else 0

    def max_degree(self) -> int:
        d = self.live_degree[self.alive]
        return int(d.max()) if d.size else 0

    def ready_for_handoff(self) -> bool:
        return 2 * math.e * self.max_degree() <= self.min_part()


def check_property_P(st: NibbleState) -> bool:
    """Every live part has at least ``S_t`` vertices and every live degree is at most ``D_t``."""
    live = st.live_size[~st.finished]
    if live.size and live.min() < st.schedule.S_at(st.t):
        return False
    return st.max_degree() <= st.schedule.D_at(st.t)


def partial_is_isolated(st: NibbleState) -> bool:
    """Full re-scan: no partial-transversal vertex has a live neighbor, and
    every finished part is empty and owns exactly one chosen vertex."""
    g = st.graph
    if set(st.partial.assignment) != set(np.flatnonzero(st.finished).tolist()):
        return False
    if st.live_size[st.finished].any() or st.alive[np.isin(g.part_index, np.flatnonzero(st.finished))].any():
        return False
    for v in st.partial.vertices():
        i = g.index_of(v)
        if st.alive[g.indices[g.indptr[i]:g.indptr[i + 1]]].any():
            return False
    return True


def _gather_neighbors(g: MultipartiteGraph, rows: np.ndarray) -> np.ndarray:
    starts = g.indptr[rows]
    lens = g.indptr[rows + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, np.int64)
    shift = np.repeat(starts - np.concatenate([[0], np.cumsum(lens)[:-1]]), lens)
    return g.indices[np.arange(total) + shift]


def run_iteration(st: NibbleState, seed: int) -> NibbleState:
    """One randomized round; a pure function of ``(st, seed)``."""
    g = st.graph
    rng = rng_for(seed)
    live = st.live_parts()
    active = live[rng.random(len(live)) < st.schedule.activation_p]

    picks = []
    for k in active.tolist():
        lo = g.offsets[k]
        pool = np.flatnonzero(st.alive[lo:g.offsets[k + 1]])
        if pool.size:
            picks.append(lo + pool[rng.integers(pool.size)])
    picks = np.asarray(picks, dtype=np.int64)

    in_T = np.zeros(g.num_vertices, bool)
    in_T[picks] = True
    added = []
    for v in picks.tolist():
        nb = g.indices[g.indptr[v]:g.indptr[v + 1]]
        if not np.any(in_T[nb] & (g.part_index[nb] < g.part_index[v])):
            added.append(v)

    dying = np.zeros(g.num_vertices, bool)
    for v in added:
        k = g.part_index[v]
        dying[g.offsets[k]:g.offsets[k + 1]] = True
    dying[_gather_neighbors(g, picks)] = True
    dying &= st.alive
    dead = np.flatnonzero(dying)

    alive = st.alive & ~dying
    live_degree = st.live_degree - np.bincount(_gather_neighbors(g, dead), minlength=g.num_vertices)
    live_size = st.live_size - np.bincount(g.part_index[dead], minlength=g.num_parts)
    finished = st.finished.copy()
    chosen = dict(st.partial.assignment)
    for v in added:
        k = int(g.part_index[v])
        finished[k] = True
        chosen[k] = int(g.vertex_ids[v])

    nxt = replace(
        st,
        alive=alive,
        finished=finished,
        live_degree=live_degree,
        live_size=live_size,
        partial=Transversal(chosen),
        t=st.t + 1,
    )
    nxt.last_round = {
        "t": st.t,
        "activated": int(active.size),
        "|T|": int(picks.size),
        "added": len(added),
        "deleted_vertices": int(dead.size),
        "min_part": nxt.min_part(),
        "max_deg": nxt.max_degree(),
    }
    return nxt


def _violation(st: NibbleState) -> tuple[int, int]:
    """(empty live parts, parts below S_t plus vertices above D_t)."""
    live = st.live_size[~st.finished]
    empty = int(np.count_nonzero(live == 0))
    small = int(np.count_nonzero(live < st.schedule.S_at(st.t)))
    big = int(np.count_nonzero(st.live_degree[st.alive] > st.schedule.D_at(st.t)))
    return empty, small + big


def run_nibble(
    g: MultipartiteGraph,
    epsilon: float,
    seed: int,
    retry_cap: int = DEFAULT_RETRY_CAP,
    *,
    early_exit: bool = True,
    strict: bool = False,
    local_degree_warn: int = LOCAL_DEGREE_WARN,
    check_invariants: bool = True,
) -> tuple[NibbleState, list[dict]]:
    """Run rounds ``t = 1..t_star`` and return the final state with a per-round trace.

    A round whose outcome violates P(t+1) is redrawn, up to ``retry_cap``
    draws.  When every draw violates it, ``strict=True`` raises
    `SolverFailure`; otherwise the draw with the fewest violations is kept
    (provided it leaves no live part empty) and the trace row is flagged.
    With ``early_exit`` the loop stops as soon as ``2e * max degree <= min part``.
    """
    if retry_cap < 1:
        raise InputError("retry_cap must be positive")
    require_cross_part_edges(g)
    stats = compute_stats(g)
    if g.num_parts and stats.min_part_size < (1 + epsilon) * stats.max_degree:
        raise InputError(
            f"parts must have size >= (1+eps)*max degree = {(1 + epsilon) * stats.max_degree:g}",
        )
    if stats.local_degree > local_degree_warn:
        warnings.warn(f"local degree {stats.local_degree} exceeds {local_degree_warn}", stacklevel=2)
    schedule = build_schedule(max(stats.max_degree, 3), epsilon)
    st = NibbleState.start(g, schedule)
    trace: list[dict] = []

    while st.t <= schedule.t_star:
        if not st.live_parts().size or (early_exit and st.ready_for_handoff()):
            break
        t = st.t
        best, best_score = None, None
        accepted = None
        for retry in range(retry_cap):
            cand = run_iteration(st, derive_seed(seed, t, retry))
            if check_property_P(cand):
                accepted = cand
                break
            score = _violation(cand)
            if best_score is None or score < best_score:
                best, best_score = cand, score
        violated = accepted is None
        if violated:
            info = {
                "t": t,
                "min_part": best.min_part(),
                "max_deg": best.max_degree(),
                "S_next": schedule.S_at(t + 1),
                "D_next": schedule.D_at(t + 1),
                "empty_parts": best_score[0],
            }
            if strict or best_score[0]:
                raise SolverFailure(
                    f"no draw out of {retry_cap} satisfied the round-{t + 1} schedule",
                    stage="nibble",
                    stats=info,
                )
            log.debug("round %d: keeping best of %d draws despite schedule violation", t, retry_cap)
            accepted = best
        st = accepted
        if check_invariants and not partial_is_isolated(st):
            raise RuntimeError(f"partial transversal touches the live graph after round {t}")
        trace.append(
            {
                **st.last_round,
                "S_t": schedule.S_at(t + 1),
                "D_t": schedule.D_at(t + 1),
                "retries": retry if not violated else retry_cap,
                "schedule_ok": not violated,
            }
        )
    return st, trace


@dataclass
class NibbleSolution:
    transversal: Transversal
    state: NibbleState
    trace: list[dict]
    finisher_resamples: int


def solve_it_detailed(
    g: MultipartiteGraph,
    epsilon: float,
    seed: int,
    *,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
    **nibble_options,
) -> NibbleSolution:
    st, trace = run_nibble(g, epsilon, seed, **nibble_options)
    live = st.live_parts()
    if live.size and st.live_size[live].min() == 0:
        raise SolverFailure("a live part was emptied", stage="nibble", stats={"t": st.t})
    rest = restrict_parts(st.live_graph, live)
    rep = moser_tardos_it(rest, derive_seed(seed, FINISHER_STREAM), max_resamples)
    if not rep.success:
        raise SolverFailure(
            f"finisher exhausted {max_resamples} resamples",
            stage="finisher",
            stats={"parts": int(live.size), "margin": rep.condition_margin},
        )
    tail = Transversal({int(live[j]): v for j, v in rep.transversal.assignment.items()})
    t = st.partial.union(tail)
    if not is_independent_transversal(g, t):
        raise SolverFailure("combined transversal is not independent", stage="verify")
    return NibbleSolution(t, st, trace, rep.resample_count)


def solve_it(g: MultipartiteGraph, epsilon: float, seed: int, **options) -> Transversal:
    """Nibble rounds followed by the resampling finisher on what is left."""
    return solve_it_detailed(g, epsilon, seed, **options).transversal
