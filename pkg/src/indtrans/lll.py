"""Resample-until-valid search for independent transversals.

The probability space picks one vertex per part uniformly and independently;
the bad event for an edge is that both endpoints are picked.  An event
depends only on the two endpoint parts, so resampling those two parts is the
natural repair step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import MultipartiteGraph, Transversal, is_independent_transversal, require_cross_part_edges
from .seeding import rng_for

DEFAULT_MAX_RESAMPLES = 10**6


@dataclass
class LLLReport:
    success: bool
    resample_count: int
    transversal: Transversal | None
    condition_margin: float

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "transversal": self.transversal.to_json() if self.transversal else None,
            "resamples": self.resample_count,
            "margin": self.condition_margin,
        }


def _require_nonempty_parts(g: MultipartiteGraph) -> None:
    sizes = g.part_sizes()
    if sizes.size and sizes.min() == 0:
        raise InputError(f"part {int(np.argmin(sizes))} is empty")


def lll_condition_check(g: MultipartiteGraph) -> float:
    """``e * p * (d + 1)`` for the uniform one-vertex-per-part space.

    ``p`` is the largest bad-event probability ``1/(|V_a| |V_b|)`` over edges
    and ``d = 2 * (largest part) * (max degree) - 1`` bounds the dependencies.
    A value of at most 1 guarantees an independent transversal.
    """
    _require_nonempty_parts(g)
    if g.num_edges == 0:
        return 0.0
    sizes = g.part_sizes()
    eu, ev = g.edge_index
    p = float(np.max(1.0 / (sizes[g.part_index[eu]] * sizes[g.part_index[ev]])))
    d = 2 * int(sizes.max()) * int(g.degrees().max()) - 1
    return math.e * p * (d + 1)


def _sample(g: MultipartiteGraph, rng: np.random.Generator) -> np.ndarray:
    sizes = g.part_sizes()
    return g.offsets[:-1] + rng.integers(sizes)


def sample_transversal(g: MultipartiteGraph, seed: int) -> Transversal:
    """One uniformly chosen vertex from every part."""
    _require_nonempty_parts(g)
    pick = _sample(g, rng_for(seed))
    return Transversal({k: int(g.vertex_ids[i]) for k, i in enumerate(pick)})


def moser_tardos_it(g: MultipartiteGraph, seed: int, max_resamples: int = DEFAULT_MAX_RESAMPLES) -> LLLReport:
    """Sample a transversal, then repeatedly resample the two parts of the
    lowest-numbered edge whose endpoints are both picked.
    """
    _require_nonempty_parts(g)
    require_cross_part_edges(g)
    margin = lll_condition_check(g)
    rng = rng_for(seed)
    pick = _sample(g, rng)
    sizes = g.part_sizes()
    part_of = g.part_index
    eu, ev = g.edge_index
    m = len(eu)

    # incident edge ids per vertex
    src = np.concatenate([eu, ev])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.argsort(src, kind="stable")
    inc = eid[order]
    other = np.concatenate([ev, eu])[order]
    inc_ptr = np.concatenate([[0], np.cumsum(np.bincount(src, minlength=g.num_vertices))])

    chosen = np.zeros(g.num_vertices, bool)
    chosen[pick] = True
    violated = set(np.flatnonzero(chosen[eu] & chosen[ev]).tolist())

    resamples = 0
    while violated:
        if resamples >= max_resamples:
            return LLLReport(False, resamples, None, margin)
        e = min(violated)
        resamples += 1
        for k in (part_of[eu[e]], part_of[ev[e]]):
            old = pick[k]
            chosen[old] = False
            lo, hi = inc_ptr[old], inc_ptr[old + 1]
            violated.difference_update(inc[lo:hi].tolist())
            new = g.offsets[k] + rng.integers(sizes[k])
            pick[k] = new
            chosen[new] = True
            lo, hi = inc_ptr[new], inc_ptr[new + 1]
            hits = chosen[other[lo:hi]]
            violated.update(inc[lo:hi][hits].tolist())

    t = Transversal({k: int(g.vertex_ids[i]) for k, i in enumerate(pick)})
    assert is_independent_transversal(g, t)
    return LLLReport(True, resamples, t, margin)
