"""K_s-free transversals through an (s-1)-coloring.

Color the vertices with ``s-1`` colors so that no vertex can lower its count
of same-colored neighbors by switching color, then drop every edge whose
endpoints differ in color.  In the remaining graph each vertex has degree at
most ``floor(Delta/(s-1))``.  An independent transversal of that graph meets
each color class in an independent set, so it cannot contain ``s`` pairwise
adjacent vertices of the original graph.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, SolverFailure
from .graph import (
    GraphStats,
    MultipartiteGraph,
    Transversal,
    compute_stats,
    is_ks_free_transversal,
    require_cross_part_edges,
)
from .lll import moser_tardos_it
from .nibble import solve_it
from .oracle import brute_force_transversal
from .seeding import derive_seed, rng_for

BACKENDS = ("nibble", "lll", "oracle")


@dataclass
class Coloring:
    colors: dict[int, int]
    mono_edge_count: int
    num_colors: int = 1
    history: list[int] = field(default_factory=list)

    @property
    def moves(self) -> int:
        return max(len(self.history) - 1, 0)

    def to_json(self) -> dict:
        return {
            "colors": {str(v): c for v, c in self.colors.items()},
            "mono_edge_count": self.mono_edge_count,
            "moves": self.moves,
        }


def _color_array(g: MultipartiteGraph, c: Coloring) -> np.ndarray:
    missing = [int(v) for v in g.vertex_ids if int(v) not in c.colors]
    if missing:
        raise InputError(f"coloring leaves vertex {missing[0]} uncolored ({len(missing)} in total)")
    return np.fromiter((c.colors[int(v)] for v in g.vertex_ids), np.int64, g.num_vertices)


def mono_edge_count(g: MultipartiteGraph, c: Coloring) -> int:
    col = _color_array(g, c)
    eu, ev = g.edge_index
    return int(np.count_nonzero(col[eu] == col[ev]))


def minimize_mono_coloring(g: MultipartiteGraph, s: int, seed: int) -> Coloring:
    """Local search over ``s-1`` colors starting from a seeded random coloring.

    The lowest-id vertex with more same-colored neighbors than it would have
    in some other color moves to its least crowded color (ties to the lowest
    color), and the scan starts over.  Each move lowers the monochromatic edge
    count, so the search stops after at most ``|E|`` moves.
    """
    if s < 2:
        raise InputError(f"s must be at least 2, got {s}")
    k = s - 1
    n = g.num_vertices
    ids = g.vertex_ids
    if k == 1:
        return Coloring({int(v): 0 for v in ids}, g.num_edges, 1, [g.num_edges])

    col = rng_for(seed).integers(k, size=n)
    counts = np.zeros((n, k), np.int64)
    eu, ev = g.edge_index
    np.add.at(counts, (eu, col[ev]), 1)
    np.add.at(counts, (ev, col[eu]), 1)
    mono = int(np.count_nonzero(col[eu] == col[ev]))
    history = [mono]

    colors = col.tolist()
    cnt = counts.tolist()
    adj = [g.indices[g.indptr[i]:g.indptr[i + 1]].tolist() for i in range(n)]
    key = ids.tolist()

    def unhappy(i):
        row = cnt[i]
        return row[colors[i]] > min(row)

    heap = [(key[i], i) for i in range(n) if unhappy(i)]
    heapq.heapify(heap)
    while heap:
        _, i = heapq.heappop(heap)
        if not unhappy(i):
            continue
        row = cnt[i]
        old = colors[i]
        new = row.index(min(row))
        mono -= row[old] - row[new]
        history.append(mono)
        colors[i] = new
        for w in adj[i]:
            cw = cnt[w]
            cw[old] -= 1
            cw[new] += 1
            if unhappy(w):
                heapq.heappush(heap, (key[w], w))

    return Coloring({int(v): c for v, c in zip(key, colors)}, mono, k, history)


def split_by_coloring(g: MultipartiteGraph, c: Coloring) -> MultipartiteGraph:
    """Same vertices and parts, monochromatic edges only."""
    col = _color_array(g, c)
    eu, ev = g.edge_index
    same = col[eu] == col[ev]
    return MultipartiteGraph._from_internal(g.vertex_ids, g.part_sizes(), eu[same], ev[same])


@dataclass
class KsFreeResult:
    transversal: Transversal
    coloring: Coloring
    split_stats: GraphStats

    def to_json(self) -> dict:
        return {
            "transversal": self.transversal.to_json(),
            "coloring": self.coloring.to_json(),
            "split_stats": self.split_stats.as_dict(),
        }


def _check_feasible(g: MultipartiteGraph, s: int, epsilon: float, backend: str) -> None:
    st = compute_stats(g)
    bound = st.max_degree // (s - 1)
    need = {"nibble": (1 + epsilon) * bound, "lll": 2 * math.e * bound}.get(backend)
    if need is not None and g.num_parts and st.min_part_size < need:
        raise InputError(
            f"{backend} backend needs parts of size >= {need:.4g} "
            f"(max degree {st.max_degree}, s = {s}); smallest part has {st.min_part_size}",
        )


def run_ksfree(
    g: MultipartiteGraph,
    s: int,
    epsilon: float = 0.5,
    backend: str = "lll",
    seed: int = 0,
    **backend_options,
) -> KsFreeResult:
    if s < 2:
        raise InputError(f"s must be at least 2, got {s}")
    if backend not in BACKENDS:
        raise InputError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")
    require_cross_part_edges(g)
    _check_feasible(g, s, epsilon, backend)

    coloring = minimize_mono_coloring(g, s, derive_seed(seed, 0))
    split = split_by_coloring(g, coloring)
    child = derive_seed(seed, 1)
    if backend == "nibble":
        t = solve_it(split, epsilon, child, **backend_options)
    elif backend == "lll":
        rep = moser_tardos_it(split, child, **backend_options)
        if not rep.success:
            raise SolverFailure("resampling budget exhausted", stage="lll", stats={"resamples": rep.resample_count})
        t = rep.transversal
    else:
        res = brute_force_transversal(split, 2, "decide", **backend_options)
        if not res.exists:
            raise SolverFailure("the split graph has no independent transversal", stage="oracle")
        t = res.witness
    if not is_ks_free_transversal(g, t, s):
        raise SolverFailure(f"backend output contains a K_{s}", stage="verify")
    return KsFreeResult(t, coloring, compute_stats(split))


def solve_ksfree(
    g: MultipartiteGraph,
    s: int,
    epsilon: float = 0.5,
    backend: str = "lll",
    seed: int = 0,
    **backend_options,
) -> Transversal:
    """Color, split, and solve the split graph with ``backend``; the result is checked to be K_s-free."""
    return run_ksfree(g, s, epsilon, backend, seed, **backend_options).transversal
