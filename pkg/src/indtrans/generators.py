"""Instance generators: extremal constructions, reductions and random instances."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError
from .graph import MultipartiteGraph, Transversal, is_independent_transversal
from .seeding import rng_for


@dataclass
class ListColoringInstance:
    """Host graph plus a color list per host vertex."""

    edges: list[tuple[int, int]]
    lists: dict[int, set[int]]

    def __post_init__(self):
        self.edges = [(int(u), int(v)) for u, v in self.edges]
        self.lists = {int(v): {int(c) for c in cs} for v, cs in self.lists.items()}
        for v, cs in self.lists.items():
            if not cs:
                raise InputError(f"lists[{v}]: color list is empty")
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise InputError(f"edges[{i}]: self-loop at {u}")
            if u not in self.lists or v not in self.lists:
                raise InputError(f"edges[{i}]: endpoint without a color list")

    @property
    def vertices(self) -> list[int]:
        return sorted(self.lists)


@dataclass
class GraphFamilyInstance:
    """``n`` graphs ``H_1..H_n`` on the shared vertex set ``0..vertices-1``."""

    vertices: int
    graphs: list[list[tuple[int, int]]] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = int(self.vertices)
        self.graphs = [[(int(u), int(v)) for u, v in h] for h in self.graphs]
        for i, h in enumerate(self.graphs):
            for u, v in h:
                if u == v:
                    raise InputError(f"graphs[{i}]: self-loop at {u}")
                if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                    raise InputError(f"graphs[{i}]: edge ({u}, {v}) outside vertex range")


# --- extremal constructions ---------------------------------------------------

def gen_disjoint_cliques(delta: int) -> MultipartiteGraph:
    """``delta`` disjoint cliques of order ``delta+1``, one vertex of each per part.

    Vertex ``i*delta + c`` is clique ``c``'s member in part ``i``.
    """
    if delta < 1:
        raise InputError(f"delta must be >= 1, got {delta}")
    parts = [range(i * delta, (i + 1) * delta) for i in range(delta + 1)]
    edges = [
        (i * delta + c, j * delta + c)
        for c in range(delta)
        for i, j in itertools.combinations(range(delta + 1), 2)
    ]
    return MultipartiteGraph(parts, edges)


def gen_clique_grid(delta: int, n: int) -> MultipartiteGraph:
    """Grid ``{1..delta+1} x {1..n}``: rows are parts, each column is a clique.

    Vertex ``i*n + j`` is cell ``(i, j)``.  When ``n*(s-1) < delta+1`` the
    grid has no K_s-free transversal.
    """
    if delta < 1 or n < 1:
        raise InputError(f"need delta >= 1 and n >= 1, got delta={delta}, n={n}")
    parts = [range(i * n, (i + 1) * n) for i in range(delta + 1)]
    edges = [
        (i * n + j, k * n + j)
        for j in range(n)
        for i, k in itertools.combinations(range(delta + 1), 2)
    ]
    return MultipartiteGraph(parts, edges)


def bipartite_union_vertex(delta: int, copy: int, side: int, idx: int) -> int:
    return copy * 2 * delta + side * delta + idx


def gen_bipartite_union(delta: int, part_assignment: Mapping[int, int]) -> MultipartiteGraph:
    """``2*delta - 1`` disjoint copies of K_{delta,delta}, partitioned by ``part_assignment``.

    Vertex ids follow `bipartite_union_vertex`.  The assignment must cover all
    ``2*delta*(2*delta-1)`` vertices with equal parts, either ``2*delta - 1``
    parts of size ``2*delta`` or ``2*delta`` parts of size ``2*delta - 1``.
    """
    if delta < 1:
        raise InputError(f"delta must be >= 1, got {delta}")
    copies = 2 * delta - 1
    total = 2 * delta * copies
    assignment = {int(v): int(p) for v, p in part_assignment.items()}
    if set(assignment) != set(range(total)):
        raise InputError(f"part_assignment must cover exactly the vertices 0..{total - 1}")
    count = max(assignment.values()) + 1
    sizes = np.bincount(list(assignment.values()), minlength=count)
    if min(assignment.values()) < 0 or (count, int(sizes.min()), int(sizes.max())) not in {
        (copies, 2 * delta, 2 * delta),
        (2 * delta, copies, copies),
    }:
        raise InputError(
            f"part_assignment needs {copies} parts of size {2 * delta} or "
            f"{2 * delta} parts of size {copies}; got sizes {sizes.tolist()}"
        )
    parts = [[] for _ in range(count)]
    for v in range(total):
        parts[assignment[v]].append(v)
    edges = [
        (bipartite_union_vertex(delta, k, 0, a), bipartite_union_vertex(delta, k, 1, b))
        for k in range(copies)
        for a in range(delta)
        for b in range(delta)
    ]
    return MultipartiteGraph(parts, edges)


def side_blocked_assignment(delta: int) -> dict[int, int]:
    """Part ``p`` holds side 0 of copy ``p`` and side 1 of copy ``p+1``; an IT always exists."""
    copies = 2 * delta - 1
    out = {}
    for k in range(copies):
        for a in range(delta):
            out[bipartite_union_vertex(delta, k, 0, a)] = k
            out[bipartite_union_vertex(delta, k, 1, a)] = (k - 1) % copies
    return out


def search_no_it_assignment(delta: int) -> dict[int, int] | None:
    """First side-separating assignment into ``2*delta`` parts of size ``2*delta-1`` with no IT.

    Exhaustive over set partitions (parts unlabeled, enumerated in canonical
    order), so only practical for ``delta <= 2``.
    """
    from .oracle import brute_force_transversal

    if delta > 2:
        raise InputError("exhaustive assignment search is limited to delta <= 2")
    copies = 2 * delta - 1
    total = 2 * delta * copies
    size = copies
    side_of = {}
    for k in range(copies):
        for side in (0, 1):
            for a in range(delta):
                side_of[bipartite_union_vertex(delta, k, side, a)] = (k, side)

    def separating(block):
        seen = {}
        for v in block:
            k, side = side_of[v]
            if seen.setdefault(k, side) != side:
                return False
        return True

    def partitions(remaining):
        if not remaining:
            yield []
            return
        first, rest = remaining[0], remaining[1:]
        for combo in itertools.combinations(rest, size - 1):
            block = (first,) + combo
            if not separating(block):
                continue
            left = [v for v in rest if v not in combo]
            for tail in partitions(left):
                yield [block] + tail

    for blocks in partitions(list(range(total))):
        assignment = {v: p for p, block in enumerate(blocks) for v in block}
        if not brute_force_transversal(gen_bipartite_union(delta, assignment), 2).exists:
            return assignment
    return None


# --- random instances ---------------------------------------------------------

def _occurrence_rank(x: np.ndarray) -> np.ndarray:
    """For each position, how many earlier positions hold the same value."""
    if x.size == 0:
        return x.copy()
    o = np.argsort(x, kind="stable")
    xs = x[o]
    starts = np.concatenate([[0], np.flatnonzero(xs[1:] != xs[:-1]) + 1])
    run = np.diff(np.concatenate([starts, [len(xs)]]))
    out = np.empty(len(x), np.int64)
    out[o] = np.arange(len(xs)) - np.repeat(starts, run)
    return out


def gen_random_local_sparse(
    r: int,
    n: int,
    delta: int,
    c: int,
    seed: int,
    *,
    budget_factor: int = 8,
) -> MultipartiteGraph:
    """``r`` parts of ``n`` vertices with random cross-part edges under hard caps.

    Edges come from uniform proposals between vertices still below ``delta``.
    A proposal is accepted when the pair is new and both the degree cap
    ``delta`` and the per-part cap ``c`` hold for both endpoints.  Proposals are
    processed in batches; inside a batch the caps are checked against counts
    that already include every earlier proposal of the batch, accepted or not,
    so the caps are never exceeded.  Generation stops once every vertex could
    have degree ``delta``, after ``budget_factor * r*n*delta/2`` proposals, or
    after 20 consecutive batches without progress.
    """
    if r < 1 or n < 1:
        raise InputError(f"need r >= 1 and n >= 1, got r={r}, n={n}")
    if c < 0 or delta < 0 or c > delta:
        raise InputError(f"need 0 <= c <= delta, got c={c}, delta={delta}")
    N = r * n
    parts = [range(i * n, (i + 1) * n) for i in range(r)]
    if c * (r - 1) < delta:
        warnings.warn(
            f"caps allow degree at most c*(r-1) = {c * (r - 1)} < delta = {delta}; generator saturates",
            stacklevel=2,
        )
    if c == 0 or r == 1 or delta == 0:
        return MultipartiteGraph(parts)

    rng = rng_for(seed)
    part = np.repeat(np.arange(r, dtype=np.int64), n)
    deg = np.zeros(N, np.int64)
    pdeg = np.zeros(N * r, np.int64)
    seen: set[int] = set()
    chunks = []
    # degrees can never exceed c*(r-1), so size the run by the reachable cap
    cap = min(delta, c * (r - 1))
    target = N * cap // 2
    budget = budget_factor * max(target, 1)
    made = proposals = idle = 0
    while made < target and proposals < budget and idle < 20:
        need = cap - deg
        elig = np.flatnonzero(need > 0)
        if len(elig) < 2:
            break
        size = int(min(max(1, need[elig].sum() // 2), budget - proposals))
        proposals += size
        u = elig[rng.integers(len(elig), size=size)]
        v = elig[rng.integers(len(elig), size=size)]
        a, b = np.minimum(u, v), np.maximum(u, v)
        keep = part[a] != part[b]
        a, b = a[keep], b[keep]
        key = a * N + b
        _, first = np.unique(key, return_index=True)
        first.sort()
        a, b, key = a[first], b[first], key[first]
        fresh = np.fromiter((k not in seen for k in key.tolist()), bool, len(key))
        a, b, key = a[fresh], b[fresh], key[fresh]
        m = len(a)
        rank_v = _occurrence_rank(np.concatenate([a, b]))
        pa, pb = a * r + part[b], b * r + part[a]
        rank_p = _occurrence_rank(np.concatenate([pa, pb]))
        ok = (
            (deg[a] + rank_v[:m] < delta)
            & (deg[b] + rank_v[m:] < delta)
            & (pdeg[pa] + rank_p[:m] < c)
            & (pdeg[pb] + rank_p[m:] < c)
        )
        a, b, key = a[ok], b[ok], key[ok]
        room = target - made
        a, b, key = a[:room], b[:room], key[:room]
        idle = 0 if len(a) else idle + 1
        np.add.at(deg, a, 1)
        np.add.at(deg, b, 1)
        np.add.at(pdeg, a * r + part[b], 1)
        np.add.at(pdeg, b * r + part[a], 1)
        seen.update(key.tolist())
        chunks.append(np.stack([a, b], axis=1))
        made += len(a)
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), np.int64)
    # ids are 0..N-1 in part order, so they double as internal indices
    return MultipartiteGraph._from_internal(np.arange(N), np.full(r, n), edges[:, 0], edges[:, 1])


def gen_random_list_coloring(
    vertices: int, degree: int, list_size: int, palette: int, seed: int
) -> ListColoringInstance:
    """Random host graph with maximum degree ``degree`` and random color lists.

    Each list is a uniform ``list_size``-subset of ``0..palette-1``.
    """
    if list_size < 1 or palette < list_size:
        raise InputError(f"need 1 <= list_size <= palette, got {list_size}, {palette}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        host = gen_random_local_sparse(vertices, 1, degree, 1, seed)
    rng = rng_for(seed, 1)
    lists = {v: set(rng.choice(palette, size=list_size, replace=False).tolist()) for v in range(vertices)}
    return ListColoringInstance([tuple(e) for e in host.edges.tolist()], lists)


# --- reductions -----------------------------------------------------------------

def list_coloring_labels(inst: ListColoringInstance) -> list[tuple[int, int]]:
    """``labels[id] = (host vertex, color)`` for the vertices of `reduce_list_coloring`."""
    return [(v, col) for v in inst.vertices for col in sorted(inst.lists[v])]


def reduce_list_coloring(inst: ListColoringInstance) -> MultipartiteGraph:
    """One part per host vertex ``v`` holding ``(v, c)`` for ``c`` in its list.

    ``(v, c) ~ (w, c)`` whenever ``v ~ w`` in the host and both lists contain
    ``c``.  Ids are dense, in the order given by `list_coloring_labels`.
    """
    labels = list_coloring_labels(inst)
    index = {lab: i for i, lab in enumerate(labels)}
    parts, start = [], 0
    for v in inst.vertices:
        parts.append(range(start, start + len(inst.lists[v])))
        start += len(inst.lists[v])
    edges = [
        (index[(u, col)], index[(w, col)])
        for u, w in inst.edges
        for col in sorted(inst.lists[u] & inst.lists[w])
    ]
    return MultipartiteGraph(parts, edges)


def coloring_from_transversal(inst: ListColoringInstance, t: Transversal) -> dict[int, int]:
    """Map a transversal of the reduced graph back to a list coloring of the host."""
    labels = list_coloring_labels(inst)
    hosts = inst.vertices
    out = {}
    for k, vid in t.assignment.items():
        v, col = labels[vid]
        if v != hosts[k]:
            raise InputError(f"vertex {vid} does not belong to part {k}")
        out[v] = col
    return out


def reduce_graph_family(inst: GraphFamilyInstance) -> MultipartiteGraph:
    """Copy ``i`` of host vertex ``v`` is vertex ``v*n + i``; copies of ``v`` form part ``v``."""
    n = len(inst.graphs)
    parts = [range(v * n, (v + 1) * n) for v in range(inst.vertices)]
    edges = [(u * n + i, w * n + i) for i, h in enumerate(inst.graphs) for u, w in h]
    return MultipartiteGraph(parts, edges)


def transversal_to_partition(inst: GraphFamilyInstance, t: Transversal) -> list[set[int]]:
    """Classes ``I_1..I_n``: host vertices whose chosen copy has index ``i``."""
    g = reduce_graph_family(inst)
    if not is_independent_transversal(g, t):
        raise InputError("transversal is not an independent transversal of the reduced graph")
    n = len(inst.graphs)
    classes = [set() for _ in range(n)]
    for v, vid in t.assignment.items():
        classes[vid - v * n].add(v)
    return classes
