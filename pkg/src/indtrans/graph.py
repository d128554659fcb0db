"""Vertex-partitioned graphs, transversals and the statistics solvers condition on.

Vertices carry arbitrary non-negative integer ids.  Internally every graph
numbers its vertices ``0..N-1`` part by part, so part ``k`` occupies the
index range ``offsets[k]:offsets[k+1]`` and a CSR row sorted by index is
also sorted by part.  That layout makes per-part neighbor counts two binary
searches.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "GraphStats",
    "MultipartiteGraph",
    "Transversal",
    "compute_stats",
    "delete_vertices",
    "has_clique",
    "intra_part_edge_count",
    "is_independent_transversal",
    "is_ks_free_transversal",
    "normalize",
    "per_part_degree",
    "require_cross_part_edges",
]


def _readonly(a):
    a.setflags(write=False)
    return a


class MultipartiteGraph:
    """Immutable undirected graph whose vertex set is split into ordered parts.

    ``parts`` is a sequence of id collections; ``edges`` an iterable of id
    pairs (or an ``(m, 2)`` array).  Duplicate edges collapse; self-loops,
    ids shared between parts and edges to unknown ids raise `InputError`.
    Edges inside a part are accepted here but refused by every solver.
    """

    def __init__(self, parts: Sequence[Iterable[int]], edges=()):
        arrays = []
        for k, p in enumerate(parts):
            a = np.asarray(p if isinstance(p, np.ndarray) else list(p), dtype=np.int64).reshape(-1)
            if a.size and a.min() < 0:
                raise InputError(f"parts[{k}]: vertex ids must be non-negative")
            arrays.append(a)
        ids = np.concatenate(arrays) if arrays else np.zeros(0, np.int64)
        sizes = np.array([a.size for a in arrays], dtype=np.int64)
        order = np.argsort(ids, kind="stable")
        sorted_ids = ids[order]
        dup = np.flatnonzero(sorted_ids[1:] == sorted_ids[:-1])
        if dup.size:
            raise InputError(f"vertex {int(sorted_ids[dup[0]])} appears more than once in the parts")

        e = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        e = e.reshape(-1, 2) if e.size else np.zeros((0, 2), np.int64)
        if e.size:
            pos = np.searchsorted(sorted_ids, e)
            pos_c = np.minimum(pos, max(len(ids) - 1, 0))
            known = (pos < len(ids)) & (sorted_ids[pos_c] == e) if len(ids) else np.zeros(e.shape, bool)
            if not known.all():
                row = int(np.flatnonzero(~known.all(axis=1))[0])
                raise InputError(f"edges[{row}]: endpoint {e[row].tolist()} references an unknown vertex id")
            idx = order[pos_c]
        else:
            idx = np.zeros((0, 2), np.int64)
        self._build(ids, sizes, idx[:, 0], idx[:, 1])

    # construction from already-validated internal arrays
    @classmethod
    def _from_internal(cls, ids, sizes, eu, ev):
        g = cls.__new__(cls)
        g._build(ids, sizes, eu, ev)
        return g

    def _build(self, ids, sizes, eu, ev):
        n = len(ids)
        if np.any(eu == ev):
            bad = int(np.flatnonzero(eu == ev)[0])
            raise InputError(f"self-loop at vertex {int(ids[eu[bad]])}")
        a = np.minimum(eu, ev)
        b = np.maximum(eu, ev)
        key = np.unique(a * max(n, 1) + b)
        a, b = key // max(n, 1), key % max(n, 1)
        self._ids = _readonly(np.asarray(ids, dtype=np.int64))
        self._offsets = _readonly(np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64))
        self._part_of = _readonly(np.repeat(np.arange(len(sizes), dtype=np.int64), sizes))
        self._eu = _readonly(a.astype(np.int64))
        self._ev = _readonly(b.astype(np.int64))
        src = np.concatenate([a, b])
        dst = np.concatenate([b, a])
        o = np.lexsort((dst, src))
        self._indices = _readonly(dst[o])
        self._indptr = _readonly(np.concatenate([[0], np.cumsum(np.bincount(src, minlength=n))]).astype(np.int64))
        self._order = np.argsort(self._ids, kind="stable")
        self._sorted_ids = self._ids[self._order]
        self._edge_ids = None

    # sizes --------------------------------------------------------------
    @property
    def num_parts(self) -> int:
        return len(self._offsets) - 1

    @property
    def num_vertices(self) -> int:
        return len(self._ids)

    @property
    def num_edges(self) -> int:
        return len(self._eu)

    def part_sizes(self) -> np.ndarray:
        return np.diff(self._offsets)

    # id-level views -----------------------------------------------------
    @property
    def parts(self) -> tuple[np.ndarray, ...]:
        return tuple(self._ids[self._offsets[k]:self._offsets[k + 1]] for k in range(self.num_parts))

    def part(self, k: int) -> np.ndarray:
        self._check_part(k)
        return self._ids[self._offsets[k]:self._offsets[k + 1]]

    @property
    def vertex_ids(self) -> np.ndarray:
        return self._ids

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of id pairs, one row per undirected edge."""
        if self._edge_ids is None:
            self._edge_ids = _readonly(np.stack([self._ids[self._eu], self._ids[self._ev]], axis=1))
        return self._edge_ids

    def __contains__(self, v) -> bool:
        try:
            self.index_of(v)
        except InputError:
            return False
        return True

    def index_of(self, v):
        """Internal index of id ``v`` (scalar or array)."""
        arr = np.asarray(v, dtype=np.int64)
        pos = np.searchsorted(self._sorted_ids, arr)
        pos_c = np.minimum(pos, max(self.num_vertices - 1, 0))
        ok = (pos < self.num_vertices) & (self._sorted_ids[pos_c] == arr) if self.num_vertices else np.zeros(arr.shape, bool)
        if not np.all(ok):
            missing = arr[~ok] if arr.ndim else arr
            raise InputError(f"unknown vertex id {np.asarray(missing).reshape(-1)[0]}")
        out = self._order[pos_c]
        return int(out) if arr.ndim == 0 else out

    def part_of(self, v: int) -> int:
        return int(self._part_of[self.index_of(v)])

    def neighbors(self, v: int) -> np.ndarray:
        i = self.index_of(v)
        return self._ids[self._indices[self._indptr[i]:self._indptr[i + 1]]]

    def degree(self, v: int) -> int:
        i = self.index_of(v)
        return int(self._indptr[i + 1] - self._indptr[i])

    def degrees(self) -> np.ndarray:
        """Degrees in internal (part-major) order."""
        return np.diff(self._indptr)

    # internal-index views for the solvers --------------------------------
    @property
    def offsets(self) -> np.ndarray:
        return self._offsets

    @property
    def part_index(self) -> np.ndarray:
        return self._part_of

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        return self._eu, self._ev

    def _check_part(self, k):
        if not 0 <= k < self.num_parts:
            raise InputError(f"part index {k} out of range (graph has {self.num_parts} parts)")

    # misc ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultipartiteGraph):
            return NotImplemented
        if self.num_parts != other.num_parts:
            return False
        if any(not np.array_equal(a, b) for a, b in zip(self.parts, other.parts)):
            return False
        mine = {tuple(sorted(e)) for e in self.edges.tolist()}
        theirs = {tuple(sorted(e)) for e in other.edges.tolist()}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        return f"MultipartiteGraph(parts={self.num_parts}, vertices={self.num_vertices}, edges={self.num_edges})"


@dataclass
class Transversal:
    """One chosen vertex id per part index; full when every part is covered."""

    assignment: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.assignment = {int(k): int(v) for k, v in sorted(dict(self.assignment).items())}

    def vertices(self) -> list[int]:
        return list(self.assignment.values())

    def is_full(self, num_parts: int) -> bool:
        return set(self.assignment) == set(range(num_parts))

    def union(self, other: "Transversal") -> "Transversal":
        clash = set(self.assignment) & set(other.assignment)
        if clash:
            raise InputError(f"transversals overlap on parts {sorted(clash)}")
        return Transversal({**self.assignment, **other.assignment})

    def __len__(self):
        return len(self.assignment)

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.assignment.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Transversal":
        try:
            return cls({int(k): int(v) for k, v in data.items()})
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"transversal: expected {{part: vertex}} mapping ({exc})") from None


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    local_degree: int
    min_part_size: int
    part_count: int
    edge_count: int

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def _local_degree(g: MultipartiteGraph) -> int:
    r = g.num_parts
    if g.num_edges == 0:
        return 0
    rows = np.repeat(np.arange(g.num_vertices), g.degrees())
    own = g.part_index[rows]
    other = g.part_index[g.indices]
    cross = own != other
    if not cross.any():
        return 0
    # rows ascend and each row is sorted by part, so equal keys are contiguous
    keys = rows[cross] * r + other[cross]
    bounds = np.flatnonzero(np.diff(keys)) + 1
    runs = np.diff(np.concatenate([[0], bounds, [len(keys)]]))
    return int(runs.max())


def compute_stats(g: MultipartiteGraph) -> GraphStats:
    sizes = g.part_sizes()
    deg = g.degrees()
    return GraphStats(
        max_degree=int(deg.max()) if deg.size else 0,
        local_degree=_local_degree(g),
        min_part_size=int(sizes.min()) if sizes.size else 0,
        part_count=g.num_parts,
        edge_count=g.num_edges,
    )


def per_part_degree(g: MultipartiteGraph, v: int, k: int) -> int:
    """Number of neighbors of ``v`` inside part ``k``."""
    g._check_part(k)
    i = g.index_of(v)
    row = g.indices[g.indptr[i]:g.indptr[i + 1]]
    lo, hi = np.searchsorted(row, [g.offsets[k], g.offsets[k + 1]])
    return int(hi - lo)


def delete_vertices(g: MultipartiteGraph, S: Iterable[int]) -> MultipartiteGraph:
    """Induced subgraph on ``V \\ S``; emptied parts stay in place with size 0."""
    drop = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64)
    if drop.size == 0:
        return g
    keep = np.ones(g.num_vertices, bool)
    keep[g.index_of(drop)] = False
    return _induced(g, keep)


def _induced(g: MultipartiteGraph, keep: np.ndarray) -> MultipartiteGraph:
    """Induced subgraph on the internal-index mask ``keep``."""
    newidx = np.cumsum(keep) - 1
    sizes = np.bincount(g.part_index[keep], minlength=g.num_parts)
    eu, ev = g.edge_index
    ek = keep[eu] & keep[ev]
    return MultipartiteGraph._from_internal(g.vertex_ids[keep], sizes, newidx[eu[ek]], newidx[ev[ek]])


def restrict_parts(g: MultipartiteGraph, part_indices: Sequence[int]) -> MultipartiteGraph:
    """Subgraph induced by the listed parts, renumbered ``0..len-1`` in the given order."""
    part_indices = [int(k) for k in part_indices]
    for k in part_indices:
        g._check_part(k)
    chunks = [np.arange(g.offsets[k], g.offsets[k + 1]) for k in part_indices]
    old = np.concatenate(chunks) if chunks else np.zeros(0, np.int64)
    newidx = np.full(g.num_vertices, -1, np.int64)
    newidx[old] = np.arange(len(old))
    eu, ev = g.edge_index
    ek = (newidx[eu] >= 0) & (newidx[ev] >= 0)
    sizes = np.array([len(c) for c in chunks], dtype=np.int64)
    return MultipartiteGraph._from_internal(g.vertex_ids[old], sizes, newidx[eu[ek]], newidx[ev[ek]])


def intra_part_edge_count(g: MultipartiteGraph) -> int:
    eu, ev = g.edge_index
    return int(np.count_nonzero(g.part_index[eu] == g.part_index[ev]))


def normalize(g: MultipartiteGraph) -> MultipartiteGraph:
    """Drop edges inside a part, warning when any are found."""
    bad = intra_part_edge_count(g)
    if not bad:
        return g
    warnings.warn(f"removing {bad} intra-part edge(s)", stacklevel=2)
    eu, ev = g.edge_index
    ok = g.part_index[eu] != g.part_index[ev]
    return MultipartiteGraph._from_internal(g.vertex_ids, g.part_sizes(), eu[ok], ev[ok])


def require_cross_part_edges(g: MultipartiteGraph) -> None:
    bad = intra_part_edge_count(g)
    if bad:
        raise InputError(f"graph has {bad} intra-part edge(s); run normalize() first")


def _chosen_indices(g: MultipartiteGraph, t: Transversal) -> np.ndarray:
    idx = []
    for k, v in t.assignment.items():
        g._check_part(k)
        i = g.index_of(v)
        if g.part_index[i] != k:
            raise InputError(f"vertex {v} is not in part {k}")
        idx.append(i)
    return np.asarray(idx, dtype=np.int64)


def is_independent_transversal(g: MultipartiteGraph, t: Transversal) -> bool:
    idx = _chosen_indices(g, t)
    if not t.is_full(g.num_parts):
        return False
    chosen = np.zeros(g.num_vertices, bool)
    chosen[idx] = True
    eu, ev = g.edge_index
    return not np.any(chosen[eu] & chosen[ev])


def has_clique(adj: Mapping[int, set], k: int, candidates: Iterable[int] | None = None) -> bool:
    """Whether ``candidates`` (default: all of ``adj``) contain a clique on ``k`` vertices."""
    if k <= 0:
        return True
    cand = sorted(adj if candidates is None else candidates)

    def grow(pool, need):
        if need == 0:
            return True
        if len(pool) < need:
            return False
        for pos, v in enumerate(pool):
            if len(pool) - pos < need:
                return False
            if grow([w for w in pool[pos + 1:] if w in adj[v]], need - 1):
                return True
        return False

    return grow(cand, k)


def is_ks_free_transversal(g: MultipartiteGraph, t: Transversal, s: int) -> bool:
    if s < 2:
        raise InputError(f"s must be at least 2, got {s}")
    idx = _chosen_indices(g, t)
    if not t.is_full(g.num_parts):
        return False
    chosen = set(idx.tolist())
    adj = {i: set() for i in chosen}
    for i in chosen:
        for w in g.indices[g.indptr[i]:g.indptr[i + 1]].tolist():
            if w in chosen:
                adj[i].add(w)
    return not has_clique(adj, s)
