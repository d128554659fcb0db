"""Exact ground truth for small instances by pruned backtracking."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExceeded, InputError
from .graph import MultipartiteGraph, Transversal, has_clique, is_ks_free_transversal

DEFAULT_NODE_BUDGET = 10**8


@dataclass
class OracleResult:
    exists: bool
    witness: Transversal | None
    count: int | None
    nodes_explored: int


def brute_force_transversal(
    g: MultipartiteGraph,
    s: int = 2,
    mode: str = "decide",
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> OracleResult:
    """Depth-first search over parts in index order for a K_s-free transversal.

    A branch is cut as soon as the newest vertex closes a K_s with vertices
    already chosen; every K_s has a last-chosen vertex, so nothing valid is
    lost.  ``mode="count"`` keeps going and counts every valid transversal.
    Raises `BudgetExceeded` once more than ``node_budget`` vertices have been
    tried.
    """
    if s < 2:
        raise InputError(f"s must be at least 2, got {s}")
    if mode not in ("decide", "count"):
        raise InputError(f"mode must be 'decide' or 'count', got {mode!r}")
    r = g.num_parts
    adj = [set(g.indices[g.indptr[i]:g.indptr[i + 1]].tolist()) for i in range(g.num_vertices)]
    ranges = [range(int(g.offsets[k]), int(g.offsets[k + 1])) for k in range(r)]
    ids = g.vertex_ids
    chosen: list[int] = []
    chosen_set: set[int] = set()
    nodes = 0
    count = 0
    witness = None
    adj_map = dict(enumerate(adj))

    def closes_clique(v):
        cand = adj[v] & chosen_set
        if len(cand) < s - 1:
            return False
        if s == 2:
            return True
        return has_clique(adj_map, s - 1, cand)

    def dfs(k):
        nonlocal nodes, count, witness
        if k == r:
            count += 1
            if witness is None:
                witness = Transversal({p: int(ids[v]) for p, v in enumerate(chosen)})
            return mode == "decide"
        for v in ranges[k]:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(f"oracle explored more than {node_budget} nodes", spent=nodes)
            if closes_clique(v):
                continue
            chosen.append(v)
            chosen_set.add(v)
            done = dfs(k + 1)
            chosen.pop()
            chosen_set.discard(v)
            if done:
                return True
        return False

    dfs(0)
    return OracleResult(
        exists=count > 0,
        witness=witness,
        count=count if mode == "count" else None,
        nodes_explored=nodes,
    )


def enumerate_transversals(g: MultipartiteGraph, s: int = 2) -> int:
    """Count valid transversals by checking every element of the product of parts."""
    total = 0
    for combo in itertools.product(*(p.tolist() for p in g.parts)):
        if is_ks_free_transversal(g, Transversal(dict(enumerate(combo))), s):
            total += 1
    return total


def certify_no_transversal(g: MultipartiteGraph, s: int = 2, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """True when the search proves that no K_s-free transversal exists."""
    return not brute_force_transversal(g, s, "decide", node_budget).exists
