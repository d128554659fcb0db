import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indtrans.errors import InputError
from indtrans.generators import gen_clique_grid, gen_disjoint_cliques
from indtrans.graph import (
    MultipartiteGraph,
    Transversal,
    compute_stats,
    delete_vertices,
    is_independent_transversal,
    is_ks_free_transversal,
    normalize,
    per_part_degree,
    require_cross_part_edges,
    restrict_parts,
)

from strategies import multipartite_graphs


def all_transversals(g):
    for combo in itertools.product(*(p.tolist() for p in g.parts)):
        yield Transversal(dict(enumerate(combo)))


def test_edgeless_stats():
    g = MultipartiteGraph([[0, 1], [2, 3], [4, 5]])
    st_ = compute_stats(g)
    assert (st_.max_degree, st_.local_degree, st_.min_part_size, st_.part_count, st_.edge_count) == (0, 0, 2, 3, 0)


def test_empty_graph_stats_all_zero():
    assert compute_stats(MultipartiteGraph([])).as_dict() == dict.fromkeys(
        ("max_degree", "local_degree", "min_part_size", "part_count", "edge_count"), 0
    )


def test_stats_of_constructions():
    dc = compute_stats(gen_disjoint_cliques(2))
    assert (dc.max_degree, dc.local_degree) == (2, 1)
    grid = compute_stats(gen_clique_grid(4, 2))
    assert (grid.max_degree, grid.local_degree, grid.part_count, grid.min_part_size) == (4, 1, 5, 2)


def test_rejects_bad_input():
    with pytest.raises(InputError, match="more than once"):
        MultipartiteGraph([[0, 1], [1, 2]])
    with pytest.raises(InputError, match=r"edges\[1\]"):
        MultipartiteGraph([[0], [1]], [(0, 1), (0, 7)])
    with pytest.raises(InputError, match="self-loop"):
        MultipartiteGraph([[0], [1]], [(1, 1)])
    with pytest.raises(InputError):
        MultipartiteGraph([[-1]])


def test_duplicate_edges_collapse_and_ids_need_not_be_dense():
    g = MultipartiteGraph([[10, 30], [20]], [(10, 20), (20, 10), (30, 20)])
    assert g.num_edges == 2
    assert sorted(g.neighbors(20).tolist()) == [10, 30]
    assert g.part_of(30) == 0


def test_per_part_degree():
    g = MultipartiteGraph([[0], [1, 2, 3], [4]], [(0, 1), (0, 2), (0, 3)])
    assert per_part_degree(g, 0, 1) == 3
    assert per_part_degree(g, 4, 0) == 0
    grid = gen_clique_grid(4, 2)
    # cell (1,1) is vertex 0; the third row holds vertices 4 and 5
    assert per_part_degree(grid, 0, 2) == 1
    with pytest.raises(InputError):
        per_part_degree(g, 99, 0)
    with pytest.raises(InputError):
        per_part_degree(g, 0, 5)


def test_delete_vertices():
    g = MultipartiteGraph([[0], [1]], [(0, 1)])
    assert delete_vertices(g, []) is g
    h = delete_vertices(g, [0])
    assert h.num_edges == 0 and h.part_sizes().tolist() == [0, 1]
    dc = gen_disjoint_cliques(2)
    # clique 0 is {0, 2, 4}
    rest = delete_vertices(dc, [0, 2, 4])
    assert rest.part_sizes().tolist() == [1, 1, 1]
    assert sorted(map(tuple, rest.edges.tolist())) == [(1, 3), (1, 5), (3, 5)]


def test_restrict_parts_renumbers():
    g = gen_disjoint_cliques(2)
    h = restrict_parts(g, [2, 0])
    assert [p.tolist() for p in h.parts] == [[4, 5], [0, 1]]
    assert h.num_edges == 2


def test_independent_transversal_checks():
    g = MultipartiteGraph([[0], [1]], [(0, 1)])
    assert not is_independent_transversal(g, Transversal({0: 0, 1: 1}))
    assert is_independent_transversal(MultipartiteGraph([[0], [1]]), Transversal({0: 0, 1: 1}))
    assert not is_independent_transversal(g, Transversal({0: 0}))
    with pytest.raises(InputError, match="not in part"):
        is_independent_transversal(g, Transversal({0: 1, 1: 0}))
    dc = gen_disjoint_cliques(2)
    assert not any(is_independent_transversal(dc, t) for t in all_transversals(dc))


def test_ks_free_checks():
    grid = gen_clique_grid(4, 2)
    assert not any(is_ks_free_transversal(grid, t, 3) for t in all_transversals(grid))
    tri = MultipartiteGraph([[0], [1], [2]], [(0, 1), (1, 2), (0, 2)])
    assert is_ks_free_transversal(tri, Transversal({0: 0, 1: 1, 2: 2}), 4)
    assert not is_ks_free_transversal(tri, Transversal({0: 0, 1: 1, 2: 2}), 3)
    with pytest.raises(InputError):
        is_ks_free_transversal(tri, Transversal({0: 0, 1: 1, 2: 2}), 1)


def test_intra_part_edges():
    g = MultipartiteGraph([[0, 1], [2]], [(0, 1), (1, 2)])
    with pytest.raises(InputError, match="intra-part"):
        require_cross_part_edges(g)
    with pytest.warns(UserWarning):
        h = normalize(g)
    assert h.edges.tolist() == [[1, 2]]


def test_transversal_json_and_union():
    t = Transversal({1: 5, 0: 3})
    assert t.to_json() == {"0": 3, "1": 5}
    assert Transversal.from_json(t.to_json()) == t
    with pytest.raises(InputError):
        t.union(Transversal({1: 6}))


@settings(max_examples=150, deadline=None)
@given(multipartite_graphs())
def test_local_degree_at_most_max_degree(g):
    s = compute_stats(g)
    assert 0 <= s.local_degree <= s.max_degree


@settings(max_examples=150, deadline=None)
@given(multipartite_graphs())
def test_per_part_degrees_sum_to_degree(g):
    for v in g.vertex_ids.tolist():
        assert sum(per_part_degree(g, v, k) for k in range(g.num_parts)) == g.degree(v)


@settings(max_examples=100, deadline=None)
@given(multipartite_graphs(), st.data())
def test_deletion_never_raises_degrees(g, data):
    S = data.draw(st.sets(st.sampled_from(g.vertex_ids.tolist())))
    before, after = compute_stats(g), compute_stats(delete_vertices(g, S))
    assert after.max_degree <= before.max_degree
    assert after.local_degree <= before.local_degree


@settings(max_examples=100, deadline=None)
@given(multipartite_graphs(max_parts=4, max_size=3))
def test_ks2_matches_independence(g):
    for t in all_transversals(g):
        assert is_ks_free_transversal(g, t, 2) == is_independent_transversal(g, t)


@settings(max_examples=100, deadline=None)
@given(multipartite_graphs(allow_empty=True))
def test_local_degree_matches_definition(g):
    expected = 0
    for v in g.vertex_ids.tolist():
        nb = set(g.neighbors(v).tolist())
        for k, p in enumerate(g.parts):
            if k != g.part_of(v):
                expected = max(expected, len(nb & set(p.tolist())))
    assert compute_stats(g).local_degree == expected
    assert compute_stats(g).max_degree == max((g.degree(v) for v in g.vertex_ids.tolist()), default=0)
    assert np.array_equal(g.part_sizes(), [len(p) for p in g.parts])
