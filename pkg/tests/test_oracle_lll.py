import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indtrans.errors import BudgetExceeded, InputError
from indtrans.generators import gen_clique_grid, gen_disjoint_cliques, gen_random_local_sparse
from indtrans.graph import MultipartiteGraph, is_independent_transversal, is_ks_free_transversal
from indtrans.lll import lll_condition_check, moser_tardos_it, sample_transversal
from indtrans.oracle import brute_force_transversal, certify_no_transversal, enumerate_transversals

from strategies import multipartite_graphs


def test_oracle_trivial_cases():
    res = brute_force_transversal(MultipartiteGraph([[7]]))
    assert res.exists and res.witness.assignment == {0: 7}
    pair = MultipartiteGraph([[0], [1]], [(0, 1)])
    assert brute_force_transversal(pair, s=3).exists
    assert not brute_force_transversal(pair, s=2).exists


def test_oracle_disjoint_cliques_count():
    res = brute_force_transversal(gen_disjoint_cliques(2), mode="count")
    assert (res.exists, res.count, res.witness) == (False, 0, None)
    assert enumerate_transversals(gen_disjoint_cliques(2)) == 0


def test_certify_grid_cases():
    assert certify_no_transversal(gen_clique_grid(4, 2), s=3)
    res = brute_force_transversal(gen_clique_grid(4, 3), s=3)
    assert res.exists and is_ks_free_transversal(gen_clique_grid(4, 3), res.witness, 3)
    edgeless = MultipartiteGraph([[0, 1], [2], [3, 4]])
    assert not any(certify_no_transversal(edgeless, s) for s in (2, 3, 4))


def test_oracle_budget_is_distinguishable():
    with pytest.raises(BudgetExceeded) as info:
        brute_force_transversal(gen_disjoint_cliques(3), node_budget=5)
    assert info.value.spent == 6
    with pytest.raises(InputError):
        brute_force_transversal(gen_disjoint_cliques(2), s=1)
    with pytest.raises(InputError):
        brute_force_transversal(gen_disjoint_cliques(2), mode="all")


@settings(max_examples=150, deadline=None)
@given(multipartite_graphs(max_parts=5, max_size=3), st.integers(2, 4))
def test_pruned_search_matches_enumeration(g, s):
    res = brute_force_transversal(g, s, mode="count")
    assert res.count == enumerate_transversals(g, s)
    assert res.exists == (res.count > 0)
    decided = brute_force_transversal(g, s)
    assert decided.exists == res.exists
    assert (decided.witness is not None) == decided.exists
    if decided.exists:
        assert is_ks_free_transversal(g, decided.witness, s)


def test_lll_condition_values():
    assert lll_condition_check(MultipartiteGraph([[0], [1]])) == 0.0
    # p = 1/4, d = 2*2*1 - 1 = 3
    g = MultipartiteGraph([[0, 1], [2, 3]], [(0, 2)])
    assert lll_condition_check(g) == pytest.approx(math.e * 0.25 * 4)
    big = gen_random_local_sparse(50, 33, 6, 6, seed=0)
    assert lll_condition_check(big) <= 1


def test_lll_rejects_empty_parts_and_intra_edges():
    with pytest.raises(InputError):
        moser_tardos_it(MultipartiteGraph([[0], []]), seed=0)
    with pytest.raises(InputError):
        moser_tardos_it(MultipartiteGraph([[0, 1]], [(0, 1)]), seed=0)


def test_lll_edgeless_needs_no_resamples():
    rep = moser_tardos_it(MultipartiteGraph([[0, 1], [2, 3], [4]]), seed=3)
    assert rep.success and rep.resample_count == 0 and rep.condition_margin == 0.0


def test_lll_fails_cleanly_without_it():
    rep = moser_tardos_it(gen_disjoint_cliques(2), seed=0, max_resamples=500)
    assert not rep.success and rep.transversal is None and rep.resample_count == 500
    assert rep.to_json()["transversal"] is None


def test_lll_is_deterministic():
    g = gen_random_local_sparse(30, 33, 6, 3, seed=2)
    a, b = moser_tardos_it(g, seed=11), moser_tardos_it(g, seed=11)
    assert a.transversal == b.transversal and a.resample_count == b.resample_count
    assert sample_transversal(g, 4) == sample_transversal(g, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_lll_output_is_independent(seed):
    g = gen_random_local_sparse(20, 33, 6, 6, seed % 1000)
    rep = moser_tardos_it(g, seed)
    assert rep.success and is_independent_transversal(g, rep.transversal)
