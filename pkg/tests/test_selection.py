import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from gpsubset.generators import collinear_points, grid_2d, random_bounded_collinear
from gpsubset.geometry import PointSet, collinearity_profile
from gpsubset.hypergraph import build_collinearity_hypergraph
from gpsubset.selection import (
    SelectionError,
    SelectionResult,
    spencer_trial,
    exact_max_subset,
    gowers_witness,
    greedy_select,
    local_search_improve,
    select_best,
    spencer_bound,
    spencer_probability,
    spencer_select,
)
from gpsubset.rng import substream

import oracles

GP4 = PointSet([(0, 0), (1, 0), (0, 1), (2, 3)])
small_points = st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=11)


def test_result_rejects_invalid_subset():
    with pytest.raises(SelectionError):
        SelectionResult(collinear_points(3), 2, "manual", 0)


def test_greedy_examples():
    assert greedy_select(collinear_points(5), 2).size == 2
    for seed in range(30):
        assert greedy_select(grid_2d(3), 2, seed=seed).size >= 4
    assert greedy_select(GP4, 2).size == 4


def test_greedy_deterministic_per_seed():
    P = random_bounded_collinear(30, 4, 10, seed=3)
    assert greedy_select(P, 2, seed=5).subset == greedy_select(P, 2, seed=5).subset


@given(small_points, st.sampled_from([2, 3]), st.integers(0, 2**32))
def test_greedy_certificate_and_maximality(pts, k, seed):
    P = PointSet(pts)
    res = greedy_select(P, k, seed=seed)
    assert res.certificate.holds
    assert res.certificate.s + res.certificate.rejected == len(P)
    chosen = set(res.subset)
    for p in P:
        if p not in chosen:
            assert oracles.has_k_plus_one_collinear(list(chosen) + [p], k)


def test_spencer_bound_and_probability():
    assert spencer_bound(9, 8, 3) == pytest.approx(2 / 3**1.5 * 9 / math.sqrt(8 / 9))
    assert spencer_bound(9, 8, 3) == pytest.approx(3.674, abs=1e-3)
    assert spencer_bound(12, 1, 3) == 6
    assert spencer_probability(9, 8, 3) == pytest.approx(math.sqrt(9 / 24))
    assert spencer_probability(12, 1, 3) == 1.0


def test_spencer_examples():
    H0 = build_collinearity_hypergraph(GP4, 3)
    assert spencer_select(H0, 3).size == 4
    H = build_collinearity_hypergraph(grid_2d(3), 3)
    res = spencer_select(H, 500, seed=11)
    assert res.size >= 4
    assert res.certificate.trials == 500
    L = build_collinearity_hypergraph(collinear_points(5), 3)
    res = spencer_select(L, 200, seed=1)
    assert res.size == 2 == oracles.max_subset_size(list(collinear_points(5)), 2)


@settings(max_examples=50)
@given(small_points, st.sampled_from([3, 4]), st.integers(0, 2**32))
def testspencer_trial_always_independent(pts, r, seed):
    H = build_collinearity_hypergraph(pts, r)
    keep = (substream(seed, "t").random(H.n) < 0.7).tolist()
    indep = spencer_trial(H, list(keep))
    assert H.is_independent([H.points[v] for v in indep])
    # only deletes from the kept set, at most one vertex per surviving edge
    kept = {v for v, kv in enumerate(keep) if kv}
    assert set(indep) <= kept
    surviving = sum(1 for e in oracles.edges([H.points[v] for v in sorted(kept)], r))
    assert len(kept) - len(indep) <= surviving


def test_spencer_sparse_case_beats_half():
    # one collinear triple among 12 points: m < n/3, so p = 1 and one deletion
    pts = [(0, 0), (1, 1), (2, 2)] + [(i, i * i + 7) for i in range(3, 12)]
    P = PointSet(pts)
    H = build_collinearity_hypergraph(P, 3)
    assert H.m < H.n / 3
    res = spencer_select(H, 20, seed=0)
    assert res.certificate.p == 1.0
    assert float(res.certificate.mean_size) > H.n / 2


def test_local_search_budget_zero_is_identity():
    start = greedy_select(grid_2d(3), 2, seed=11)
    assert local_search_improve(grid_2d(3), start, 0) is start


def test_local_search_keeps_optimal():
    opt = exact_max_subset(grid_2d(3), 2)
    out = local_search_improve(grid_2d(3), opt, 500, seed=1)
    assert out.size == 6


def test_local_search_grid3_from_size_four():
    start = greedy_select(grid_2d(3), 2, seed=11)
    assert start.size == 4
    out = local_search_improve(grid_2d(3), start, 10_000, seed=0)
    assert out.size >= 5
    assert out.size == 6  # frozen-seed regression


@settings(max_examples=40)
@given(small_points, st.integers(0, 1000))
def test_local_search_never_shrinks(pts, seed):
    P = PointSet(pts)
    start = greedy_select(P, 2, seed=seed)
    out = local_search_improve(P, start, 50, seed=seed)
    assert out.size >= start.size
    assert not oracles.has_k_plus_one_collinear(list(out.subset), 2)


def test_select_best_examples():
    res = select_best(GP4, 2, seed=0)
    assert res.size == 4 and res.strategy == "greedy"
    assert select_best(grid_2d(3), 2, seed=0).size >= 5
    assert select_best(collinear_points(7), 2, seed=0).size == 2


def test_select_best_tie_goes_to_first_strategy():
    res = select_best(GP4, 2, strategies=("spencer", "greedy"), seed=0)
    assert res.strategy == "spencer"


def test_select_best_rejects_unknown():
    with pytest.raises(SelectionError):
        select_best(GP4, 2, strategies=("magic",))
    with pytest.raises(SelectionError):
        select_best(GP4, 2, strategies=())


def test_exact_examples():
    r3 = exact_max_subset(grid_2d(3), 2)
    assert r3.size == 6 and r3.proven_optimal
    assert oracles.max_subset_size(list(grid_2d(3)), 2) == 6
    r4 = exact_max_subset(grid_2d(4), 2)
    assert r4.size == 8 and r4.proven_optimal
    assert exact_max_subset(collinear_points(5), 3).size == 3


def test_exact_node_limit_flags_unproven():
    res = exact_max_subset(grid_2d(9), 2, node_limit=5)
    assert res.proven_optimal is False
    assert not oracles.has_k_plus_one_collinear(list(res.subset), 2)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=10), st.sampled_from([2, 3]))
def test_exact_matches_bruteforce(pts, k):
    res = exact_max_subset(pts, k)
    assert res.proven_optimal
    assert res.size == oracles.max_subset_size(sorted(pts), k)


def test_heuristics_never_beat_exact(corpus):
    for name, P in corpus.items():
        if len(P) > 30:
            continue
        ex = exact_max_subset(P, 2)
        if not ex.proven_optimal:
            continue
        for strat in ("greedy", "spencer", "spencer+ls", "greedy+ls"):
            assert select_best(P, 2, strategies=(strat,), seed=3).size <= ex.size, (name, strat)


def test_gowers_examples():
    w = gowers_witness(grid_2d(3), 3)
    assert w.kind == "collinear" and len(w.points) == 3
    assert oracles.all_collinear(list(w.points))
    w = gowers_witness(grid_2d(3), 4)
    assert w.kind == "general_position" and len(w.points) == 4
    assert not oracles.has_k_plus_one_collinear(list(w.points), 2)
    w = gowers_witness(GP4, 4)
    assert w.kind == "general_position"


def test_gowers_unresolved_when_too_small():
    w = gowers_witness(PointSet([(0, 0), (1, 0), (0, 1)]), 4)
    assert w.kind == "unresolved" and not w.resolved
    with pytest.raises(SelectionError):
        gowers_witness(GP4, 2)
