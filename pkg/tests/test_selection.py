import numpy as np
import pytest

from prefloc.attributes import Query
from prefloc.selection import (
    SelectionConfig,
    mcmv_utility,
    query_plane,
    select_best_of_n,
    select_closed_form,
    select_random,
)

from conftest import make_posterior


def test_query_plane_hand_case():
    plane = query_plane(Query(first=(1.0, 0.0), second=(0.0, 0.0)))
    assert np.array_equal(plane.normal, [2.0, 0.0])
    assert plane.offset == 1.0


def test_query_plane_bisects_midpoint():
    rng = np.random.default_rng(3)
    for _ in range(100):
        q = Query(first=rng.random(3), second=rng.random(3))
        plane = query_plane(q)
        midpoint = (q.first + q.second) / 2.0
        assert abs(plane.normal @ midpoint - plane.offset) < 1e-10


def test_query_plane_swap_negates():
    q = Query(first=(0.8, 0.1), second=(0.2, 0.6))
    swapped = Query(first=(0.2, 0.6), second=(0.8, 0.1))
    p, ps = query_plane(q), query_plane(swapped)
    assert np.array_equal(p.normal, -ps.normal)
    assert p.offset == pytest.approx(-ps.offset, abs=1e-15)


def test_mcmv_utility_hand_case():
    # v=(2,0): sigma_q = 4*0.01 = 0.04, mu_q = (1 - 1)/2 = 0 -> 10*0.04 = 0.4
    post = make_posterior([0.5, 0.5], 0.01 * np.eye(2))
    q = Query(first=(1.0, 0.0), second=(0.0, 0.0))
    assert mcmv_utility(q, post, 10.0, 1.0) == pytest.approx(0.4, abs=1e-12)


def test_mcmv_utility_mean_on_plane_drops_penalty():
    post = make_posterior([0.5, 0.5], np.array([[0.02, 0.005], [0.005, 0.01]]))
    q = Query(first=(0.7, 0.5), second=(0.3, 0.5))
    plane = query_plane(q)
    expected = 10.0 * float(plane.normal @ post.covariance @ plane.normal)
    assert mcmv_utility(q, post, 10.0, 5.0) == pytest.approx(expected, abs=1e-12)


def test_mcmv_variance_term_quadratic_in_separation():
    post = make_posterior([0.5, 0.5], 0.01 * np.eye(2))
    narrow = Query(first=(0.6, 0.5), second=(0.4, 0.5))
    wide = Query(first=(0.7, 0.5), second=(0.3, 0.5))
    u_narrow = mcmv_utility(narrow, post, 1.0, 0.0)
    u_wide = mcmv_utility(wide, post, 1.0, 0.0)
    assert u_wide == pytest.approx(4.0 * u_narrow, rel=1e-12)


def test_select_random_properties():
    q = select_random(2, seed=1)
    assert np.all(q.first >= 0) and np.all(q.first <= 1)
    assert np.all(q.second >= 0) and np.all(q.second <= 1)
    assert ((q.first - q.second) ** 2).sum() >= 1e-12

    again = select_random(2, seed=1)
    assert np.array_equal(q.first, again.first) and np.array_equal(q.second, again.second)


def test_select_random_uniform_moments():
    firsts = np.array([select_random(2, seed=s).first for s in range(10000)])
    assert np.all(np.abs(firsts.mean(axis=0) - 0.5) < 0.02)


def test_best_of_n_returns_pool_argmax():
    post = make_posterior([0.4, 0.6], np.diag([0.03, 0.001]))
    cfg = SelectionConfig(strategy="best_of_n", n_candidates=200, seed=17)
    chosen = select_best_of_n(post, cfg, 10.0)
    chosen_utility = mcmv_utility(chosen, post, 10.0, cfg.mean_cut_weight)

    # Re-draw the same candidate pool independently and re-score it.
    rng = np.random.default_rng(17)
    first = rng.random((200, 2))
    second = rng.random((200, 2))
    for f, s in zip(first, second):
        utility = mcmv_utility(Query(first=f, second=s), post, 10.0, cfg.mean_cut_weight)
        assert chosen_utility >= utility - 1e-12


def test_best_of_n_single_candidate_matches_select_random():
    post = make_posterior([0.5, 0.5], 0.01 * np.eye(2))
    cfg = SelectionConfig(strategy="best_of_n", n_candidates=1, seed=23)
    pool_of_one = select_best_of_n(post, cfg, 10.0)
    random_query = select_random(2, seed=23)
    assert np.array_equal(pool_of_one.first, random_query.first)
    assert np.array_equal(pool_of_one.second, random_query.second)


def test_best_of_n_aligns_with_max_variance_axis():
    post = make_posterior([0.5, 0.5], np.diag([0.04, 0.0004]))
    alignments = []
    for seed in range(20):
        cfg = SelectionConfig(strategy="best_of_n", n_candidates=500, seed=seed)
        q = select_best_of_n(post, cfg, 10.0)
        direction = q.first - q.second
        direction = direction / np.linalg.norm(direction)
        alignments.append(abs(direction[0]))
    assert np.mean(alignments) > 0.7


def test_best_of_n_expected_utility_monotone_in_pool_size():
    post = make_posterior([0.5, 0.5], np.diag([0.02, 0.005]))
    means = {}
    for n in (10, 500):
        utilities = []
        for seed in range(50):
            cfg = SelectionConfig(strategy="best_of_n", n_candidates=n, seed=seed)
            q = select_best_of_n(post, cfg, 10.0)
            utilities.append(mcmv_utility(q, post, 10.0, 1.0))
        means[n] = np.mean(utilities)
    assert means[500] >= means[10]


def test_closed_form_hand_case():
    post = make_posterior([0.5, 0.5], np.diag([0.04, 0.0001]))
    cfg = SelectionConfig(strategy="closed_form", spacing_stddevs=1.0, seed=0)
    q = select_closed_form(post, cfg)
    assert np.allclose(q.first, [0.7, 0.5], atol=1e-12)
    assert np.allclose(q.second, [0.3, 0.5], atol=1e-12)


def test_closed_form_boundary_shrinkage():
    post = make_posterior([0.95, 0.5], np.diag([0.04, 0.0001]))
    cfg = SelectionConfig(strategy="closed_form", spacing_stddevs=1.0, seed=0)
    q = select_closed_form(post, cfg)
    assert np.allclose(q.first, [1.0, 0.5], atol=1e-12)
    assert np.allclose(q.second, [0.9, 0.5], atol=1e-12)


def test_closed_form_mean_cut_exactness():
    rng = np.random.default_rng(12)
    for _ in range(100):
        mean = 0.2 + 0.6 * rng.random(2)
        basis = rng.standard_normal((2, 2))
        cov = basis @ basis.T * 0.002 + np.diag([1e-4, 2e-4])
        post = make_posterior(mean, cov)
        q = select_closed_form(post, SelectionConfig(strategy="closed_form", seed=1))
        plane = query_plane(q)
        residual = abs(plane.normal @ post.mean - plane.offset) / np.linalg.norm(plane.normal)
        assert residual < 1e-10


def test_closed_form_collapsed_posterior_fallback():
    post = make_posterior([0.5, 0.5], np.zeros((2, 2)))
    q = select_closed_form(post, SelectionConfig(strategy="closed_form", seed=6))
    separation = np.linalg.norm(q.first - q.second)
    assert separation == pytest.approx(0.02, abs=1e-9)
    midpoint = (q.first + q.second) / 2.0
    assert np.allclose(midpoint, [0.5, 0.5], atol=1e-12)


def test_closed_form_dominates_candidates_in_normalized_utility():
    # With the plane normal scaled out, the closed-form query attains the
    # maximum possible direction variance with zero mean distance, so no
    # candidate can beat it.
    rng = np.random.default_rng(31)
    for trial in range(10):
        mean = 0.25 + 0.5 * rng.random(2)
        basis = rng.standard_normal((2, 2))
        cov = basis @ basis.T * 0.01 + np.diag([5e-4, 1e-3])
        post = make_posterior(mean, cov)
        cf = select_closed_form(post, SelectionConfig(strategy="closed_form", seed=trial))

        def normalized_utility(q):
            plane = query_plane(q)
            norm = np.linalg.norm(plane.normal)
            sigma_dir = float(plane.normal @ post.covariance @ plane.normal) / norm**2
            mu = abs(float(plane.normal @ post.mean - plane.offset)) / norm
            return 10.0 * sigma_dir - mu

        best_candidate = max(
            normalized_utility(Query(first=rng.random(2), second=rng.random(2)))
            for _ in range(1000)
        )
        assert normalized_utility(cf) >= best_candidate - 1e-9


def test_selection_config_validation():
    with pytest.raises(ValueError):
        SelectionConfig(strategy="nonsense")
    with pytest.raises(ValueError):
        SelectionConfig(strategy="best_of_n", n_candidates=0)
    with pytest.raises(ValueError):
        SelectionConfig(mean_cut_weight=-1.0)
    with pytest.raises(ValueError):
        SelectionConfig(spacing_stddevs=0.0)
    with pytest.raises(ValueError):
        select_best_of_n(make_posterior([0.5, 0.5], np.eye(2) * 0.01),
                         SelectionConfig(strategy="random"), 10.0)


def test_selection_config_json_roundtrip():
    cfg = SelectionConfig(strategy="best_of_n", n_candidates=64, mean_cut_weight=2.0,
                          spacing_stddevs=1.5, seed=99)
    assert SelectionConfig.from_jsonable(cfg.to_jsonable()) == cfg
