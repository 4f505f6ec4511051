import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_biclique
from mweb.core import EDGE_WEIGHT, NODE_PLUS_EDGE, Biclique, ValidationError, WeightedBipartiteGraph
from mweb.core import biclique_weight
from mweb.reduce import (
    AmplificationParams,
    ProductParams,
    SimpleGraph,
    amplification_factor,
    clique_number,
    clique_to_mweb,
    duplicate,
    gamma_mask,
    gamma_product,
    hard_weight_set,
    in_ratio_window,
    mweb_to_problem_p,
    problem_p_bounds,
    project_solution,
    random_simple_graph,
    ratio_exponent,
    rescale,
    theoretical_N,
    verify_reduction,
)
from mweb.solve import solve_exact


def naive_clique_number(sg):
    adj = sg.adjacency()
    for k in range(sg.n, 0, -1):
        for sub in itertools.combinations(range(sg.n), k):
            if all(adj[a, b] for a, b in itertools.combinations(sub, 2)):
                return k


def test_clique_to_mweb_matrix():
    w = clique_to_mweb(SimpleGraph.path(3)).weights
    assert w.tolist() == [[1, 0, -1], [0, 1, 0], [-1, 0, 1]]


@pytest.mark.parametrize("sg, omega", [
    (SimpleGraph.complete(3), 3),
    (SimpleGraph.path(3), 2),
    (SimpleGraph(4), 1),
])
def test_clique_examples(sg, omega):
    assert clique_number(sg) == naive_clique_number(sg) == omega
    g = clique_to_mweb(sg)
    assert solve_exact(g).value == omega == brute_force_biclique(g.weights)


def test_p3_full_biclique_scores_one():
    g = clique_to_mweb(SimpleGraph.path(3))
    assert biclique_weight(g, Biclique.full(g)) == 1


def test_clique_oracle_matches_naive(rng):
    for _ in range(50):
        sg = random_simple_graph(int(rng.integers(1, 9)), rng.random(), rng)
        assert clique_number(sg) == naive_clique_number(sg)


def test_simple_graph_validation():
    with pytest.raises(ValidationError):
        SimpleGraph(3, frozenset({(1, 1)}))
    with pytest.raises(ValidationError):
        SimpleGraph(3, frozenset({(0, 3)}))


def test_product_q():
    assert ProductParams(0, -1, 1).q == 0.5
    assert ProductParams(-1, -3, 1).q == 0.5
    assert ProductParams(1, -1, 7).q == 0.25
    with pytest.raises(ValidationError):
        ProductParams(1, 1, 2)


def test_product_pure_duplication():
    out = gamma_product([[5]], ProductParams(0, -1, 1, n_copies=3, seed=1))
    assert out.weights.tolist() == [[5.0] * 3] * 3


def test_product_shape_and_copied_cells(rng):
    for seed in range(20):
        w = rng.choice([-1.0, 0.0, 1.0, 2.0], size=(3, 4))
        N = int(rng.integers(1, 4))
        out = gamma_product(w, ProductParams(0, -1, 1, n_copies=N, seed=seed))
        assert out.shape == (3 * N, 4 * N)
        mask = gamma_mask(w, 0, N)
        base = np.tile(w, (N, N))
        assert np.array_equal(out.weights[~mask], base[~mask])
        assert set(np.unique(out.weights[mask])) <= {-1.0, 1.0}


def test_product_block_indexing():
    w = np.array([[0, 7], [8, 9]], dtype=float)
    out = gamma_product(w, ProductParams(0, -1, 1, n_copies=2, seed=0)).weights
    # product vertex (copy a, inner i) has index a*n + i
    for a, b, i, j in itertools.product(range(2), repeat=4):
        if w[i, j] != 0:
            assert out[a * 2 + i, b * 2 + j] == w[i, j]


def test_product_seeded_determinism():
    p = ProductParams(0, -1, 1, n_copies=2, seed=99)
    w = [[0, 1], [0, 1]]
    assert gamma_product(w, p) == gamma_product(w, p)
    assert gamma_product(w, p) != gamma_product(w, ProductParams(0, -1, 1, 2, seed=100))


def test_product_mean_monte_carlo():
    w = np.array([[0, 1], [0, 1]], dtype=float)
    mask = gamma_mask(w, 0, 2)
    total = np.zeros((4, 4))
    trials = 20000
    for s in range(trials):
        total += gamma_product(w, ProductParams(0, -1, 1, 2, seed=s)).weights
    mean = total[mask].sum() / (mask.sum() * trials)
    assert abs(mean) < 0.02


def test_theoretical_N():
    assert theoretical_N(3, 0.5) == 81
    assert theoretical_N(1, 0.3) == 1
    # 2 ** (29/3) = 812.749..., whose ceiling is 813
    assert 2 ** (29 / 3) == pytest.approx(812.7493386)
    assert theoretical_N(2, 0.25) == 813
    for bad in (0, 0.6, -1):
        with pytest.raises(ValidationError):
            theoretical_N(3, bad)


def test_amplification_factor():
    assert amplification_factor(0.5, 0.04) == pytest.approx(0.2, abs=1e-12)
    assert amplification_factor(0.25, 1) == pytest.approx(32 / 3, abs=1e-12)
    assert AmplificationParams(0.1, 0.5).epsilon == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        amplification_factor(0.7, 1)


def test_project_single_block():
    g = WeightedBipartiteGraph([[1, -2], [3, 4]])
    prod = duplicate(g, 3)
    b = Biclique([2 + 0, 2 + 1], [4 + 1])  # copy 1 rows {0,1}, copy 2 column {1}
    proj, val = project_solution(g, prod, 3, b)
    assert proj == Biclique([0, 1], [1]) and val == 2


def test_project_full_duplication():
    g = WeightedBipartiteGraph([[1, -2], [3, 4]])
    prod = duplicate(g, 2)
    proj, val = project_solution(g, prod, 2, Biclique.full(prod))
    assert proj == Biclique.full(g) and val == 6


@pytest.mark.parametrize("objective", [EDGE_WEIGHT, NODE_PLUS_EDGE])
def test_project_averaging_bound(rng, objective):
    for _ in range(40):
        g = WeightedBipartiteGraph(rng.integers(-3, 4, size=(3, 3)))
        prod = duplicate(g, 2)
        b = Biclique(np.flatnonzero(rng.random(6) < 0.5), np.flatnonzero(rng.random(6) < 0.5))
        _, val = project_solution(g, prod, 2, b, EDGE_WEIGHT)
        # the 4 block-pair weights sum to the product weight, so their max beats the mean
        block_sum = sum(
            biclique_weight(g, Biclique([i % 3 for i in b.u1 if i // 3 == a],
                                        [j % 3 for j in b.u2 if j // 3 == c]))
            for a in range(2) for c in range(2)
        )
        assert block_sum == biclique_weight(prod, b)
        assert val >= block_sum / 4


def test_project_dimension_mismatch():
    with pytest.raises(ValidationError):
        project_solution([[1]], np.ones((3, 2)), 2, Biclique())


def test_mweb_to_problem_p_examples():
    g = WeightedBipartiteGraph([[1]])
    dup = mweb_to_problem_p(g)
    assert dup.shape == (4, 4) and np.all(dup.weights == 1)
    p_opt = solve_exact(dup, NODE_PLUS_EDGE).value
    assert p_opt == 24
    assert problem_p_bounds(1, 4, 2) == (16, 24)

    g = WeightedBipartiteGraph([[1, -1]])
    dup = mweb_to_problem_p(g, 3)
    assert dup.shape == (3, 6)
    lo, hi = problem_p_bounds(solve_exact(g).value, 3, 3)
    assert (lo, hi) == (9, 18)
    assert lo <= solve_exact(dup, NODE_PLUS_EDGE).value <= hi

    assert mweb_to_problem_p(WeightedBipartiteGraph([[1, -1], [-1, -1]]), 1) == \
        WeightedBipartiteGraph([[1, -1], [-1, -1]])


def test_mweb_to_problem_p_warns_on_other_weights():
    with pytest.warns(UserWarning, match="-1,1"):
        mweb_to_problem_p([[2, -1]], 1)


def test_ratio_window_family():
    for delta in (0.1, 0.25, 0.4, 0.5):
        for eta in (2, 5, 17, 100):
            ws = hard_weight_set(eta, delta)
            assert ws.ratio / eta ** (0.5 - delta) == pytest.approx(1.0, abs=1e-12)
            assert in_ratio_window(ws, eta, delta)
            assert in_ratio_window(hard_weight_set(eta, delta, inverted=True), eta, delta)
    ws = hard_weight_set(16, 0.25)
    assert ratio_exponent(ws, 16) == pytest.approx(0.25)
    assert not in_ratio_window(ws, 16, 0.4)


def test_rescale_preserves_argmax(rng):
    for _ in range(10):
        w = rng.choice([-3.0, 1.0], size=(4, 4))
        f = math.sqrt(3)
        assert solve_exact(rescale(w, f)).witness == solve_exact(w).witness


def test_verify_clique_reports():
    r = verify_reduction("clique", SimpleGraph.path(3))
    assert r.passed and r.trials[0]["clique_number"] == 2 == r.trials[0]["mweb_opt"]
    r = verify_reduction("clique", SimpleGraph.complete(3))
    assert r.passed and r.trials[0]["mweb_opt"] == 3
    assert verify_reduction("clique", trials=15, seed=3).passed


def test_verify_product_report():
    r = verify_reduction("product", np.array([[0, 1], [0, 1]], float), trials=100000, seed=5)
    assert r.passed
    assert len(r.trials) == 3


def test_verify_problem_p_report():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = verify_reduction("problem-p", trials=10, seed=1)
    assert r.passed and len(r.trials) == 30


@settings(max_examples=30, deadline=None)
@given(eta=st.integers(1, 10), eps=st.floats(1e-6, 10))
def test_formula_pins(eta, eps):
    assert theoretical_N(eta, 0.5) == eta**4
    assert amplification_factor(0.5, eps) == pytest.approx(5 * eps, abs=1e-12, rel=1e-12)
