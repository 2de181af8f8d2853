import itertools

import numpy as np
import pytest

from edgelimits.errors import BudgetExceeded, PreconditionError, ShapeError
from edgelimits.graphon import (StepGraphon, StepKernel, cut_distance_aligned, cut_seminorm,
                                graph_to_graphon, tau)
from edgelimits.graphs import (SimpleGraph, all_graphs, complete_graph, cycle_graph,
                               path_graph, random_graph)
from oracles import brute_cut, brute_hom

K2_GRAPHON = StepGraphon([0.5, 0.5], [[0, 1], [1, 0]])


def random_graphon(rng, q, uniform=True):
    v = rng.random((q, q))
    vals = (v + v.T) / 2
    if uniform:
        return StepGraphon.uniform(vals)
    w = rng.random(q) + 0.1
    return StepGraphon(w / w.sum(), vals)


# -- tau ---------------------------------------------------------------------

@pytest.mark.parametrize("F", [complete_graph(2), cycle_graph(4), path_graph(4),
                               SimpleGraph(3, [])])
def test_tau_constant_graphon(F):
    assert tau(StepGraphon.constant(0.3), F) == pytest.approx(0.3 ** F.n_edges, rel=1e-12)


def test_tau_k2_graphon_examples():
    assert tau(K2_GRAPHON, complete_graph(2)) == 0.5
    assert tau(K2_GRAPHON, complete_graph(3)) == 0.0


def test_graph_to_graphon_of_k2():
    w = graph_to_graphon(complete_graph(2))
    assert np.array_equal(w.vals, K2_GRAPHON.vals) and np.array_equal(w.mu, K2_GRAPHON.mu)


def test_tau_c5_edge_density():
    assert tau(graph_to_graphon(cycle_graph(5)), complete_graph(2)) == pytest.approx(0.4, abs=1e-15)


def test_tau_equals_hom_count_triangle(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        G = random_graph(n, 0.6, rng)
        dens = tau(graph_to_graphon(G), complete_graph(3))
        assert dens * n ** 3 == pytest.approx(brute_hom(3, complete_graph(3).edges, G.adjacency()), abs=1e-9)


def test_tau_budget():
    w = StepGraphon.uniform(np.full((40, 40), 0.5))
    with pytest.raises(BudgetExceeded):
        tau(w, SimpleGraph(6, []))


def test_tau_nonuniform_by_direct_sum(rng):
    w = random_graphon(rng, 3, uniform=False)
    F = path_graph(3)
    ref = sum(w.mu[a] * w.mu[b] * w.mu[c] * w.vals[a, b] * w.vals[b, c]
              for a, b, c in itertools.product(range(3), repeat=3))
    assert tau(w, F) == pytest.approx(ref, rel=1e-12)


# -- cut seminorm --------------------------------------------------------------

def test_cut_zero():
    assert cut_seminorm(StepGraphon.uniform(np.zeros((3, 3)))).value == 0.0


def test_cut_single_block():
    sv = cut_seminorm(StepGraphon.constant(0.7))
    assert sv.value == pytest.approx(0.7) and sv.locator == ((0,), (0,))


def test_cut_identity_two_blocks():
    # enumeration of all 16 subset pairs: S = T = {0, 1} wins with 1/2
    w = StepGraphon.uniform(np.eye(2))
    assert cut_seminorm(w).value == pytest.approx(0.5, abs=1e-15)
    assert brute_cut([0.5, 0.5], np.eye(2)) == 0.5


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_cut_matches_enumeration_on_differences(rng, q):
    for _ in range(5):
        d = random_graphon(rng, q, uniform=False)
        e = StepGraphon(d.mu, random_graphon(rng, q).vals)
        diff = d - e
        assert cut_seminorm(diff).value == pytest.approx(brute_cut(diff.mu, diff.vals), abs=1e-12)


def test_cut_blocks_are_optimal_under_refinement(rng):
    # split every block in two; the optimum over the finer partition must not improve
    g = random_graphon(rng, 4, uniform=False)
    w = StepKernel(g.mu, g.vals - 0.5)
    base = cut_seminorm(w).value
    for _ in range(5):
        frac = rng.uniform(0.1, 0.9, size=4)
        idx = np.repeat(np.arange(4), 2)
        mu = np.ravel(np.column_stack([w.mu * frac, w.mu * (1 - frac)]))
        fine = StepKernel(mu / mu.sum(), w.vals[np.ix_(idx, idx)])
        assert cut_seminorm(fine).value == pytest.approx(base, abs=1e-12)


def test_cut_pseudometric(rng):
    for _ in range(30):
        a, b, c = (random_graphon(rng, 4) for _ in range(3))
        dab = cut_seminorm(a - b).value
        assert dab == cut_seminorm(b - a).value
        assert dab <= cut_seminorm(a - c).value + cut_seminorm(c - b).value + 1e-9


def test_kernel_validation():
    with pytest.raises(PreconditionError):
        StepGraphon([1.0], [[1.5]])
    with pytest.raises(PreconditionError):
        StepKernel([0.5, 0.5], [[0, 1], [0, 0]])
    with pytest.raises(ShapeError):
        StepKernel([0.5, 0.5], [[0]])
    with pytest.raises(ShapeError):
        StepGraphon.uniform(np.eye(2)) - StepGraphon([0.3, 0.7], np.eye(2))


# -- aligned cut distance -------------------------------------------------------

def test_aligned_distance_to_permuted_copy(rng):
    w = random_graphon(rng, 5)
    perm = rng.permutation(5)
    res = cut_distance_aligned(w, w.permuted(perm))
    assert res.value == 0.0
    assert w.permuted(perm).permuted(res.permutation).vals.tolist() == w.vals.tolist()


def test_aligned_constant_difference():
    ones = StepGraphon.uniform(np.ones((3, 3)))
    zeros = StepGraphon.uniform(np.zeros((3, 3)))
    res = cut_distance_aligned(ones, zeros)
    assert res.value == pytest.approx(1.0, abs=1e-15)
    assert res.cut == ((0, 1, 2), (0, 1, 2))


def test_aligned_at_most_identity_alignment(rng):
    for _ in range(10):
        a, b = random_graphon(rng, 4), random_graphon(rng, 4)
        assert cut_distance_aligned(a, b).value <= cut_seminorm(a - b).value


def test_aligned_relabeling_invariance_exact_on_dyadic(rng):
    # dyadic values with mu = 1/4 make every partial sum exact
    for _ in range(10):
        v = rng.integers(0, 9, size=(4, 4)) / 8
        a = StepGraphon.uniform(np.maximum(v, v.T))
        v = rng.integers(0, 9, size=(4, 4)) / 8
        b = StepGraphon.uniform(np.maximum(v, v.T))
        sigma = rng.permutation(4)
        assert cut_distance_aligned(a.permuted(sigma), b).value == cut_distance_aligned(a, b).value


def test_aligned_relabeling_invariance_random(rng):
    for _ in range(10):
        a, b = random_graphon(rng, 4), random_graphon(rng, 4)
        sigma = rng.permutation(4)
        assert cut_distance_aligned(a.permuted(sigma), b).value == pytest.approx(
            cut_distance_aligned(a, b).value, abs=1e-15)


def test_aligned_preconditions(rng):
    with pytest.raises(PreconditionError):
        cut_distance_aligned(random_graphon(rng, 3, uniform=False), random_graphon(rng, 3))
    with pytest.raises(PreconditionError):
        cut_distance_aligned(random_graphon(rng, 3), random_graphon(rng, 4))
    with pytest.raises(BudgetExceeded):
        cut_distance_aligned(random_graphon(rng, 9), random_graphon(rng, 9))


# -- sampling convergence -------------------------------------------------------

def test_sampled_densities_approach_limit():
    rng = np.random.default_rng(7)
    graphs = {"K2": complete_graph(2), "path3": path_graph(3), "triangle": complete_graph(3)}
    gaps = {name: [] for name in graphs}
    for n in (20, 40, 80):
        ws = [graph_to_graphon(random_graph(n, 0.5, rng)) for _ in range(20)]
        for name, F in graphs.items():
            mean = np.mean([tau(w, F) for w in ws])
            gaps[name].append(abs(mean - 0.5 ** F.n_edges))
    for name, g in gaps.items():
        # the missing diagonal biases densities by O(1/n); sample noise is smaller at n = 80
        assert g[2] < g[0], (name, g)
        assert g[2] <= 0.05


def test_tau_matches_hom_counts_small_graphs(rng):
    Fs = list(all_graphs(4, min_vertices=1))
    for _ in range(5):
        n = int(rng.integers(1, 7))
        G = random_graph(n, 0.5, rng)
        w = graph_to_graphon(G)
        for F in Fs:
            hom = brute_hom(F.n_vertices, F.edges, G.adjacency())
            assert tau(w, F) == pytest.approx(hom / n ** F.n_vertices, abs=1e-12)
