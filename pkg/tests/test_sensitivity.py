import numpy as np
import pytest

from curveset.clustering import (BicriteriaSolution, CenterSet, ClusteringInstance, _center_pool,
                                 bicriteria, cost)
from curveset.geometry import Curve
from curveset.metrics import MetricKind
from curveset.sensitivity import cluster_stats, sampling_distribution, sensitivity_upper_bounds
from oracles import brute_sensitivity
from conftest import random_instance

DFD = MetricKind.DISCRETE_FRECHET

# S equals 6*alpha + 4*(nonempty cells) analytically, so only rounding separates it from the bound
ROUNDING = 1e-9


def test_degenerate_opt_prime():
    c = Curve([[0, 0], [1, 0]])
    inst = ClusteringInstance.create([c] * 5, DFD, k=1, l=2)
    bic = BicriteriaSolution(CenterSet([c]), alpha=16.0, beta=1.0)
    st = cluster_stats(inst, bic)
    assert st.mu.tolist() == pytest.approx([1.0]) and st.mean_dist.tolist() == [0.0]
    assert st.opt_prime == 0.0
    prof = sensitivity_upper_bounds(inst, bic)
    assert np.allclose(prof.s, 4.0) and prof.S == pytest.approx(4.0)


def test_uniform_weights_match_count_form(rng):
    inst = random_instance(rng, n=30, k=3, metric=DFD)
    bic = bicriteria(inst, seed=2)
    prof = sensitivity_upper_bounds(inst, bic)
    st = prof.stats
    n = len(inst)
    sizes = np.bincount(st.cell_of)
    for i, cell in enumerate(st.cell_of):
        members = st.cell_of == cell
        m_i = st.dist[members].mean()
        expected = 2 * bic.alpha * (2 * m_i + st.dist[i]) / st.opt_prime + 4 * n / sizes[cell]
        assert prof.s[i] == pytest.approx(expected, rel=1e-12)


def test_cluster_stats_consistency(rng):
    inst = random_instance(rng, n=40, k=3, metric=MetricKind.CONTINUOUS_FRECHET, weighted=True)
    bic = bicriteria(inst, seed=5)
    st = cluster_stats(inst, bic)
    assert abs(st.mu.sum() - 1.0) <= 1e-9
    assert np.all(st.mean_dist >= 0)
    assert abs(st.opt_prime - cost(inst, bic.centers)) <= 1e-9
    assert abs(st.opt_prime - float(np.dot(st.mu, st.mean_dist))) <= 1e-9


def test_empty_cells_dropped():
    objs = [Curve([[0, 0]]), Curve([[0, 1]])]
    inst = ClusteringInstance.create(objs, DFD, k=1, l=1)
    far = Curve([[100, 100]])
    bic = BicriteriaSolution(CenterSet([far, Curve([[0, 0]])]), alpha=2.0, beta=2.0)
    st = cluster_stats(inst, bic)
    assert st.center_index.tolist() == [1]
    assert st.mu.tolist() == [1.0]


def test_lemma_bound_random_instances(rng):
    for trial in range(200):
        k = int(rng.integers(1, 5))
        metric = [DFD, MetricKind.HAUSDORFF][trial % 2]
        inst = random_instance(rng, n=int(rng.integers(5, 25)), m=5, k=k, l=3, metric=metric)
        bic = bicriteria(inst, beta=2.0, alpha_declared=16.0, seed=trial)
        prof = sensitivity_upper_bounds(inst, bic)
        bound = 6 * 16.0 + 4 * len(bic.centers)
        assert prof.S <= bound * (1 + ROUNDING)
        assert np.all(prof.s > 0)


def test_monotone_in_alpha(rng):
    inst = random_instance(rng, n=30, k=2, metric=DFD)
    bic = bicriteria(inst, seed=0)
    low = sensitivity_upper_bounds(inst, bic)
    high = sensitivity_upper_bounds(inst, BicriteriaSolution(bic.centers, 40.0, bic.beta))
    assert np.all(high.s >= low.s) and high.S >= low.S


def test_sampling_distribution(rng):
    inst = random_instance(rng, n=25, k=2, metric=DFD, weighted=True)
    prof = sensitivity_upper_bounds(inst, bicriteria(inst, seed=1))
    q = sampling_distribution(prof, inst)
    assert abs(q.sum() - 1.0) <= 1e-9
    target = prof.s * inst.weights
    for i in range(len(q) - 1):
        assert q[i] / q[i + 1] == pytest.approx(target[i] / target[i + 1], rel=1e-12)


def test_sampling_distribution_uniform_weights(rng):
    inst = random_instance(rng, n=25, k=2, metric=DFD)
    prof = sensitivity_upper_bounds(inst, bicriteria(inst, seed=1))
    q = sampling_distribution(prof, inst)
    assert np.allclose(q, prof.s / prof.s.sum(), rtol=1e-12, atol=0)
    c = Curve([[0, 0]])
    flat = ClusteringInstance.create([c] * 4, DFD, k=1, l=1)
    fp = sensitivity_upper_bounds(flat, BicriteriaSolution(CenterSet([c]), 16.0, 1.0))
    assert np.allclose(sampling_distribution(fp, flat), 0.25)


def test_pool_restricted_brute_force_sensitivity(rng):
    for trial in range(30):
        k = int(rng.integers(1, 4))
        metric = [DFD, MetricKind.CONTINUOUS_FRECHET, MetricKind.HAUSDORFF][trial % 3]
        inst = random_instance(rng, n=6, m=5, k=k, l=2, metric=metric, weighted=trial % 2 == 1)
        prof = sensitivity_upper_bounds(inst, bicriteria(inst, seed=trial))
        _, _, dm = _center_pool(inst)
        sens = brute_sensitivity(dm, inst.weights, k)
        assert np.all(sens <= prof.s * (1 + 1e-12))
