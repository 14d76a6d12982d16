import math

import numpy as np
import pytest

from curveset.clustering import CenterSet, ClusteringInstance, cost, simplify
from curveset.coreset import (CoresetConfig, CoresetMeta, WeightedCoreset, build_coreset,
                              coreset_cost, draw_sample, sample_size, size_terms)
from curveset.geometry import Curve, CurvesetError, MetricMismatch
from curveset.metrics import MetricKind, distance
from conftest import random_instance

DFD = MetricKind.DISCRETE_FRECHET
CFD = MetricKind.CONTINUOUS_FRECHET


def test_sample_size_override():
    assert sample_size(3, 4, 8, 2, CoresetConfig(eps=0.1, size_override=200)) == 200


def test_sample_size_closed_form():
    # ceil(4 * ln(2 + e)) = ceil(6.2061...) computed by hand
    assert sample_size(1, 1, 1, 1, CoresetConfig(eps=0.5, delta_exponent=1.0)) == 7


def test_sample_size_cubic_in_k():
    cfg = CoresetConfig(eps=0.2, delta_exponent=0.5)
    p1, _ = size_terms(2, 3, 8, 2, cfg)
    p2, _ = size_terms(4, 3, 8, 2, cfg)
    assert p2 / p1 == 8.0
    assert sample_size(4, 3, 8, 2, cfg) >= 8 * math.floor(p1)


def test_config_validation():
    with pytest.raises(CurvesetError):
        CoresetConfig(eps=1.0)
    with pytest.raises(CurvesetError):
        CoresetConfig(eps=0.5, delta_exponent=0)
    with pytest.raises(CurvesetError):
        CoresetConfig(eps=0.5, size_override=0)


def test_draw_sample_concentrated(rng):
    inst = random_instance(rng, n=5)
    q = np.array([0, 0, 1.0, 0, 0])
    assert draw_sample(inst, q, 50, 3).tolist() == [2] * 50


def test_draw_sample_frequencies(rng):
    inst = random_instance(rng, n=4)
    a = 10 ** 5
    idx = draw_sample(inst, np.full(4, 0.25), a, 99)
    freq = np.bincount(idx, minlength=4) / a
    sigma = math.sqrt(0.25 * 0.75 / a)
    assert np.all(np.abs(freq - 0.25) <= 3 * sigma)


def test_draw_sample_deterministic_and_validated(rng):
    inst = random_instance(rng, n=6)
    q = np.full(6, 1 / 6)
    assert draw_sample(inst, q, 30, 7).tolist() == draw_sample(inst, q, 30, 7).tolist()
    with pytest.raises(CurvesetError):
        draw_sample(inst, q, 0, 7)
    with pytest.raises(CurvesetError):
        draw_sample(inst, q * 2, 5, 7)


def test_zero_variance_instance():
    c = Curve([[0, 0], [1, 1], [2, 0]])
    inst = ClusteringInstance.create([c] * 12, CFD, k=2, l=2)
    cs = build_coreset(inst, CoresetConfig(eps=0.3, size_override=5, seed=4))
    assert np.allclose(cs.sens, cs.sens[0])
    for centers in (CenterSet([Curve([[0, 1], [3, 3]])]),
                    CenterSet([Curve([[5, 5]]), Curve([[0, 0], [2, 0]])])):
        assert coreset_cost(cs, centers, CFD) == pytest.approx(cost(inst, centers), rel=1e-12)


def test_build_deterministic(rng):
    inst = random_instance(rng, n=40, metric=CFD)
    cfg = CoresetConfig(eps=0.3, size_override=25, seed=123)
    a, b = build_coreset(inst, cfg), build_coreset(inst, cfg)
    assert a.indices.tolist() == b.indices.tolist()
    assert a.weights.tobytes() == b.weights.tobytes()
    assert a.meta == b.meta
    other = build_coreset(inst, CoresetConfig(eps=0.3, size_override=25, seed=124))
    assert other.indices.tolist() != a.indices.tolist()


def test_weight_formula_and_duplicates(rng):
    inst = random_instance(rng, n=10, metric=DFD)
    cs = build_coreset(inst, CoresetConfig(eps=0.3, size_override=60, seed=1))
    assert len(cs) == cs.meta.a == 60
    assert np.all(cs.weights > 0)
    rel = np.abs(cs.weights * cs.sens * cs.meta.a - cs.meta.S) / cs.meta.S
    assert rel.max() <= 1e-12
    counts = np.bincount(cs.indices)
    dup = int(np.argmax(counts))
    assert counts[dup] >= 2
    mask = cs.indices == dup
    s = cs.sens[mask][0]
    assert cs.weights[mask].sum() == pytest.approx(counts[dup] * cs.meta.S / (cs.meta.a * s),
                                                   rel=1e-12)


def test_expected_total_weight_is_one(rng):
    inst = random_instance(rng, n=50, k=2, metric=DFD)
    totals = [build_coreset(inst, CoresetConfig(eps=0.3, size_override=20, seed=s)).total_weight
              for s in range(1000)]
    assert 0.97 <= np.mean(totals) <= 1.03


def test_unbiased_estimator(rng):
    inst = random_instance(rng, n=50, k=2, metric=DFD, weighted=True)
    centers = CenterSet([simplify(inst.objects[i], inst.l, DFD) for i in (3, 17)])
    true = cost(inst, centers)
    est = [coreset_cost(build_coreset(inst, CoresetConfig(eps=0.3, size_override=15, seed=s)),
                        centers, DFD) for s in range(500)]
    se = np.std(est, ddof=1) / math.sqrt(len(est))
    assert abs(np.mean(est) - true) <= 3 * se


def _manual_coreset(objs, weights, metric=DFD, l=5):
    n = len(objs)
    meta = CoresetMeta(a=n, S=1.0, eps=0.2, seed=0, metric=metric, k=1, l=l)
    return WeightedCoreset(tuple(objs), np.asarray(weights, float), tuple(map(str, range(n))),
                           np.arange(n), np.ones(n), meta)


def test_coreset_cost_examples(rng):
    objs = [Curve(rng.normal(size=(3, 2))) for _ in range(3)]
    cs = _manual_coreset(objs, [0.2, 0.3, 0.5])
    assert coreset_cost(cs, CenterSet(objs), DFD) == 0.0
    one = _manual_coreset([Curve([[0, 0]])], [2.5])
    assert coreset_cost(one, CenterSet([Curve([[3, 4]])]), DFD) == 12.5
    with pytest.raises(MetricMismatch):
        coreset_cost(one, CenterSet([Curve([[3, 4]])]), CFD)


def test_coreset_cost_resummation(rng):
    inst = random_instance(rng, n=30, metric=CFD)
    cs = build_coreset(inst, CoresetConfig(eps=0.3, size_override=20, seed=9))
    centers = CenterSet([simplify(inst.objects[i], inst.l, CFD) for i in (1, 2)])
    expected = sum(w * min(distance(CFD, o, c) for c in centers)
                   for o, w in zip(cs.objects, cs.weights))
    assert coreset_cost(cs, centers, CFD) == pytest.approx(expected, rel=1e-12)
