import warnings

import numpy as np
import pytest

warnings.filterwarnings("ignore", message=".*TBB.*")

from curveset.clustering import ClusteringInstance  # noqa: E402
from curveset.geometry import Curve, PointSet  # noqa: E402
from curveset.metrics import MetricKind  # noqa: E402


def random_curve(rng, n, d=2, walk=True):
    steps = rng.normal(size=(n, d))
    return Curve(np.cumsum(steps, axis=0) if walk else steps)


def random_instance(rng, n=30, m=6, d=2, k=2, l=3, metric=MetricKind.DISCRETE_FRECHET,
                    weighted=False):
    objs = []
    for _ in range(n):
        size = int(rng.integers(1, m + 1))
        pts = rng.normal(scale=3.0, size=(size, d)) + rng.normal(scale=10.0, size=d)
        objs.append(PointSet(pts) if metric is MetricKind.HAUSDORFF else Curve(pts))
    weights = rng.uniform(0.5, 2.0, size=n) if weighted else None
    return ClusteringInstance.create(objs, metric, k=k, l=l, weights=weights, m=m)


def planted_instance(rng, n=500, k=3, m=8, metric=MetricKind.CONTINUOUS_FRECHET, noise=0.5):
    """Noisy copies of ``k`` random-walk prototypes, resampled to 5..m vertices."""
    protos = [np.cumsum(rng.normal(0, 3, size=(6, 2)), axis=0) + rng.normal(0, 20, 2)
              for _ in range(k)]
    objs = []
    for i in range(n):
        proto = protos[i % k]
        size = int(rng.integers(5, m + 1))
        t = np.linspace(0, len(proto) - 1, size)
        base = np.column_stack([np.interp(t, np.arange(len(proto)), proto[:, c]) for c in range(2)])
        pts = base + rng.normal(0, noise, base.shape)
        objs.append(PointSet(pts) if metric is MetricKind.HAUSDORFF else Curve(pts))
    return ClusteringInstance.create(objs, metric, k=k, l=4, m=m)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
