"""Empirical checks of the coreset guarantee and the lower-bound instance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from .clustering import (DEFAULT_ALPHA, DEFAULT_BETA, CenterSet, ClusteringInstance, _center_pool,
                         bicriteria, center_distances, cost, make_rng)
from .coreset import SEED_MASK, CoresetMeta, WeightedCoreset, coreset_cost
from .geometry import Curve, CurvesetError, PointSet
from .metrics import MetricKind
from .sensitivity import sampling_distribution, sensitivity_upper_bounds

RANDOM_SUBSET = "random-subset"
PERTURBED = "perturbed"
BICRITERIA = "bicriteria-derived"

# exact diameter below this many points, bounding-box diagonal above
_EXACT_DIAMETER_LIMIT = 5000


@dataclass(frozen=True)
class CandidatePool:
    center_sets: list
    provenance: list

    def __len__(self) -> int:
        return len(self.center_sets)


@dataclass(frozen=True)
class ErrorReport:
    """Per-candidate errors of the coreset estimate.

    ``errors`` holds relative errors (NaN where the true cost is zero);
    those candidates appear in ``zero_cost`` as ``(index, absolute error)``.
    """

    true_costs: list
    estimates: list
    errors: list
    max_error: float
    mean_error: float
    eps: float
    passed: bool
    zero_cost: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "passed": self.passed,
            "max_error": self.max_error,
            "mean_error": self.mean_error,
            "true_costs": self.true_costs,
            "estimates": self.estimates,
            "errors": [None if math.isnan(e) else e for e in self.errors],
            "zero_cost": [list(z) for z in self.zero_cost],
        }


def instance_diameter(inst: ClusteringInstance) -> float:
    pts = np.unique(np.concatenate([o.points for o in inst.objects]), axis=0)
    if len(pts) < 2:
        return 0.0
    if len(pts) <= _EXACT_DIAMETER_LIMIT:
        return float(pdist(pts).max())
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def _subset(rng, n: int, k: int) -> np.ndarray:
    return rng.choice(n, size=k, replace=n < k)


def candidate_pool(inst: ClusteringInstance, k: int, l: int, count: int, seed) -> CandidatePool:
    """``count`` center sets of exactly ``k`` centers with at most ``l`` points each.

    Thirds: random subsets of the simplified inputs, the same with Gaussian
    noise of scale 10% of the instance diameter, and bicriteria solutions for
    fresh seeds cut or padded to ``k``.
    """
    if count < 1:
        raise CurvesetError("count must be >= 1")
    inst = inst.with_params(k=k, l=l)
    n_rand = count // 3 + (count % 3 > 0)
    n_pert = count // 3 + (count % 3 > 1)
    n_bic = count - n_rand - n_pert
    streams = np.random.SeedSequence(int(seed) & SEED_MASK).spawn(2 + n_bic)
    rng = make_rng(streams[0])
    pert_rng = make_rng(streams[1])
    pool, _, _ = _center_pool(inst)
    sets, tags = [], []
    for _ in range(n_rand):
        sets.append(CenterSet(pool[i] for i in _subset(rng, len(pool), k)))
        tags.append(RANDOM_SUBSET)
    scale = 0.1 * instance_diameter(inst)
    for _ in range(n_pert):
        centers = []
        for i in _subset(rng, len(pool), k):
            c = pool[i]
            noisy = c.points + pert_rng.normal(0.0, scale, size=c.points.shape)
            centers.append(type(c)(noisy))
        sets.append(CenterSet(centers))
        tags.append(PERTURBED)
    for j in range(n_bic):
        centers = list(bicriteria(inst, seed=streams[2 + j]).centers)[:k]
        while len(centers) < k:
            centers.append(pool[int(rng.integers(len(pool)))])
        sets.append(CenterSet(centers))
        tags.append(BICRITERIA)
    return CandidatePool(sets, tags)


def identity_coreset(inst: ClusteringInstance, eps: float = 0.1) -> WeightedCoreset:
    """The whole instance weighted by its own weights; an exact coreset."""
    n = len(inst)
    meta = CoresetMeta(a=n, S=1.0, eps=eps, seed=0, metric=inst.metric, k=inst.k, l=inst.l,
                       opt_prime=float("nan"))
    return WeightedCoreset(inst.objects, np.array(inst.weights), inst.ids,
                           np.arange(n, dtype=np.int64), np.ones(n), meta)


def certify(inst: ClusteringInstance, cs: WeightedCoreset, pool: CandidatePool) -> ErrorReport:
    true_costs, estimates, errors, zero = [], [], [], []
    for i, centers in enumerate(pool.center_sets):
        true = cost(inst, centers)
        est = coreset_cost(cs, centers, inst.metric, inst.tol)
        true_costs.append(true)
        estimates.append(est)
        if true > 0:
            errors.append(abs(est - true) / true)
        else:
            errors.append(float("nan"))
            zero.append((i, abs(est - true)))
    rel = [e for e in errors if not math.isnan(e)]
    max_error = max(rel) if rel else 0.0
    mean_error = float(np.mean(rel)) if rel else 0.0
    passed = max_error <= cs.meta.eps and all(z[1] == 0.0 for z in zero)
    return ErrorReport(true_costs, estimates, errors, max_error, mean_error, cs.meta.eps,
                       passed, zero)


def lower_bound_objects(n: int, delta: float = 10.0) -> list[np.ndarray]:
    """Vertex arrays of tau_r followed by tau_1 .. tau_n."""
    if n < 2:
        raise CurvesetError(f"n must be >= 2, got {n}")
    if delta < 4:
        raise CurvesetError(f"delta must be >= 4, got {delta}")
    xs = np.arange(n) * float(delta)
    out = [np.column_stack([xs, np.zeros(n)])]
    for i in range(n):
        ys = -np.ones(n)
        ys[i] = 1.0
        out.append(np.column_stack([xs, ys]))
    return out


def lower_bound_instance(n: int, delta: float = 10.0,
                         metric: MetricKind = MetricKind.CONTINUOUS_FRECHET,
                         k: int = 1, l: Optional[int] = None) -> ClusteringInstance:
    cls = PointSet if metric is MetricKind.HAUSDORFF else Curve
    objects = [cls(v) for v in lower_bound_objects(n, delta)]
    ids = ["tau_r"] + [f"tau_{i}" for i in range(1, n + 1)]
    return ClusteringInstance.create(objects, metric, k=k, l=l if l is not None else n, ids=ids)


@dataclass(frozen=True)
class TrialResult:
    failure_rate: float
    failures: int
    trials: int
    a: int
    S: float
    clamped: bool


def concentration_trial(inst: ClusteringInstance, centers: CenterSet, eps: float, trials: int,
                        seed, a: Optional[int] = None, alpha: float = DEFAULT_ALPHA,
                        beta: float = DEFAULT_BETA) -> TrialResult:
    """Fraction of independent samples whose estimate of cost(P, centers) is off by >= eps.

    The sample size defaults to ceil(2(S-1)/eps^2), clamped to at least 1.
    """
    if not 0 < eps < 1:
        raise CurvesetError(f"eps must lie in (0, 1), got {eps}")
    if trials < 1:
        raise CurvesetError("trials must be >= 1")
    streams = np.random.SeedSequence(int(seed) & SEED_MASK).spawn(trials + 1)
    profile = sensitivity_upper_bounds(inst, bicriteria(inst, beta, alpha, streams[0]))
    q = sampling_distribution(profile, inst)
    clamped = False
    if a is None:
        a = math.ceil(2.0 * (profile.S - 1.0) / eps ** 2)
        if a < 1:
            a, clamped = 1, True
    f = center_distances(inst, centers).min(axis=1)
    true = float(np.dot(inst.weights, f))
    contrib = profile.S / profile.s * f
    failures = 0
    for t in range(trials):
        idx = make_rng(streams[t + 1]).choice(len(inst), size=a, replace=True, p=q)
        est = contrib[idx].sum() / a
        gap = abs(est - true)
        if gap >= eps * true and (true > 0 or gap > 0):
            failures += 1
    return TrialResult(failures / trials, failures, trials, a, profile.S, clamped)
