"""Importance-sampling coreset construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .clustering import (DEFAULT_ALPHA, DEFAULT_BETA, CenterSet, ClusteringInstance, bicriteria,
                         make_rng)
from .geometry import CurvesetError, MetricMismatch
from .metrics import DEFAULT_TOL, FrechetTolerance, MetricKind, distance_matrix
from .sensitivity import SensitivityProfile, sampling_distribution, sensitivity_upper_bounds

SEED_MASK = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class CoresetConfig:
    eps: float
    delta_exponent: float = 1.0
    size_constant: float = 1.0
    size_override: Optional[int] = None
    seed: int = 0
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise CurvesetError(f"eps must lie in (0, 1), got {self.eps}")
        if self.delta_exponent <= 0 or self.size_constant <= 0:
            raise CurvesetError("delta_exponent and size_constant must be positive")
        if self.size_override is not None and self.size_override < 1:
            raise CurvesetError("size_override must be a positive integer")


@dataclass(frozen=True)
class CoresetMeta:
    a: int
    S: float
    eps: float
    seed: int
    metric: MetricKind
    k: int
    l: int
    size_constant: float = 1.0
    delta_exponent: float = 1.0
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    opt_prime: float = float("nan")


@dataclass(frozen=True, eq=False)
class WeightedCoreset:
    """Sampled objects with importance weights. Repeated draws stay separate entries.

    ``indices`` refer to positions in the source instance; ``sens`` holds the
    sensitivity bound s(p) used to weight each entry.
    """

    objects: tuple
    weights: np.ndarray
    ids: tuple
    indices: np.ndarray
    sens: np.ndarray
    meta: CoresetMeta

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


def size_terms(k: int, l: int, m: int, d: int, cfg: CoresetConfig) -> tuple[float, float]:
    """The polynomial factor and the logarithmic factor of the sample size."""
    poly = cfg.size_constant * k ** 3 * l * m ** cfg.delta_exponent * d / cfg.eps ** 2
    return poly, math.log(k * l / cfg.eps + math.e)


def sample_size(k: int, l: int, m: int, d: int, cfg: CoresetConfig) -> int:
    if min(k, l, m, d) < 1:
        raise CurvesetError("k, l, m, d must be positive")
    if cfg.size_override is not None:
        return int(cfg.size_override)
    poly, log = size_terms(k, l, m, d, cfg)
    return max(1, math.ceil(poly * log))


def draw_sample(inst: ClusteringInstance, q: np.ndarray, a: int, seed) -> np.ndarray:
    """``a`` independent draws of object indices from ``q``."""
    if a < 1:
        raise CurvesetError(f"sample size must be >= 1, got {a}")
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (len(inst),) or abs(q.sum() - 1.0) > 1e-9 or np.any(q < 0):
        raise CurvesetError("q must be a probability vector over the instance")
    return make_rng(seed).choice(len(inst), size=a, replace=True, p=q)


def assemble(inst: ClusteringInstance, profile: SensitivityProfile, idx: np.ndarray,
             meta: CoresetMeta) -> WeightedCoreset:
    s = profile.s[idx]
    weights = profile.S / (len(idx) * s)
    return WeightedCoreset(
        objects=tuple(inst.objects[i] for i in idx),
        weights=weights,
        ids=tuple(inst.ids[i] for i in idx),
        indices=np.asarray(idx, dtype=np.int64),
        sens=s,
        meta=meta,
    )


def stage_seeds(seed: int):
    """Independent generator streams for the bicriteria and the sampling stage."""
    bic_seq, sample_seq = np.random.SeedSequence(int(seed) & SEED_MASK).spawn(2)
    return bic_seq, sample_seq


def build_coreset(inst: ClusteringInstance, cfg: CoresetConfig) -> WeightedCoreset:
    bic_seq, sample_seq = stage_seeds(cfg.seed)
    bic = bicriteria(inst, beta=cfg.beta, alpha_declared=cfg.alpha, seed=bic_seq)
    profile = sensitivity_upper_bounds(inst, bic)
    q = sampling_distribution(profile, inst)
    a = sample_size(inst.k, inst.l, inst.m, inst.d, cfg)
    idx = draw_sample(inst, q, a, sample_seq)
    meta = CoresetMeta(a=a, S=profile.S, eps=cfg.eps, seed=cfg.seed, metric=inst.metric,
                       k=inst.k, l=inst.l, size_constant=cfg.size_constant,
                       delta_exponent=cfg.delta_exponent, alpha=cfg.alpha, beta=cfg.beta,
                       opt_prime=profile.stats.opt_prime)
    return assemble(inst, profile, idx, meta)


def coreset_cost(cs: WeightedCoreset, centers: CenterSet, metric: MetricKind,
                 tol: FrechetTolerance = DEFAULT_TOL) -> float:
    if metric is not cs.meta.metric:
        raise MetricMismatch(f"coreset built for {cs.meta.metric.value}, asked for {metric.value}")
    for c in centers:
        if len(c) > cs.meta.l:
            raise CurvesetError(f"center with {len(c)} points exceeds l={cs.meta.l}")
    dm = distance_matrix(metric, cs.objects, centers.centers, tol)
    return float(np.dot(cs.weights, dm.min(axis=1)))
