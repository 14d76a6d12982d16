"""(k,l)-median cost, Voronoi assignment, l-simplification and a bicriteria solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .geometry import Curve, CurvesetError, DimensionMismatch, GeomObject, MetricMismatch, PointSet
from .metrics import DEFAULT_TOL, FrechetTolerance, MetricKind, check_kind, distance, distance_matrix, pack

DEFAULT_ALPHA = 16.0
DEFAULT_BETA = 2.0


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True, eq=False)
class ClusteringInstance:
    """The weighted input set P together with the clustering parameters.

    Use :meth:`create` to build one from raw objects; it infers ``m`` and ``d``
    and normalizes the weights.
    """

    objects: tuple
    weights: np.ndarray
    metric: MetricKind
    k: int
    l: int
    m: int
    d: int
    ids: tuple = ()
    tol: FrechetTolerance = DEFAULT_TOL
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.objects:
            raise CurvesetError("instance needs at least one object")
        if self.k < 1 or self.l < 1:
            raise CurvesetError(f"k and l must be positive, got k={self.k}, l={self.l}")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (len(self.objects),):
            raise CurvesetError("one weight per object required")
        if not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise CurvesetError("weights must be positive and finite")
        if abs(w.sum() - 1.0) > 1e-9:
            raise CurvesetError(f"weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        for obj in self.objects:
            check_kind(self.metric, obj)
            if obj.dim != self.d:
                raise DimensionMismatch(f"object of dimension {obj.dim} in a {self.d}-d instance")
            if len(obj) > self.m:
                raise CurvesetError(f"object with {len(obj)} points exceeds m={self.m}")
        if not self.ids:
            object.__setattr__(self, "ids", tuple(str(i) for i in range(len(self.objects))))
        elif len(self.ids) != len(self.objects):
            raise CurvesetError("one id per object required")

    @classmethod
    def create(cls, objects: Sequence[GeomObject], metric: MetricKind, k: int, l: int,
               weights=None, ids=None, m: Optional[int] = None,
               tol: FrechetTolerance = DEFAULT_TOL) -> "ClusteringInstance":
        objects = tuple(objects)
        if not objects:
            raise CurvesetError("instance needs at least one object")
        if weights is None:
            w = np.full(len(objects), 1.0 / len(objects))
        else:
            w = np.asarray(weights, dtype=np.float64)
            if np.any(w <= 0):
                raise CurvesetError("weights must be positive")
            if abs(w.sum() - 1.0) > 1e-12:
                w = w / w.sum()
        dims = {o.dim for o in objects}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
        return cls(objects=objects, weights=w, metric=metric, k=int(k), l=int(l),
                   m=int(m) if m is not None else max(len(o) for o in objects),
                   d=dims.pop(), ids=tuple(ids) if ids is not None else (), tol=tol)

    def __len__(self) -> int:
        return len(self.objects)

    def with_params(self, **changes) -> "ClusteringInstance":
        fields = dict(objects=self.objects, weights=self.weights, metric=self.metric, k=self.k,
                      l=self.l, m=self.m, d=self.d, ids=self.ids, tol=self.tol)
        fields.update(changes)
        out = ClusteringInstance(**fields)
        if not {"objects", "metric", "tol"} & changes.keys():
            # cached pool distances depend only on the objects, metric and tolerance
            object.__setattr__(out, "_memo", self._memo)
        return out

    @cached_property
    def packed(self):
        return pack(self.objects)


@dataclass(frozen=True)
class CenterSet:
    centers: tuple

    def __init__(self, centers):
        centers = tuple(centers)
        if not centers:
            raise CurvesetError("a center set needs at least one center")
        object.__setattr__(self, "centers", centers)

    def __len__(self) -> int:
        return len(self.centers)

    def __iter__(self):
        return iter(self.centers)

    def validate(self, metric: MetricKind, l: int, d: int) -> None:
        for c in self.centers:
            check_kind(metric, c)
            if len(c) > l:
                raise CurvesetError(f"center with {len(c)} points exceeds l={l}")
            if c.dim != d:
                raise DimensionMismatch(f"center of dimension {c.dim}, expected {d}")


@dataclass(frozen=True)
class Assignment:
    owner: np.ndarray
    dist: np.ndarray


@dataclass(frozen=True)
class BicriteriaSolution:
    centers: CenterSet
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1:
            raise CurvesetError("alpha and beta must be >= 1")


def center_distances(inst: ClusteringInstance, centers: CenterSet) -> np.ndarray:
    """Distances from every object to every center, shape ``(n, len(centers))``."""
    centers.validate(inst.metric, inst.l, inst.d)
    return distance_matrix(inst.metric, inst.objects, centers.centers, inst.tol,
                           packed_rows=inst.packed)


def assign(inst: ClusteringInstance, centers: CenterSet) -> Assignment:
    dm = center_distances(inst, centers)
    # argmin returns the first minimum, i.e. the lowest center index on ties
    owner = np.argmin(dm, axis=1)
    return Assignment(owner=owner, dist=dm[np.arange(len(inst)), owner])


def cost(inst: ClusteringInstance, centers: CenterSet) -> float:
    return float(np.dot(inst.weights, center_distances(inst, centers).min(axis=1)))


def _gonzalez(points: np.ndarray, l: int) -> np.ndarray:
    chosen = [0]
    nearest = np.linalg.norm(points - points[0], axis=1)
    while len(chosen) < l:
        nxt = int(np.argmax(nearest))
        if nearest[nxt] == 0.0:
            break
        chosen.append(nxt)
        nearest = np.minimum(nearest, np.linalg.norm(points - points[nxt], axis=1))
    return points[chosen]


def _shortcut_errors(curve: Curve, kind: MetricKind, tol: FrechetTolerance) -> np.ndarray:
    P = curve.points
    n = len(P)
    err = np.zeros((n, n))
    for i in range(n - 1):
        for j in range(i + 2, n):
            err[i, j] = distance(kind, Curve(P[i:j + 1]), Curve(P[[i, j]]), tol)
    return err


def _fewest_vertices(err: np.ndarray, r: float):
    """Shortest path 0 -> n-1 using shortcuts with error <= r; returns vertex indices."""
    n = err.shape[0]
    count = np.full(n, np.iinfo(np.int64).max)
    pred = np.full(n, -1)
    count[0] = 1
    for j in range(1, n):
        for i in range(j):
            if err[i, j] <= r and count[i] + 1 < count[j]:
                count[j] = count[i] + 1
                pred[j] = i
    path = [n - 1]
    while path[-1] != 0:
        path.append(int(pred[path[-1]]))
    return path[::-1]


def simplify(obj: GeomObject, l: int, kind: MetricKind, tol: FrechetTolerance = DEFAULT_TOL) -> GeomObject:
    """Reduce ``obj`` to at most ``l`` of its own points.

    Curves keep a vertex subsequence with both endpoints that minimizes the
    largest shortcut error (the distance between each replaced stretch and its
    shortcut segment), found by binary search over the sorted shortcut errors.
    Point sets use farthest-point traversal.
    """
    if l < 1:
        raise CurvesetError(f"l must be >= 1, got {l}")
    check_kind(kind, obj)
    if len(obj) <= l:
        return obj
    if isinstance(obj, PointSet):
        return PointSet(_gonzalez(obj.points, l))
    if l == 1:
        # a single vertex: the best vertex is the one minimizing the farthest distance
        P = obj.points
        spread = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2).max(axis=1)
        return Curve(P[[int(np.argmin(spread))]])
    err = _shortcut_errors(obj, kind, tol)
    n = len(obj)
    candidates = np.unique(err[np.triu_indices(n, 1)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if len(_fewest_vertices(err, candidates[mid])) <= l:
            hi = mid
        else:
            lo = mid + 1
    return Curve(obj.points[_fewest_vertices(err, candidates[lo])])


def _center_pool(inst: ClusteringInstance):
    """Distinct simplified inputs, the map object -> pool index, and pool-to-object distances."""
    key = ("pool", inst.l)
    if key not in inst._memo:
        index = {}
        pool = []
        pool_of = np.empty(len(inst), dtype=np.int64)
        for i, obj in enumerate(inst.objects):
            s = simplify(obj, inst.l, inst.metric, inst.tol)
            if s not in index:
                index[s] = len(pool)
                pool.append(s)
            pool_of[i] = index[s]
        dm = distance_matrix(inst.metric, pool, inst.objects, inst.tol, packed_cols=inst.packed)
        inst._memo[key] = (pool, pool_of, dm)
    return inst._memo[key]


def _d1_seeding(dm, weights, pool_of, n_centers, rng) -> list[int]:
    n_pool = dm.shape[0]
    first = int(rng.choice(len(weights), p=weights))
    chosen = [int(pool_of[first])]
    nearest = dm[chosen[0]].copy()
    while len(chosen) < n_centers:
        taken = np.isin(pool_of, chosen)
        w = np.where(taken, 0.0, weights * nearest)
        if w.sum() <= 0:
            w = np.where(taken, 0.0, weights)
        total = w.sum()
        if total <= 0 or len(chosen) >= n_pool:
            break
        p = int(rng.choice(len(w), p=w / total))
        chosen.append(int(pool_of[p]))
        nearest = np.minimum(nearest, dm[chosen[-1]])
    return chosen


def _local_search(dm, weights, chosen: list[int], k: int) -> list[int]:
    chosen = list(chosen)
    current = float(np.dot(weights, dm[chosen].min(axis=0)))
    threshold = 1.0 - 1.0 / (4.0 * k)
    for _ in range(50 * k):
        if current <= 0.0:
            break
        best = (current, -1, -1)
        for t in range(len(chosen)):
            rest = chosen[:t] + chosen[t + 1:]
            base = dm[rest].min(axis=0) if rest else np.full(dm.shape[1], np.inf)
            costs = np.minimum(base[None, :], dm) @ weights
            costs[chosen] = np.inf
            cand = int(np.argmin(costs))
            if costs[cand] < best[0]:
                best = (float(costs[cand]), t, cand)
        if best[1] < 0 or not best[0] < threshold * current:
            break
        chosen[best[1]] = best[2]
        current = best[0]
    return chosen


def bicriteria(inst: ClusteringInstance, beta: float = DEFAULT_BETA,
               alpha_declared: float = DEFAULT_ALPHA, seed=0) -> BicriteriaSolution:
    """Up to ceil(beta*k) centers from the simplified inputs.

    D1 seeding followed by single-swap local search. ``alpha_declared`` is
    not verified; it is reported as the approximation factor.
    """
    if beta < 1 or alpha_declared < 1:
        raise CurvesetError("alpha and beta must be >= 1")
    n_centers = math.ceil(beta * inst.k)
    pool, pool_of, dm = _center_pool(inst)
    if len(pool) <= n_centers:
        chosen = list(range(len(pool)))
    else:
        chosen = _d1_seeding(dm, inst.weights, pool_of, n_centers, make_rng(seed))
        chosen = _local_search(dm, inst.weights, chosen, inst.k)
    return BicriteriaSolution(CenterSet(pool[i] for i in chosen), float(alpha_declared), float(beta))
