"""Discrete and continuous Fréchet distance, Hausdorff distance, and dispatch."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .geometry import Curve, DimensionMismatch, GeomObject, MetricMismatch, PointSet


class MetricKind(enum.Enum):
    CONTINUOUS_FRECHET = "frechet"
    DISCRETE_FRECHET = "discrete-frechet"
    HAUSDORFF = "hausdorff"

    @property
    def object_type(self) -> type:
        return PointSet if self is MetricKind.HAUSDORFF else Curve

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {
    MetricKind.CONTINUOUS_FRECHET: _kernels.KIND_CONTINUOUS,
    MetricKind.DISCRETE_FRECHET: _kernels.KIND_DISCRETE,
    MetricKind.HAUSDORFF: _kernels.KIND_HAUSDORFF,
}


@dataclass(frozen=True)
class FrechetTolerance:
    """Precision of the continuous Fréchet bisection."""

    relative: float = 1e-9
    absolute: float = 1e-12

    def __post_init__(self):
        if not (self.relative > 0 and self.absolute > 0):
            raise ValueError("Fréchet tolerances must be strictly positive")


DEFAULT_TOL = FrechetTolerance()


def _pair(a, b, cls) -> tuple[np.ndarray, np.ndarray]:
    if not isinstance(a, cls) or not isinstance(b, cls):
        raise MetricMismatch(
            f"expected two {cls.__name__} objects, got {type(a).__name__} and {type(b).__name__}"
        )
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    return a.points, b.points


def discrete_frechet(c1: Curve, c2: Curve) -> float:
    """Discrete Fréchet distance (Eiter-Mannila dynamic program)."""
    P, Q = _pair(c1, c2, Curve)
    return float(_kernels.discrete_frechet(P, Q))


def continuous_frechet_decision(c1: Curve, c2: Curve, r: float) -> bool:
    """Whether the Fréchet distance is at most ``r``, by free-space reachability."""
    P, Q = _pair(c1, c2, Curve)
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return bool(_kernels.frechet_decision(P, Q, float(r)))


def continuous_frechet(c1: Curve, c2: Curve, tol: FrechetTolerance = DEFAULT_TOL) -> float:
    """Continuous Fréchet distance, by bisection between the endpoint lower bound
    and the discrete Fréchet upper bound.

    The returned ``v`` satisfies ``decide(v*(1+rel)+abs)`` and
    ``not decide(v*(1-rel)-abs)``.
    """
    P, Q = _pair(c1, c2, Curve)
    return float(_kernels.continuous_frechet(P, Q, tol.relative, tol.absolute))


def hausdorff(s1: PointSet, s2: PointSet) -> float:
    A, B = _pair(s1, s2, PointSet)
    return float(_kernels.hausdorff(A, B))


def check_kind(kind: MetricKind, obj) -> None:
    if not isinstance(obj, kind.object_type):
        raise MetricMismatch(f"{kind.value} expects {kind.object_type.__name__}, got {type(obj).__name__}")


def distance(kind: MetricKind, a: GeomObject, b: GeomObject, tol: FrechetTolerance = DEFAULT_TOL) -> float:
    check_kind(kind, a)
    check_kind(kind, b)
    if kind is MetricKind.CONTINUOUS_FRECHET:
        return continuous_frechet(a, b, tol)
    if kind is MetricKind.DISCRETE_FRECHET:
        return discrete_frechet(a, b)
    return hausdorff(a, b)


def pack(objects: Sequence[GeomObject]) -> tuple[np.ndarray, np.ndarray]:
    """Stack object vertices into one array with an offsets vector."""
    sizes = np.array([len(o) for o in objects], dtype=np.int64)
    offsets = np.zeros(len(objects) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    flat = np.ascontiguousarray(np.concatenate([o.points for o in objects], axis=0))
    return flat, offsets


def distance_matrix(
    kind: MetricKind,
    rows: Sequence[GeomObject],
    cols: Sequence[GeomObject],
    tol: FrechetTolerance = DEFAULT_TOL,
    *,
    packed_rows=None,
    packed_cols=None,
) -> np.ndarray:
    """All distances ``distance(kind, rows[i], cols[j])`` as a ``(len(rows), len(cols))`` array."""
    dims = {o.dim for o in rows} | {o.dim for o in cols}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    for o in rows:
        check_kind(kind, o)
    for o in cols:
        check_kind(kind, o)
    fa, oa = packed_rows if packed_rows is not None else pack(rows)
    fb, ob = packed_cols if packed_cols is not None else pack(cols)
    return _kernels.pairwise(fa, oa, fb, ob, kind.code, tol.relative, tol.absolute)
