"""Geometric objects (polygonal curves, finite point sets) and Euclidean primitives."""

from __future__ import annotations

import math
from typing import Union

import numpy as np

#: absolute tolerance used for geometric comparisons
ABS_TOL = 1e-12


class CurvesetError(ValueError):
    """Base class for invalid input errors raised by this package."""


class DimensionMismatch(CurvesetError):
    pass


class MetricMismatch(CurvesetError):
    pass


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise CurvesetError(f"a point needs shape (d,) with d >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise CurvesetError("point coordinates must be finite")
    return arr


def _check_dims(*points: np.ndarray) -> None:
    d = points[0].shape[0]
    for q in points[1:]:
        if q.shape[0] != d:
            raise DimensionMismatch(f"dimension mismatch: {d} vs {q.shape[0]}")


def euclidean(p, q) -> float:
    p, q = as_point(p), as_point(q)
    _check_dims(p, q)
    # hypot rescales, so tiny nonzero differences do not underflow to zero
    return math.hypot(*(p - q).tolist())


def point_segment_distance(x, a, b) -> float:
    """Distance from ``x`` to the closed segment ``ab`` (``a == b`` allowed)."""
    x, a, b = as_point(x), as_point(a), as_point(b)
    _check_dims(x, a, b)
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return euclidean(x, a)
    t = min(1.0, max(0.0, float(np.dot(x - a, ab)) / denom))
    return math.hypot(*(x - (a + t * ab)).tolist())


def _as_vertex_array(points) -> np.ndarray:
    arr = np.array(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise CurvesetError(f"expected a nonempty (n, d) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise CurvesetError("point coordinates must be finite")
    arr.setflags(write=False)
    return arr


class _Shape:
    __slots__ = ("points",)
    kind = ""

    def __init__(self, points):
        self.points = _as_vertex_array(points)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.kind, self.points.shape, self.points.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.points.tolist()!r})"

    def tolist(self) -> list[list[float]]:
        return self.points.tolist()


class Curve(_Shape):
    """A polygonal curve given by its ordered vertices."""

    __slots__ = ()
    kind = "curve"

    @property
    def vertices(self) -> np.ndarray:
        return self.points


class PointSet(_Shape):
    """A finite point set; exact duplicates are collapsed (first occurrence kept)."""

    __slots__ = ()
    kind = "pointset"

    def __init__(self, points):
        arr = _as_vertex_array(points)
        _, first = np.unique(arr, axis=0, return_index=True)
        if len(first) != arr.shape[0]:
            arr = arr[np.sort(first)]
            arr.setflags(write=False)
        self.points = arr


GeomObject = Union[Curve, PointSet]
