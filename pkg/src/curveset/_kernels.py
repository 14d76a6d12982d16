"""Compiled distance kernels.

Objects are passed as ``(n, d)`` float64 arrays. Batched kernels take a ragged
packing: all vertices stacked into one array plus an offsets array of length
``count + 1``.
"""

import math
import os

import numba
import numpy as np
from numba import njit, prange

KIND_CONTINUOUS = 0
KIND_DISCRETE = 1
KIND_HAUSDORFF = 2

# slack added to the radius in the free-space decision
RADIUS_SLACK = 1e-12
# parameter-space slack when testing whether an interval touches 0 or 1
PARAM_SLACK = 1e-12


def _configure_threads():
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB may be too old; OpenMP is reentrant across caller threads
        numba.config.THREADING_LAYER = "omp"
    raw = os.environ.get("CURVESET_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        return
    if n > 0:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


_configure_threads()


@njit(cache=True)
def _dist(P, i, Q, j):
    s = 0.0
    for k in range(P.shape[1]):
        t = P[i, k] - Q[j, k]
        s += t * t
    return math.sqrt(s)


@njit(cache=True)
def discrete_frechet(P, Q):
    p, q = P.shape[0], Q.shape[0]
    ca = np.empty((p, q))
    for i in range(p):
        for j in range(q):
            d = _dist(P, i, Q, j)
            if i == 0 and j == 0:
                ca[i, j] = d
            elif i == 0:
                ca[i, j] = max(ca[i, j - 1], d)
            elif j == 0:
                ca[i, j] = max(ca[i - 1, j], d)
            else:
                ca[i, j] = max(min(ca[i - 1, j], ca[i, j - 1], ca[i - 1, j - 1]), d)
    return ca[p - 1, q - 1]


@njit(cache=True)
def hausdorff(A, B):
    best_ab = 0.0
    for i in range(A.shape[0]):
        nearest = np.inf
        for j in range(B.shape[0]):
            d = _dist(A, i, B, j)
            if d < nearest:
                nearest = d
        if nearest > best_ab:
            best_ab = nearest
    best_ba = 0.0
    for j in range(B.shape[0]):
        nearest = np.inf
        for i in range(A.shape[0]):
            d = _dist(A, i, B, j)
            if d < nearest:
                nearest = d
        if nearest > best_ba:
            best_ba = nearest
    return max(best_ab, best_ba)


@njit(cache=True)
def _free_interval(P, i, Q, j, r2):
    """Parameters t in [0, 1] with |Q[j] + t (Q[j+1] - Q[j]) - P[i]|^2 <= r2."""
    a = 0.0
    b = 0.0
    c = 0.0
    for k in range(P.shape[1]):
        u = Q[j + 1, k] - Q[j, k]
        w = Q[j, k] - P[i, k]
        a += u * u
        b += 2.0 * u * w
        c += w * w
    c -= r2
    if a == 0.0:
        if c <= 0.0:
            return 0.0, 1.0
        return 2.0, -1.0
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return 2.0, -1.0
    root = math.sqrt(disc)
    lo = max(0.0, (-b - root) / (2.0 * a))
    hi = min(1.0, (-b + root) / (2.0 * a))
    if lo > hi:
        return 2.0, -1.0
    return lo, hi


@njit(cache=True)
def _single_vertex(P, Q):
    # one curve is a single point: every point of the other must stay within the leash
    best = 0.0
    for i in range(P.shape[0]):
        for j in range(Q.shape[0]):
            d = _dist(P, i, Q, j)
            if d > best:
                best = d
    return best


@njit(cache=True)
def frechet_decision(P, Q, r):
    p, q = P.shape[0], Q.shape[0]
    reff = r + RADIUS_SLACK
    if p == 1 or q == 1:
        return _single_vertex(P, Q) <= reff
    if _dist(P, 0, Q, 0) > reff or _dist(P, p - 1, Q, q - 1) > reff:
        return False
    r2 = reff * reff
    # vertical edges: vertex i of P against segment j of Q
    lf_lo = np.empty((p, q - 1))
    lf_hi = np.empty((p, q - 1))
    for i in range(p):
        for j in range(q - 1):
            lf_lo[i, j], lf_hi[i, j] = _free_interval(P, i, Q, j, r2)
    # horizontal edges: vertex j of Q against segment i of P
    bf_lo = np.empty((p - 1, q))
    bf_hi = np.empty((p - 1, q))
    for i in range(p - 1):
        for j in range(q):
            bf_lo[i, j], bf_hi[i, j] = _free_interval(Q, j, P, i, r2)

    lr_lo = np.full((p, q - 1), 2.0)
    lr_hi = np.full((p, q - 1), -1.0)
    br_lo = np.full((p - 1, q), 2.0)
    br_hi = np.full((p - 1, q), -1.0)

    for j in range(q - 1):
        if lf_lo[0, j] > PARAM_SLACK:
            break
        lr_lo[0, j] = lf_lo[0, j]
        lr_hi[0, j] = lf_hi[0, j]
        if lf_hi[0, j] < 1.0 - PARAM_SLACK:
            break
    for i in range(p - 1):
        if bf_lo[i, 0] > PARAM_SLACK:
            break
        br_lo[i, 0] = bf_lo[i, 0]
        br_hi[i, 0] = bf_hi[i, 0]
        if bf_hi[i, 0] < 1.0 - PARAM_SLACK:
            break

    for i in range(p - 1):
        for j in range(q - 1):
            left_ok = lr_lo[i, j] <= lr_hi[i, j]
            bottom_ok = br_lo[i, j] <= br_hi[i, j]
            if not (left_ok or bottom_ok):
                continue
            # right edge of the cell
            lo, hi = lf_lo[i + 1, j], lf_hi[i + 1, j]
            if lo <= hi:
                if not bottom_ok:
                    lo = max(lo, lr_lo[i, j])
                if lo <= hi + PARAM_SLACK:
                    lr_lo[i + 1, j] = min(lo, hi)
                    lr_hi[i + 1, j] = hi
            # top edge of the cell
            lo, hi = bf_lo[i, j + 1], bf_hi[i, j + 1]
            if lo <= hi:
                if not left_ok:
                    lo = max(lo, br_lo[i, j])
                if lo <= hi + PARAM_SLACK:
                    br_lo[i, j + 1] = min(lo, hi)
                    br_hi[i, j + 1] = hi

    if lr_lo[p - 1, q - 2] <= lr_hi[p - 1, q - 2] and lr_hi[p - 1, q - 2] >= 1.0 - PARAM_SLACK:
        return True
    if br_lo[p - 2, q - 1] <= br_hi[p - 2, q - 1] and br_hi[p - 2, q - 1] >= 1.0 - PARAM_SLACK:
        return True
    return False


@njit(cache=True)
def continuous_frechet(P, Q, rel, abs_):
    p, q = P.shape[0], Q.shape[0]
    if p == 1 or q == 1:
        return _single_vertex(P, Q)
    lo = max(_dist(P, 0, Q, 0), _dist(P, p - 1, Q, q - 1))
    if frechet_decision(P, Q, lo):
        return lo
    hi = discrete_frechet(P, Q)
    # invariant: decision(lo) is False, decision(hi) is True
    while hi - lo > rel * hi + abs_:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if frechet_decision(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return hi


@njit(cache=True)
def distance(P, Q, kind, rel, abs_):
    if kind == KIND_CONTINUOUS:
        return continuous_frechet(P, Q, rel, abs_)
    if kind == KIND_DISCRETE:
        return discrete_frechet(P, Q)
    return hausdorff(P, Q)


@njit(cache=True, parallel=True)
def pairwise(flat_a, off_a, flat_b, off_b, kind, rel, abs_):
    na = off_a.shape[0] - 1
    nb = off_b.shape[0] - 1
    out = np.empty((na, nb))
    for i in prange(na):
        A = flat_a[off_a[i]:off_a[i + 1]]
        for j in range(nb):
            out[i, j] = distance(A, flat_b[off_b[j]:off_b[j + 1]], kind, rel, abs_)
    return out
