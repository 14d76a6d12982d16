"""Per-object sensitivity upper bounds derived from a bicriteria solution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import BicriteriaSolution, ClusteringInstance, assign


@dataclass(frozen=True)
class ClusterStats:
    """Statistics of the nonempty Voronoi cells of the bicriteria centers.

    ``center_index[i]`` is the position in the center set of cell ``i``;
    ``cell_of`` maps each object to its cell.
    """

    center_index: np.ndarray
    mu: np.ndarray
    mean_dist: np.ndarray
    opt_prime: float
    cell_of: np.ndarray
    dist: np.ndarray


@dataclass(frozen=True)
class SensitivityProfile:
    s: np.ndarray
    S: float
    stats: ClusterStats
    alpha: float
    beta_k: int

    @property
    def bound(self) -> float:
        """The guaranteed ceiling ``6*alpha + 4*beta_k`` on ``S``."""
        return 6.0 * self.alpha + 4.0 * self.beta_k


def cluster_stats(inst: ClusteringInstance, bic: BicriteriaSolution) -> ClusterStats:
    asg = assign(inst, bic.centers)
    used = np.unique(asg.owner)
    cell_of = np.searchsorted(used, asg.owner)
    w = inst.weights
    mu = np.bincount(cell_of, weights=w, minlength=len(used))
    mass = np.bincount(cell_of, weights=w * asg.dist, minlength=len(used))
    mean_dist = mass / mu
    return ClusterStats(center_index=used, mu=mu, mean_dist=mean_dist,
                        opt_prime=float(np.dot(w, asg.dist)), cell_of=cell_of, dist=asg.dist)


def sensitivity_upper_bounds(inst: ClusteringInstance, bic: BicriteriaSolution) -> SensitivityProfile:
    """s(p) = 2 alpha (2 m_i + d(p, c_i)) / opt' + 4 / mu_i for p in cell i.

    When opt' is zero the first term is taken to be zero.
    """
    st = cluster_stats(inst, bic)
    cell = st.cell_of
    s = 4.0 / st.mu[cell]
    if st.opt_prime > 0:
        s = s + 2.0 * bic.alpha * (2.0 * st.mean_dist[cell] + st.dist) / st.opt_prime
    S = float(np.dot(inst.weights, s))
    return SensitivityProfile(s=s, S=S, stats=st, alpha=bic.alpha, beta_k=len(bic.centers))


def sampling_distribution(profile: SensitivityProfile, inst: ClusteringInstance) -> np.ndarray:
    q = profile.s * inst.weights / profile.S
    # absorb rounding so the probabilities sum to one for the sampler
    return q / q.sum()
