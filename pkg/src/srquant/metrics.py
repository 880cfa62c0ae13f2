"""Clustering of recovered spikes against ground truth and error statistics.

Recovered spikes are partitioned by proximity: spike k joins the
neighborhood of true spike j when their wrap distance is at most
cluster_radius(n_measurements); everything unmatched lands in the residual
set. The error statistics are the per-true-spike clustered amplitude error,
the amplitude-weighted squared location error, and the spurious mass.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClusterAmbiguityError, ParameterError
from .measures import torus_distance
from .quantize import condensed_noise_bound
from .sampling import weight_bound

RADIUS_COEFF = 2 * 0.1649


def cluster_radius(n_measurements):
    """Neighborhood radius 2 * 0.1649 / (n - 1) for matching recovered spikes."""
    if n_measurements < 2:
        raise ParameterError("need at least two measurements")
    return RADIUS_COEFF / (n_measurements - 1)


@dataclass(frozen=True)
class SpikeClusters:
    """Partition of recovered spike indices: one neighborhood per true spike
    plus the residual set of unmatched indices."""

    neighborhoods: tuple
    residual: np.ndarray
    radius: float


def cluster_spikes(truth, recovered, n_measurements):
    """Assign each recovered spike to the true spikes within cluster_radius.

    The boundary is closed (distance == radius is included). When the truth
    separation exceeds 4 / (n_measurements - 1) the radius is below half the
    separation, so assignments are unique; a recovered spike matching two
    true spikes raises ClusterAmbiguityError naming the offending pair.
    """
    r = cluster_radius(n_measurements)
    if recovered.n_spikes:
        d = torus_distance(recovered.locations[:, None], truth.locations[None, :])
        hits = d <= r
    else:
        hits = np.zeros((0, truth.n_spikes), dtype=bool)
    multi = np.flatnonzero(hits.sum(axis=1) > 1)
    if multi.size:
        k = int(multi[0])
        js = np.flatnonzero(hits[k])
        raise ClusterAmbiguityError(
            f"recovered spike {k} lies within radius {r:.6g} of true spikes "
            f"{int(js[0])} and {int(js[1])}")
    neighborhoods = tuple(np.flatnonzero(hits[:, j]) for j in range(truth.n_spikes))
    residual = np.flatnonzero(~hits.any(axis=1))
    return SpikeClusters(neighborhoods=neighborhoods, residual=residual, radius=r)


@dataclass(frozen=True)
class ErrorReport:
    """Per-true-spike error statistics plus the spurious recovered mass.

    amplitude_errors[j] = |a_j - sum of recovered amplitudes in cluster j|
    location_errors[j]  = sum over cluster j of |a~_k| * dist(t_j, t~_k)^2
    spurious_mass       = total |a~_k| over the residual set
    """

    amplitude_errors: np.ndarray
    location_errors: np.ndarray
    spurious_mass: float

    @property
    def max_amplitude_error(self):
        """Worst-spike aggregate, the headline benchmark statistic."""
        return float(np.max(self.amplitude_errors, initial=0.0))

    @property
    def sum_amplitude_error(self):
        return float(self.amplitude_errors.sum())

    @property
    def max_location_error(self):
        return float(np.max(self.location_errors, initial=0.0))


def error_report(truth, recovered, clusters):
    """Compute the error statistics for a (truth, recovered, clusters) triple."""
    S = truth.n_spikes
    amp = np.zeros(S)
    loc = np.zeros(S)
    for j, idx in enumerate(clusters.neighborhoods):
        cluster_amps = recovered.amplitudes[idx]
        amp[j] = abs(truth.amplitudes[j] - cluster_amps.sum())
        d = torus_distance(recovered.locations[idx], truth.locations[j])
        loc[j] = float(np.sum(np.abs(cluster_amps) * np.asarray(d) ** 2))
    spurious = float(np.abs(recovered.amplitudes[clusters.residual]).sum())
    return ErrorReport(amplitude_errors=amp, location_errors=loc, spurious_mass=spurious)


def reciprocal_weight_shape(t, beta, lam):
    """Unit-lag reciprocal weight profile
    g(t) = (1 - beta^-1 e^{-2 pi i t}) / (1 - beta^-lam e^{-2 pi i lam t});
    the reciprocal condensation weight at location t is g(m t)."""
    t = np.asarray(t, dtype=float)
    num = 1.0 - np.exp(-2j * np.pi * t) / beta
    den = 1.0 - beta ** -lam * np.exp(-2j * np.pi * lam * t)
    return num / den


def lipschitz_bound(beta, lam):
    """4 pi lam beta / (beta - 1)^2, a ceiling on the Lipschitz constant of
    reciprocal_weight_shape."""
    return 4.0 * math.pi * lam * beta / (beta - 1.0) ** 2


def max_difference_quotient(beta, lam, n_grid=10_000):
    """Largest sampled |g(t') - g(t)| / |t' - t| of reciprocal_weight_shape
    over consecutive points of a uniform n_grid-point grid (wrap included)."""
    t = np.arange(n_grid) / n_grid
    g = reciprocal_weight_shape(t, beta, lam)
    diffs = np.abs(np.diff(np.append(g, g[0])))
    return float(diffs.max() * n_grid)


def theoretical_envelope(config, plan, c1=1.0, c2=1.0):
    """Guaranteed ceiling on the worst clustered amplitude error:

        c_beta * c1 * eps_V + C_lip * sqrt(c_beta * alpha) * sqrt(c2 * eps_V)

    with eps_V the condensed noise bound and C_lip = lipschitz_bound. The
    stability constants c1, c2 of the underlying recovery guarantee are not
    pinned by the theory; they default to 1 so the envelope carries the decay
    shape rather than a calibrated intercept.
    """
    eps_v = condensed_noise_bound(config, plan.m)
    cb = weight_bound(config.beta)
    clip = lipschitz_bound(config.beta, config.lam)
    return cb * c1 * eps_v + clip * math.sqrt(cb * config.alpha) * math.sqrt(c2 * eps_v)


def rate_envelope(K, lam, m, const=1.0):
    """Simplified decay shape const * sqrt(M) * lam^{3/2} * K^{-lam/2}, M = m * lam."""
    return const * math.sqrt(m * lam) * lam ** 1.5 * K ** (-lam / 2.0)
