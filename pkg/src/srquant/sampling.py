"""Fourier sampling of atomic measures and the block-condensation operators.

Measurement vectors are plain complex ndarrays; every operator here acts on
the last axis so that leading axes behave as batch dimensions. Neither the
condensation matrix V = [I, beta^-1 I, ..., beta^-(lam-1) I] nor the noise
transfer matrix H is ever materialized; both are index arithmetic.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .measures import AtomicMeasure


@dataclass(frozen=True)
class CondensationPlan:
    """Geometry of the condensation map: M = m * lam measurements collapse to
    m, with block k weighted by beta**-k."""

    m: int
    lam: int
    beta: float

    def __post_init__(self):
        if self.m < 1 or self.lam < 1:
            raise ParameterError("m and lam must be positive integers")
        if not self.beta > 1.0:
            raise ParameterError("beta must exceed 1")

    @property
    def n_measurements(self):
        return self.m * self.lam


def fourier_sample(mu, n_samples):
    """First n_samples Fourier coefficients of a measure.

    Entry k equals sum_j a_j * exp(-2 pi i k t_j) for k = 0, ..., n_samples-1;
    entry 0 is the plain amplitude sum. Linear in the amplitudes.
    """
    if n_samples < 1:
        raise ParameterError("need at least one sample")
    k = np.arange(n_samples)
    phases = np.exp(-2j * np.pi * np.outer(k, mu.locations))
    return phases @ mu.amplitudes


def condense(y, plan):
    """Collapse M = m * lam entries to m: out_l = sum_k beta**-k * y[m*k + l].

    Equals the length-m Fourier sampling of apply_weights(mu, plan) whenever
    y = fourier_sample(mu, M). Operates on the last axis.
    """
    y = np.asarray(y)
    if y.shape[-1] != plan.n_measurements:
        raise DimensionError(
            f"expected last axis of length {plan.n_measurements}, got {y.shape[-1]}")
    blocks = y.reshape(y.shape[:-1] + (plan.lam, plan.m))
    w = plan.beta ** -np.arange(plan.lam)
    return np.einsum("k,...km->...m", w, blocks)


def weight(t, plan):
    """Amplitude factor picked up at location t under condensation.

    w(t) = (1 - beta^-lam e^{-2 pi i m lam t}) / (1 - beta^-1 e^{-2 pi i m t}).
    The denominator never vanishes for beta > 1, and
    1 / weight_bound(beta) <= |w(t)| <= weight_bound(beta).
    """
    t = np.asarray(t, dtype=float)
    num = 1.0 - plan.beta ** -plan.lam * np.exp(-2j * np.pi * plan.m * plan.lam * t)
    den = 1.0 - np.exp(-2j * np.pi * plan.m * t) / plan.beta
    w = num / den
    if w.ndim == 0:
        return complex(w)
    return w


def weight_bound(beta):
    """c_beta = (1 + beta^-1) / (1 - beta^-1), the two-sided bound on |weight|."""
    return (1.0 + 1.0 / beta) / (1.0 - 1.0 / beta)


def apply_weights(mu, plan):
    """Measure with the same support and amplitudes a_j * weight(t_j, plan)."""
    return AtomicMeasure(mu.locations, mu.amplitudes * weight(mu.locations, plan))


def noise_transfer_apply(u, plan):
    """Apply H: out_j = u_j for j < m, and u_j - beta * u_{j-m} for j >= m.

    Condensing the output of this map annihilates all but the last block:
    condense(H u) = beta**(1 - lam) * u[..., M-m:]. Operates on the last axis.
    """
    u = np.asarray(u)
    if u.shape[-1] != plan.n_measurements:
        raise DimensionError(
            f"expected last axis of length {plan.n_measurements}, got {u.shape[-1]}")
    out = u * 1.0  # copy, promoting ints to float
    out[..., plan.m:] = u[..., plan.m:] - plan.beta * u[..., :-plan.m]
    return out
