"""Atomic measures on the unit torus [0, 1) with the wrap-around metric."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MAX_SUPPORT_TRIES = 10_000  # rejection-sampling cap for random supports


def torus_distance(s, t):
    """Wrap-around distance min_n |s - t - n| between points of [0, 1).

    Parameters
    ----------
    s, t : float or array_like
        Positions; reduced mod 1 internally, so any finite reals are accepted.
        Arrays broadcast against each other.

    Returns
    -------
    float or ndarray
        Values in [0, 1/2]. Symmetric in its arguments and invariant under
        integer shifts of either one.
    """
    d = np.mod(np.asarray(s, dtype=float) - t, 1.0)
    out = np.minimum(d, 1.0 - d)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite combination of point masses sum_j a_j * delta_{t_j} on [0, 1).

    locations holds the t_j (floats in [0, 1), pairwise distinct) and
    amplitudes the complex a_j. Instances are immutable; the arrays are
    marked read-only. An empty measure (no spikes) is allowed so that
    decoders can return the zero measure; generators always emit >= 1 spike.
    """

    locations: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        loc = np.atleast_1d(np.asarray(self.locations, dtype=float)).copy()
        amp = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex)).copy()
        if loc.ndim != 1 or loc.shape != amp.shape:
            raise ParameterError("locations and amplitudes must be equal-length 1-d sequences")
        if loc.size and (loc.min() < 0.0 or loc.max() >= 1.0):
            raise ParameterError("spike locations must lie in [0, 1)")
        if np.unique(loc).size != loc.size:
            raise ParameterError("spike locations must be pairwise distinct")
        loc.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n_spikes(self):
        return int(self.locations.size)

    def spikes(self):
        """List of (location, amplitude) pairs."""
        return list(zip(self.locations.tolist(), self.amplitudes.tolist()))


def min_separation(mu):
    """Smallest pairwise wrap-around distance between support points.

    A measure with fewer than two spikes is unconstrained; math.inf is
    returned in that case.
    """
    if mu.n_spikes < 2:
        return math.inf
    return _min_gap(mu.locations)


def _min_gap(locations):
    # minimum circular gap == minimum pairwise wrap distance
    t = np.sort(locations)
    gaps = np.diff(t, append=t[0] + 1.0)
    return float(gaps.min())


def tv_norm(mu):
    """Total-variation norm of an atomic measure: sum of |a_j|."""
    return float(np.abs(mu.amplitudes).sum())


def random_measure(s, delta_min, seed, amplitude_mode="complex",
                   max_tries=MAX_SUPPORT_TRIES):
    """Random measure with s spikes, minimum separation >= delta_min and
    unit TV norm.

    Support points are rejection-sampled uniforms on [0, 1) until the
    separation constraint holds. Amplitude magnitudes are uniform on (0, 1];
    in "complex" mode each also gets a uniform phase, in "real" mode they
    stay positive reals. The amplitudes are then normalized to unit l1 norm.
    Deterministic for a fixed seed (an int or a numpy Generator).

    Raises
    ------
    ParameterError
        If s * delta_min >= 1 (no valid support exists on the circle), or
        if rejection sampling exhausts max_tries.
    """
    if s < 1:
        raise ParameterError("need at least one spike")
    if s * delta_min >= 1.0:
        raise ParameterError(
            f"cannot place {s} points on the circle with pairwise wrap separation >= {delta_min}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        loc = rng.random(s)
        if s == 1 or _min_gap(loc) >= delta_min:
            break
    else:
        raise ParameterError(
            f"no support with separation {delta_min} found in {max_tries} tries")

    mag = 1.0 - rng.random(s)  # uniform on (0, 1]
    if amplitude_mode == "complex":
        amp = mag * np.exp(2j * np.pi * rng.random(s))
    elif amplitude_mode == "real":
        amp = mag.astype(complex)
    else:
        raise ParameterError(f"unknown amplitude_mode {amplitude_mode!r}")
    amp = amp / np.abs(amp).sum()
    return AtomicMeasure(loc, amp)


def save_measure(mu, path):
    """Write a measure as plain text, one `location amp_re amp_im` line per spike."""
    with open(path, "w") as fh:
        for t, a in zip(mu.locations.tolist(), mu.amplitudes.tolist()):
            fh.write(f"{t!r} {a.real!r} {a.imag!r}\n")


def load_measure(path):
    """Inverse of save_measure; an empty file yields the zero measure."""
    locs, amps = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, re, im = line.split()
            locs.append(float(t))
            amps.append(complex(float(re), float(im)))
    return AtomicMeasure(np.asarray(locs, dtype=float), np.asarray(amps, dtype=complex))
