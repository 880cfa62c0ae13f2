"""Quantization: scalar alphabets, memoryless rounding (MSQ), the recursive
noise-shaping encoder, and its parameter selector.

The K-level alphabet at scale delta is delta * {-(K-1), -(K-3), ..., K-1};
complex data is quantized componentwise on the product alphabet. The
noise-shaping encoder processes indices in order with feedback beta * u at
lag m, which confines the quantization error to y - q = H u with
|Re u_j| <= delta and |Im u_j| <= delta whenever ||y||_inf <= alpha and
beta + alpha / delta <= K.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputRangeError, ParameterError
from .sampling import CondensationPlan


@dataclass(frozen=True)
class Alphabet:
    """K levels delta * {-(K-1), -(K-3), ..., K-1}: origin-symmetric with
    spacing 2 * delta. Zero is a level iff K is odd."""

    K: int
    delta: float

    def __post_init__(self):
        if not (isinstance(self.K, (int, np.integer)) and self.K >= 2):
            raise ParameterError("K must be an integer >= 2")
        if not self.delta > 0:
            raise ParameterError("delta must be positive")

    @property
    def levels(self):
        return self.delta * (2.0 * np.arange(self.K) - (self.K - 1))

    @property
    def max_level(self):
        return self.delta * (self.K - 1)


def round_to_alphabet(x, alphabet):
    """Nearest alphabet level, ties toward the lower level.

    Out-of-range inputs saturate at the extreme levels; the rounding error is
    at most delta whenever |x| <= K * delta.
    """
    u = (np.asarray(x, dtype=float) / alphabet.delta + (alphabet.K - 1)) / 2.0
    idx = np.clip(np.ceil(u - 0.5), 0, alphabet.K - 1)
    out = alphabet.delta * (2.0 * idx - (alphabet.K - 1))
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class QuantizerConfig:
    """Parameter bundle (K, lam, alpha, beta, delta) for the noise-shaping
    encoder, feasible when beta + alpha / delta <= K and 1 < beta < K.

    m is the feedback lag (= block length of the condensation). It may be
    left as None and inferred from the input length at quantization time.
    """

    K: int
    lam: int
    alpha: float
    beta: float
    delta: float
    m: int | None = None

    def __post_init__(self):
        if not (isinstance(self.K, (int, np.integer)) and self.K >= 2):
            raise ParameterError("K must be an integer >= 2")
        if not (isinstance(self.lam, (int, np.integer)) and self.lam >= 1):
            raise ParameterError("lam must be an integer >= 1")
        if not self.alpha > 0:
            raise ParameterError("alpha must be positive")
        if not 1.0 < self.beta < self.K:
            raise ParameterError("beta must satisfy 1 < beta < K")
        if self.beta + self.alpha / self.delta > self.K * (1.0 + 1e-9):
            raise ParameterError("infeasible: beta + alpha / delta must not exceed K")
        if self.m is not None and self.m < 1:
            raise ParameterError("m must be a positive integer when given")

    @property
    def alphabet(self):
        return Alphabet(self.K, self.delta)

    def plan(self, m=None):
        """CondensationPlan sharing this config's lag, oversampling and beta."""
        m = self.m if m is None else m
        if m is None:
            raise ParameterError("no block length m available")
        return CondensationPlan(m, self.lam, self.beta)


def select_parameters(K, lam, alpha=1.0, m=None):
    """Feasible encoder parameters beta = K (lam+1)/(lam+2), delta = (lam+2) alpha / K.

    This choice gives beta + alpha / delta = K exactly, beta >= 4/3, and
    delta * beta**(1 - lam) < e * alpha * (lam + 1) * K**-lam, so the
    condensed error bound decays geometrically in lam.
    """
    if not (isinstance(K, (int, np.integer)) and K >= 2):
        raise ParameterError("K must be an integer >= 2")
    if not (isinstance(lam, (int, np.integer)) and lam >= 1):
        raise ParameterError("lam must be an integer >= 1")
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    beta = K * (lam + 1) / (lam + 2)
    delta = (lam + 2) * alpha / K
    return QuantizerConfig(K=int(K), lam=int(lam), alpha=float(alpha),
                           beta=beta, delta=delta, m=m)


@dataclass(frozen=True)
class QuantizationResult:
    """Quantized vector q, the internal state u, and the producing scheme.

    For kind "beta", y - q = H u exactly with |Re u_j|, |Im u_j| <= delta.
    For kind "msq", u is simply the rounding residual y - q.
    """

    q: np.ndarray
    u: np.ndarray
    kind: str
    alphabet: Alphabet


def msq(y, K, alpha=1.0):
    """Memoryless scalar quantization: round each component to the K-level
    alphabet of scale alpha / K.

    For ||y||_inf <= alpha this guarantees |y_k - q_k| <= sqrt(2) alpha / K
    entrywise (alpha / K for real input) and ||y - q||_2 <= sqrt(2 M) alpha / K.
    """
    y = np.asarray(y)
    alphabet = Alphabet(K, alpha / K)
    if np.iscomplexobj(y):
        q = round_to_alphabet(y.real, alphabet) + 1j * round_to_alphabet(y.imag, alphabet)
    else:
        q = round_to_alphabet(y, alphabet)
    return QuantizationResult(q=q, u=y - q, kind="msq", alphabet=alphabet)


def beta_quantize(y, config):
    """Noise-shaping quantizer with feedback beta * u at lag m.

    Processes indices j = 0, ..., M-1 in order: v_j = y_j + beta * u_{j-m}
    (no feedback for j < m), q_j = round_to_alphabet(v_j) componentwise,
    u_j = v_j - q_j. By construction y - q = H u exactly, and the feasibility
    condition beta + alpha / delta <= K keeps |Re u_j| and |Im u_j| within
    delta by induction.

    The last axis is the measurement index; leading axes are batch
    dimensions. Real input is quantized on the real alphabet and stays real;
    complex input uses the product alphabet.

    Raises
    ------
    DimensionError
        If the last axis is not a multiple m * lam.
    InputRangeError
        If ||y||_inf > alpha (the noise-shaping guarantee would be void).
    """
    y = np.asarray(y)
    M = y.shape[-1]
    m = config.m if config.m is not None else M // config.lam
    if m < 1 or m * config.lam != M:
        raise DimensionError(
            f"input length {M} does not factor as m * lam with lam={config.lam}" +
            (f", m={config.m}" if config.m is not None else ""))
    if M and np.max(np.abs(y)) > config.alpha * (1.0 + 1e-12):
        raise InputRangeError(
            f"||y||_inf = {np.max(np.abs(y)):.6g} exceeds alpha = {config.alpha}")
    alphabet = config.alphabet
    if np.iscomplexobj(y):
        qr, ur = _noise_shape_real(y.real, config.beta, m, alphabet)
        qi, ui = _noise_shape_real(y.imag, config.beta, m, alphabet)
        q, u = qr + 1j * qi, ur + 1j * ui
    else:
        q, u = _noise_shape_real(y, config.beta, m, alphabet)
    return QuantizationResult(q=q, u=u, kind="beta", alphabet=alphabet)


def _noise_shape_real(x, beta, m, alphabet):
    # Sequential along the last axis (state feedback at lag m), vectorized
    # over leading axes. Overflow of the recursion state is only possible if
    # the input bound was violated; saturating silently would destroy the
    # y - q = H u identity, so it raises instead.
    x = np.asarray(x, dtype=float)
    sat = alphabet.K * alphabet.delta * (1.0 + 1e-9)
    q = np.empty_like(x)
    u = np.empty_like(x)
    for j in range(x.shape[-1]):
        if j >= m:
            v = x[..., j] + beta * u[..., j - m]
        else:
            v = x[..., j]
        if np.max(np.abs(v)) > sat:
            raise InputRangeError("recursion state left the alphabet range; "
                                  "input bound alpha was violated")
        qj = round_to_alphabet(v, alphabet)
        q[..., j] = qj
        u[..., j] = v - qj
    return q, u


def condensed_noise_bound(config, m=None):
    """Guaranteed l2 radius sqrt(2 m) * beta**(1 - lam) * delta for the
    condensed quantization error ||V y - V q||_2."""
    m = config.m if m is None else m
    if m is None:
        raise ParameterError("no block length m available")
    return math.sqrt(2.0 * m) * config.beta ** (1 - config.lam) * config.delta


def quantized_indices(q, alphabet):
    """Integer level indices of a quantized vector.

    Returns (re_idx, im_idx) arrays with q = levels[re_idx] + 1j * levels[im_idx]
    (im_idx is None for real input). Raises ParameterError if some entry is
    not on the alphabet grid.
    """
    q = np.asarray(q)

    def comp(x):
        idx = np.rint((x / alphabet.delta + (alphabet.K - 1)) / 2.0)
        back = alphabet.delta * (2.0 * idx - (alphabet.K - 1))
        if np.any(idx < 0) or np.any(idx >= alphabet.K) or not np.array_equal(back, x):
            raise ParameterError("values are not alphabet levels")
        return idx.astype(int)

    if np.iscomplexobj(q):
        return comp(q.real), comp(q.imag)
    return comp(q), None


def write_quantized(path, q, alphabet):
    """Bit-true export: header with K and delta, then `index re_idx im_idx` rows."""
    q = np.atleast_1d(np.asarray(q))
    re_idx, im_idx = quantized_indices(q, alphabet)
    is_complex = im_idx is not None
    if im_idx is None:
        im_idx = np.zeros_like(re_idx)
    with open(path, "w") as fh:
        fh.write(f"# K={alphabet.K} delta={alphabet.delta!r} complex={int(is_complex)}\n")
        for i, (r, im) in enumerate(zip(re_idx, im_idx)):
            fh.write(f"{i} {r} {im}\n")


def read_quantized(path):
    """Inverse of write_quantized; returns (values, alphabet)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ParameterError("missing header line")
        fields = dict(part.split("=") for part in header[1:].split())
        alphabet = Alphabet(int(fields["K"]), float(fields["delta"]))
        is_complex = bool(int(fields.get("complex", 1)))
        rows = [line.split() for line in fh if line.strip()]
    rows.sort(key=lambda r: int(r[0]))
    re_idx = np.array([int(r[1]) for r in rows])
    im_idx = np.array([int(r[2]) for r in rows])
    levels = alphabet.levels
    if is_complex:
        return levels[re_idx] + 1j * levels[im_idx], alphabet
    return levels[re_idx], alphabet
