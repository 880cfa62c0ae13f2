"""Sparse-measure recovery from noisy Fourier data.

The continuous TV-norm minimization over measures is solved on a uniform
grid of the torus as a second-order-cone-constrained l1 program over complex
grid amplitudes:

    minimize sum_n |b_n|  subject to  ||F b - c||_2 <= noise_bound,

where grid point n sits at n / grid_size and F takes the first len(c)
Fourier coefficients (the first rows of the grid_size-point DFT, applied via
FFTs; no matrix is formed). A first-order primal-dual splitting iteration
with residual-balancing stepsizes solves the program, and the gridded
solution is consolidated into off-grid spikes by merging nearby mass.

Two decoding pipelines sit on top: decode_msq feeds the quantized vector
straight to the solver at the memoryless rounding radius, while decode_beta
condenses first, solves at the condensed noise radius, and divides the
recovered amplitudes by the condensation weights at the recovered support.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConvergenceError, DimensionError, NumericalAnomalyError,
                     ParameterError)
from .measures import AtomicMeasure
from .metrics import cluster_radius
from .quantize import condensed_noise_bound
from .sampling import condense, weight, weight_bound

DEFAULT_GRID_FACTOR = 64
DEFAULT_MAX_ITER = 50_000
DEFAULT_TOL = 1e-8
DEFAULT_GAP_TOL = 1e-7
PRUNE_FLOOR = 1e-6  # relative floor below which grid dust is dropped


@dataclass
class TvMinProblem:
    """One instance of the grid-discretized TV-min program."""

    measurements: np.ndarray
    noise_bound: float
    grid_size: int
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    gap_tol: float = DEFAULT_GAP_TOL
    record_trace: bool = False

    def __post_init__(self):
        self.measurements = np.atleast_1d(np.asarray(self.measurements, dtype=complex))
        if self.measurements.ndim != 1 or self.measurements.size < 1:
            raise DimensionError("measurements must be a nonempty vector")
        if self.noise_bound < 0:
            raise ParameterError("noise_bound must be nonnegative")
        if self.grid_size < 4 * self.measurements.size:
            raise ParameterError("grid_size must be at least 4x the number of measurements")


@dataclass
class SolverReport:
    """Diagnostics of one solver run. trace, when recorded, holds
    (iteration, primal_residual, dual_residual, gap, objective, feasibility)
    rows sampled at the convergence checks."""

    iterations: int
    primal_residual: float
    dual_residual: float
    duality_gap: float
    objective: float
    feasibility_residual: float
    converged: bool
    trace: list | None = None


@dataclass
class RecoveredMeasure:
    """Result of a recovery: the consolidated measure, the grid objective
    sum |b_n|, the data-fit residual, solver diagnostics, and the raw
    gridded amplitudes."""

    measure: AtomicMeasure
    objective_value: float
    feasibility_residual: float
    report: SolverReport
    grid_solution: np.ndarray


def _forward(b, n_meas):
    return np.fft.fft(b)[:n_meas]


def _adjoint(p, grid_size):
    return grid_size * np.fft.ifft(p, n=grid_size)


def _soft_threshold(b, thresh):
    mags = np.abs(b)
    scale = np.maximum(mags - thresh, 0.0)
    return b * np.divide(scale, mags, out=np.zeros_like(mags), where=mags > 0)


def _project_ball(x, center, radius):
    d = x - center
    n = np.linalg.norm(d)
    if n <= radius:
        return x
    return center + d * (radius / n)


def _solve_ball_l1(c, eps, grid_size, max_iter, tol, gap_tol=DEFAULT_GAP_TOL,
                   record_trace=False):
    """Primal-dual iteration for min ||b||_1 s.t. ||F b - c||_2 <= eps.

    The primal update is complex soft thresholding; the dual update is the
    proximal step of the conjugate of the l2-ball indicator (a shifted
    projection); the pair is over-relaxed. Stepsizes start balanced at the
    exact operator norm ||F|| = sqrt(grid_size) (F F^H = grid_size * I) and
    are rebalanced when the primal and dual residuals drift apart, with
    geometrically decaying aggressiveness so the adaptation settles.

    Convergence is declared either by small normalized primal/dual residuals
    or by a certified duality gap: -p / max(1, ||F^H p||_inf) is dual
    feasible, so Re<-p, c> - eps ||p|| (rescaled) lower-bounds the optimum,
    while ||b||_1 plus the feasibility excess of b upper-bounds it.

    On exit the iterate is corrected to exact feasibility through the tight
    frame identity: b += F^H r_excess / grid_size moves F b onto the
    constraint ball at an l1 cost bounded by the feasibility excess removed.
    """
    c = np.asarray(c, dtype=complex)
    n_meas = c.size
    N = grid_size
    opnorm = math.sqrt(N)
    stab = 0.95
    sigma = stab / opnorm
    tau = stab / opnorm
    rho = 1.8  # over-relaxation
    adapt = 0.5
    balance = 5.0
    check_every = 25

    b = np.zeros(N, dtype=complex)
    p = np.zeros(n_meas, dtype=complex)
    g = np.zeros(N, dtype=complex)  # F^H p
    trace = [] if record_trace else None
    converged = False
    rP = rD = gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        b_half = _soft_threshold(b - tau * g, tau)
        arg = p + sigma * _forward(2.0 * b_half - b, n_meas)
        p_half = arg - sigma * _project_ball(arg / sigma, c, eps)
        g_half = _adjoint(p_half, N)
        b_new = b + rho * (b_half - b)
        p_new = p + rho * (p_half - p)
        g_new = g + rho * (g_half - g)
        if it % check_every == 0 or it == max_iter:
            # relaxation keeps geometrically decaying dust alive; flush it
            # before it goes denormal and slows the FFTs down
            b_new[np.abs(b_new) < 1e-200] = 0.0
            feas = float(np.linalg.norm(_forward(b_new, n_meas) - c))
            objective = float(np.abs(b_new).sum())
            ub = objective + max(0.0, feas - eps)
            dual_scale = max(1.0, float(np.abs(g_new).max()))
            lb = (-np.real(np.vdot(p_new, c)) - eps * np.linalg.norm(p_new)) / dual_scale
            gap = max(ub - lb, 0.0)
            db = b - b_new
            P = db / tau - (g - g_new)
            D = (p - p_new) / sigma - _forward(db, n_meas)
            pscale = np.linalg.norm(b_new) / tau + np.linalg.norm(g_new)
            dscale = np.linalg.norm(p_new) / sigma + np.linalg.norm(c)
            rP = float(np.linalg.norm(P) / max(pscale, 1e-30))
            rD = float(np.linalg.norm(D) / max(dscale, 1e-30))
            if trace is not None:
                trace.append((it, rP, rD, gap, objective, feas))
            if gap <= gap_tol * max(1.0, ub) or max(rP, rD) <= tol:
                b, p, g = b_new, p_new, g_new
                converged = True
                break
            if adapt > 1e-3:
                if rP > balance * rD:
                    tau /= 1.0 - adapt
                    sigma *= 1.0 - adapt
                    adapt *= 0.9
                elif rD > balance * rP:
                    sigma /= 1.0 - adapt
                    tau *= 1.0 - adapt
                    adapt *= 0.9
        b, p, g = b_new, p_new, g_new

    r = c - _forward(b, n_meas)
    feas = float(np.linalg.norm(r))
    if feas > eps:
        b = b + _adjoint(r * (1.0 - eps / feas), N) / N
        feas = float(np.linalg.norm(c - _forward(b, n_meas)))
    objective = float(np.abs(b).sum())
    if not converged and gap > 1e-3 * max(1.0, objective) and max(rP, rD) > 1000.0 * tol:
        raise ConvergenceError(
            f"no convergence in {max_iter} iterations (duality gap {gap:.3e}, "
            f"primal residual {rP:.3e}, dual residual {rD:.3e})",
            iterations=it, primal_residual=rP, dual_residual=rD,
            feasibility_residual=feas)
    report = SolverReport(iterations=it, primal_residual=rP, dual_residual=rD,
                          duality_gap=gap, objective=objective,
                          feasibility_residual=feas, converged=converged,
                          trace=trace)
    return b, report


def extract_spikes(grid_solution, merge_radius, prune_floor=PRUNE_FLOOR):
    """Consolidate gridded amplitudes into an off-grid atomic measure.

    Grid point n of a length-N vector sits at n / N. Entries below
    prune_floor * max |amplitude| are dropped; surviving neighbors chained by
    wrap gaps <= merge_radius merge into one spike whose amplitude is the
    complex sum and whose location is the magnitude-weighted circular mean.
    """
    b = np.atleast_1d(np.asarray(grid_solution))
    if not 0.0 < merge_radius < 0.5:
        raise ParameterError("merge_radius must lie in (0, 1/2)")
    N = b.size
    mags = np.abs(b)
    peak = mags.max() if N else 0.0
    if peak == 0.0:
        return AtomicMeasure(np.empty(0), np.empty(0, dtype=complex))
    keep = np.flatnonzero(mags > prune_floor * peak)
    t = keep / N
    a = b[keep]

    gaps = np.diff(t, append=t[0] + 1.0)  # circular gap after each point
    breaks = np.flatnonzero(gaps > merge_radius)
    if breaks.size == 0:
        clusters = [np.arange(t.size)]
    else:
        ext = np.concatenate([breaks, [breaks[0] + t.size]])
        clusters = [np.arange(s + 1, e + 1) % t.size for s, e in zip(ext[:-1], ext[1:])]

    locs, amps = [], []
    for idx in clusters:
        wts = np.abs(a[idx])
        z = np.sum(wts * np.exp(2j * np.pi * t[idx]))
        if abs(z) < 1e-12 * wts.sum():
            loc = float(t[idx][np.argmax(wts)])  # mass spread out; fall back to the peak
        else:
            loc = float((np.angle(z) / (2.0 * np.pi)) % 1.0)
            if loc >= 1.0:
                loc = 0.0
        locs.append(loc)
        amps.append(a[idx].sum())
    return AtomicMeasure(np.asarray(locs), np.asarray(amps))


def tv_min(problem, merge_radius=None, prune_floor=PRUNE_FLOOR):
    """Solve a TvMinProblem and consolidate the grid solution into spikes.

    merge_radius defaults to cluster_radius(len(measurements)) so extraction
    and the error metrics operate at the same scale.

    Raises
    ------
    ConvergenceError
        If the solver leaves the iteration cap far from its stopping
        criterion (relative duality gap above 1e-3 and residuals above
        1000x tol).
    """
    c = problem.measurements
    b, report = _solve_ball_l1(c, problem.noise_bound, problem.grid_size,
                               problem.max_iter, problem.tol,
                               gap_tol=problem.gap_tol,
                               record_trace=problem.record_trace)
    if merge_radius is None:
        merge_radius = cluster_radius(max(c.size, 2))
    measure = extract_spikes(b, merge_radius, prune_floor=prune_floor)
    return RecoveredMeasure(measure=measure, objective_value=report.objective,
                            feasibility_residual=report.feasibility_residual,
                            report=report, grid_solution=b)


def decode_msq(q, K, alpha=1.0, grid_factor=DEFAULT_GRID_FACTOR,
               max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL,
               gap_tol=DEFAULT_GAP_TOL, record_trace=False):
    """Recover a measure from memoryless-quantized measurements.

    Runs TV-min on all M entries with noise bound sqrt(2 M) * alpha / K; the
    solution is the estimate directly (no weight correction).
    """
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    eps = math.sqrt(2.0 * q.size) * alpha / K
    problem = TvMinProblem(q, eps, grid_factor * q.size, max_iter=max_iter,
                           tol=tol, gap_tol=gap_tol, record_trace=record_trace)
    return tv_min(problem)


def decode_beta(q, plan, config, grid_factor=DEFAULT_GRID_FACTOR,
                max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL,
                gap_tol=DEFAULT_GAP_TOL, record_trace=False):
    """Recover a measure from noise-shaped measurements.

    Condenses q, runs TV-min on the m condensed entries at the guaranteed
    radius sqrt(2 m) * beta**(1 - lam) * delta, then divides each recovered
    amplitude by the condensation weight at its recovered location.
    """
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    if plan.lam != config.lam or not math.isclose(plan.beta, config.beta, rel_tol=1e-12):
        raise ParameterError("condensation plan and quantizer config disagree on (lam, beta)")
    if config.m is not None and config.m != plan.m:
        raise ParameterError("condensation plan and quantizer config disagree on m")
    vq = condense(q, plan)
    eps_v = condensed_noise_bound(config, plan.m)
    problem = TvMinProblem(vq, eps_v, grid_factor * plan.m, max_iter=max_iter,
                           tol=tol, gap_tol=gap_tol, record_trace=record_trace)
    rec = tv_min(problem)
    mv = rec.measure
    if mv.n_spikes:
        w = weight(mv.locations, plan)
        if np.min(np.abs(w)) < 0.5 / weight_bound(plan.beta):
            raise NumericalAnomalyError("recovered weight below half its theoretical floor")
        mv = AtomicMeasure(mv.locations, mv.amplitudes / w)
    return RecoveredMeasure(measure=mv, objective_value=rec.objective_value,
                            feasibility_residual=rec.feasibility_residual,
                            report=rec.report, grid_solution=rec.grid_solution)
