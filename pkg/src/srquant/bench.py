"""Monte-Carlo comparison harness: paired MSQ vs noise-shaping sweeps.

Each trial draws one random measure and reuses it across every oversampling
ratio, level count and method (paired comparison). Per-trial RNG streams are
derived from (seed, trial index), so results are independent of execution
order and identical across reruns except for wall-clock columns.
"""

import csv
import math
import time
from dataclasses import dataclass, fields

import numpy as np

from .decode import decode_beta, decode_msq
from .errors import ClusterAmbiguityError, ConvergenceError, NumericalAnomalyError, ParameterError
from .measures import random_measure
from .metrics import cluster_spikes, error_report, theoretical_envelope
from .quantize import beta_quantize, msq, select_parameters
from .sampling import fourier_sample

CSV_FIELDS = ["trial", "seed", "S", "lambda", "K", "M", "method",
              "err_max_amp", "err_sum_amp", "err_loc_weighted", "err_spurious",
              "envelope", "solver_iters", "wall_ms"]


@dataclass
class ExperimentConfig:
    """Knobs of one sweep. Defaults: separation 1/10, the smallest block
    length with m - 1 >= 4 / delta_min, and 110 trials."""

    delta_min: float = 0.1
    m: int = 41
    lambda_list: tuple = (1, 2, 3, 4, 5, 6)
    K_list: tuple = (2, 3, 4)
    trials: int = 110
    alpha: float = 1.0
    seed: int = 1
    grid_factor: int = 64
    solver_tol: float = 1e-8
    solver_gap_tol: float = 1e-6
    solver_max_iter: int = 50_000
    amplitude_mode: str = "complex"  # "complex" | "real"
    s_mode: str = "random"           # "random": S ~ U{1..floor(1/(2 delta_min))}; "fixed"
    s_fixed: int = 3

    def __post_init__(self):
        self.lambda_list = tuple(int(v) for v in self.lambda_list)
        self.K_list = tuple(int(v) for v in self.K_list)
        if self.m - 1 < 4.0 / self.delta_min:
            raise ParameterError("need m - 1 >= 4 / delta_min for the recovery guarantee")
        if self.trials < 1:
            raise ParameterError("need at least one trial")
        if self.s_mode not in ("random", "fixed"):
            raise ParameterError(f"unknown s_mode {self.s_mode!r}")
        if self.amplitude_mode not in ("complex", "real"):
            raise ParameterError(f"unknown amplitude_mode {self.amplitude_mode!r}")

    @property
    def s_max(self):
        return max(1, int(math.floor(1.0 / (2.0 * self.delta_min))))


@dataclass
class TrialRecord:
    """One (trial, lambda, K, method) outcome. Aborted records (decoder gave
    up) keep NaN error fields and are skipped by the CSV writer."""

    trial: int
    seed: int
    S: int
    lam: int
    K: int
    M: int
    method: str
    err_max_amp: float = math.nan
    err_sum_amp: float = math.nan
    err_loc_weighted: float = math.nan
    err_spurious: float = math.nan
    envelope: float = math.nan
    solver_iters: int = 0
    wall_ms: float = math.nan
    aborted: bool = False
    abort_reason: str = ""


_DECODE_ERRORS = (ConvergenceError, ClusterAmbiguityError, NumericalAnomalyError)


def _fill_errors(record, truth, recovered, n_measurements):
    clusters = cluster_spikes(truth, recovered.measure, n_measurements)
    rep = error_report(truth, recovered.measure, clusters)
    record.err_max_amp = rep.max_amplitude_error
    record.err_sum_amp = rep.sum_amplitude_error
    record.err_loc_weighted = rep.max_location_error
    record.err_spurious = rep.spurious_mass
    record.solver_iters = recovered.report.iterations


def run_experiment(config, trace_dir=None, measure_sink=None):
    """Run the full sweep and return one TrialRecord per (trial, lambda, K, method).

    trace_dir, when given, receives one per-iteration residual CSV per solve.
    measure_sink, when given, is called as measure_sink(trial, mu) with each
    trial's ground-truth measure.
    """
    records = []
    record_trace = trace_dir is not None
    for trial in range(config.trials):
        rng = np.random.default_rng([config.seed, trial])
        if config.s_mode == "fixed":
            s = config.s_fixed
        else:
            s = int(rng.integers(1, config.s_max + 1))
        mu = random_measure(s, config.delta_min, rng, amplitude_mode=config.amplitude_mode)
        if measure_sink is not None:
            measure_sink(trial, mu)
        for lam in config.lambda_list:
            M = config.m * lam
            y = fourier_sample(mu, M)
            for K in config.K_list:
                for method in ("msq", "beta"):
                    rec = TrialRecord(trial=trial, seed=config.seed, S=mu.n_spikes,
                                      lam=lam, K=K, M=M, method=method)
                    t0 = time.perf_counter()
                    try:
                        if method == "msq":
                            quantized = msq(y, K, config.alpha)
                            recovered = decode_msq(
                                quantized.q, K, config.alpha,
                                grid_factor=config.grid_factor,
                                max_iter=config.solver_max_iter,
                                tol=config.solver_tol,
                                gap_tol=config.solver_gap_tol,
                                record_trace=record_trace)
                            rec.envelope = math.sqrt(2.0 * M) * config.alpha / K
                            _fill_errors(rec, mu, recovered, M)
                        else:
                            qcfg = select_parameters(K, lam, config.alpha, m=config.m)
                            plan = qcfg.plan()
                            quantized = beta_quantize(y, qcfg)
                            recovered = decode_beta(
                                quantized.q, plan, qcfg,
                                grid_factor=config.grid_factor,
                                max_iter=config.solver_max_iter,
                                tol=config.solver_tol,
                                gap_tol=config.solver_gap_tol,
                                record_trace=record_trace)
                            rec.envelope = theoretical_envelope(qcfg, plan)
                            _fill_errors(rec, mu, recovered, config.m)
                        if record_trace:
                            _write_trace(trace_dir, rec, recovered.report.trace)
                    except _DECODE_ERRORS as exc:
                        rec.aborted = True
                        rec.abort_reason = f"{type(exc).__name__}: {exc}"
                    rec.wall_ms = 1000.0 * (time.perf_counter() - t0)
                    records.append(rec)
    return records


def summarize(records):
    """Per-(lambda, K, method) mean/median/std of the worst-spike amplitude
    error over completed trials; aborted trials are counted, not averaged."""
    groups = {}
    for rec in records:
        groups.setdefault((rec.lam, rec.K, rec.method), []).append(rec)
    rows = []
    for (lam, K, method) in sorted(groups):
        recs = groups[(lam, K, method)]
        errs = np.array([r.err_max_amp for r in recs if not r.aborted])
        rows.append({
            "lambda": lam, "K": K, "method": method,
            "n": int(errs.size),
            "aborted": int(sum(r.aborted for r in recs)),
            "mean_err_max_amp": float(errs.mean()) if errs.size else math.nan,
            "median_err_max_amp": float(np.median(errs)) if errs.size else math.nan,
            "std_err_max_amp": float(errs.std()) if errs.size else math.nan,
        })
    return rows


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(path, records):
    """Write completed records as CSV (schema CSV_FIELDS); aborted rows are
    dropped so the row count is the sweep grid minus aborts."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for rec in records:
            if rec.aborted:
                continue
            writer.writerow([rec.trial, rec.seed, rec.S, rec.lam, rec.K, rec.M,
                             rec.method, _fmt(rec.err_max_amp), _fmt(rec.err_sum_amp),
                             _fmt(rec.err_loc_weighted), _fmt(rec.err_spurious),
                             _fmt(rec.envelope), rec.solver_iters, _fmt(rec.wall_ms)])


def read_records(path):
    """Read a records CSV back into TrialRecord objects."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(TrialRecord(
                trial=int(row["trial"]), seed=int(row["seed"]), S=int(row["S"]),
                lam=int(row["lambda"]), K=int(row["K"]), M=int(row["M"]),
                method=row["method"], err_max_amp=float(row["err_max_amp"]),
                err_sum_amp=float(row["err_sum_amp"]),
                err_loc_weighted=float(row["err_loc_weighted"]),
                err_spurious=float(row["err_spurious"]),
                envelope=float(row["envelope"]),
                solver_iters=int(row["solver_iters"]),
                wall_ms=float(row["wall_ms"])))
    return records


def write_summary(path, rows):
    cols = ["lambda", "K", "method", "n", "aborted",
            "mean_err_max_amp", "median_err_max_amp", "std_err_max_amp"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in cols])


def _write_trace(trace_dir, rec, trace):
    path = f"{trace_dir}/trace_t{rec.trial}_l{rec.lam}_K{rec.K}_{rec.method}.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "primal_residual", "dual_residual",
                         "duality_gap", "objective", "feasibility"])
        for row in trace or []:
            writer.writerow([row[0]] + [repr(v) for v in row[1:]])


def dump_vector(path, v):
    """Write a measurement vector as `index re im` rows."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    with open(path, "w") as fh:
        for i, z in enumerate(v.tolist()):
            fh.write(f"{i} {z.real!r} {z.imag!r}\n")


def load_vector(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                i, re, im = line.split()
                rows.append((int(i), complex(float(re), float(im))))
    rows.sort()
    return np.array([z for _, z in rows])


_LIST_FIELDS = {"lambda_list", "K_list"}


def write_config(config, path):
    """Flat key = value dump of an ExperimentConfig."""
    with open(path, "w") as fh:
        for f in fields(config):
            value = getattr(config, f.name)
            if f.name in _LIST_FIELDS:
                value = ",".join(str(v) for v in value)
            fh.write(f"{f.name} = {value}\n")


def read_config(path):
    """Parse the flat key = value format; '#' starts a comment."""
    field_map = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected `key = value`")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in field_map:
                raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _parse_value(key, val, field_map[key])
    return ExperimentConfig(**values)


def _parse_value(key, val, f):
    if key in _LIST_FIELDS:
        return tuple(int(v) for v in val.split(",") if v.strip())
    if f.type in (int, "int"):
        return int(val)
    if f.type in (float, "float"):
        return float(val)
    return val
