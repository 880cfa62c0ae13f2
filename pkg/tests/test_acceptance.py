"""Acceptance suite: each test exercises one numbered criterion at its stated
tolerance and prints one PASS/FAIL line (run pytest with -s to see them all).
"""

import csv
import itertools
import math
import time

import numpy as np

import srquant as sq
from srquant.cli import main as cli_main
from oracles import bpdn_support_oracle


def _verdict(num, desc, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{tag}] criterion {num}: {desc}{suffix}")
    assert ok, f"criterion {num}: {desc}{suffix}"


def _disk_uniform(rng, shape):
    # uniform on the unit disk: |entries| <= 1
    return np.sqrt(rng.random(shape)) * np.exp(2j * np.pi * rng.random(shape))


GRID_KL = [(K, lam) for K in range(2, 7) for lam in range(1, 9)]


def test_criterion_1_noise_shaping_exactness():
    rng = np.random.default_rng(101)
    m = 3
    start = time.perf_counter()
    worst_identity = 0.0
    worst_u = 0.0
    for K, lam in GRID_KL:
        cfg = sq.select_parameters(K, lam, 1.0, m=m)
        plan = cfg.plan()
        y = _disk_uniform(rng, (1000, m * lam))
        res = sq.beta_quantize(y, cfg)
        hu = sq.noise_transfer_apply(res.u, plan)
        worst_identity = max(worst_identity, float(np.max(np.abs(y - res.q - hu))))
        comp = max(float(np.max(np.abs(res.u.real))), float(np.max(np.abs(res.u.imag))))
        worst_u = max(worst_u, comp / cfg.delta)
        assert float(np.max(np.abs(res.u))) <= math.sqrt(2) * cfg.delta * (1 + 1e-12)
    elapsed = time.perf_counter() - start
    ok = worst_identity <= 1e-12 and worst_u <= 1 + 1e-12 and elapsed < 10.0
    _verdict(1, "noise-shaping exactness y - q = Hu with componentwise |u| <= delta",
             ok, f"max|y-q-Hu|={worst_identity:.2e}, max|u|/delta={worst_u:.15f}, "
                 f"{elapsed:.1f}s")


def test_criterion_2_condensed_error_bound():
    rng = np.random.default_rng(202)
    m = 3
    worst_ratio = 0.0
    worst_vh = 0.0
    for K, lam in GRID_KL:
        cfg = sq.select_parameters(K, lam, 1.0, m=m)
        plan = cfg.plan()
        y = _disk_uniform(rng, (1000, m * lam))
        q = sq.beta_quantize(y, cfg).q
        errs = np.linalg.norm(sq.condense(y, plan) - sq.condense(q, plan), axis=-1)
        worst_ratio = max(worst_ratio, float(errs.max()) / sq.condensed_noise_bound(cfg, m))
        u = rng.standard_normal((100, m * lam)) + 1j * rng.standard_normal((100, m * lam))
        lhs = sq.condense(sq.noise_transfer_apply(u, plan), plan)
        rhs = plan.beta ** (1 - lam) * u[..., m * lam - m:]
        scale = max(1.0, float(np.max(np.abs(u))))
        worst_vh = max(worst_vh, float(np.max(np.abs(lhs - rhs))) / scale)
    ok = worst_ratio <= 1 + 1e-12 and worst_vh <= 1e-12
    _verdict(2, "condensed error within sqrt(2m) beta^(1-lam) delta and VH block identity",
             ok, f"max ||Vy-Vq||/eps_V={worst_ratio:.15f}, VH residual={worst_vh:.2e}")


def test_criterion_3_msq_bounds():
    rng = np.random.default_rng(303)
    M = 64
    worst_inf = 0.0
    worst_l2 = 0.0
    for K in range(2, 9):
        y = _disk_uniform(rng, (1000, M))
        q = sq.msq(y, K).q
        err = y - q
        worst_inf = max(worst_inf, float(np.max(np.abs(err))) * K / math.sqrt(2))
        worst_l2 = max(worst_l2, float(np.linalg.norm(err, axis=-1).max())
                       * K / math.sqrt(2 * M))
    ok = worst_inf <= 1 + 1e-12 and worst_l2 <= 1 + 1e-12
    _verdict(3, "MSQ bounds ||y-q||_inf <= sqrt(2)/K and ||y-q||_2 <= sqrt(2M)/K",
             ok, f"normalized peaks {worst_inf:.15f}, {worst_l2:.15f}")


def test_criterion_4_parameter_selector():
    worst_eq = 0.0
    ok_decay = True
    worst_cb = 0.0
    worst_beta = math.inf
    for K in range(2, 11):
        for lam in range(1, 13):
            for alpha in (0.5, 1.0, 2.0):
                cfg = sq.select_parameters(K, lam, alpha)
                worst_eq = max(worst_eq, abs(cfg.beta + cfg.alpha / cfg.delta - K))
                ok_decay &= (cfg.delta * cfg.beta ** (1 - lam)
                             < math.e * alpha * (lam + 1) * K ** -lam)
                worst_cb = max(worst_cb, sq.weight_bound(cfg.beta))
                worst_beta = min(worst_beta, cfg.beta)
    ok = (worst_eq <= 1e-12 and ok_decay and worst_cb <= 7 + 1e-12
          and worst_beta >= 4 / 3 - 1e-12)
    _verdict(4, "selector: beta + alpha/delta = K, decay bound, c_beta <= 7, beta >= 4/3",
             ok, f"max|beta+alpha/delta-K|={worst_eq:.2e}, max c_beta={worst_cb:.12f}, "
                 f"min beta={worst_beta:.12f}")


def test_criterion_5_lipschitz_bound():
    start = time.perf_counter()
    worst = 0.0
    for K in range(2, 11):
        for lam in range(1, 13):
            beta = sq.select_parameters(K, lam).beta
            ratio = sq.max_difference_quotient(beta, lam, 10_000) / sq.lipschitz_bound(beta, lam)
            worst = max(worst, ratio)
    elapsed = time.perf_counter() - start
    ok = worst <= 1 + 1e-9 and elapsed < 30.0
    _verdict(5, "sampled Lipschitz quotients within 4 pi lam beta (beta-1)^-2",
             ok, f"max quotient/bound={worst:.6f}, {elapsed:.1f}s")


def test_criterion_6_decoder_oracle_equivalence():
    checked = 0
    worst = 0.0
    attempts = 0
    for k in itertools.count():
        attempts += 1
        if checked >= 50 or attempts > 150:
            break
        rng = np.random.default_rng([606, k])
        m = int(rng.integers(4, 7))
        N = 4 * m
        s = int(rng.choice([1, 1, 2, 2, 3]))
        # keep candidate supports a couple of cells apart so l1 mass stays put
        locs = rng.choice(N // 2, size=s, replace=False) * 2 / N
        amps = (0.3 + 0.7 * rng.random(s)) * np.exp(2j * np.pi * rng.random(s))
        c = sq.fourier_sample(sq.AtomicMeasure(locs, amps), m)
        eps = (0.1 + 0.25 * rng.random()) * float(np.linalg.norm(c))
        obj, gap = bpdn_support_oracle(c, N, eps)
        if gap > 1e-7 * max(1.0, obj):
            continue  # discrete optimum not certified <= 3-sparse; skip instance
        rec = sq.tv_min(sq.TvMinProblem(c, eps, N, tol=1e-10, gap_tol=1e-9))
        worst = max(worst, abs(rec.objective_value - obj))
        checked += 1
    ok = checked >= 50 and worst <= 1e-6
    _verdict(6, "tv_min objective matches exhaustive-support oracle within 1e-6",
             ok, f"{checked} certified instances in {attempts} attempts, "
                 f"max |diff|={worst:.2e}")


def test_criterion_7_noiseless_recovery():
    radius = sq.cluster_radius(41)
    ok = True
    details = []
    for mu in (sq.AtomicMeasure([0.37], [0.8]),
               sq.AtomicMeasure([0.31, 0.41], [0.55 * np.exp(0.7j), 0.45])):
        y = sq.fourier_sample(mu, 41)
        rec = sq.tv_min(sq.TvMinProblem(y, 1e-9, 64 * 41))
        clusters = sq.cluster_spikes(mu, rec.measure, 41)
        report = sq.error_report(mu, rec.measure, clusters)
        located = all(idx.size > 0 for idx in clusters.neighborhoods)
        ok &= located and report.max_amplitude_error <= 1e-3
        details.append(f"S={mu.n_spikes}: located={located}, "
                       f"amp_err={report.max_amplitude_error:.2e}")
    _verdict(7, f"noiseless recovery within radius {radius:.4g}, amplitude error <= 1e-3",
             ok, "; ".join(details))


def test_criterion_8_comparative_claim():
    """Reproduces the benchmark design (paired trials, worst-spike amplitude
    error averaged over 20 trials) and checks the three decay properties.

    Note: at K = 2 the guaranteed decoder radius eps_V = sqrt(2m) beta^(1-lam)
    delta exceeds the unit signal scale for every lam <= 5 (13.6, 12.1, 8.8,
    5.9, 3.7), so low-lam decodes collapse to the zero measure and the K = 2
    sub-claims cannot materialize at m = 41; see the printed table.
    """
    config = sq.ExperimentConfig(delta_min=0.1, m=41, lambda_list=(1, 2, 3, 4, 5),
                                 K_list=(2, 3), trials=20, seed=7)
    records = sq.run_experiment(config)
    aborted = sum(r.aborted for r in records)
    means = {}
    for row in sq.summarize(records):
        means[(row["K"], row["method"], row["lambda"])] = row["mean_err_max_amp"]
    print("  mean worst-spike amplitude error by (K, method, lambda):")
    for K in (2, 3):
        for method in ("beta", "msq"):
            vals = " ".join(f"{means[(K, method, lam)]:.4f}" for lam in range(1, 6))
            print(f"    K={K} {method:4s}: {vals}")

    checks = []
    for K in (2, 3):
        seq = [means[(K, "beta", lam)] for lam in range(1, 6)]
        strict = all(seq[i] > seq[i + 1] for i in range(4))
        checks.append((f"(a) K={K} strictly decreasing", strict))
        rate = (seq[4] / seq[0]) ** 0.25 if seq[0] > 0 else math.inf
        checks.append((f"(b) K={K} decay rate {rate:.3f} <= {K ** -0.25:.3f}",
                       rate <= K ** -0.25))
    ratio = means[(2, "msq", 5)] / means[(2, "beta", 5)]
    checks.append((f"(c) K=2 msq/beta at lam=5 = {ratio:.2f} >= 5", ratio >= 5.0))
    for label, passed in checks:
        print(f"    {'ok  ' if passed else 'FAIL'} {label}")
    ok = all(passed for _, passed in checks) and aborted == 0
    _verdict(8, "comparative decay properties of the benchmark", ok,
             f"{aborted} aborted trials")


def test_criterion_9_determinism(tmp_path):
    cfg_path = tmp_path / "config.txt"
    cfg_path.write_text("\n".join([
        "delta_min = 0.1", "m = 41", "lambda_list = 1,2", "K_list = 2",
        "trials = 2", "grid_factor = 16", "solver_gap_tol = 1e-5", "seed = 11",
    ]) + "\n")
    rows = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        assert cli_main(["run", str(cfg_path), "--out", str(out)]) == 0
        with open(out / "records.csv", newline="") as fh:
            rows.append(list(csv.reader(fh)))
    a, b = rows
    wall_col = a[0].index("wall_ms")
    same = len(a) == len(b) and all(
        ra[:wall_col] == rb[:wall_col] and ra[wall_col + 1:] == rb[wall_col + 1:]
        for ra, rb in zip(a, b))
    _verdict(9, "repeated runs are identical up to the wall-time column", same,
             f"{len(a) - 1} data rows")
