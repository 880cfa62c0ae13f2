import numpy as np
import pytest

from srquant import (AtomicMeasure, CondensationPlan, DimensionError,
                     apply_weights, condense, fourier_sample,
                     noise_transfer_apply, random_measure, tv_norm, weight,
                     weight_bound)
from oracles import brute_force_fourier


def test_fourier_sample_diracs():
    assert np.allclose(fourier_sample(AtomicMeasure([0.0], [1.0]), 4), np.ones(4))
    # spike at 1/2: e^{-pi i k} = (-1)^k
    assert np.allclose(fourier_sample(AtomicMeasure([0.5], [1.0]), 4),
                       [1, -1, 1, -1])


def test_fourier_sample_matches_brute_force():
    mu = AtomicMeasure([0.1, 0.7], [0.5, 0.5])
    assert np.allclose(fourier_sample(mu, 8), brute_force_fourier(mu, 8),
                       atol=1e-14)
    mu2 = random_measure(5, 0.1, 11)
    assert np.allclose(fourier_sample(mu2, 30), brute_force_fourier(mu2, 30),
                       atol=1e-13)


def test_fourier_sample_linear_in_amplitudes():
    rng = np.random.default_rng(0)
    locs = rng.random(4)
    a, b = rng.random(4) + 1j * rng.random(4), rng.random(4) - 1j * rng.random(4)
    lhs = fourier_sample(AtomicMeasure(locs, 2 * a + 3j * b), 16)
    rhs = (2 * fourier_sample(AtomicMeasure(locs, a), 16)
           + 3j * fourier_sample(AtomicMeasure(locs, b), 16))
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_condense_identity_at_lam_1():
    plan = CondensationPlan(6, 1, 2.0)
    y = np.arange(6) + 1j
    assert np.array_equal(condense(y, plan), y)


def test_condense_direct_formula():
    plan = CondensationPlan(1, 2, 2.0)
    assert condense(np.array([4.0, 2.0]), plan) == pytest.approx([5.0])


def test_condense_equals_weighted_fourier():
    # V y equals the m-sample Fourier coefficients of the reweighted measure
    mu = random_measure(4, 0.1, 21)
    plan = CondensationPlan(10, 4, 2.0)
    y = fourier_sample(mu, 40)
    lhs = condense(y, plan)
    rhs = fourier_sample(apply_weights(mu, plan), 10)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


def test_condense_is_linear():
    rng = np.random.default_rng(5)
    plan = CondensationPlan(7, 3, 1.5)
    y = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    z = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    lhs = condense(2.0 * y + 0.5j * z, plan)
    assert np.allclose(lhs, 2.0 * condense(y, plan) + 0.5j * condense(z, plan))


def test_condense_dimension_error():
    with pytest.raises(DimensionError):
        condense(np.ones(7), CondensationPlan(3, 2, 2.0))


def test_weight_examples_and_bounds():
    assert weight(0.123, CondensationPlan(5, 1, 3.0)) == pytest.approx(1.0)
    w = weight(0.0, CondensationPlan(3, 2, 2.0))
    assert w == pytest.approx((1 - 0.25) / (1 - 0.5))  # = 1.5
    plan = CondensationPlan(13, 4, 1.5)
    t = np.linspace(0, 1, 4001, endpoint=False)
    mags = np.abs(weight(t, plan))
    cb = weight_bound(1.5)
    assert np.all(mags <= cb + 1e-12)
    assert np.all(mags >= 1.0 / cb - 1e-12)


def test_apply_weights():
    plan = CondensationPlan(1, 2, 2.0)
    mu = AtomicMeasure([0.0], [1.0])
    assert apply_weights(mu, plan).amplitudes[0] == pytest.approx(1.5)
    plan1 = CondensationPlan(4, 1, 2.0)
    mu2 = random_measure(3, 0.2, 2)
    assert np.allclose(apply_weights(mu2, plan1).amplitudes, mu2.amplitudes)
    # TV norm grows by at most the weight bound
    plan3 = CondensationPlan(5, 3, 1.4)
    assert tv_norm(apply_weights(mu2, plan3)) <= weight_bound(1.4) * tv_norm(mu2) + 1e-12


def test_noise_transfer_examples():
    plan = CondensationPlan(3, 1, 2.0)
    u = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(noise_transfer_apply(u, plan), u)
    plan2 = CondensationPlan(1, 3, 2.0)
    assert noise_transfer_apply(np.ones(3), plan2) == pytest.approx([1.0, -1.0, -1.0])


def test_condense_annihilates_noise_transfer():
    # V H keeps only the last block, scaled by beta**(1 - lam)
    rng = np.random.default_rng(17)
    plan = CondensationPlan(5, 4, 1.7)
    M, m = plan.n_measurements, plan.m
    for _ in range(100):
        u = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        lhs = condense(noise_transfer_apply(u, plan), plan)
        rhs = plan.beta ** (1 - plan.lam) * u[M - m:]
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(u)))


def test_operator_norm_witness():
    # all-ones input realizes ||V H||_{inf -> 2} = sqrt(m) * beta**(1 - lam)
    plan = CondensationPlan(9, 5, 1.5)
    out = condense(noise_transfer_apply(np.ones(45), plan), plan)
    assert np.linalg.norm(out) == pytest.approx(
        np.sqrt(9) * 1.5 ** (-4), rel=1e-12)


def test_batched_axes():
    rng = np.random.default_rng(3)
    plan = CondensationPlan(4, 3, 1.9)
    y = rng.standard_normal((5, 12)) + 1j * rng.standard_normal((5, 12))
    batched = condense(y, plan)
    for i in range(5):
        assert np.allclose(batched[i], condense(y[i], plan))
    hu = noise_transfer_apply(y, plan)
    for i in range(5):
        assert np.allclose(hu[i], noise_transfer_apply(y[i], plan))
