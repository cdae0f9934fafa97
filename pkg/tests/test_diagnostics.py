import math

import numpy as np
import pytest

from ksdgof import (
    DirectionalSteinKernel,
    LangevinSteinKernel,
    RngStream,
    build_sketch,
    centered_gram,
    draw_rademacher,
    effective_dimension,
    gram_full,
    ksd_nystrom,
    nystrom_bootstrap_stat,
    projection_oracle,
    sample_gaussian,
    sample_landmarks,
    sample_uniform_sphere,
    score_gaussian,
    score_uniform_sphere,
    spectrum_summary,
    stein_identity_check,
    suggest_m,
)

RNG = np.random.default_rng(8)


def gram_with_centered_spectrum(eigvals, n):
    """Build G so that centered_gram(G)/n has exactly the given eigenvalues."""
    eigvals = np.asarray(eigvals, dtype=float)
    A = RNG.normal(size=(n, n))
    A[:, 0] = 1.0
    Q, _ = np.linalg.qr(A)
    # columns 1.. are orthonormal and orthogonal to the all-ones vector
    vecs = Q[:, 1 : 1 + eigvals.size]
    return n * (vecs * eigvals[None, :]) @ vecs.T


# ---------------------------------------------------------------------------
# Centering


def test_centered_gram_kills_constants():
    G = 3.7 * np.ones((6, 6))
    np.testing.assert_allclose(centered_gram(G), np.zeros((6, 6)), atol=1e-12)


def test_centered_gram_row_sums_vanish():
    A = RNG.normal(size=(12, 12))
    G = A + A.T
    C = centered_gram(G)
    assert np.max(np.abs(C.sum(axis=1))) <= 1e-10 * np.linalg.norm(G)


def test_centered_gram_small_example():
    C = centered_gram(np.eye(2))
    np.testing.assert_allclose(C, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-14)


def test_centered_gram_idempotent():
    A = RNG.normal(size=(9, 9))
    G = A + A.T
    once = centered_gram(G)
    twice = centered_gram(once)
    assert np.max(np.abs(twice - once)) <= 1e-12 * np.linalg.norm(G)


# ---------------------------------------------------------------------------
# Effective dimension


def test_effective_dimension_arithmetic():
    G = gram_with_centered_spectrum([1.0, 0.5], 8)
    assert effective_dimension(G, 0.5) == pytest.approx(7.0 / 6.0, abs=1e-10)


def test_effective_dimension_limits():
    G = gram_with_centered_spectrum([1.0, 0.5, 0.25], 10)
    assert effective_dimension(G, 1e9) == pytest.approx(0.0, abs=1e-8)
    assert effective_dimension(G, 1e-12) == pytest.approx(3.0, abs=1e-3)


def test_effective_dimension_monotone():
    kern = LangevinSteinKernel(score_gaussian(np.zeros(2), 1.0), 1.0, 2)
    X = sample_gaussian(np.zeros(2), 1.0, 60, RngStream(13))
    G = gram_full(kern, X)
    grid = np.logspace(-6, 2, 17)
    values = [effective_dimension(G, lam) for lam in grid]
    for lo, hi in zip(values[1:], values[:-1]):
        assert lo <= hi + 1e-12


def test_effective_dimension_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        effective_dimension(np.eye(3), 0.0)


# ---------------------------------------------------------------------------
# Spectrum summary / decay classification


def test_spectrum_polynomial_decay_detected():
    eig = np.arange(1, 21, dtype=float) ** -2.0
    G = gram_with_centered_spectrum(eig, 40)
    summary = spectrum_summary(G)
    assert summary.decay_kind == "polynomial"
    # eigenvalue decay i^-2 corresponds to effective-dimension exponent 1/2
    assert summary.decay_gamma == pytest.approx(0.5, abs=0.05)
    assert "polynomial" in summary.decay_label


def test_spectrum_exponential_decay_detected():
    eig = np.exp(-np.arange(1, 21, dtype=float))
    G = gram_with_centered_spectrum(eig, 40)
    summary = spectrum_summary(G)
    assert summary.decay_kind == "exponential"


def test_spectrum_eigenvalues_sorted_and_clipped():
    G = gram_with_centered_spectrum([0.9, 0.4, 0.1], 12)
    summary = spectrum_summary(G)
    ev = summary.eigenvalues
    assert np.all(np.diff(ev) <= 1e-12)
    assert np.all(ev >= 0.0)
    assert summary.effective_dimension(0.5) == pytest.approx(
        effective_dimension(G, 0.5), abs=1e-10
    )


# ---------------------------------------------------------------------------
# Landmark budget


def test_suggest_m_exponential():
    assert suggest_m(55, "exponential") == 30


def test_suggest_m_polynomial_capped():
    # gamma = 1 gives ceil(n log n) which the cap pulls back to n
    assert suggest_m(100, "polynomial", gamma=1.0) == 100


def test_suggest_m_polynomial_formula():
    n, gamma = 10**4, 0.5
    expected = math.ceil((n * math.log(n)) ** (1.0 / (2.0 - gamma)))
    assert suggest_m(n, "polynomial", gamma=gamma) == expected == 2040


def test_suggest_m_validation():
    with pytest.raises(ValueError):
        suggest_m(100, "polynomial", gamma=1.5)
    with pytest.raises(ValueError):
        suggest_m(100, "polynomial")
    with pytest.raises(ValueError):
        suggest_m(1, "exponential")
    with pytest.raises(ValueError):
        suggest_m(100, "geometric")


# ---------------------------------------------------------------------------
# Projection oracle


def euclidean_instance(n, d, seed):
    kern = LangevinSteinKernel(score_gaussian(np.zeros(d), 1.0), 1.0, d)
    X = sample_gaussian(np.zeros(d), 1.0, n, RngStream(seed))
    return kern, X


def spherical_instance(n, d, gamma, seed):
    kern = DirectionalSteinKernel(score_uniform_sphere(d), gamma, d)
    T = sample_uniform_sphere(d, n, RngStream(seed))
    return kern, T


def test_oracle_matches_nystrom_estimator():
    kern, X = euclidean_instance(30, 2, 21)
    idx = sample_landmarks(30, 6, RngStream(21, 1))
    ny = ksd_nystrom(build_sketch(kern, X, idx)).value
    orc = projection_oracle(kern, X, idx, np.ones(30))
    assert abs(ny - orc) <= 1e-10


def test_oracle_matches_nystrom_bootstrap():
    kern, X = euclidean_instance(30, 2, 22)
    idx = sample_landmarks(30, 6, RngStream(22, 1))
    sk = build_sketch(kern, X, idx)
    r = draw_rademacher(30, RngStream(22, 2))
    assert abs(nystrom_bootstrap_stat(sk, r) - projection_oracle(kern, X, idx, r)) <= 1e-10


def test_oracle_full_span_is_plain_quadratic_form():
    kern, X = euclidean_instance(12, 1, 23)
    G = gram_full(kern, X)
    w = RNG.normal(size=12)
    expected = float(w @ G @ w) / 12**2
    got = projection_oracle(kern, X, np.arange(12), w)
    assert got == pytest.approx(expected, abs=1e-10)


def test_oracle_rejects_large_instances():
    kern, X = euclidean_instance(10, 1, 24)
    with pytest.raises(ValueError):
        projection_oracle(kern, np.zeros((201, 1)), np.array([0]), np.ones(201))
    with pytest.raises(ValueError):
        projection_oracle(kern, X, np.array([0]), np.ones(3))


def test_oracle_agreement_sweep():
    # the module's reason to exist: agreement on many random mixed instances
    checked = 0
    for seed in range(50):
        rng = np.random.default_rng([30, seed])
        n = int(rng.integers(5, 50))
        m = int(rng.integers(1, 11))
        if seed % 2 == 0:
            kern, X = euclidean_instance(n, int(rng.integers(1, 4)), seed)
        else:
            kern, X = spherical_instance(n, int(rng.choice([2, 3])), 0.3, seed)
        idx = sample_landmarks(n, m, RngStream(seed, 31))
        sk = build_sketch(kern, X, idx)
        r = draw_rademacher(n, RngStream(seed, 32))
        assert abs(ksd_nystrom(sk).value - projection_oracle(kern, X, idx, np.ones(n))) <= 1e-10
        assert abs(nystrom_bootstrap_stat(sk, r) - projection_oracle(kern, X, idx, r)) <= 1e-10
        checked += 1
    assert checked == 50


# ---------------------------------------------------------------------------
# Stein identity


def test_stein_identity_langevin():
    kern = LangevinSteinKernel(score_gaussian(np.zeros(1), 1.0), 1.0, 1)
    sampler = lambda n, rng: sample_gaussian(np.zeros(1), 1.0, n, rng)
    z = stein_identity_check(kern, sampler, np.array([0.7]), 10**5, RngStream(40))
    assert abs(z) <= 5.0


def test_stein_identity_directional():
    kern = DirectionalSteinKernel(score_uniform_sphere(2), 0.12, 2)
    sampler = lambda n, rng: sample_uniform_sphere(2, n, rng)
    z = stein_identity_check(kern, sampler, np.array([1.0]), 10**5, RngStream(41))
    assert abs(z) <= 5.0


def test_stein_identity_negative_control():
    # score of N(0, 4) against N(0, 1) samples must blow the z-score up
    kern = LangevinSteinKernel(score_gaussian(np.zeros(1), 2.0), 1.0, 1)
    sampler = lambda n, rng: sample_gaussian(np.zeros(1), 1.0, n, rng)
    z = stein_identity_check(kern, sampler, np.array([0.7]), 10**5, RngStream(42))
    assert abs(z) > 10.0


def test_stein_identity_needs_enough_samples():
    kern = LangevinSteinKernel(score_gaussian(np.zeros(1), 1.0), 1.0, 1)
    sampler = lambda n, rng: sample_gaussian(np.zeros(1), 1.0, n, rng)
    with pytest.raises(ValueError):
        stein_identity_check(kern, sampler, np.array([0.0]), 10, RngStream(43))
