import math

import numpy as np
import pytest
from scipy import stats

from ksdgof import (
    RngStream,
    VmfSpec,
    cartesian_to_sphere,
    read_points_csv,
    sample_gaussian,
    sample_uniform_sphere,
    sample_vmf,
    score_gaussian,
    score_uniform_sphere,
    sphere_to_cartesian,
)
from ksdgof.samplers import CsvFormatError


def test_gaussian_moments():
    x = sample_gaussian(0.0, 1.0, 10**5, RngStream(101))
    assert abs(x.mean()) <= 5.0 / math.sqrt(10**5)  # 5 sigma / sqrt(n)
    assert 0.97 <= x.var(ddof=1) <= 1.03


def test_gaussian_determinism():
    a = sample_gaussian([1.0, -1.0], 0.5, 100, RngStream(7, 3))
    b = sample_gaussian([1.0, -1.0], 0.5, 100, RngStream(7, 3))
    np.testing.assert_array_equal(a, b)


def test_gaussian_stream_independence():
    a = sample_gaussian(0.0, 1.0, 10**5, RngStream(7, 0))[:, 0]
    b = sample_gaussian(0.0, 1.0, 10**5, RngStream(7, 1))[:, 0]
    assert not np.array_equal(a, b)
    corr = float(np.corrcoef(a, b)[0, 1])
    assert abs(corr) < 0.02


def test_uniform_sphere_zero_resultant():
    for d in (2, 3):
        theta = sample_uniform_sphere(d, 10**5, RngStream(42, d))
        x = sphere_to_cartesian(theta, d)
        assert np.linalg.norm(x.mean(axis=0)) <= 5.0 / math.sqrt(10**5 * d)


def test_uniform_sphere_round_trip_unit_norm():
    theta = sample_uniform_sphere(4, 500, RngStream(5))
    x = sphere_to_cartesian(theta, 4)
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-12)


def test_uniform_sphere_d2_angle_uniform():
    theta = sample_uniform_sphere(2, 10**4, RngStream(8))[:, 0]
    res = stats.kstest(theta, stats.uniform(loc=0.0, scale=2 * np.pi).cdf)
    assert res.pvalue > 0.01


def test_uniform_sphere_angles_in_box():
    theta = sample_uniform_sphere(3, 10**4, RngStream(9))
    assert np.all(theta[:, 0] > 0.0) and np.all(theta[:, 0] < np.pi)
    assert np.all(theta[:, 1] >= 0.0) and np.all(theta[:, 1] < 2 * np.pi)


def test_vmf_kappa_zero_matches_uniform():
    spec = VmfSpec(mu=np.array([0.0, 0.0, 1.0]), kappa=0.0)
    w_vmf = sphere_to_cartesian(sample_vmf(spec, 10**4, RngStream(31)), 3) @ spec.mu
    # at kappa=0 the radial part has cdf (w+1)/2 on [-1, 1]
    res = stats.kstest(w_vmf, lambda w: (w + 1.0) / 2.0)
    assert res.pvalue > 0.01


def test_vmf_mean_resultant_d3():
    spec = VmfSpec(mu=np.array([1.0, 0.0, 0.0]), kappa=2.0)
    w = sphere_to_cartesian(sample_vmf(spec, 10**5, RngStream(32)), 3) @ spec.mu
    target = 1.0 / math.tanh(2.0) - 0.5
    stderr = w.std(ddof=1) / math.sqrt(w.size)
    assert abs(w.mean() - target) <= 5.0 * stderr


def test_vmf_high_concentration():
    spec = VmfSpec(mu=np.array([1.0, 0.0, 0.0]), kappa=50.0)
    w = sphere_to_cartesian(sample_vmf(spec, 10**4, RngStream(33)), 3) @ spec.mu
    assert (w > 0.8).mean() >= 0.99


def test_vmf_d2_direct():
    spec = VmfSpec(mu=np.array([0.0, 1.0]), kappa=1.5)
    theta = sample_vmf(spec, 10**4, RngStream(34))
    x = sphere_to_cartesian(theta, 2)
    # mean resultant length of a von Mises is I1(k)/I0(k)
    from scipy.special import iv

    target = iv(1, 1.5) / iv(0, 1.5)
    got = x @ spec.mu
    assert abs(got.mean() - target) <= 5.0 * got.std(ddof=1) / math.sqrt(got.size)


def test_vmf_rejects_negative_kappa():
    with pytest.raises(ValueError):
        VmfSpec(mu=np.array([1.0, 0.0]), kappa=-1.0)
    with pytest.raises(ValueError):
        VmfSpec(mu=np.array([2.0, 0.0]), kappa=1.0)


def test_vmf_angles_in_box():
    spec = VmfSpec(mu=np.array([1.0, 0.0, 0.0]), kappa=6.0)
    theta = sample_vmf(spec, 10**4, RngStream(35))
    assert np.all(theta[:, 0] > 0.0) and np.all(theta[:, 0] < np.pi)
    assert np.all(theta[:, 1] >= 0.0) and np.all(theta[:, 1] < 2 * np.pi)


def test_score_gaussian_values():
    s = score_gaussian(0.0, 1.0)
    np.testing.assert_array_equal(s(np.array([[0.0]])), [[0.0]])
    np.testing.assert_array_equal(s(np.array([[2.0]])), [[-2.0]])


def test_score_gaussian_matches_log_density_gradient():
    mean = np.array([0.3, -0.7])
    sigma = 1.4
    s = score_gaussian(mean, sigma)
    logp = lambda x: -np.sum((x - mean) ** 2) / (2 * sigma**2)
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(10):
        x = rng.normal(size=2)
        grad = s(x[None, :])[0]
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            fd = (logp(x + e) - logp(x - e)) / (2 * h)
            assert grad[i] == pytest.approx(fd, abs=1e-6)


def test_score_uniform_sphere_d2_zero():
    s = score_uniform_sphere(2)
    np.testing.assert_array_equal(s(np.array([[1.0], [4.0]])), np.zeros((2, 1)))


def test_score_uniform_sphere_matches_log_jacobian():
    from ksdgof import log_jacobian

    s = score_uniform_sphere(3)
    rng = np.random.default_rng(4)
    h = 1e-6
    for _ in range(10):
        t = np.array([rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi)])
        grad = s(t[None, :])[0]
        e = np.array([h, 0.0])
        fd = (log_jacobian(t + e, 3) - log_jacobian(t - e, 3)) / (2 * h)
        assert grad[0] == pytest.approx(float(fd), abs=1e-6)
        assert grad[1] == 0.0


def test_cartesian_round_trip():
    rng = np.random.default_rng(6)
    for d in (2, 3, 5):
        x = rng.normal(size=(200, d))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        back = sphere_to_cartesian(cartesian_to_sphere(x, d), d)
        np.testing.assert_allclose(back, x, atol=1e-10)


def test_pole_nudge():
    # north pole in Cartesian coordinates maps strictly inside the box
    theta = cartesian_to_sphere(np.array([[1.0, 0.0, 0.0]]), 3)[0]
    assert 0.0 < theta[0] < np.pi


# ---------------------------------------------------------------------------
# CSV ingestion


def write_csv(tmp_path, text):
    path = tmp_path / "pts.csv"
    path.write_text(text)
    return str(path)


def test_read_points_csv_cartesian(tmp_path):
    path = write_csv(tmp_path, "coord_system,d\ncartesian,2\n0.0,1.0\n1.0,0.0\n")
    coord, d, pts = read_points_csv(path)
    assert (coord, d) == ("cartesian", 2)
    np.testing.assert_array_equal(pts, [[0.0, 1.0], [1.0, 0.0]])


def test_read_points_csv_angular(tmp_path):
    path = write_csv(tmp_path, "coord_system,d\nangular,3\n0.5,1.0\n")
    coord, d, pts = read_points_csv(path)
    assert (coord, d) == ("angular", 3)
    assert pts.shape == (1, 2)


def test_read_points_csv_reports_row_and_column(tmp_path):
    path = write_csv(tmp_path, "coord_system,d\ncartesian,2\n0.0,oops\n")
    with pytest.raises(CsvFormatError, match="row 3 column 2"):
        read_points_csv(path)


def test_read_points_csv_wrong_width(tmp_path):
    path = write_csv(tmp_path, "coord_system,d\ncartesian,2\n0.0,1.0,2.0\n")
    with pytest.raises(CsvFormatError, match="row 3"):
        read_points_csv(path)


def test_read_points_csv_empty(tmp_path):
    path = write_csv(tmp_path, "")
    with pytest.raises(CsvFormatError, match="empty"):
        read_points_csv(path)
