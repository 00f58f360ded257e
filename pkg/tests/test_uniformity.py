import math

import numpy as np
import pytest
from scipy import integrate, stats

from trishape import sampling as samp
from trishape import uniformity as uni

RNG_SEED = 4242


def uniform_preshapes(t, m=2, q=2, seed=0):
    rng = samp.RngSeed(seed).generator()
    z = rng.standard_normal((t, m, q))
    return z / np.linalg.norm(z.reshape(t, -1), axis=1)[:, None, None]


def rotations(t, seed=0):
    th = samp.RngSeed(seed).generator().uniform(0, 2 * np.pi, size=t)
    return np.stack([
        np.stack([np.cos(th), -np.sin(th)], axis=-1),
        np.stack([np.sin(th), np.cos(th)], axis=-1),
    ], axis=-2)


# ---------------------------------------------------------------------------
# Chikuse-Jupp statistic


def test_chikuse_jupp_zero_point():
    # every Z^T Z equal to I/(k-1) exactly: rotations scaled to unit norm
    z = rotations(500, seed=1) / np.sqrt(2.0)
    report = uni.chikuse_jupp(z)
    assert report.statistic < 1e-12
    assert report.p_value == 1.0


def test_chikuse_jupp_k2_always_zero():
    z = uniform_preshapes(50, m=3, q=1, seed=2)
    report = uni.chikuse_jupp(z)
    assert report.statistic < 1e-12
    assert report.p_value == 1.0


def test_chikuse_jupp_null_mean_matches_df():
    # under uniformity E[S] equals the reference df exactly at every t
    reps, t = 300, 1000
    rng = samp.RngSeed(3).generator()
    z = rng.standard_normal((reps, t, 2, 2))
    z /= np.linalg.norm(z.reshape(reps, t, 4), axis=2)[:, :, None, None]
    stats_ = np.array([uni.chikuse_jupp(z[i]).statistic for i in range(reps)])
    df = 2.0
    assert abs(stats_.mean() - df) < 5 * stats_.std() / math.sqrt(reps)
    # and the asymptotic law itself is chi-square with that df
    assert stats.kstest(stats_, "chi2", args=(df,)).pvalue > 0.01


def test_chikuse_jupp_rejects_fixed_nonequilateral_shape():
    m0 = np.diag([math.sqrt(0.75), math.sqrt(0.25)])
    z = np.broadcast_to(m0, (1000, 2, 2)).copy()
    report = uni.chikuse_jupp(z)
    assert report.p_value < 1e-6


def test_chikuse_jupp_blind_to_equilateral_point_mass():
    # the equilateral shape is the exact zero point of the second-moment
    # statistic, so this alternative is invisible to it by construction
    z = rotations(1000, seed=4) / np.sqrt(2.0)
    assert uni.chikuse_jupp(z).p_value == 1.0


def test_chikuse_jupp_rotation_invariance():
    z = uniform_preshapes(200, seed=5)
    rot = np.array([[0.6, -0.8], [0.8, 0.6]])
    s1 = uni.chikuse_jupp(z).statistic
    s2 = uni.chikuse_jupp(np.einsum("ij,tjk->tik", rot, z)).statistic
    assert abs(s1 - s2) < 1e-12


def test_chikuse_jupp_input_validation():
    with pytest.raises(ValueError):
        uni.chikuse_jupp(np.empty((0, 2, 2)))
    with pytest.raises(ValueError):
        uni.chikuse_jupp([np.eye(2) / np.sqrt(2), np.eye(3) / np.sqrt(3)])
    with pytest.raises(ValueError):
        uni.chikuse_jupp(np.ones((5, 2, 2)))   # not unit norm


# ---------------------------------------------------------------------------
# chi-square tail


def test_chi2_upper_tail_values():
    assert uni.chi2_upper_tail(0.0, 5.0) == 1.0
    assert abs(uni.chi2_upper_tail(2 * math.log(2.0), 2.0) - 0.5) < 1e-14
    assert abs(uni.chi2_upper_tail(11.07, 5.0) - 0.05) < 1e-3
    with pytest.raises(ValueError):
        uni.chi2_upper_tail(1.0, 0.0)
    with pytest.raises(ValueError):
        uni.chi2_upper_tail(-1.0, 2.0)


# ---------------------------------------------------------------------------
# smallest singular value density


def test_inv_sigma_min_density_support():
    assert uni.inv_sigma_min_density(1.0, 2) == 0.0
    assert uni.inv_sigma_min_density(1.4142135, 2) == 0.0
    # float sqrt(2) squares to just above 2; the (t^2 - 2) factor kills it anyway
    assert uni.inv_sigma_min_density(math.sqrt(2.0), 2) < 1e-12
    with pytest.raises(ValueError):
        uni.inv_sigma_min_density(2.0, 1)


def test_inv_sigma_min_density_m2_closed_form():
    for t in (1.5, 1.9, 2.5, 4.0, 10.0, 40.0):
        closed = 2.0 * (t * t - 2.0) / (t**3 * math.sqrt(t * t - 1.0))
        assert abs(uni.inv_sigma_min_density(t, 2) - closed) < 1e-12


@pytest.mark.parametrize("m", [2, 3, 4])
def test_inv_sigma_min_density_normalizes(m):
    val, err = integrate.quad(uni.inv_sigma_min_density, math.sqrt(m), np.inf,
                              args=(m,), limit=300)
    assert abs(val - 1.0) < 1e-6


def test_inv_sigma_min_cdf():
    for t in (1.5, 2.0, 5.0):
        closed = 1.0 - 2.0 * math.sqrt(t * t - 1.0) / (t * t)
        assert abs(uni.inv_sigma_min_cdf(t, 2) - closed) < 1e-12
    ref, _ = integrate.quad(uni.inv_sigma_min_density, math.sqrt(3.0), 4.0, args=(3,))
    assert abs(uni.inv_sigma_min_cdf(4.0, 3) - ref) < 1e-9


def test_inv_sigma_min_histogram_matches_density():
    z = uniform_preshapes(50_000, seed=6)
    tt = 1.0 / np.linalg.svd(z, compute_uv=False)[:, -1]
    # 40 equal-probability bins from the closed-form m=2 quantile
    probs = np.linspace(0.0, 1.0, 41)
    edges = np.empty(41)
    edges[0], edges[-1] = math.sqrt(2.0), np.inf
    for i, p in enumerate(probs[1:-1], start=1):
        x = 2.0 * (1.0 + math.sqrt(1.0 - (1.0 - p) ** 2)) / (1.0 - p) ** 2
        edges[i] = math.sqrt(x)
    counts = np.histogram(tt, bins=edges)[0]
    expected = len(tt) / 40.0
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert stats.chi2.sf(chi2, 39) > 0.01


# ---------------------------------------------------------------------------
# KS test


def test_ks_quantile_samples_small_d():
    t = 1000
    samples = (np.arange(1, t + 1)) / (t + 1.0)
    report = uni.ks_test(samples, lambda x: x)
    assert report.statistic < 2.0 / t


def test_ks_null_calibration():
    rng = samp.RngSeed(7).generator()
    rejections = 0
    reps = 400
    for _ in range(reps):
        report = uni.ks_test(rng.uniform(size=400), lambda x: x)
        rejections += report.p_value < 0.1
    # binomial(400, 0.1): allow 4 sigma around the nominal rate
    assert abs(rejections / reps - 0.1) < 4 * math.sqrt(0.1 * 0.9 / reps)


def test_ks_det_ratio_uniform_non_rejection():
    rng = samp.RngSeed(8).generator()
    g = rng.standard_normal((50_000, 2, 2))
    ratio = np.abs(g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]) / (g**2).sum(axis=(1, 2))
    report = uni.ks_test(ratio, lambda v: min(max(2.0 * v, 0.0), 1.0))
    assert report.p_value > 0.01


def test_ks_empty_rejected():
    with pytest.raises(ValueError):
        uni.ks_test([], lambda x: x)


# ---------------------------------------------------------------------------
# suite


def test_suite_uniform_passes():
    z = uniform_preshapes(20_000, seed=9)
    suite = uni.uniformity_suite(z)
    names = [r.name for r in suite.reports]
    assert names == ["chikuse-jupp", "sigma-min-ks", "height-ks", "longitude-ks"]
    assert not suite.rejected(0.01)


def test_suite_catches_equilateral_point_mass_via_sigma_min():
    z = rotations(2000, seed=10) / np.sqrt(2.0)
    suite = uni.uniformity_suite(z)
    by_name = {r.name: r for r in suite.reports}
    assert by_name["chikuse-jupp"].p_value == 1.0      # blind spot
    assert by_name["sigma-min-ks"].p_value < 1e-6      # but the spectrum test sees it
    assert suite.rejected(0.01)


def test_suite_single_sample():
    z = uniform_preshapes(1, seed=11)
    suite = uni.uniformity_suite(z)
    assert len(suite.reports) == 4
    for r in suite.reports:
        assert 0.0 <= r.p_value <= 1.0


def test_suite_nonsquare_skips_sigma_min():
    z = uniform_preshapes(100, m=3, q=4, seed=12)
    suite = uni.uniformity_suite(z)
    assert [r.name for r in suite.reports] == ["chikuse-jupp"]
