import numpy as np
import pytest

import gmdsim


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def test_svd_matches_numpy():
    rng = np.random.default_rng(3)
    a = random_matrix(rng, 6, 3)
    u, s, v = gmdsim.svd(a)
    np.testing.assert_allclose(s, np.linalg.svd(a, compute_uv=False), rtol=1e-10)
    np.testing.assert_allclose(u[:, :3] @ np.diag(s) @ v.conj().T, a, atol=1e-10)


def test_qr_diagonal_is_real_nonnegative():
    rng = np.random.default_rng(4)
    a = random_matrix(rng, 4, 2)
    q, r = gmdsim.qr(a)
    np.testing.assert_allclose(q @ r, a, atol=1e-12)
    d = np.diag(r)
    assert np.all(d.real >= 0) and np.allclose(d.imag, 0)


def test_gmd_has_geometric_mean_diagonal():
    rng = np.random.default_rng(5)
    a = random_matrix(rng, 8, 2)
    b, e, p = gmdsim.gmd(a)
    np.testing.assert_allclose(b @ e @ p.conj().T, a, atol=1e-10)
    geo = np.prod(np.linalg.svd(a, compute_uv=False)) ** 0.5
    np.testing.assert_allclose(np.abs(np.diag(e)), geo, rtol=1e-10)
    np.testing.assert_allclose(np.tril(e, -1), 0, atol=1e-12)


def test_rank_deficient_gmd_raises():
    with pytest.raises(gmdsim.RankDeficient):
        gmdsim.gmd(np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex))


def test_channel_kronecker_layout():
    h, g = gmdsim.draw_channel(seed=9, subcarriers=16)
    assert h.shape == (8, 2)
    assert len(g) == 16
    # Row block n of H holds the L taps of receive antenna n; subcarrier 0 sums them.
    np.testing.assert_allclose(g[0], h.reshape(2, 4, 2).sum(axis=1), atol=1e-12)


def test_throughput_and_schedule():
    assert gmdsim.throughput_from_r(np.eye(2, dtype=complex), 1.0) == pytest.approx(2.0)
    winners, rates, total = gmdsim.schedule([[3.0, 1.0], [1.0, 3.0]])
    assert winners == [0, 1]
    assert rates == [3.0, 3.0]
    assert total == pytest.approx(3.0)


def test_feedback_cost():
    assert gmdsim.feedback_cost("PS-GMD", 64, 1, 8)["total_bits"] == 8 + 64 * 16
    assert gmdsim.feedback_cost("PS-EB", 64, 1, 8)["bfm_bits"] == 64 * 8


def test_small_case3_run_and_bad_config():
    out = gmdsim.run_case(3, {"trials": 4, "Q": 16, "G_grid": "2,4"})
    assert out["csv"].splitlines()[0] == "case,scheme,snr_db,K,B,G,metric,value,ci95,trials"
    assert len(out["rows"]) == 4
    assert all(r["metric"] == "throughput" and r["value"] > 0 for r in out["rows"])
    with pytest.raises(gmdsim.ConfigInvalid):
        gmdsim.run_case(3, {"trials": 0})
