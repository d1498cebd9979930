# SPDX-License-Identifier: MIT
import numpy as np
import pytest

import tucker


def test_unfold_fold_roundtrip():
    x = np.arange(24, dtype=float).reshape((2, 3, 4), order="F")
    for mode in range(3):
        m = tucker.unfold(x, mode)
        assert m.shape == (x.shape[mode], x.size // x.shape[mode])
        np.testing.assert_array_equal(tucker.fold(m, list(x.shape), mode), x)
    np.testing.assert_array_equal(tucker.unfold(x, 0), x.reshape((2, 12), order="F"))


def test_mode_product_identity():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((4, 5, 6))
    a = rng.standard_normal((3, 5))
    y = tucker.mode_product(x, a, 1)
    np.testing.assert_allclose(tucker.unfold(y, 1), a @ tucker.unfold(x, 1), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(y, np.einsum("jb,abc->ajc", a, x), rtol=1e-12, atol=1e-12)


def test_qf_and_lyapunov():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((8, 3))
    q, r = tucker.qf(m)
    np.testing.assert_allclose(q @ r, m, atol=1e-12)
    assert np.all(np.diag(r) >= 0)
    b = rng.standard_normal((3, 3))
    lam = b @ b.T + 3 * np.eye(3)
    c = rng.standard_normal((3, 3))
    c = c + c.T
    s = tucker.solve_lyapunov(lam, c)
    np.testing.assert_allclose(lam @ s + s @ lam, c, atol=1e-10)


def test_block_update_is_orthogonal_iteration():
    rng = np.random.default_rng(2)
    y = rng.standard_normal((20, 30))
    u, _ = np.linalg.qr(rng.standard_normal((20, 4)))
    expected, _ = tucker.qf(y @ (y.T @ u))
    np.testing.assert_allclose(tucker.rpcd_block_update(u, y, 1.0), expected, atol=1e-10)


def test_decompose_recovers_low_rank():
    x = tucker.synth([20, 18, 16], [3, 2, 2], kind="lowrank", seed=5)
    core, factors, trace = tucker.decompose(x, [3, 2, 2], method="rpcd-plus", seed=1)
    assert core.shape == (3, 2, 2)
    assert [f.shape for f in factors] == [(20, 3), (18, 2), (16, 2)]
    assert trace["final_rel_err"] < 1e-6
    assert tucker.rel_error_exact(x, core, factors) < 1e-6
    np.testing.assert_allclose(tucker.reconstruct(core, factors), x, atol=1e-8 * np.abs(x).max())


def test_noisy_methods_agree():
    x = tucker.synth([25, 25, 25], [3, 3, 3], kind="noisy", noise=0.1, seed=3)
    errs = {m: tucker.decompose(x, [3, 3, 3], method=m)[2]["final_rel_err"] for m in ("rpcd-plus", "hooi")}
    assert 0.08 <= errs["hooi"] <= 0.12
    assert abs(errs["rpcd-plus"] - errs["hooi"]) < 1e-3
    _, _, tr = tucker.decompose(x, [3, 3, 3], method="hosvd")
    assert tr["iterations"] == 1


def test_dten_roundtrip(tmp_path):
    x = np.array([0.0, -0.0, 1.5, -2.25, 1e-300, 7.0]).reshape((3, 2), order="F")
    path = tmp_path / "x.dten"
    tucker.write_dten(path, x)
    y = tucker.read_dten(path)
    np.testing.assert_array_equal(y, x)
    assert np.signbit(y[1, 0])


def test_errors_map_to_exceptions(tmp_path):
    x = tucker.synth([5, 5], [2, 2], seed=0)
    with pytest.raises(tucker.ShapeError):
        tucker.decompose(x, [6, 2])
    with pytest.raises(tucker.IoError):
        tucker.read_dten(tmp_path / "missing.dten")
    assert issubclass(tucker.RankDeficiencyError, tucker.Error)
