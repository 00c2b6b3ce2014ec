from fractions import Fraction as F

import numpy as np
import pytest

from jacksonine import _accel, _kernels, jack


def _both_paths(monkeypatch, fn):
    monkeypatch.delenv(_accel.ENV_FLAG, raising=False)
    fast = fn()
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    assert not _accel.numba_enabled()
    slow = fn()
    return fast, slow


def test_env_flag(monkeypatch):
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    assert not _accel.numba_enabled()
    monkeypatch.setenv(_accel.ENV_FLAG, "0")
    assert _accel.numba_enabled() == _accel.HAVE_NUMBA


def test_optional_njit_keeps_semantics():
    @_accel.optional_njit
    def add(a, b):
        return a + b

    assert add(2, 3) == 5


@pytest.mark.parametrize("dtype", [float, complex])
def test_monomial_paths_agree(monkeypatch, dtype):
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(50, 3)).astype(dtype)
    if dtype is complex:
        pts = pts + 1j * rng.normal(size=pts.shape)
    fast, slow = _both_paths(monkeypatch, lambda: jack.monomial_block_values(5, pts))
    np.testing.assert_allclose(fast, slow, rtol=1e-13, atol=1e-13)


def test_monomials_against_direct_sum():
    pts = np.array([[0.5, 2.0, -1.0]])
    vals = jack.monomial_block_values(2, pts)
    blk = jack.jack_block(2, 1, 3)
    direct = {(2, 0, 0): 0.25 + 4 + 1, (1, 1, 0): 0.5 * 2 - 0.5 - 2}
    for a, lam in enumerate(blk.parts):
        assert vals[0, a] == pytest.approx(direct[lam])


@pytest.mark.parametrize("kappa", [(6, 3, 1), (12, 7, 0), (5, 5, 5)])
def test_binomial_paths_agree(monkeypatch, kappa):
    ds = jack.down_set(kappa)
    fast, slow = _both_paths(monkeypatch, lambda: _kernels.binomial_row_normalized(ds.parts, ds.up, 0.75))
    np.testing.assert_allclose(fast, slow, rtol=1e-13)


def test_float_binomials_without_numba(monkeypatch):
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    ds, vals = jack.binomial_row_float((3, 1), F(1, 2))
    exact = jack.binomial_row((3, 1), F(1, 2))
    from math import comb

    for s, sigma in enumerate(ds.parts):
        assert vals[s] == pytest.approx(float(exact[sigma]) / comb(4, sum(sigma)), rel=1e-13)
