import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import betaln

from jacksonine import quadrature as qd


@given(st.floats(-0.9, 3.0), st.floats(-0.9, 3.0), st.integers(0, 10))
def test_gauss_jacobi_moments(a, b, k):
    s, w = qd.gauss_jacobi01(8, a, b)
    assert np.dot(w, s**k) == pytest.approx(math.exp(betaln(a + k + 1, b + 1)), rel=1e-11)


def test_gauss_jacobi_rejects_bad_exponents():
    with pytest.raises(ValueError):
        qd.gauss_jacobi01(4, -1.0, 0.0)


def test_log_selberg_rank_one_is_beta():
    assert qd.log_selberg(1, 2.5, 0.7, 1.3) == pytest.approx(betaln(2.5, 0.7), rel=1e-14)


def test_log_selberg_small_case_by_hand():
    # n = 2, a = b = 1, gamma = 1: int int (t1 - t2)^2 = 1/6
    assert math.exp(qd.log_selberg(2, 1, 1, 1)) == pytest.approx(1 / 6, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p,q,r", [(0.0, 0.0, 1.0), (-0.5, 0.5, 2.0), (0.5, -0.5, 1.0), (1.0, 0.0, 3.0)])
def test_ordered_rule_total_matches_selberg(n, p, q, r):
    rule = qd.ordered_rule(n, p, q, r, 16)
    exact = math.exp(qd.log_selberg(n, p + 1, q + 1, r / 2))
    assert rule.total == pytest.approx(exact, rel=1e-12)


def test_ordered_rule_fractional_r_converges():
    exact = math.exp(qd.log_selberg(2, 2.0, 1.0, 0.25))
    errs = [abs(qd.ordered_rule(2, 1.0, 0.0, 0.5, m).total / exact - 1) for m in (8, 16, 32, 64)]
    assert all(b < a / 8 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-9


def test_ordered_rule_integrates_symmetric_polynomials():
    rule = qd.ordered_rule(2, 0.0, 0.0, 1.0, 12)
    # int (t1 + t2) |t1 - t2| over the square
    t = rule.nodes
    got = rule.integrate(t.sum(axis=1))
    assert got == pytest.approx(1 / 3, rel=1e-12)


def test_ordered_region_is_a_fraction_of_the_cube():
    cube = qd.ordered_rule(3, 0.0, 0.0, 2.0, 8, region="cube")
    ordered = qd.ordered_rule(3, 0.0, 0.0, 2.0, 8, region="ordered")
    assert cube.total == pytest.approx(6 * ordered.total, rel=1e-14)
    assert np.all(np.diff(ordered.nodes, axis=1) <= 0)
    with pytest.raises(ValueError):
        qd.ordered_rule(2, 0, 0, 1, 4, region="simplex")


def test_tensor_rule_exact_for_even_r():
    rule = qd.tensor_rule(2, 0.5, 0.0, 2.0, 6)
    assert rule.total == pytest.approx(math.exp(qd.log_selberg(2, 1.5, 1.0, 1.0)), rel=1e-13)


def test_tensor_rule_converges_for_odd_r():
    exact = math.exp(qd.log_selberg(2, 1.0, 1.0, 0.5))
    errs = [abs(qd.tensor_rule(2, 0.0, 0.0, 1.0, m).total - exact) for m in (8, 16, 32)]
    assert errs[2] < errs[1] < errs[0]


def test_selberg_rule_dispatch():
    assert qd.selberg_rule(2, 0, 0, 1, 4, "tensor").scheme == "tensor"
    with pytest.raises(ValueError):
        qd.selberg_rule(2, 0, 0, 1, 4, "monte-carlo")
    with pytest.raises(ValueError):
        qd.selberg_rule(2, -1.5, 0, 1, 4)
