import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jacksonine import jack
from jacksonine import partitions as pt
from jacksonine.jack import SymPoly


def schur_bialternant(lam, x):
    """Schur polynomial from the ratio of alternants (independent of the Jack code)."""
    n = len(x)
    num = np.array([[xi ** (lam[j] + n - 1 - j) for j in range(n)] for xi in x])
    den = np.array([[xi ** (n - 1 - j) for j in range(n)] for xi in x])
    return np.linalg.det(num) / np.linalg.det(den)


def p_at_ones(lam, alpha, n):
    """Principal specialization of the monic Jack polynomial, cell by cell."""
    lam = [p for p in lam if p]
    conj = pt.conjugate(tuple(lam), max(lam, default=0)) if lam else ()
    out = F(1)
    for i, row in enumerate(lam):
        for j in range(row):
            arm, leg = row - j - 1, conj[j] - i - 1
            out *= F(n - i) + alpha * j
            out /= alpha * arm + leg + 1
    return out


def test_low_degree_zonal_polynomials():
    # alpha = 2, two variables: C_(2) = m_2 + 2/3 m_11, C_(11) = 4/3 m_11
    c2 = jack.jack_C((2, 0), 2)
    c11 = jack.jack_C((1, 1), 2)
    assert c2[(2, 0)] == 1 and c2[(1, 1)] == F(2, 3)
    assert c11[(2, 0)] == 0 and c11[(1, 1)] == F(4, 3)


@pytest.mark.parametrize("lam", [(2, 1, 0), (3, 1, 0), (2, 2, 1), (4, 0, 0)])
def test_alpha_one_is_schur(lam):
    x = np.array([0.3, 1.1, 0.7])
    val = jack.jack_P(lam, 1)(x)
    assert val == pytest.approx(schur_bialternant(lam, x), rel=1e-12)


@pytest.mark.parametrize("alpha", [F(1, 2), F(1), F(3)])
@pytest.mark.parametrize("lam", [(2, 1, 0), (3, 1, 1), (1, 1, 1)])
def test_principal_specialization(lam, alpha):
    assert jack.jack_P(lam, alpha).at_ones() == p_at_ones(lam, alpha, 3)


@pytest.mark.parametrize("alpha", [F(1, 2), F(1), F(2)])
def test_monic_and_triangular(alpha):
    for lam in pt.enumerate_partitions(4, 3):
        p = jack.jack_P(lam, alpha)
        assert p[lam] == 1
        assert all(pt.dominates(lam, mu) for mu, c in p.coeffs.items() if c)


@pytest.mark.parametrize("alpha", [F(1, 2), F(2)])
def test_normalization_exact(alpha):
    n, m = 3, 4
    total = SymPoly(n)
    for lam in pt.enumerate_partitions(m, n):
        total = total + jack.jack_C(lam, alpha, n)
    assert total == jack.power_sum_one(n) ** m


def test_symmetry_of_evaluation():
    x = [0.2, 0.9, 0.5]
    a = jack.jack_eval((2, 1, 0), F(1, 2), x)
    for perm in itertools.permutations(x):
        assert jack.jack_eval((2, 1, 0), F(1, 2), list(perm)) == pytest.approx(a, rel=1e-13)


def test_symmetric_polynomial_json_roundtrip():
    p = jack.jack_C((2, 1), F(2, 3))
    assert SymPoly.from_json(p.to_json()) == p


def test_bad_alpha_rejected():
    with pytest.raises(ValueError):
        jack.jack_P((1,), 0)


def test_block_values_match_symbolic():
    pts = np.array([[0.3, 0.8], [1.2, -0.4]])
    vals = jack.jack_block_values(3, F(1, 2), pts)
    blk = jack.jack_block(3, F(1, 2), 2)
    for a, lam in enumerate(blk.parts):
        for p in range(2):
            assert vals[p, a] == pytest.approx(jack.jack_eval(lam, F(1, 2), pts[p]), rel=1e-12)


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv(jack.CACHE_ENV, str(tmp_path))
    monkeypatch.setattr(jack, "_BLOCKS", {})
    blk = jack.jack_block(3, F(5, 7), 2)
    assert list(tmp_path.iterdir())
    monkeypatch.setattr(jack, "_BLOCKS", {})
    again = jack.jack_block(3, F(5, 7), 2)
    assert again.exact == blk.exact


# --- binomial coefficients ---------------------------------------------------------


def test_golden_binomial():
    assert jack.binomial((2, 1), (1, 0), 1) == 3
    assert jack.binomial((2, 1), (0, 0), F(1, 2)) == 1
    assert jack.binomial((2, 1), (2, 1), F(1, 2)) == 1
    with pytest.raises(ValueError):
        jack.binomial((2, 1), (3, 0), 1)


@pytest.mark.parametrize("k", range(7))
def test_one_variable_binomials_are_classical(k):
    row = jack.binomial_row((k,), F(2))
    assert all(row[(j,)] == math.comb(k, j) for j in range(k + 1))


@pytest.mark.parametrize("alpha", [F(1, 2), F(1), F(3, 2)])
@pytest.mark.parametrize("kappa", [(2, 1, 0), (3, 2, 1), (4, 2, 0)])
def test_recursive_matches_reference(kappa, alpha):
    assert jack.binomial_row_recursive(kappa, alpha) == jack.binomial_row(kappa, alpha)


def test_recursive_with_gmpy2():
    import gmpy2

    kappa, alpha = (3, 1, 1), F(2, 3)
    fast = jack.binomial_row_recursive(kappa, alpha, field=gmpy2.mpq)
    ref = jack.binomial_row(kappa, alpha)
    assert {k: F(int(v.numerator), int(v.denominator)) for k, v in fast.items()} == ref


@given(
    st.lists(st.integers(0, 5), min_size=2, max_size=3).map(lambda v: tuple(sorted(v, reverse=True))),
    st.sampled_from([F(1, 2), F(1), F(2)]),
)
def test_binomial_row_sums(kappa, alpha):
    row = jack.binomial_row_recursive(kappa, alpha)
    size = sum(kappa)
    for m in range(size + 1):
        assert sum(v for lam, v in row.items() if sum(lam) == m) == math.comb(size, m)
    assert all(v >= 0 for v in row.values())


def test_float_binomials_match_exact():
    kappa, alpha = (4, 2, 1), F(1, 2)
    ds, vals = jack.binomial_row_float(kappa, alpha)
    exact = jack.binomial_row(kappa, alpha)
    for s, sigma in enumerate(ds.parts):
        expected = float(exact[sigma]) / math.comb(sum(kappa), sum(sigma))
        assert vals[s] == pytest.approx(expected, rel=1e-12)
