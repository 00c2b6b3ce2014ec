import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.special import binom, eval_genlaguerre

from jacksonine import laguerre as lg
from jacksonine import partitions as pt
from jacksonine.hyper import MultiplicityB
from jacksonine.laguerre import ConnectionTable, LaguerreParams


@pytest.mark.parametrize("a", [F(-1, 2), F(0), F(3, 2)])
@pytest.mark.parametrize("k", [0, 1, 4, 7])
def test_rank_one_laguerre_is_classical(a, k):
    p = LaguerreParams(1, a, 1)
    for x in (0.0, 0.4, 2.5):
        expected = eval_genlaguerre(k, float(a), x) / binom(k + float(a), k)
        assert lg.laguerre_normalized((k,), p, [x]) == pytest.approx(expected, rel=1e-11, abs=1e-12)


def test_laguerre_at_origin_is_one():
    p = LaguerreParams(2, F(1, 2), F(1, 2))
    assert lg.laguerre_normalized_exact((2, 1), p, [0, 0]) == 1


def test_float_and_exact_evaluations_agree():
    p = LaguerreParams(2, F(1, 3), F(2))
    x = [F(1, 2), F(3, 4)]
    exact = lg.laguerre_normalized_exact((3, 1), p, x)
    assert lg.laguerre_normalized((3, 1), p, [0.5, 0.75]) == pytest.approx(float(exact), rel=1e-12)


@pytest.mark.parametrize("a", [F(-1, 2), F(0), F(3, 2)])
@pytest.mark.parametrize("k", range(6))
def test_rank_one_connection_closed_form(a, k):
    table = lg.connection_coefficients((k,), LaguerreParams(1, a, 1), 1)
    for (j,), c in table.entries.items():
        expected = binom(j + float(a), j) / binom(k + float(a) + 1, k)
        assert float(c) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "kappa,p,h",
    [
        ((2, 1), LaguerreParams(2, F(0), F(1)), F(1)),
        ((3, 1, 0), LaguerreParams(3, F(1, 2), F(1, 2)), F(2)),
        ((2, 2), LaguerreParams(2, F(-1, 2), F(2)), F(1, 3)),
    ],
)
def test_connection_expansion_identity(kappa, p, h):
    """The coefficients reproduce the shifted polynomial at rational points."""
    table = lg.connection_coefficients(kappa, p, h)
    shifted = LaguerreParams(p.n, p.a + h, p.alpha)
    for x in ([F(1, 3)] * p.n, [F(k + 1, 5) for k in range(p.n)]):
        lhs = lg.laguerre_normalized_exact(kappa, shifted, x)
        rhs = sum(c * lg.laguerre_normalized_exact(lam, p, x) for lam, c in table.entries.items())
        assert lhs == rhs


def test_connection_sum_and_sign_for_h_one_over_alpha():
    for alpha in (F(1, 2), F(1), F(2)):
        p = LaguerreParams(2, F(0), alpha)
        for kappa in pt.partitions_upto(4, 2):
            table = lg.connection_coefficients(kappa, p, 1 / alpha)
            assert table.total() == 1
            assert not table.negatives()


def test_iterated_matches_direct_shift():
    p = LaguerreParams(2, F(1, 2), F(1))
    direct = lg.connection_coefficients((3, 1), p, F(2))
    chained = lg.iterated_connection((3, 1), p, F(1), 2)
    assert {k: v for k, v in chained.entries.items() if v} == {k: v for k, v in direct.entries.items() if v}


def test_float_mode_for_irrational_parameters():
    p = LaguerreParams(2, math.pi / 10, 1.0)
    table = lg.connection_coefficients((2, 1), p, 1.0)
    assert not table.exact
    assert table.total() == pytest.approx(1.0, rel=1e-12)


def test_table_json_roundtrip():
    table = lg.connection_coefficients((2, 1), LaguerreParams(2, F(0), F(1)), F(1, 2))
    again = ConnectionTable.from_json(table.to_json())
    assert again.entries == table.entries and again.kappa == table.kappa


def test_wallach_witness_golden():
    report = lg.wallach_sign_scan(LaguerreParams(2, F(0), F(1)), F(1, 2), 6)
    assert not report.clean
    assert report.violations[0] == ((1, 1), (0, 0), F(-1, 15))
    assert report.to_csv().splitlines()[:2] == ["kappa,lambda,value", '"1,1","0,0",-1/15']


@pytest.mark.parametrize("h", [F(1), F(2)])
def test_wallach_scan_clean_inside_set(h):
    report = lg.wallach_sign_scan(LaguerreParams(2, F(0), F(1)), h, 6)
    assert report.clean and not report.outside_hypothesis
    assert report.to_csv() == "kappa,lambda,value\n"


def test_scan_flags_parameters_outside_hypothesis():
    report = lg.wallach_sign_scan(LaguerreParams(1, F(-3, 4), F(1)), F(1), 2)
    assert report.outside_hypothesis


def test_limit_error_halves_under_refinement():
    k = MultiplicityB(2, 1, 1)
    errs = [lg.laguerre_bessel_limit_error(k, [1.0, 0.5], [0.5, 0.2], j) for j in (8, 16, 32, 64)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] <= 0.5 * errs[-3]


def test_parameter_validation():
    with pytest.raises(ValueError):
        LaguerreParams(2, F(-1), F(1))
    with pytest.raises(ValueError):
        LaguerreParams(2, F(0), F(0))
    with pytest.raises(ValueError):
        lg.laguerre_bessel_limit_error(MultiplicityB(1, 1, 1), [1.0], [1.0], 0)
