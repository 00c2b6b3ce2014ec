"""Sonine formulas: explicit densities, discrete measures and moment identities.

Three families of positive integral representations are checked here:

* the restricted formula on [0, 1]^n with a Selberg-type density,
* discrete measures built from Laguerre connection coefficients, which
  realize a shift h in k2 * Z_+ in the limit of large partitions,
* the type-B to type-A limit and its moment identity.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from . import partitions as pt
from ._rational import Number, as_param, is_exact
from .hyper import (
    DEFAULT_POLICY,
    MultiplicityB,
    TruncationPolicy,
    bessel_1d,
    bessel_A,
    bessel_B,
    bessel_B_batch,
)
from .laguerre import LaguerreParams, connection_coefficients, iterated_connection
from .quadrature import QuadratureRule, gauss_jacobi01, log_selberg, selberg_rule


@dataclass(frozen=True)
class SonineParams:
    """Multiplicity k and shift h, with the regime that admits the shift.

    ``density``: h > k2 (n - 1), explicit density on [0, 1]^n.
    ``discrete``: h = m k2 for an integer m >= 1, discrete measures.
    When both hold the density regime is recorded unless asked otherwise.
    """

    k: MultiplicityB
    h: Number
    regime: str = ""

    def __post_init__(self):
        h = as_param(self.h)
        object.__setattr__(self, "h", h)
        density_ok = h > self.k.k2 * (self.k.n - 1)
        ratio = h / self.k.k2
        discrete_ok = ratio >= 1 and float(ratio) == int(float(ratio)) and is_exact(ratio)
        regime = self.regime or ("density" if density_ok else "discrete" if discrete_ok else "")
        if regime == "density" and not density_ok:
            raise ValueError(f"density regime needs h > k2 (n - 1) = {self.k.k2 * (self.k.n - 1)}, got h = {h}")
        if regime == "discrete" and not discrete_ok:
            raise ValueError(f"discrete regime needs h in k2 * Z_+, got h = {h}")
        if not regime:
            raise ValueError(f"h = {h} is neither > k2 (n - 1) nor a positive multiple of k2")
        object.__setattr__(self, "regime", regime)

    @property
    def steps(self) -> int:
        return int(self.h / self.k.k2)

    @property
    def target(self) -> MultiplicityB:
        return self.k.shifted(self.h)

    def exponents(self) -> tuple[float, float, float]:
        """(p, q, r) of the density in the variables t = x^2."""
        k, n = self.k, self.k.n
        return float(k.k1) - 0.5, float(self.h - k.k2 * (n - 1)) - 1, 2 * float(k.k2)


# --- Selberg constant and density ------------------------------------------------


class MethodMismatch(ArithmeticError):
    """Quadrature and closed form disagree beyond tolerance."""


@dataclass(frozen=True)
class SelbergConstant:
    quadrature: float
    closed_form: float
    rule_order: int

    @property
    def rel_diff(self) -> float:
        return abs(self.quadrature / self.closed_form - 1)


def selberg_closed_form(sp: SonineParams) -> float:
    """Normalizing constant from the Selberg product (t = x^2 turns dx into dt / (2 sqrt t))."""
    k, n = sp.k, sp.k.n
    _need_density(sp)
    a = float(k.k1) + 0.5
    b = float(sp.h - k.k2 * (n - 1))
    return math.exp(log_selberg(n, a, b, float(k.k2)) - n * math.log(2))


def density_rule(sp: SonineParams, order: int, scheme: str = "ordered") -> QuadratureRule:
    """Rule in t = x^2 whose weights carry the unnormalized density (and dx = dt / 2 sqrt t)."""
    _need_density(sp)
    p, q, r = sp.exponents()
    rule = selberg_rule(sp.k.n, p, q, r, order, scheme)
    scale = 2.0 ** -sp.k.n
    return QuadratureRule(rule.n, rule.nodes, rule.weights * scale, rule.order, rule.scheme, rule.region)


def selberg_constant(
    sp: SonineParams, order: int = 32, scheme: str = "ordered", rtol: float | None = 1e-8
) -> SelbergConstant:
    """The constant computed by quadrature and by the closed form.

    Raises MethodMismatch when ``rtol`` is given and the two disagree.
    """
    rule = density_rule(sp, order, scheme)
    out = SelbergConstant(rule.total, selberg_closed_form(sp), order)
    if rtol is not None and out.rel_diff > rtol:
        raise MethodMismatch(f"Selberg constant: quadrature {out.quadrature!r} vs closed form {out.closed_form!r}")
    return out


def _need_density(sp: SonineParams) -> None:
    k = sp.k
    if not sp.h > k.k2 * (k.n - 1):
        raise ValueError(f"need h > k2 (n - 1) = {k.k2 * (k.n - 1)}, got h = {sp.h}")


def sonine_density(sp: SonineParams, x) -> np.ndarray | float:
    """Normalized density on [0, 1]^n; accepts one point or an (N, n) array."""
    _need_density(sp)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != sp.k.n:
        raise ValueError(f"expected points with {sp.k.n} coordinates")
    if np.any((X < 0) | (X > 1)):
        raise ValueError("density is supported on [0, 1]^n")
    k = sp.k
    t = X**2
    val = np.prod(t ** float(k.k1) * (1 - t) ** (float(sp.h - k.k2 * (k.n - 1)) - 1), axis=1)
    for i in range(k.n):
        for j in range(i + 1, k.n):
            val = val * np.abs(t[:, i] - t[:, j]) ** (2 * float(k.k2))
    val = val / selberg_closed_form(sp)
    return float(val[0]) if single else val


# --- restricted Sonine formula -----------------------------------------------------


@dataclass(frozen=True)
class SonineReport:
    lhs: complex
    rhs: complex
    degree_used: int
    rule_order: int

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "lhs": _cjson(self.lhs),
            "rhs": _cjson(self.rhs),
            "residual": self.residual,
            "degree_used": self.degree_used,
            "rule_order": self.rule_order,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _cjson(z) -> float | list[float]:
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def verify_restricted_sonine(
    sp: SonineParams,
    y,
    rule: QuadratureRule | None = None,
    policy: TruncationPolicy = DEFAULT_POLICY,
    order: int = 64,
    scheme: str = "ordered",
) -> SonineReport:
    """Compare J^B_{k1+h}(1, iy) with the density average of J^B_k(x, iy)."""
    k = sp.k
    y = np.asarray(y, dtype=float)
    if rule is None:
        rule = density_rule(sp, order, scheme)
    lhs = bessel_B(sp.target, np.ones(k.n), 1j * y, policy)
    vals = bessel_B_batch(k, np.sqrt(rule.nodes), 1j * y, policy)
    rhs = rule.integrate_complex(vals.values) / selberg_closed_form(sp)
    return SonineReport(lhs.value, rhs, max(lhs.degree_used, vals.degree_used), rule.order)


def classical_sonine(alpha: float, beta: float, z: float, order: int = 64) -> tuple[complex, complex]:
    """Both sides of the one-variable Sonine formula for j_{alpha+beta}(z).

    The right side is computed in t = x^2, where x^(2 alpha + 1) dx becomes
    t^alpha dt / 2.
    """
    s, w = gauss_jacobi01(order, alpha, beta - 1)
    const = math.exp(gammaln(alpha + beta + 1) - gammaln(alpha + 1) - gammaln(beta))
    rhs = const * sum(wi * bessel_1d(alpha, z * math.sqrt(si)) for si, wi in zip(s, w))
    return bessel_1d(alpha + beta, z), rhs


# --- discrete measures -------------------------------------------------------------------


@dataclass
class DiscreteMeasure:
    """Finitely many atoms in the closed chamber with nonnegative weights."""

    points: np.ndarray
    weights: np.ndarray
    exact_weights: list[Fraction] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.weights)

    def total(self):
        if self.exact_weights is not None:
            return sum(self.exact_weights, Fraction(0))
        return math.fsum(self.weights)

    def expect(self, values) -> complex:
        prod = self.weights * np.asarray(values)
        return complex(math.fsum(np.real(prod)), math.fsum(np.imag(prod)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(self.n)] + ["weight"])
        for i, (pnt, wgt) in enumerate(zip(self.points, self.weights)):
            w = self.exact_weights[i] if self.exact_weights is not None else None
            wtxt = f"{w.numerator}/{w.denominator}" if w is not None else repr(float(wgt))
            writer.writerow([repr(float(v)) for v in pnt] + [wtxt])
        return buf.getvalue()

    @classmethod
    def point_mass(cls, n: int) -> DiscreteMeasure:
        return cls(np.zeros((1, n)), np.ones(1), [Fraction(1)])


def _measure_from_table(table, scale_fn, meta) -> DiscreteMeasure:
    pts, wts, exact = [], [], []
    for lam, c in table.entries.items():
        if c == 0:
            continue
        pts.append(scale_fn(lam))
        wts.append(float(c))
        exact.append(c)
    return DiscreteMeasure(np.array(pts), np.array(wts), exact if table.exact else None, meta)


def discrete_sonine_measure(x, k: MultiplicityB, j: int, m: int = 1, iterate: bool = False) -> DiscreteMeasure:
    """Atoms lam / j weighted by the connection coefficients of floor(j x) for the shift m k2.

    The direct shift by m k2 equals the m-fold chain of single shifts (the
    expansion is unique); ``iterate=True`` builds the chain explicitly.
    """
    if j < 1 or m < 1:
        raise ValueError("need j >= 1 and m >= 1")
    kappa = pt.floor_partition(x, j)
    if len(kappa) != k.n:
        raise ValueError(f"expected {k.n} coordinates")
    p = LaguerreParams.from_multiplicity(k)
    if iterate:
        table = iterated_connection(kappa, p, k.k2, m)
    else:
        table = connection_coefficients(kappa, p, m * k.k2)
    return _measure_from_table(table, lambda lam: np.array(lam, dtype=float) / j, {"kappa": kappa, "j": j, "m": m})


def verify_discrete_sonine(
    x, y, k: MultiplicityB, j: int, m: int = 1, policy: TruncationPolicy = DEFAULT_POLICY
) -> SonineReport:
    """Compare J^B_{k1+m k2}(iy, 2 sqrt x) with the discrete mixture of J^B_k(iy, 2 sqrt w)."""
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.asarray(y, dtype=float)
    lhs = bessel_B(k.shifted(m * k.k2), 2 * np.sqrt(x), 1j * y, policy)
    if np.all(y == 0):
        return SonineReport(lhs.value, 1.0, lhs.degree_used, 0)
    meas = discrete_sonine_measure(x, k, j, m)
    vals = bessel_B_batch(k, 2 * np.sqrt(meas.points), 1j * y, policy)
    return SonineReport(lhs.value, meas.expect(vals.values), max(lhs.degree_used, vals.degree_used), 0)


# --- type B to type A ----------------------------------------------------------------------


def b_to_a_residual(k1, k2, x, y, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``|J^B_{(k1,k2)}(2 sqrt(k1) x, iy) - J^A_{k2}(x^2, -y^2)|``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("the type-A limit needs n >= 2")
    k = MultiplicityB(len(x), k1, k2)
    b = bessel_B(k, 2 * math.sqrt(float(k.k1)) * x, 1j * y, policy).value
    a = bessel_A(k2, x**2, -(y**2), policy).value
    return abs(b - a)


def default_level(w, cap: int = 256, fallback: int = 64) -> int:
    """Smallest L with L * w integral when w is rational with small denominators."""
    dens = []
    for v in w:
        fr = as_param(v)
        if not is_exact(fr):
            return fallback
        dens.append(Fraction(fr).denominator)
    level = math.lcm(*dens) if dens else 1
    return level if level <= cap else fallback


def a_from_b_measure(x, k: MultiplicityB, j: int, level: int | None = None) -> DiscreteMeasure:
    """Discrete approximant of the measure mixing J^B_k into J^B_{k1+j k2}(2 sqrt(k1 + j k2) x, iy).

    With w = (k1 + j k2) x^2 and kappa = floor(L w), the atoms are
    2 sqrt(lam / L) with the connection coefficients for the shift j k2.
    """
    if j < 1:
        raise ValueError("need j >= 1")
    xs = [as_param(v) for v in sorted((float(v) for v in x), reverse=True)]
    if len(xs) != k.n:
        raise ValueError(f"expected {k.n} coordinates")
    if all(v == 0 for v in xs):
        return DiscreteMeasure.point_mass(k.n)
    scale = k.k1 + j * k.k2
    w = [scale * v * v for v in xs]
    if level is None:
        level = default_level(w)
    kappa = tuple(math.floor(level * v) for v in w)
    p = LaguerreParams.from_multiplicity(k)
    table = connection_coefficients(kappa, p, j * k.k2)
    meta = {"kappa": kappa, "level": level, "j": j, "exact_grid": all(level * v == int(level * v) for v in w), "table": table}
    return _measure_from_table(table, lambda lam: 2 * np.sqrt(np.array(lam, dtype=float) / level), meta)


def predicted_second_moment(x, k: MultiplicityB, j: int) -> float:
    """``4 (k1 + j k2) mu(k) / (mu(k) + j k2) * |x|^2``."""
    mu = k.mu
    ratio = 4 * (k.k1 + j * k.k2) * mu / (mu + j * k.k2)
    return float(ratio) * float(np.sum(np.asarray(x, dtype=float) ** 2))


def second_moment_check(x, k: MultiplicityB, j: int, level: int | None = None) -> tuple[float, float]:
    """Second moment of the discrete measure against the closed-form prediction.

    Returns ``(measured, predicted)``.  For rational measures the moment is
    accumulated exactly (atoms enter through |xi|^2 = 4 |lam| / L).
    """
    meas = a_from_b_measure(x, k, j, level)
    if meas.exact_weights is not None and "table" in meas.meta:
        level, table = meas.meta["level"], meas.meta["table"]
        measured = float(sum((c * 4 * Fraction(sum(lam), level) for lam, c in table.entries.items()), Fraction(0)))
    else:
        measured = float(meas.expect(np.sum(meas.points**2, axis=1)).real)
    return measured, predicted_second_moment(x, k, j)


def a_from_b_residual(x, y, k: MultiplicityB, j: int, level: int | None = None, policy=DEFAULT_POLICY) -> float:
    """``|sum_atoms w J^B_k(xi, iy) - J^A_{k2}(x^2, -y^2)|`` for the discrete approximant."""
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.asarray(y, dtype=float)
    meas = a_from_b_measure(x, k, j, level)
    vals = bessel_B_batch(k, meas.points, 1j * y, policy)
    target = bessel_A(k.k2, x**2, -(y**2), policy).value
    return abs(meas.expect(vals.values) - target)
