"""Hypergeometric series in Jack polynomials and the Bessel functions built on them.

    0F1(mu; z, w) = sum_lam C_lam(z) C_lam(w) / ([mu]_lam |lam|! C_lam(1))
    0F0(z, w)     = sum_lam C_lam(z) C_lam(w) / (|lam|! C_lam(1))

Series are summed shell by shell (all lam of one weight) and stopped once
``consecutive_small`` shells in a row fall below ``rel_tol`` times the
running sum.  The reported tail bound is a rigorous majorant: since the C_lam
have nonnegative coefficients, |C_lam(z)| <= C_lam(1) ||z||^m, the C_lam(1)
of one weight sum to n^m, and each Pochhammer factor is at least
(c)_k with c = Re(mu) - (n - 1)/alpha.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rational import as_param
from .jack import jack_block, jack_block_values
from ._kernels import power_table

POLE_TOL = 1e-9
_CHUNK = 16384


class SeriesConvergenceError(ArithmeticError):
    """Raised when a series has not converged at ``max_degree``."""


@dataclass(frozen=True)
class MultiplicityB:
    """Multiplicity ``k = (k1, k2)`` on the B_n root system."""

    n: int
    k1: object
    k2: object

    def __post_init__(self):
        object.__setattr__(self, "k1", as_param(self.k1))
        object.__setattr__(self, "k2", as_param(self.k2))
        if self.n < 1:
            raise ValueError("rank n must be >= 1")
        if self.k1 < 0:
            raise ValueError(f"need k1 >= 0, got {self.k1}")
        if self.k2 <= 0:
            raise ValueError(f"need k2 > 0, got {self.k2}")

    @property
    def alpha(self):
        return 1 / self.k2

    @property
    def mu(self):
        return self.k1 + self.k2 * (self.n - 1) + Fraction(1, 2)

    def shifted(self, dk1) -> MultiplicityB:
        return MultiplicityB(self.n, self.k1 + as_param(dk1), self.k2)


@dataclass(frozen=True)
class TruncationPolicy:
    max_degree: int = 30
    rel_tol: float = 1e-12
    consecutive_small: int = 3

    def __post_init__(self):
        if self.max_degree < 0 or self.rel_tol <= 0 or self.consecutive_small < 1:
            raise ValueError("invalid truncation policy")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class EvalResult:
    value: complex
    degree_used: int
    tail_bound: float

    def to_dict(self) -> dict:
        return {
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "degree_used": self.degree_used,
            "tail_bound": self.tail_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class BatchResult:
    """Series values at many first arguments with a shared second argument."""

    values: np.ndarray
    degree_used: int
    tail_bound: np.ndarray

    def item(self, p: int = 0) -> EvalResult:
        return EvalResult(complex(self.values[p]), self.degree_used, float(self.tail_bound[p]))


# --- Pochhammer -----------------------------------------------------------------


def pochhammer(mu, lam, alpha):
    """``[mu]_lam = prod_j (mu - (j - 1)/alpha)_{lam_j}``; exact for rational input."""
    if isinstance(mu, (int, Fraction)):
        alpha = as_param(alpha)
    out = 1
    for j, part in enumerate(lam):
        base = mu - j / alpha
        for i in range(part):
            out *= base + i
    return out


def _pochhammer_complex(mu: complex, lam, alpha: float) -> complex:
    out = 1 + 0j
    for j, part in enumerate(lam):
        base = mu - j / alpha
        for i in range(part):
            out *= base + i
    return out


def check_poles(mu, n: int, alpha, max_degree: int) -> None:
    """Reject mu within ``POLE_TOL`` of a zero of some [mu]_lam with |lam| <= max_degree."""
    mu = complex(mu)
    alpha = float(alpha)
    for j in range(n):
        for i in range(max_degree // (j + 1)):
            if abs(mu - j / alpha + i) < POLE_TOL:
                raise ValueError(f"mu = {mu} is on the pole set of the generalized Pochhammer symbol")


# --- tail majorants ---------------------------------------------------------------


def _log_tail_terms(x: np.ndarray, degree: int, c: float | None, n: int):
    """log of the majorant for shells ``degree + 1`` and ``degree + 2``."""

    def log_term(m):
        with np.errstate(divide="ignore"):
            out = m * np.log(x) - math.lgamma(m + 1)
        if c is not None:
            # balanced partitions minimize prod_j (c)_{lam_j}
            q, r = divmod(m, n)
            low = (n - r) * (math.lgamma(c + q) - math.lgamma(c)) + r * (math.lgamma(c + q + 1) - math.lgamma(c))
            out = out - low
        return out

    return log_term(degree + 1), log_term(degree + 2)


def tail_majorant(x, degree: int, c: float | None, n: int) -> np.ndarray:
    """Upper bound for ``sum_{m > degree} |shell_m|`` given ``x = n ||z|| ||w||``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    l1, l2 = _log_tail_terms(x, degree, c, n)
    with np.errstate(invalid="ignore", over="ignore"):
        ratio = np.exp(l2 - l1)
        out = np.where(ratio < 1, np.exp(l1) / (1 - ratio), np.inf)
    return np.where(x == 0, 0.0, out)


# --- series core -------------------------------------------------------------------


def _as_points(z, n: int | None = None) -> np.ndarray:
    z = np.asarray(z)
    if z.ndim == 1:
        z = z[None, :]
    if n is not None and z.shape[1] != n:
        raise ValueError(f"expected points with {n} coordinates")
    return z


def _series(Z, w, alpha, poch_fn, policy: TruncationPolicy, c: float | None, real_mu: bool = True) -> BatchResult:
    Z = _as_points(Z)
    w = np.asarray(w).reshape(-1)
    n = Z.shape[1]
    if w.shape != (n,):
        raise ValueError("arguments must have the same number of coordinates")
    real = real_mu and np.isrealobj(Z) and np.isrealobj(w)
    dtype = float if real else complex
    Z = Z.astype(dtype)
    w = w.astype(dtype)

    coefs = []  # per degree: C_lam(w) / (poch * m! * C_lam(1))
    wpow = power_table(w[None, :], policy.max_degree)

    def coef(m):
        while len(coefs) <= m:
            d = len(coefs)
            blk = jack_block(d, alpha, n)
            cw = jack_block_values(d, alpha, w[None, :], wpow)[0]
            poch = np.array([poch_fn(lam) for lam in blk.parts])
            if real:
                poch = poch.real
            coefs.append(cw / (poch * math.factorial(d) * blk.at_ones))
        return coefs[m]

    values = np.empty(Z.shape[0], dtype=dtype)
    degree_used = 0
    stalled = False
    peaks, tails = [], []
    for start in range(0, Z.shape[0], _CHUNK):
        chunk = Z[start : start + _CHUNK]
        powtab = power_table(chunk, policy.max_degree)
        total = np.zeros(chunk.shape[0], dtype=dtype)
        peak = np.zeros(chunk.shape[0])
        small = 0
        m = 0
        for m in range(policy.max_degree + 1):
            shell = jack_block_values(m, alpha, chunk, powtab) @ coef(m)
            total = total + shell
            # compare against the largest partial sum so values near a zero still stop
            peak = np.maximum(peak, np.abs(total))
            if np.all(np.abs(shell) <= policy.rel_tol * peak):
                small += 1
                if small >= policy.consecutive_small:
                    break
            else:
                small = 0
        values[start : start + _CHUNK] = total
        x = n * np.max(np.abs(chunk), axis=1) * np.max(np.abs(w), initial=0.0)
        tails.append(tail_majorant(x, m, c, n))
        peaks.append(peak)
        degree_used = max(degree_used, m)
        stalled = stalled or small < policy.consecutive_small

    tail = np.concatenate(tails) if tails else np.zeros(0)
    result = BatchResult(values, degree_used, tail)
    if stalled:
        bad = tail > policy.rel_tol * np.maximum(np.concatenate(peaks), 1e-300)
        if np.any(bad):
            raise SeriesConvergenceError(
                f"series not converged at degree {policy.max_degree}: tail bound {float(np.max(tail)):.3e}"
            )
    return result


def hyper_0F1_batch(mu, Z, w, alpha, policy: TruncationPolicy = DEFAULT_POLICY) -> BatchResult:
    """``0F1(mu; z, w)`` for every row z of ``Z``."""
    alpha = as_param(alpha)
    Z = _as_points(Z)
    n = Z.shape[1]
    c = complex(mu).real - (n - 1) / float(alpha)
    if c <= 0:
        raise ValueError(f"need Re(mu) > (n - 1)/alpha = {(n - 1) / float(alpha)}, got mu = {mu}")
    check_poles(mu, n, alpha, policy.max_degree)
    muc = complex(mu)
    poch = lambda lam: _pochhammer_complex(muc, lam, float(alpha))  # noqa: E731
    return _series(Z, w, alpha, poch, policy, c, real_mu=muc.imag == 0)


def hyper_0F1(mu, z, w, alpha, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """``0F1^alpha(mu; z, w)`` with a rigorous tail bound."""
    z = np.asarray(z)
    if z.ndim != 1:
        raise ValueError("z must be a vector")
    return hyper_0F1_batch(mu, z, w, alpha, policy).item()


def hyper_0F0_batch(Z, w, alpha, policy: TruncationPolicy = DEFAULT_POLICY) -> BatchResult:
    alpha = as_param(alpha)
    return _series(Z, w, alpha, lambda lam: 1.0, policy, None)


def hyper_0F0(z, w, alpha, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return hyper_0F0_batch(np.asarray(z)[None, :], w, alpha, policy).item()


# --- Bessel functions ---------------------------------------------------------------


def bessel_B_batch(k: MultiplicityB, X, y, policy: TruncationPolicy = DEFAULT_POLICY) -> BatchResult:
    """``J^B_k(x, y)`` for every row x of ``X``."""
    X = _as_points(X, k.n)
    y = np.asarray(y).reshape(-1)
    return hyper_0F1_batch(k.mu, X**2 / 2, y**2 / 2, k.alpha, policy)


def bessel_B(k: MultiplicityB, x, y, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Bessel function of type B, ``0F1(mu(k); x^2/2, y^2/2)`` with alpha = 1/k2."""
    return bessel_B_batch(k, np.asarray(x)[None, :], y, policy).item()


def bessel_A_batch(k2, X, y, policy: TruncationPolicy = DEFAULT_POLICY) -> BatchResult:
    k2 = as_param(k2)
    if k2 <= 0:
        raise ValueError("need k2 > 0")
    X = _as_points(X)
    if X.shape[1] < 2:
        raise ValueError("type A Bessel functions need n >= 2")
    return hyper_0F0_batch(X, y, 1 / k2, policy)


def bessel_A(k2, x, y, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Bessel function of type A, the ``0F0`` series with alpha = 1/k2."""
    return bessel_A_batch(k2, np.asarray(x)[None, :], y, policy).item()


def bessel_1d(alpha, z) -> complex:
    """Normalized Bessel function ``j_alpha(z) = 0F1(alpha + 1; -z^2/4)``."""
    alpha = float(alpha)
    b = alpha + 1
    if b <= 0 and b == int(b):
        raise ValueError(f"alpha + 1 = {b} is a nonpositive integer")
    u = -complex(z) ** 2 / 4
    term = 1 + 0j
    total = term
    for m in range(1, 2000):
        term *= u / ((b + m - 1) * m)
        total += term
        if m > abs(u) and abs(term) <= 1e-17 * max(abs(total), 1e-300):
            break
    return total


def classical_bessel_j(alpha: float, z) -> complex:
    """``j_alpha`` through scipy's ``J_alpha``; used as an independent check."""
    from scipy.special import gamma, jv

    z = complex(z)
    if z == 0:
        return 1 + 0j
    return gamma(alpha + 1) * jv(alpha, z) / (z / 2) ** alpha
