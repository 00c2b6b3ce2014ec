"""Bessel functions on symmetric cones of real and complex matrices.

For the cone of positive Hermitian n x n matrices over F (d = dim_R F), the
Bessel function J_mu(a) depends on the eigenvalues x of a:

    J_mu(a) = sum_lam (-1)^|lam| C_lam(x) / ([mu]_lam |lam|!)  with alpha = 2/d,

so J_mu(a) = 0F1(mu; -x, 1).  The group integrals over U_n(F) are
estimated by Monte Carlo with Haar-distributed matrices; the random
streams are split per fixed-size chunk, so a run depends only on the seed
and the sample count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_genlaguerre

from ._rational import as_param
from .hyper import (
    DEFAULT_POLICY,
    EvalResult,
    MultiplicityB,
    TruncationPolicy,
    bessel_A,
    bessel_B,
    hyper_0F0,
    hyper_0F1,
    hyper_0F1_batch,
)
from .quadrature import gauss_jacobi01, log_selberg, ordered_rule

CHUNK = 2048


@dataclass(frozen=True)
class ConeField:
    """Real (d = 1) or complex (d = 2) Hermitian matrices of size n."""

    d: int
    n: int

    def __post_init__(self):
        if self.d == 4:
            raise NotImplementedError("quaternionic matrices (d = 4) are not supported")
        if self.d not in (1, 2):
            raise ValueError(f"d must be 1 or 2, got {self.d}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def mu0(self):
        return as_param(self.d) * (self.n - 1) / 2

    @property
    def alpha(self):
        return as_param(2) / self.d

    @property
    def k2(self):
        return as_param(self.d) / 2

    def multiplicity(self, k1) -> MultiplicityB:
        return MultiplicityB(self.n, k1, self.k2)


# --- Haar sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class HaarSample:
    u: np.ndarray
    seed: int

    def unitarity_residual(self) -> float:
        n = self.u.shape[0]
        return float(np.linalg.norm(self.u @ self.u.conj().T - np.eye(n), 2))


def _generator(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def haar_batch(cf: ConeField, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Haar matrices: QR of a Gaussian matrix, phases of R's diagonal moved into Q."""
    shape = (size, cf.n, cf.n)
    g = rng.standard_normal(shape)
    if cf.d == 2:
        g = (g + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=1, axis2=2)
    phase = diag / np.abs(diag)
    return q * phase[:, None, :]


def haar_sample(cf: ConeField, seed: int) -> HaarSample:
    return HaarSample(haar_batch(cf, 1, _generator(seed))[0], seed)


def _chunk_streams(seed: int, n_samples: int):
    """Yield (size, generator) per chunk; chunk c always gets the same stream."""
    n_chunks = -(-n_samples // CHUNK)
    for c, child in enumerate(np.random.SeedSequence(seed).spawn(n_chunks)):
        yield min(CHUNK, n_samples - c * CHUNK), np.random.Generator(np.random.Philox(child))


# --- matrix Bessel function -----------------------------------------------------------


def matrix_bessel(mu, spectrum, cf: ConeField, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """``J_mu(a)`` from the eigenvalues of a."""
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.shape != (cf.n,):
        raise ValueError(f"expected {cf.n} eigenvalues")
    if np.any(spectrum < 0):
        raise ValueError("spectrum must be nonnegative")
    return hyper_0F1(mu, -spectrum, np.ones(cf.n), cf.alpha, policy)


def matrix_bessel_batch(mu, spectra, cf: ConeField, policy: TruncationPolicy = DEFAULT_POLICY):
    return hyper_0F1_batch(mu, -np.asarray(spectra, dtype=float), np.ones(cf.n), cf.alpha, policy)


def spectral_identity(mu, x, cf: ConeField, policy: TruncationPolicy = DEFAULT_POLICY) -> tuple[complex, complex]:
    """Both sides of J_mu(a^2) = J^B_k(2ix, 1), k = (mu - mu0 - 1/2, d/2), x the eigenvalues of a."""
    x = np.asarray(x, dtype=float)
    lhs = matrix_bessel(mu, x**2, cf, policy).value
    k = cf.multiplicity(as_param(mu) - cf.mu0 - as_param(0.5))
    rhs = bessel_B(k, 2j * x, np.ones(cf.n), policy).value
    return lhs, rhs


# --- Monte Carlo reports ---------------------------------------------------------------


@dataclass(frozen=True)
class MCReport:
    lhs: complex
    rhs: complex
    mc_stderr: float
    n_samples: int
    rule_order: int
    seed: int

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    def within(self, n_se: float = 3.0, floor: float = 0.0) -> bool:
        return self.residual <= max(n_se * self.mc_stderr, floor)

    def to_dict(self) -> dict:
        return {
            "lhs": complex(self.lhs).real,
            "rhs": complex(self.rhs).real,
            "residual": self.residual,
            "mc_stderr": self.mc_stderr,
            "n_samples": self.n_samples,
            "rule_order": self.rule_order,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _Accumulator:
    """Chunked sums combined with fsum, so totals do not depend on chunk timing."""

    def __init__(self):
        self.sums, self.squares, self.count = [], [], 0

    def add(self, values: np.ndarray) -> None:
        values = np.real(values)
        self.sums.append(math.fsum(values))
        self.squares.append(math.fsum(values * values))
        self.count += len(values)

    def mean_and_stderr(self) -> tuple[float, float]:
        mean = math.fsum(self.sums) / self.count
        if self.count < 2:
            return mean, math.inf
        var = (math.fsum(self.squares) - self.count * mean * mean) / (self.count - 1)
        return mean, math.sqrt(max(var, 0.0) / self.count)


def _conj_spectra(left: np.ndarray, u: np.ndarray, middle: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``L u M u* L`` for diagonal L, M; shapes (n,), (N, n, n), (..., n)."""
    a = left[:, None] * u  # L u
    if middle.ndim == 1:
        m = (a * middle[None, None, :]) @ np.conj(np.swapaxes(a, 1, 2))
    else:
        # middle (Q, n): every sample against every node
        m = np.einsum("sij,qj,skj->sqik", a, middle, np.conj(a))
    vals = np.linalg.eigvalsh(m)
    return np.clip(vals[..., ::-1], 0.0, None)


def verify_group_integral(
    cf: ConeField, k1, x, y, n_mc: int, seed: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> MCReport:
    """Monte Carlo check of J^B_k(2ix, y) = E_u J_mu(x u y^2 u* x), mu = k1 + mu0 + 1/2."""
    k = cf.multiplicity(k1)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mu = k.k1 + cf.mu0 + as_param(0.5)
    lhs = bessel_B(k, 2j * x, y, policy).value
    acc = _Accumulator()
    for size, rng in _chunk_streams(seed, n_mc):
        u = haar_batch(cf, size, rng)
        spectra = _conj_spectra(x, u, y**2)
        acc.add(matrix_bessel_batch(mu, spectra, cf, policy).values)
    mean, se = acc.mean_and_stderr()
    return MCReport(lhs, mean, se, n_mc, 0, seed)


# --- chamber Sonine formula -----------------------------------------------------------------


def rho_weight(cf: ConeField, k1, h, xi) -> float:
    """Unnormalized eigenvalue density on 1 >= xi_1 >= ... >= xi_n >= 0."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (cf.n,):
        raise ValueError(f"expected {cf.n} coordinates")
    if not (np.all(np.diff(xi) <= 0) and xi[0] <= 1 and xi[-1] >= 0):
        raise ValueError("xi must be ordered with 1 >= xi_1 >= ... >= xi_n >= 0")
    _check_h(cf, h)
    p = float(k1) - 0.5
    q = float(h) - 1 - float(cf.mu0)
    with np.errstate(divide="ignore"):
        out = float(np.prod(xi**p * (1 - xi) ** q))
    for i in range(cf.n):
        for j in range(i + 1, cf.n):
            out *= (xi[i] - xi[j]) ** cf.d
    return out


def _check_h(cf: ConeField, h) -> None:
    if not float(h) > float(cf.mu0):
        raise ValueError(f"need h > mu0 = {cf.mu0}, got {h}")


def rho_rule(cf: ConeField, k1, h, order: int):
    _check_h(cf, h)
    return ordered_rule(cf.n, float(k1) - 0.5, float(h) - 1 - float(cf.mu0), float(cf.d), order, region="ordered")


def rho_normalization(cf: ConeField, k1, h, order: int = 16) -> tuple[float, float]:
    """Normalizing constant by quadrature and by the Selberg product (divided by n!)."""
    rule = rho_rule(cf, k1, h, order)
    closed = math.exp(log_selberg(cf.n, float(k1) + 0.5, float(h) - float(cf.mu0), cf.d / 2) - math.lgamma(cf.n + 1))
    return rule.total, closed


def rho_density(cf: ConeField, k1, h, xi, order: int = 16) -> float:
    return rho_weight(cf, k1, h, xi) / rho_normalization(cf, k1, h, order)[0]


def _mixture_mc(cf, k, x, y, nodes, weights, n_mc, seed, policy) -> tuple[float, float]:
    """E_u sum_q w_q J^B_k(sqrt(sigma(x u xi_q u* x)), iy) with weights summing to 1."""
    acc = _Accumulator()
    w2 = -(np.asarray(y, dtype=float) ** 2) / 2
    for size, rng in _chunk_streams(seed, n_mc):
        u = haar_batch(cf, size, rng)
        spectra = _conj_spectra(np.asarray(x, dtype=float), u, nodes)  # (size, Q, n)
        vals = hyper_0F1_batch(k.mu, spectra.reshape(-1, cf.n) / 2, w2, k.alpha, policy).values
        acc.add(vals.reshape(size, -1) @ weights)
    return acc.mean_and_stderr()


def verify_chamber_sonine(
    cf: ConeField,
    k1,
    h,
    x,
    y,
    n_mc: int,
    rule_order: int = 6,
    seed: int = 0,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> MCReport:
    """J^B_{(k1+h, d/2)}(x, iy) against the rho-average of the group average of J^B_{(k1, d/2)}."""
    k = cf.multiplicity(k1)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lhs = bessel_B(k.shifted(h), x, 1j * y, policy).value
    rule = rho_rule(cf, k1, h, rule_order)
    weights = rule.weights / rule.total
    mean, se = _mixture_mc(cf, k, x, y, rule.nodes, weights, n_mc, seed, policy)
    return MCReport(lhs, mean, se, n_mc, rule_order, seed)


# --- limit of the chamber formula --------------------------------------------------------------


def limit_rule(cf: ConeField, k1, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalized weights for prod xi^(k1-1/2) prod (xi_i - xi_j)^d exp(-sum xi / 4) on the chamber.

    n = 1 uses generalized Gauss-Laguerre.  For n = 2 write xi = R (1 - v, v)
    with v = s/2 in [0, 1/2]: the weight factors into R^(2p+d+1) e^(-R/4)
    times s^p (1 - s)^d (1 - s/2)^p.
    """
    p = float(k1) - 0.5
    if cf.n == 1:
        rho, w = roots_genlaguerre(order, p)
        return (4 * rho)[:, None], w / w.sum()
    if cf.n != 2:
        raise NotImplementedError("the limit measure quadrature is implemented for n <= 2")
    rho, wr = roots_genlaguerre(order, 2 * p + cf.d + 1)
    s, ws = gauss_jacobi01(order, p, float(cf.d))
    R = np.repeat(4 * rho, len(s))
    S = np.tile(s, len(rho))
    W = np.repeat(wr, len(s)) * np.tile(ws * (1 - s / 2) ** p, len(rho))
    nodes = np.stack([R * (1 - S / 2), R * S / 2], axis=1)
    return nodes, W / math.fsum(W)


def verify_limit_corollary(
    cf: ConeField,
    k1,
    x,
    z,
    n_mc: int,
    rule_order: int = 8,
    seed: int = 0,
    policy: TruncationPolicy = TruncationPolicy(max_degree=80),
) -> MCReport:
    """J^A_{d/2}(x^2, -z^2) against the limit measure mixture of J^B_{(k1, d/2)}(., iz).

    The exponential weight is exp(-sum xi / 4) and the second Bessel argument
    is iz; this is the form obtained as h -> infinity from the chamber
    formula after rescaling xi by 4h.
    """
    k = cf.multiplicity(k1)
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if cf.n == 1:
        lhs = hyper_0F0(x**2, -(z**2), cf.alpha, policy).value
    else:
        lhs = bessel_A(cf.k2, x**2, -(z**2), policy).value
    nodes, weights = limit_rule(cf, k1, rule_order)
    mean, se = _mixture_mc(cf, k, x, z, nodes, weights, n_mc, seed, policy)
    return MCReport(lhs, mean, se, n_mc, rule_order, seed)
