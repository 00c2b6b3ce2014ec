"""Quadrature for Selberg-type weights on the unit cube.

The weight is

    w(t) = prod_i t_i^p (1 - t_i)^q  prod_{i<j} |t_i - t_j|^r,   t in [0, 1]^n.

Two schemes are provided:

``tensor``
    Tensor Gauss-Jacobi in each t_i (absorbing t^p (1-t)^q), with the
    Vandermonde factor evaluated pointwise.  Simple, but for non-even r the
    factor has kinks on the diagonals and convergence is only algebraic.

``ordered``
    For symmetric integrands integrate over t_1 >= ... >= t_n and multiply
    by n!.  The ordered region is split by how many t_i exceed 1/2.  Below
    1/2 we use t_i = (s_1 ... s_i) / 2; above it the same map applied to
    u = 1 - t.  In these coordinates every endpoint singularity, including
    the |t_i - t_{i+1}|^r factors, becomes a power of s_j or 1 - s_j and is
    absorbed by Gauss-Jacobi, so integer r gives spectral accuracy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes ``t`` (N, n) in [0, 1]^n and positive weights for the Selberg weight."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    scheme: str
    region: str  # "cube" or "ordered"

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, values) -> float:
        return float(math.fsum(np.asarray(self.weights * values, dtype=float)))

    def integrate_complex(self, values) -> complex:
        prod = self.weights * np.asarray(values)
        return complex(math.fsum(prod.real), math.fsum(np.imag(prod)))

    @property
    def total(self) -> float:
        return math.fsum(self.weights)


def gauss_jacobi01(order: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^1 f(s) s^a (1 - s)^b ds``."""
    if a <= -1 or b <= -1:
        raise ValueError(f"Jacobi exponents must exceed -1, got {a}, {b}")
    x, w = roots_jacobi(order, b, a)
    return (1 + x) / 2, w / 2 ** (a + b + 1)


def _check(p, q, r):
    if p <= -1 or q <= -1 or r < 0:
        raise ValueError(f"weight exponents out of range: p={p}, q={q}, r={r}")


def tensor_rule(n: int, p: float, q: float, r: float, order: int) -> QuadratureRule:
    _check(p, q, r)
    s, w = gauss_jacobi01(order, p, q)
    nodes = np.array(list(itertools.product(s, repeat=n))).reshape(-1, n)
    weights = np.prod(np.array(list(itertools.product(w, repeat=n))).reshape(-1, n), axis=1)
    weights = weights * _vandermonde(nodes, r)
    return QuadratureRule(n, nodes, weights, order, "tensor", "cube")


def _vandermonde(t: np.ndarray, r: float) -> np.ndarray:
    out = np.ones(t.shape[0])
    for i in range(t.shape[1]):
        for j in range(i + 1, t.shape[1]):
            out *= np.abs(t[:, i] - t[:, j]) ** r
    return out


def _block_exponents(l: int, e: float, r: float) -> list[tuple[float, float]]:
    """Jacobi exponents for s_1..s_l of one ordered block (all 0-based below)."""
    out = []
    for j in range(l):
        # Jacobian, v_i^e for i >= j, and v_i^r from every pair (i, k) with i >= j
        a = (l - 1 - j) + e * (l - j) + r * sum(l - 1 - i for i in range(j, l))
        b = r if j > 0 else 0.0
        out.append((a, b))
    return out


def _block(l: int, e: float, r: float, order: int):
    """Points of one block (values v_1 >= ... >= v_l in [0, 1/2]) with log-corrections.

    Returns the values, Gauss-Jacobi weights, and the log of the part of the
    block weight that Gauss-Jacobi did not absorb.
    """
    if l == 0:
        return np.zeros((1, 0)), np.ones(1), np.zeros(1)
    exps = _block_exponents(l, e, r)
    axes = [gauss_jacobi01(order, a, b) for a, b in exps]
    s = np.array(list(itertools.product(*[ax[0] for ax in axes]))).reshape(-1, l)
    w = np.prod(np.array(list(itertools.product(*[ax[1] for ax in axes]))).reshape(-1, l), axis=1)
    logs = np.log(s)
    cum = np.cumsum(logs, axis=1)
    v = 0.5 * np.exp(cum)
    # constant factors of 1/2: Jacobian (1/2)^l, v^e, and the v_i^r pair factors
    npairs = l * (l - 1) // 2
    logc = -math.log(2) * (l + e * l + r * npairs)
    # non-adjacent pairs leave (1 - s_{i+1} ... s_k)^r
    for i in range(l):
        for k in range(i + 2, l):
            logc = logc + r * np.log(-np.expm1(cum[:, k] - cum[:, i]))
    return v, w, np.broadcast_to(logc, (s.shape[0],)).copy()


def ordered_rule(n: int, p: float, q: float, r: float, order: int, region: str = "cube") -> QuadratureRule:
    """Composite rule on the ordered region (see module docstring).

    With ``region="cube"`` weights are multiplied by n!, which is correct
    for integrands symmetric in t.
    """
    _check(p, q, r)
    nodes, weights = [], []
    for m in range(n + 1):
        # upper block: t = 1 - u with u ascending in t order; lower block t descending
        u, wu, lu = _block(m, q, r, order)
        v, wv, lv = _block(n - m, p, r, order)
        iu = np.repeat(np.arange(len(wu)), len(wv))
        iv = np.tile(np.arange(len(wv)), len(wu))
        t_up = 1 - u[iu][:, ::-1]  # largest t first
        t_lo = v[iv]
        t = np.concatenate([t_up, t_lo], axis=1)
        logw = lu[iu] + lv[iv]
        if m:
            logw = logw + p * np.log1p(-u[iu]).sum(axis=1)
        if n - m:
            logw = logw + q * np.log1p(-t_lo).sum(axis=1)
        for i in range(m):
            for k in range(m, n):
                logw = logw + r * np.log(t[:, i] - t[:, k])
        nodes.append(t)
        weights.append(wu[iu] * wv[iv] * np.exp(logw))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    if region == "cube":
        weights = weights * math.factorial(n)
    elif region != "ordered":
        raise ValueError("region must be 'cube' or 'ordered'")
    return QuadratureRule(n, nodes, weights, order, "ordered", region)


def selberg_rule(n: int, p: float, q: float, r: float, order: int, scheme: str = "ordered") -> QuadratureRule:
    if scheme == "ordered":
        return ordered_rule(n, p, q, r, order)
    if scheme == "tensor":
        return tensor_rule(n, p, q, r, order)
    raise ValueError(f"unknown quadrature scheme {scheme!r}")


def log_selberg(n: int, a: float, b: float, gamma: float) -> float:
    """log of ``int_{[0,1]^n} prod t^(a-1) (1-t)^(b-1) |Delta|^(2 gamma) dt``."""
    lg = math.lgamma
    out = 0.0
    for j in range(n):
        out += lg(a + j * gamma) + lg(b + j * gamma) + lg(1 + (j + 1) * gamma)
        out -= lg(a + b + (n + j - 1) * gamma) + lg(1 + gamma)
    return out
