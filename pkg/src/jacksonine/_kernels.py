"""Hot inner loops, each with a numba kernel and a numpy fallback.

The dispatch functions at the bottom pick the implementation per call, so
the environment flag can be flipped at runtime (tests and the benchmark do).
"""

from __future__ import annotations

import numpy as np

from ._accel import numba_enabled, optional_njit

_CHUNK = 4096


# --- monomial symmetric functions on a batch of points ----------------------


def power_table(z: np.ndarray, max_exp: int) -> np.ndarray:
    """``out[p, i, e] = z[p, i] ** e`` for ``0 <= e <= max_exp``."""
    z = np.asarray(z)
    out = np.empty(z.shape + (max_exp + 1,), dtype=z.dtype)
    out[..., 0] = 1
    for e in range(1, max_exp + 1):
        out[..., e] = out[..., e - 1] * z
    return out


@optional_njit(cache=True)
def _monomials_numba(powtab, exps, owner, nparts):
    npts = powtab.shape[0]
    nvar = exps.shape[1]
    out = np.zeros((npts, nparts), dtype=powtab.dtype)
    for p in range(npts):
        for t in range(exps.shape[0]):
            v = powtab[p, 0, exps[t, 0]]
            for i in range(1, nvar):
                v = v * powtab[p, i, exps[t, i]]
            out[p, owner[t]] += v
    return out


def _monomials_numpy(powtab, exps, owner, nparts):
    npts, nvar = powtab.shape[0], exps.shape[1]
    onehot = np.zeros((exps.shape[0], nparts))
    onehot[np.arange(exps.shape[0]), owner] = 1.0
    out = np.empty((npts, nparts), dtype=powtab.dtype)
    cols = np.arange(nvar)[None, :]
    for start in range(0, npts, _CHUNK):
        block = powtab[start : start + _CHUNK][:, cols, exps]  # (chunk, T, n)
        out[start : start + _CHUNK] = np.prod(block, axis=-1) @ onehot
    return out


def monomial_values(powtab: np.ndarray, exps: np.ndarray, owner: np.ndarray, nparts: int) -> np.ndarray:
    """Values of ``m_lam`` for every partition of one weight at every point.

    ``exps`` lists the distinct permutations of each partition and ``owner``
    maps each row of ``exps`` to its partition index.
    """
    powtab = np.ascontiguousarray(powtab)
    if numba_enabled():
        return _monomials_numba(powtab, exps, owner, nparts)
    return _monomials_numpy(powtab, exps, owner, nparts)


# --- generalized binomial coefficients for one large partition --------------


@optional_njit(cache=True)
def _one_box(sig, i, alpha):
    # (sigma + box in row i choose sigma)_alpha, rows 0-based
    n = sig.shape[0]
    v = sig[i] + 1.0 + (n - 1 - i) / alpha
    for k in range(n):
        if k != i:
            d = sig[i] - sig[k]
            v *= (d + 1.0 + (k - i - 1) / alpha) / (d + 1.0 + (k - i) / alpha)
    return v


@optional_njit(cache=True)
def _binomial_row_numba(parts, up, weights, alpha):
    size = parts.shape[0]
    n = parts.shape[1]
    out = np.zeros(size)
    out[0] = 1.0
    for s in range(1, size):
        acc = 0.0
        for i in range(n):
            u = up[s, i]
            if u >= 0:
                acc += _one_box(parts[s], i, alpha) * out[u]
        out[s] = acc / (weights[s] + 1.0)
    return out


def _binomial_row_numpy(parts, up, weights, alpha):
    size, n = parts.shape
    out = np.zeros(size)
    out[0] = 1.0
    # one-box factors for every (sigma, row) pair, vectorized
    sig = parts.astype(float)
    rows = np.arange(n)
    ob = sig + 1.0 + (n - 1 - rows)[None, :] / alpha
    # pairs where the box cannot be added may divide by zero; they are masked below
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(n):
            d = sig - sig[:, [k]]
            num = d + 1.0 + (k - rows - 1)[None, :] / alpha
            den = d + 1.0 + (k - rows)[None, :] / alpha
            ob *= np.where(rows[None, :] == k, 1.0, num / den)
    for s in range(1, size):
        valid = up[s] >= 0
        out[s] = np.dot(ob[s, valid], out[up[s, valid]]) / (weights[s] + 1.0)
    return out


def binomial_row_normalized(parts: np.ndarray, up: np.ndarray, alpha: float) -> np.ndarray:
    """``(kappa choose sigma) / C(|kappa|, |sigma|)`` over the down-set of kappa.

    ``parts[0]`` is kappa itself and rows are ordered by decreasing weight;
    ``up[s, i]`` indexes sigma with a box added in row i (or -1 when that is
    not a partition inside kappa).
    """
    parts = np.ascontiguousarray(parts, dtype=np.int64)
    up = np.ascontiguousarray(up, dtype=np.int64)
    weights = parts.sum(axis=1).astype(float)
    if numba_enabled():
        return _binomial_row_numba(parts, up, weights, float(alpha))
    return _binomial_row_numpy(parts, up, weights, float(alpha))
