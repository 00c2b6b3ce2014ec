"""Jack polynomials in the monomial basis, exact over the rationals.

``P_lam`` is obtained from the eigenvalue equation of the Laplace-Beltrami
type operator

    D = (alpha/2) sum_i x_i^2 d_i^2 + sum_{i != j} x_i^2 / (x_i - x_j) d_i,

which is triangular on monomial symmetric functions ``m_mu``:

    D m_nu = E(nu) m_nu + sum_{mu < nu} A(mu, nu) m_mu,
    E(nu) = (alpha/2) sum_i nu_i (nu_i - 1) + sum_i (n - i) nu_i,
    A(mu, nu) = sum over i < j, 1 <= s <= mu_j with
                sort(mu + s e_i - s e_j) = nu  of  (mu_i - mu_j + 2 s).

Writing ``P_lam = sum_mu d_mu m_mu`` with ``d_lam = 1`` gives
``(E(lam) - E(mu)) d_mu = sum_nu A(mu, nu) d_nu``, solved down the
reverse-lexicographic order (a linear extension of dominance).

``C_lam = alpha^|lam| |lam|! / c'_lam * P_lam`` is the normalization whose
weight-m shell sums to ``(x_1 + ... + x_n)^m``.
"""

from __future__ import annotations

import json
import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import _kernels
from . import partitions as pt
from ._rational import Number, as_param, rational_str
from .partitions import Partition

CACHE_ENV = "JACKSONINE_CACHE_DIR"


@dataclass
class SymPoly:
    """Symmetric polynomial in ``n`` variables, monomial basis."""

    n: int
    coeffs: dict[Partition, Number] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return max((sum(p) for p, c in self.coeffs.items() if c), default=0)

    def __getitem__(self, lam: Partition) -> Number:
        return self.coeffs.get(tuple(lam), 0)

    def __add__(self, other: SymPoly) -> SymPoly:
        _check_n(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SymPoly(self.n, _prune(out))

    def __sub__(self, other: SymPoly) -> SymPoly:
        return self + other.scale(-1)

    def scale(self, c) -> SymPoly:
        return SymPoly(self.n, _prune({k: c * v for k, v in self.coeffs.items()}))

    def __mul__(self, other: SymPoly) -> SymPoly:
        _check_n(self, other)
        a = self.expand()
        b = other.expand()
        prod: dict[tuple[int, ...], Number] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if list(e) == sorted(e, reverse=True):
                    prod[e] = prod.get(e, 0) + ca * cb
        return SymPoly(self.n, _prune(prod))

    def __pow__(self, k: int) -> SymPoly:
        out = SymPoly(self.n, {(0,) * self.n: Fraction(1)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.n == other.n and _prune(self.coeffs) == _prune(other.coeffs)

    def expand(self) -> dict[tuple[int, ...], Number]:
        """Full expansion over exponent vectors (compositions)."""
        out: dict[tuple[int, ...], Number] = {}
        for lam, c in self.coeffs.items():
            for beta in pt.iter_orbit(lam):
                out[beta] = out.get(beta, 0) + c
        return out

    def __call__(self, x) -> complex:
        """Evaluate at a point; deterministic summation in key order."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates")
        total = 0j
        for lam in sorted(self.coeffs, key=lambda p: (sum(p), tuple(-v for v in p))):
            c = self.coeffs[lam]
            total += float(c) * monomial_value(lam, x)
        return total

    def at_ones(self) -> Number:
        """Exact value at (1, ..., 1)."""
        return sum((c * pt.orbit_size(lam) for lam, c in self.coeffs.items()), Fraction(0))

    def to_json(self) -> str:
        items = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), tuple(-v for v in kv[0])))
        return json.dumps({pt.format_partition(k): rational_str(v) for k, v in items})

    @classmethod
    def from_json(cls, text: str) -> SymPoly:
        data = json.loads(text)
        coeffs = {pt.parse_partition(k): Fraction(v) for k, v in data.items()}
        n = len(next(iter(coeffs))) if coeffs else 1
        return cls(n, coeffs)


def _check_n(a: SymPoly, b: SymPoly) -> None:
    if a.n != b.n:
        raise ValueError("polynomials live in different numbers of variables")


def _prune(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != 0}


def monomial_value(lam, x) -> complex:
    """``m_lam(x)``: sum of ``x^beta`` over distinct permutations beta of lam."""
    return sum(complex(np.prod([xi**b for xi, b in zip(x, beta)])) for beta in pt.iter_orbit(lam))


def power_sum_one(n: int) -> SymPoly:
    """``x_1 + ... + x_n``."""
    return SymPoly(n, {pt.make_partition((1,), n): Fraction(1)})


# --- operator recursion ------------------------------------------------------


def _diagonal(nu: Partition, alpha) -> Number:
    n = len(nu)
    half = alpha / 2
    return half * sum(v * (v - 1) for v in nu) + sum((n - 1 - i) * v for i, v in enumerate(nu))


@lru_cache(maxsize=None)
def _parents(mu: Partition) -> tuple[tuple[Partition, int], ...]:
    """Pairs ``(nu, A(mu, nu))`` with ``A`` the off-diagonal operator coefficient."""
    n = len(mu)
    acc: dict[Partition, int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            for s in range(1, mu[j] + 1):
                beta = list(mu)
                beta[i] += s
                beta[j] -= s
                nu = tuple(sorted(beta, reverse=True))
                acc[nu] = acc.get(nu, 0) + (mu[i] - mu[j] + 2 * s)
    return tuple(acc.items())


_lock = threading.Lock()
_P_CACHE: dict[tuple[Partition, Number, int], dict[Partition, Number]] = {}


def _check_alpha(alpha) -> Number:
    alpha = as_param(alpha)
    if alpha <= 0:
        raise ValueError(f"Jack index alpha must be positive, got {alpha}")
    return alpha


def _p_coeffs(lam: Partition, alpha: Number) -> dict[Partition, Number]:
    key = (lam, alpha, len(lam))
    hit = _P_CACHE.get(key)
    if hit is not None:
        return hit
    n = len(lam)
    one = Fraction(1) if isinstance(alpha, Fraction) else 1.0
    e_lam = _diagonal(lam, alpha)
    d: dict[Partition, Number] = {}
    for mu in pt.enumerate_partitions(sum(lam), n):
        if mu == lam:
            d[mu] = one
            continue
        if not pt.dominates(lam, mu):
            continue
        acc = 0
        for nu, a in _parents(mu):
            dn = d.get(nu)
            if dn:
                acc += a * dn
        if acc:
            d[mu] = acc / (e_lam - _diagonal(mu, alpha))
    with _lock:
        _P_CACHE.setdefault(key, d)
    return d


def jack_P(lam, alpha, n: int | None = None) -> SymPoly:
    """Monic Jack polynomial ``P_lam^alpha`` in ``n`` variables."""
    alpha = _check_alpha(alpha)
    lam = pt.make_partition(lam, n if n is not None else len(lam))
    return SymPoly(len(lam), dict(_p_coeffs(lam, alpha)))


def c_factor(lam: Partition, alpha) -> Number:
    """``alpha^|lam| |lam|! / c'_lam``, the factor taking P to C."""
    m = sum(lam)
    return alpha**m * math.factorial(m) / pt.hook_cprime(lam, alpha)


def jack_C(lam, alpha, n: int | None = None) -> SymPoly:
    """Jack polynomial ``C_lam^alpha`` normalized so weight-m shells sum to ``p_1^m``."""
    alpha = _check_alpha(alpha)
    lam = pt.make_partition(lam, n if n is not None else len(lam))
    return jack_P(lam, alpha).scale(c_factor(lam, alpha))


def jack_at_ones(lam, alpha, n: int | None = None) -> Number:
    return jack_C(lam, alpha, n).at_ones()


def jack_eval(lam, alpha, x) -> complex:
    """``C_lam^alpha(x)`` in complex floating arithmetic."""
    x = np.asarray(x, dtype=complex)
    return jack_C(lam, alpha, len(x))(x)


# --- degree blocks for the numeric layer -------------------------------------


@dataclass(frozen=True)
class JackBlock:
    """All ``C_lam`` of one weight ``m`` in ``n`` variables.

    ``matrix[a, b]`` is the coefficient of ``m_{parts[b]}`` in
    ``C_{parts[a]}``; it is lower triangular in reverse-lex order.
    """

    m: int
    n: int
    alpha: Number
    parts: tuple[Partition, ...]
    exact: tuple[tuple[Number, ...], ...]
    matrix: np.ndarray
    at_ones: np.ndarray


_BLOCKS: dict[tuple[int, int, Number], JackBlock] = {}


def jack_block(m: int, alpha, n: int) -> JackBlock:
    alpha = _check_alpha(alpha)
    key = (m, n, alpha)
    blk = _BLOCKS.get(key)
    if blk is not None:
        return blk
    blk = _load_block(m, n, alpha)
    if blk is None:
        parts = tuple(pt.enumerate_partitions(m, n))
        rows = []
        for lam in parts:
            p = _p_coeffs(lam, alpha)
            f = c_factor(lam, alpha)
            rows.append(tuple(f * p.get(mu, 0) for mu in parts))
        blk = _build_block(m, n, alpha, parts, rows)
        _store_block(blk)
    with _lock:
        _BLOCKS.setdefault(key, blk)
    return _BLOCKS[key]


def _build_block(m, n, alpha, parts, rows) -> JackBlock:
    sizes = [pt.orbit_size(mu) for mu in parts]
    ones = [sum((c * s for c, s in zip(row, sizes)), 0) for row in rows]
    mat = np.array([[float(c) for c in row] for row in rows], dtype=float).reshape(len(parts), len(parts))
    return JackBlock(m, n, alpha, parts, tuple(rows), mat, np.array([float(v) for v in ones]))


def _cache_path(m: int, n: int, alpha) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root or not isinstance(alpha, Fraction):
        return None
    return Path(root) / f"jackC_n{n}_m{m}_a{alpha.numerator}_{alpha.denominator}.json"


def _load_block(m, n, alpha) -> JackBlock | None:
    path = _cache_path(m, n, alpha)
    if path is None or not path.exists():
        return None
    data = json.loads(path.read_text())
    parts = tuple(pt.parse_partition(s, n) for s in data["parts"])
    rows = [tuple(Fraction(v) for v in row) for row in data["rows"]]
    return _build_block(m, n, alpha, parts, rows)


def _store_block(blk: JackBlock) -> None:
    path = _cache_path(blk.m, blk.n, blk.alpha)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "parts": [pt.format_partition(p) for p in blk.parts],
        "rows": [[rational_str(v) for v in row] for row in blk.exact],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)


# --- generalized binomial coefficients ---------------------------------------


_BINOM_ROWS: dict[tuple[Partition, Number], dict[Partition, Fraction]] = {}


def binomial_row(kappa, alpha) -> dict[Partition, Number]:
    """All ``(kappa choose lam)_alpha`` for ``lam`` inside ``kappa``, exactly.

    Expands ``C_kappa(x + 1) / C_kappa(1)`` in the monomial basis and solves
    the triangular change of basis to ``C_lam(x) / C_lam(1)`` one weight at
    a time.
    """
    alpha = _check_alpha(alpha)
    kappa = tuple(kappa)
    key = (kappa, alpha)
    hit = _BINOM_ROWS.get(key)
    if hit is not None:
        return hit
    n = len(kappa)
    k = sum(kappa)
    top = jack_block(k, alpha, n)
    row = top.exact[top.parts.index(kappa)]
    norm = sum((c * pt.orbit_size(mu) for c, mu in zip(row, top.parts)), 0)

    shifted: dict[Partition, Number] = {}
    for c, mu in zip(row, top.parts):
        if not c:
            continue
        for beta in pt.iter_orbit(mu):
            for gamma in _sorted_below(beta):
                w = math.prod(math.comb(b, g) for b, g in zip(beta, gamma))
                shifted[gamma] = shifted.get(gamma, 0) + c * w

    out: dict[Partition, Number] = {}
    for d in range(k, -1, -1):
        blk = jack_block(d, alpha, n)
        resid = [shifted.get(mu, 0) / norm for mu in blk.parts]
        for a, lam in enumerate(blk.parts):
            coeff = resid[a] / blk.exact[a][a]
            if coeff:
                for b in range(a, len(blk.parts)):
                    resid[b] -= coeff * blk.exact[a][b]
            ones = sum((c * pt.orbit_size(mu) for c, mu in zip(blk.exact[a], blk.parts)), 0)
            value = coeff * ones
            if pt.contains(kappa, lam):
                out[lam] = value
            elif value and isinstance(alpha, Fraction):
                raise ArithmeticError(f"binomial expansion leaked outside kappa at {lam}")
    with _lock:
        _BINOM_ROWS.setdefault(key, out)
    return out


def _sorted_below(beta: tuple[int, ...]):
    """Decreasing vectors gamma with gamma <= beta componentwise."""
    n = len(beta)

    def rec(prefix: list[int], i: int):
        if i == n:
            yield tuple(prefix)
            return
        cap = beta[i] if i == 0 else min(beta[i], prefix[-1])
        for g in range(cap, -1, -1):
            prefix.append(g)
            yield from rec(prefix, i + 1)
            prefix.pop()

    yield from rec([], 0)


def binomial(kappa, lam, alpha) -> Number:
    """Generalized binomial coefficient ``(kappa choose lam)_alpha``."""
    kappa = tuple(kappa)
    lam = pt.make_partition(lam, len(kappa))
    if not pt.contains(kappa, lam):
        raise ValueError(f"{lam} is not contained in {kappa}")
    return binomial_row(kappa, alpha)[lam]


# --- recursive binomials for large partitions ----------------------------------
#
# The solve above is the reference definition but needs every Jack polynomial
# of weight <= |kappa|.  For large kappa we use two facts instead:
#
#   (sigma + box_i choose sigma) = (sigma_i + 1 + (n-1-i)/alpha)
#       * prod_{k != i} (d + 1 + (k-i-1)/alpha) / (d + 1 + (k-i)/alpha),
#       d = sigma_i - sigma_k   (rows 0-based),
#   (kappa choose sigma) (|kappa| - |sigma|)
#       = sum_i (sigma + box_i choose sigma) (kappa choose sigma + box_i),
#
# both checked against ``binomial_row`` in the test suite.


@dataclass(frozen=True)
class DownSet:
    """All partitions inside ``kappa`` with add-a-box links.

    ``parts[0]`` is kappa; order is decreasing weight then reverse-lex, so
    ``up[s, i]`` (the index of parts[s] plus a box in row i, or -1) always
    points to an earlier row.
    """

    kappa: Partition
    parts: tuple[Partition, ...]
    index: dict
    up: np.ndarray


@lru_cache(maxsize=64)
def down_set(kappa: Partition) -> DownSet:
    kappa = tuple(kappa)
    parts = tuple(pt.sub_partitions(kappa))
    index = {p: s for s, p in enumerate(parts)}
    n = len(kappa)
    up = np.full((len(parts), n), -1, dtype=np.int64)
    for s, p in enumerate(parts):
        for i in range(n):
            q = pt.add_box(p, i)
            if q is not None:
                up[s, i] = index.get(q, -1)
    return DownSet(kappa, parts, index, up)


def one_box_binomial(sigma: Partition, i: int, alpha):
    """``(sigma + box in row i choose sigma)_alpha``."""
    n = len(sigma)
    v = sigma[i] + 1 + (n - 1 - i) / alpha
    for k in range(n):
        if k != i:
            d = sigma[i] - sigma[k]
            v = v * (d + 1 + (k - i - 1) / alpha) / (d + 1 + (k - i) / alpha)
    return v


def binomial_row_recursive(kappa, alpha, field=Fraction) -> dict[Partition, object]:
    """Exact ``(kappa choose lam)`` for all lam inside kappa by the box recursion.

    ``field`` converts rationals to the working type (``Fraction`` or
    ``gmpy2.mpq``, which is much faster for large kappa).
    """
    alpha = _check_alpha(alpha)
    if not isinstance(alpha, Fraction):
        raise TypeError("exact binomials need a rational alpha")
    ds = down_set(tuple(kappa))
    return dict(zip(ds.parts, _recursive_values(ds, field(alpha.numerator, alpha.denominator), field)))


def _recursive_values(ds: DownSet, alpha, field) -> list:
    k = sum(ds.kappa)
    vals = [field(0)] * len(ds.parts)
    vals[0] = field(1)
    for s in range(1, len(ds.parts)):
        sigma = ds.parts[s]
        acc = field(0)
        for i, u in enumerate(ds.up[s]):
            if u >= 0:
                acc += one_box_binomial(sigma, i, alpha) * vals[u]
        vals[s] = acc / (k - sum(sigma))
    return vals


def binomial_row_float(kappa, alpha) -> tuple[DownSet, np.ndarray]:
    """Float binomials over the down-set of kappa.

    Returns the down-set and the normalized values
    ``(kappa choose sigma) / C(|kappa|, |sigma|)``, which stay O(1) even when
    the binomials themselves overflow.
    """
    ds = down_set(tuple(kappa))
    return ds, _kernels.binomial_row_normalized(np.array(ds.parts, dtype=np.int64), ds.up, float(alpha))


# --- batch evaluation ------------------------------------------------------------


@lru_cache(maxsize=None)
def _orbit_arrays(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    exps, owner = [], []
    for b, mu in enumerate(pt.enumerate_partitions(m, n)):
        for beta in pt.iter_orbit(mu):
            exps.append(beta)
            owner.append(b)
    return np.array(exps, dtype=np.int64).reshape(-1, n), np.array(owner, dtype=np.int64)


def monomial_block_values(m: int, points: np.ndarray, powtab: np.ndarray | None = None) -> np.ndarray:
    """``m_mu(points[p])`` for every partition mu of m; shape (N, #parts)."""
    points = np.atleast_2d(points)
    n = points.shape[1]
    exps, owner = _orbit_arrays(m, n)
    if powtab is None:
        powtab = _kernels.power_table(points, m)
    return _kernels.monomial_values(powtab, exps, owner, len(pt.enumerate_partitions(m, n)))


def jack_block_values(m: int, alpha, points: np.ndarray, powtab: np.ndarray | None = None) -> np.ndarray:
    """``C_lam(points[p])`` for every partition lam of m, shape (N, #parts)."""
    points = np.atleast_2d(points)
    blk = jack_block(m, alpha, points.shape[1])
    mono = monomial_block_values(m, points, powtab)
    return mono @ blk.matrix.T
