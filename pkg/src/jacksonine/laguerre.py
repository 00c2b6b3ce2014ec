"""Multivariate Laguerre polynomials and their connection coefficients.

Normalized Laguerre polynomials (value 1 at the origin):

    L~_kappa^a(x) = sum_{lam in kappa} (kappa choose lam) (-1)^|lam|
                    C_lam(x) / ([a + q]_lam C_lam(1)),     q = 1 + (n - 1)/alpha.

Connection coefficients c with L~_kappa^{a+h} = sum_lam c_lam L~_lam^a follow
from comparing C_nu coefficients:

    sum_{lam} c_lam (lam choose nu) = (kappa choose nu) [a+q]_nu / [a+h+q]_nu.

The system is triangular for containment.  Instead of building every row
(lam choose .) we group the unknowns by weight w: the partial sums
G_w(s) = sum_{|lam| = w} c_lam (lam choose s) obey the same box recursion as
a single binomial row, so each weight costs one sweep over the down-set.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from . import partitions as pt
from ._rational import Number, as_param, is_exact
from .hyper import (
    DEFAULT_POLICY,
    EvalResult,
    MultiplicityB,
    TruncationPolicy,
    bessel_B,
    pochhammer,
)
from .jack import binomial_row_float, down_set, jack_block, jack_block_values, one_box_binomial
from .partitions import Partition

NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class LaguerreParams:
    n: int
    a: Number
    alpha: Number

    def __post_init__(self):
        object.__setattr__(self, "a", as_param(self.a))
        object.__setattr__(self, "alpha", as_param(self.alpha))
        if self.n < 1:
            raise ValueError("rank n must be >= 1")
        if self.a <= -1:
            raise ValueError(f"need a > -1, got {self.a}")
        if self.alpha <= 0:
            raise ValueError(f"need alpha > 0, got {self.alpha}")

    @property
    def q(self):
        return 1 + (self.n - 1) / self.alpha

    @property
    def a_plus_q(self):
        return self.a + self.q

    @property
    def exact(self) -> bool:
        return is_exact(self.a, self.alpha)

    @classmethod
    def from_multiplicity(cls, k: MultiplicityB) -> LaguerreParams:
        """Parameters matching type-B Bessel functions: a = k1 - 1/2, alpha = 1/k2."""
        return cls(k.n, k.k1 - Fraction(1, 2), k.alpha)


def _check_pochhammer(base, kappa: Partition, alpha, what: str) -> None:
    """Raise if [base]_lam vanishes for some lam inside kappa."""
    for j, part in enumerate(kappa):
        for i in range(part):
            v = base - j / alpha + i
            if v == 0 or (not is_exact(v) and abs(v) < 1e-12):
                raise ZeroDivisionError(f"[{what}]_lam vanishes for a partition inside {kappa}")


# --- normalized Laguerre polynomials ---------------------------------------------


def _tail_bound(total_weight: int, degree: int, xnorm: float, c: float, n: int) -> float:
    """Bound on the shells above ``degree`` using (kappa choose lam) summing to C(|kappa|, d)."""
    out = 0.0
    for d in range(degree + 1, total_weight + 1):
        q, r = divmod(d, n)
        low = (n - r) * (math.lgamma(c + q) - math.lgamma(c)) + r * (math.lgamma(c + q + 1) - math.lgamma(c))
        logc = math.lgamma(total_weight + 1) - math.lgamma(d + 1) - math.lgamma(total_weight - d + 1)
        out += math.exp(logc + d * math.log(xnorm) - low) if xnorm > 0 else 0.0
    return out


def laguerre_series(kappa, p: LaguerreParams, x, policy: TruncationPolicy | None = None) -> EvalResult:
    """``L~_kappa^a(x; alpha)`` summed by weight, with the truncation recorded.

    Without a policy every lam inside kappa is summed.  With one, summation
    stops like the hypergeometric series and the remaining weights are
    bounded using c = a + 1.
    """
    kappa = pt.make_partition(kappa, p.n)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (p.n,):
        raise ValueError(f"expected {p.n} coordinates")
    _check_pochhammer(p.a_plus_q, kappa, p.alpha, "a+q")
    K = sum(kappa)
    top = K if policy is None else min(K, policy.max_degree)
    ds, normalized = binomial_row_float(kappa, p.alpha)
    by_weight: dict[int, list[int]] = {}
    for s, lam in enumerate(ds.parts):
        by_weight.setdefault(sum(lam), []).append(s)

    aq = float(p.a_plus_q)
    total = 0.0
    peak = 0.0
    small = 0
    d = 0
    for d in range(top + 1):
        blk = jack_block(d, p.alpha, p.n)
        vals = jack_block_values(d, p.alpha, x[None, :])[0].real / blk.at_ones
        where = {lam: b for b, lam in enumerate(blk.parts)}
        logc = math.lgamma(K + 1) - math.lgamma(d + 1) - math.lgamma(K - d + 1)
        shell = 0.0
        for s in by_weight.get(d, ()):
            lam = ds.parts[s]
            binom = normalized[s] * math.exp(logc)
            shell += binom * vals[where[lam]] / pochhammer(aq, lam, float(p.alpha))
        shell *= (-1) ** d
        total += shell
        peak = max(peak, abs(total))
        if policy is not None:
            small = small + 1 if abs(shell) <= policy.rel_tol * peak else 0
            if small >= policy.consecutive_small:
                break
    tail = 0.0
    if d < K:
        tail = _tail_bound(K, d, float(np.max(np.abs(x))), float(p.a) + 1, p.n)
    return EvalResult(complex(total), d, tail)


def laguerre_normalized(kappa, p: LaguerreParams, x, policy: TruncationPolicy | None = None) -> float:
    """Normalized multivariate Laguerre polynomial at a real point."""
    return laguerre_series(kappa, p, x, policy).value.real


def laguerre_normalized_exact(kappa, p: LaguerreParams, x) -> Fraction:
    """Exact value at a rational point (small kappa; uses the reference binomials)."""
    from .jack import binomial_row, jack_C

    kappa = pt.make_partition(kappa, p.n)
    _check_pochhammer(p.a_plus_q, kappa, p.alpha, "a+q")
    x = [Fraction(v) for v in x]
    out = Fraction(0)
    for lam, b in binomial_row(kappa, p.alpha).items():
        C = jack_C(lam, p.alpha)
        val = sum((c * _monomial_exact(mu, x) for mu, c in C.coeffs.items()), Fraction(0))
        out += b * (-1) ** sum(lam) * val / (pochhammer(p.a_plus_q, lam, p.alpha) * C.at_ones())
    return out


def _monomial_exact(mu, x) -> Fraction:
    return sum((math.prod((xi**e for xi, e in zip(x, beta)), start=Fraction(1)) for beta in pt.iter_orbit(mu)), Fraction(0))


# --- connection coefficients ----------------------------------------------------------


@dataclass
class ConnectionTable:
    """Coefficients ``c[lam]`` of ``L~_kappa^{a+h}`` in the family ``L~_lam^a``."""

    kappa: Partition
    entries: dict[Partition, Number] = field(default_factory=dict)
    exact: bool = True

    def total(self):
        return sum(self.entries.values(), Fraction(0) if self.exact else 0.0)

    def negatives(self, tol: float = NEGATIVE_TOL) -> list[tuple[Partition, Number]]:
        if self.exact:
            return [(lam, c) for lam, c in self.entries.items() if c < 0]
        return [(lam, c) for lam, c in self.entries.items() if c < -tol]

    def support(self) -> list[Partition]:
        return [lam for lam, c in self.entries.items() if c != 0]

    def to_json(self) -> str:
        items = []
        for lam, c in self.entries.items():
            if self.exact:
                fr = Fraction(c)
                num, den = fr.numerator, fr.denominator
            else:
                num, den = float(c), 1
            items.append({"lambda": pt.format_partition(lam), "numerator": num, "denominator": den})
        return json.dumps({"kappa": pt.format_partition(self.kappa), "entries": items})

    @classmethod
    def from_json(cls, text: str) -> ConnectionTable:
        data = json.loads(text)
        kappa = pt.parse_partition(data["kappa"])
        exact = all(isinstance(e["numerator"], int) for e in data["entries"])
        entries = {}
        for e in data["entries"]:
            lam = pt.parse_partition(e["lambda"], len(kappa))
            entries[lam] = Fraction(e["numerator"], e["denominator"]) if exact else float(e["numerator"])
        return cls(kappa, entries, exact)


def _to_field(value, exact: bool):
    if exact:
        fr = Fraction(value)
        return gmpy2.mpq(fr.numerator, fr.denominator)
    return float(value)


def connection_coefficients(kappa, p: LaguerreParams, h) -> ConnectionTable:
    """Coefficients with ``L~_kappa^{a+h} = sum_{lam in kappa} c_lam L~_lam^a``.

    Exact (rational) whenever a, h and alpha are rational.
    """
    h = as_param(h)
    kappa = pt.make_partition(kappa, p.n)
    exact = p.exact and is_exact(h)
    _check_pochhammer(p.a_plus_q, kappa, p.alpha, "a+q")
    _check_pochhammer(p.a_plus_q + h, kappa, p.alpha, "a+h+q")

    one = _to_field(1, exact)
    alpha = _to_field(p.alpha, exact)
    aq = _to_field(p.a_plus_q, exact)
    ahq = _to_field(p.a_plus_q + h, exact)
    ds = down_set(kappa)
    size = len(ds.parts)
    weights = [sum(lam) for lam in ds.parts]
    K = weights[0]

    # one-box factors, shared by every sweep
    boxes = [
        [(int(u), one_box_binomial(ds.parts[s], i, alpha)) for i, u in enumerate(ds.up[s]) if u >= 0]
        for s in range(size)
    ]

    def sweep(seed: dict[int, object], w: int) -> list:
        """``sum_{|lam| = w} seed[lam] (lam choose s)`` for every s in the down-set."""
        g = [None] * size
        for s, v in seed.items():
            g[s] = v
        for s in range(size):
            if weights[s] >= w:
                continue
            acc = 0 * one
            for u, ob in boxes[s]:
                gu = g[u]
                if gu is not None and gu != 0:
                    acc += ob * gu
            g[s] = acc / (w - weights[s]) if acc != 0 else None
        return g

    binom_kappa = sweep({0: one}, K)
    ratio = {}
    for s, lam in enumerate(ds.parts):
        r = one
        for j, part in enumerate(lam):
            for i in range(part):
                r = r * (aq - j / alpha + i) / (ahq - j / alpha + i)
        ratio[s] = r

    coeffs = [0 * one] * size
    pending = [0 * one] * size  # contributions of heavier lam to each row
    start = 0
    while start < size:
        w = weights[start]
        stop = start
        while stop < size and weights[stop] == w:
            stop += 1
        seed = {}
        for s in range(start, stop):
            b = binom_kappa[s] if binom_kappa[s] is not None else 0 * one
            c = b * ratio[s] - pending[s]
            coeffs[s] = c
            if c != 0:
                seed[s] = c
        if seed and w > 0:
            g = sweep(seed, w)
            for s in range(stop, size):
                if g[s] is not None:
                    pending[s] = pending[s] + g[s]
        start = stop

    if exact:
        entries = {lam: Fraction(int(c.numerator), int(c.denominator)) for lam, c in zip(ds.parts, coeffs)}
    else:
        entries = {lam: float(c) for lam, c in zip(ds.parts, coeffs)}
    return ConnectionTable(kappa, entries, exact)


def compose_tables(outer: ConnectionTable, inner_for) -> ConnectionTable:
    """Chain two shifts: ``c[nu] = sum_lam outer[lam] * inner_for(lam)[nu]``."""
    out: dict[Partition, Number] = {lam: 0 for lam in outer.entries}
    for lam, c in outer.entries.items():
        if c == 0:
            continue
        for nu, d in inner_for(lam).entries.items():
            out[nu] = out[nu] + c * d
    zero = Fraction(0) if outer.exact else 0.0
    return ConnectionTable(outer.kappa, {k: v + zero for k, v in out.items()}, outer.exact)


def iterated_connection(kappa, p: LaguerreParams, h, steps: int) -> ConnectionTable:
    """Shift by ``steps * h`` as a chain of single shifts by h."""
    h = as_param(h)
    kappa = pt.make_partition(kappa, p.n)
    if steps < 1:
        raise ValueError("need at least one step")
    table = connection_coefficients(kappa, LaguerreParams(p.n, p.a + (steps - 1) * h, p.alpha), h)
    for t in range(steps - 2, -1, -1):
        inner_p = LaguerreParams(p.n, p.a + t * h, p.alpha)
        cache: dict[Partition, ConnectionTable] = {}

        def inner_for(lam, inner_p=inner_p, cache=cache):
            if lam not in cache:
                cache[lam] = connection_coefficients(lam, inner_p, h)
            return cache[lam]

        table = compose_tables(table, inner_for)
    return table


# --- sign scan ------------------------------------------------------------------------


@dataclass
class SignScanReport:
    params: LaguerreParams
    h: Number
    max_weight: int
    violations: list[tuple[Partition, Partition, Number]]
    tables_scanned: int
    outside_hypothesis: bool

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kappa", "lambda", "value"])
        for kappa, lam, v in self.violations:
            value = f"{Fraction(v).numerator}/{Fraction(v).denominator}" if is_exact(v) else repr(float(v))
            writer.writerow([pt.format_partition(kappa), pt.format_partition(lam), value])
        return buf.getvalue()


def wallach_sign_scan(p: LaguerreParams, h, max_weight: int) -> SignScanReport:
    """List every strictly negative connection coefficient with |kappa| <= max_weight.

    An empty list only means no witness was found up to that weight.  Runs
    with a < -1/2 are allowed but flagged as outside the positivity
    hypothesis.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    h = as_param(h)
    violations = []
    count = 0
    for w in range(max_weight + 1):
        for kappa in pt.enumerate_partitions(w, p.n):
            table = connection_coefficients(kappa, p, h)
            count += 1
            violations.extend((kappa, lam, c) for lam, c in table.negatives())
    return SignScanReport(p, h, max_weight, violations, count, p.a < Fraction(-1, 2))


# --- Laguerre to Bessel limit ------------------------------------------------------------


def laguerre_bessel_limit_error(
    k: MultiplicityB, x, y, j: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """``|L~_{floor(j x)}^{k1-1/2}(y^2 / j) - J^B_k(i y, 2 sqrt(x))|``."""
    if j < 1:
        raise ValueError("need j >= 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.all(y == 0):
        return 0.0
    p = LaguerreParams.from_multiplicity(k)
    kappa = pt.floor_partition(x, j)
    lag = laguerre_normalized(kappa, p, y**2 / j, policy)
    bes = bessel_B(k, 1j * y, 2 * np.sqrt(np.sort(x)[::-1]), policy).value
    return abs(lag - bes)
