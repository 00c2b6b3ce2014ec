"""Partitions of bounded length.

A partition is a plain tuple of ints padded with zeros to the number of
variables ``n``, e.g. ``(2, 1, 0)`` for n = 3.  Keeping the padding explicit
means containment and componentwise arithmetic never need re-alignment.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

Partition = tuple[int, ...]


def make_partition(parts: Sequence[int], n: int | None = None) -> Partition:
    """Validate ``parts`` and pad with zeros to length ``n``."""
    parts = tuple(int(p) for p in parts)
    if n is None:
        n = len(parts)
    while len(parts) > n and parts[-1] == 0:
        parts = parts[:-1]
    if len(parts) > n:
        raise ValueError(f"partition {parts} has more than {n} nonzero parts")
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"parts of {parts} are not weakly decreasing")
    return parts + (0,) * (n - len(parts))


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Parse ``"2,1,0"``; an empty string is the empty partition."""
    text = text.strip()
    parts = [int(tok) for tok in text.split(",") if tok.strip()] if text else []
    return make_partition(parts, n if n is not None else max(len(parts), 1))


def format_partition(p: Partition) -> str:
    return ",".join(str(x) for x in p)


def weight(p: Partition) -> int:
    return sum(p)


def length(p: Partition) -> int:
    """Number of nonzero parts."""
    return sum(1 for x in p if x)


def enumerate_partitions(m: int, n: int) -> list[Partition]:
    """All partitions of ``m`` with at most ``n`` parts, reverse-lexicographic.

    Reverse-lex order is a linear extension of dominance order: if
    ``lam`` dominates ``mu`` then ``lam`` comes first.
    """
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    return list(_enumerate(m, n))


@lru_cache(maxsize=None)
def _enumerate(m: int, n: int) -> tuple[Partition, ...]:
    out: list[Partition] = []

    def rec(prefix: list[int], remaining: int, cap: int, slots: int) -> None:
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        # largest first gives reverse-lex order
        for part in range(min(cap, remaining), -1, -1):
            if part * slots < remaining:
                break
            prefix.append(part)
            rec(prefix, remaining - part, part, slots - 1)
            prefix.pop()

    rec([], m, m, n)
    return tuple(out)


def partitions_upto(max_weight: int, n: int) -> list[Partition]:
    """All partitions of weight <= ``max_weight``, by weight then reverse-lex."""
    return [p for m in range(max_weight + 1) for p in _enumerate(m, n)]


def conjugate(p: Partition, n: int | None = None) -> Partition:
    """Conjugate partition, padded to ``n`` (default: its own length, at least 1)."""
    cols = p[0] if p else 0
    conj = [sum(1 for x in p if x > j) for j in range(cols)]
    if n is None:
        n = max(len(conj), 1)
    return make_partition(conj, max(n, len(conj)))


def contains(kappa: Partition, lam: Partition) -> bool:
    """True iff the diagram of ``lam`` lies inside that of ``kappa``."""
    if len(lam) > len(kappa):
        if any(lam[len(kappa):]):
            return False
        lam = lam[: len(kappa)]
    return all(b <= a for a, b in zip(kappa, lam))


def dominates(lam: Partition, mu: Partition) -> bool:
    """``lam >= mu`` in dominance order (partitions of equal weight)."""
    if sum(lam) != sum(mu):
        return False
    s = t = 0
    for a, b in zip(lam, mu):
        s += a
        t += b
        if s < t:
            return False
    return True


def sub_partitions(kappa: Partition) -> list[Partition]:
    """All ``lam`` contained in ``kappa``, by decreasing weight then reverse-lex."""
    n = len(kappa)
    out: list[Partition] = []

    def rec(prefix: list[int], i: int) -> None:
        if i == n:
            out.append(tuple(prefix))
            return
        cap = kappa[i] if i == 0 else min(kappa[i], prefix[-1])
        for part in range(cap, -1, -1):
            prefix.append(part)
            rec(prefix, i + 1)
            prefix.pop()

    rec([], 0)
    out.sort(key=lambda p: (-sum(p), tuple(-x for x in p)))
    return out


def add_box(p: Partition, i: int) -> Partition | None:
    """``p`` with one box added to row ``i`` (0-based), or None if not a partition."""
    if i >= len(p) or (i > 0 and p[i - 1] == p[i]):
        return None
    return p[:i] + (p[i] + 1,) + p[i + 1 :]


def remove_box(p: Partition, i: int) -> Partition | None:
    """``p`` with one box removed from row ``i``, or None if not a partition."""
    if p[i] == 0 or (i + 1 < len(p) and p[i + 1] == p[i]):
        return None
    return p[:i] + (p[i] - 1,) + p[i + 1 :]


def floor_partition(x: Sequence[float], j: int) -> Partition:
    """Componentwise floor of ``j * x`` after sorting ``x`` into decreasing order."""
    vals = sorted((float(v) for v in x), reverse=True)
    if vals and vals[-1] < 0:
        raise ValueError("chamber point must be nonnegative")
    return tuple(math.floor(j * v) for v in vals)


@dataclass(frozen=True)
class CellStats:
    row: int  # 1-based
    col: int  # 1-based
    arm: int
    leg: int


def cells(p: Partition) -> list[CellStats]:
    conj = conjugate(p)
    return [
        CellStats(i + 1, j + 1, p[i] - (j + 1), conj[j] - (i + 1))
        for i in range(len(p))
        for j in range(p[i])
    ]


def hook_cprime(p: Partition, alpha) -> Fraction:
    """Upper hook product, prod over cells of ``alpha * (arm + 1) + leg``."""
    out = Fraction(1) if not isinstance(alpha, float) else 1.0
    for c in cells(p):
        out *= alpha * (c.arm + 1) + c.leg
    return out


def hook_c(p: Partition, alpha) -> Fraction:
    """Lower hook product, prod over cells of ``alpha * arm + leg + 1``."""
    out = Fraction(1) if not isinstance(alpha, float) else 1.0
    for c in cells(p):
        out *= alpha * c.arm + c.leg + 1
    return out


def iter_orbit(p: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of ``p`` (multiset permutations), lexicographic."""
    items = sorted(p)
    n = len(items)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(items)
        i = n - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        k = n - 1
        while items[k] <= items[i]:
            k -= 1
        items[i], items[k] = items[k], items[i]
        items[i + 1 :] = reversed(items[i + 1 :])


def orbit_size(p: Sequence[int]) -> int:
    """Number of distinct permutations of ``p``; equals ``m_p(1, ..., 1)``."""
    out = math.factorial(len(p))
    for mult in Counter(p).values():
        out //= math.factorial(mult)
    return out
