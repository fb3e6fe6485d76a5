"""Exact counts: partitions, alternating-group classes, derangements.

Every count is a Python ``int``; the only floats are in
:func:`hardy_ramanujan_diagnostic`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import (
    InvalidMinPart,
    InvalidRatio,
    OutOfStatedRange,
    ParityContradiction,
)

Number = Union[int, Fraction]


class PartitionTable:
    """Cached P(0..N), and distinct-odd-part counts Q (parts >= 1), R (parts >= 3).

    Tables grow on demand and are never mutated afterwards except by
    appending, so lookups from several threads are safe once built.
    """

    def __init__(self, limit: int = 0):
        self._p = [1]
        self._odd: dict[int, list[int]] = {}
        self.extend(limit)

    def extend(self, limit: int) -> None:
        p = self._p
        for n in range(len(p), limit + 1):
            # Euler: P(n) = sum_k (-1)^(k+1) [P(n - k(3k-1)/2) + P(n - k(3k+1)/2)]
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > n:
                    break
                g2 = g1 + k
                term = p[n - g1] + (p[n - g2] if g2 <= n else 0)
                total += term if k % 2 else -term
                k += 1
            p.append(total)

    def p(self, n: int) -> int:
        if n < 0:
            return 0
        if n >= len(self._p):
            self.extend(max(n, 2 * len(self._p)))
        return self._p[n]

    def distinct_odd(self, n: int, min_part: int = 1) -> int:
        if n < 0:
            return 0
        table = self._odd.get(min_part)
        if table is None or len(table) <= n:
            table = _distinct_odd_table(max(n, 2 * len(table or [0])), min_part)
            self._odd[min_part] = table
        return table[n]


def _distinct_odd_table(limit: int, min_part: int) -> list[int]:
    # coefficients of prod_{odd k >= min_part} (1 + x^k)
    coeff = [0] * (limit + 1)
    coeff[0] = 1
    for part in range(min_part, limit + 1, 2):
        for total in range(limit, part - 1, -1):
            coeff[total] += coeff[total - part]
    return coeff


_TABLE = PartitionTable(200)


def partition_p(n: int) -> int:
    """Number of unrestricted partitions of ``n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _TABLE.p(n)


def partition_distinct_odd(n: int, min_part: int = 1) -> int:
    """Partitions of ``n`` into distinct odd parts, each at least ``min_part``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if min_part < 1 or min_part % 2 == 0:
        raise InvalidMinPart(f"min_part must be an odd positive integer, got {min_part}")
    return _TABLE.distinct_odd(n, min_part)


def partition_q(n: int) -> int:
    return partition_distinct_odd(n, 1)


def partition_r(n: int) -> int:
    return partition_distinct_odd(n, 3)


def class_count_alternating(n: int) -> int:
    """Number of conjugacy classes of A_n, ``(P(n) + 3 Q(n)) / 2``."""
    if n < 2:
        raise ValueError("formula is used for n >= 2 only")
    total = partition_p(n) + 3 * partition_q(n)
    if total % 2:
        raise ParityContradiction(f"P({n}) + 3Q({n}) = {total} is odd")
    return total // 2


@lru_cache(maxsize=None)
def _derangements(n: int) -> int:
    a = 1
    for k in range(1, n + 1):
        a = k * a + (-1) ** k
    return a


def derangement_counts(n: int) -> tuple[int, int, int]:
    """``(all, even, odd)`` fixed-point-free permutations of ``n`` points.

    Uses ``a_n = n a_{n-1} + (-1)^n`` and ``even - odd = (-1)^(n-1) (n-1)``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    a = _derangements(n)
    diff = (n - 1) if (n - 1) % 2 == 0 else -(n - 1)
    even, rem = divmod(a + diff, 2)
    if rem:
        raise ParityContradiction(f"a_{n} + ({diff}) is odd")
    return a, even, a - even


def even_fixing_at_most(n: int, k: int) -> int:
    """Even permutations of ``n`` points with at most ``k`` fixed points."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return sum(math.comb(n, i) * derangement_counts(n - i)[1] for i in range(k + 1))


def _floor_div(n: int, r: Number) -> int:
    r = Fraction(r)
    return math.floor(Fraction(n) / r)


def t2_lower_bound(n: int, r: Number) -> int:
    """``floor((P(n) - P(n - floor(n/r))) / 2)`` for ``r > 4``."""
    if Fraction(r) <= 4:
        raise InvalidRatio(f"r must exceed 4, got {r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    return (partition_p(n) - partition_p(n - _floor_div(n, r))) // 2


def generation_probability_bound(n: int) -> Fraction:
    """``1 - 2 / floor(n/10)!`` as an exact rational (stated for n >= 33)."""
    if n < 33:
        raise OutOfStatedRange(f"bound is stated for n >= 33, got {n}")
    return 1 - Fraction(2, math.factorial(n // 10))


def _log_hardy_ramanujan(n: int) -> float:
    return math.pi * math.sqrt(2 * n / 3) - math.log(4 * n * math.sqrt(3))


def hardy_ramanujan_diagnostic(n: int) -> tuple[float, float]:
    """Asymptotic estimate of P(n) and its ratio to the exact value.

    The estimate overflows to ``inf`` past n ~ 40000; the ratio is computed in
    log space and stays finite.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    log_est = _log_hardy_ramanujan(n)
    estimate = math.exp(log_est) if log_est < 709 else math.inf
    ratio = math.exp(log_est - math.log(partition_p(n)))
    return estimate, ratio
