"""Brute-force reference computations used by the tests.

Nothing here imports permcomm: permutations are plain 0-based tuples and
every routine is the most direct enumeration available.
"""
from __future__ import annotations

import itertools
from collections import deque


def compose(a, b):
    return tuple(a[x] for x in b)


def inverse(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def commutator(a, b):
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def from_cycles(cycles, n):
    """Product of 1-based cycles, rightmost applied first."""
    result = tuple(range(n))
    for c in cycles:
        img = list(range(n))
        for i, x in enumerate(c):
            img[x - 1] = c[(i + 1) % len(c)] - 1
        result = compose(result, tuple(img))
    return result


def sign(a):
    inversions = sum(1 for i in range(len(a)) for j in range(i + 1, len(a)) if a[i] > a[j])
    return -1 if inversions % 2 else 1


def fixed_points(a):
    return sum(1 for i, v in enumerate(a) if i == v)


def cycle_type(a):
    seen = set()
    lengths = []
    for s in range(len(a)):
        if s in seen:
            continue
        k, x = 0, s
        while x not in seen:
            seen.add(x)
            x = a[x]
            k += 1
        if k > 1:
            lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def orbit_count(gens, n):
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        queue = deque([s])
        seen[s] = True
        while queue:
            x = queue.popleft()
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return count


def group_elements(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def alternating_elements(n):
    return [p for p in itertools.permutations(range(n)) if sign(p) == 1]


def alternating_class_count(n):
    """Conjugacy classes of A_n: orbits of conjugation by the generators
    (1 2 3) and an even long cycle."""
    elems = alternating_elements(n)
    if n < 3:
        return len(elems)
    long = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
    gens = [from_cycles([(1, 2, 3)], n), from_cycles([long], n)]
    gens = [(g, inverse(g)) for g in gens]
    remaining = set(elems)
    classes = 0
    while remaining:
        x = remaining.pop()
        classes += 1
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g, gi in gens:
                z = compose(compose(g, y), gi)
                if z in remaining:
                    remaining.discard(z)
                    queue.append(z)
    return classes


def partitions(n, max_part=None):
    """All partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first, *rest)


def partition_count_dp(n):
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


def distinct_odd_partitions(n, min_part=1):
    return sum(
        1
        for p in partitions(n)
        if all(x % 2 == 1 and x >= min_part for x in p) and len(set(p)) == len(p)
    )
