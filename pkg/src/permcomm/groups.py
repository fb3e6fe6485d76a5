"""Orbits, blocks, primitivity and Jordan classification for permutation groups.

Groups are given by generator lists. Nothing here builds a stabilizer chain:
exact orders come from :func:`closure_order`, a breadth-first enumeration that
serves as the independent oracle for generation claims.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DegreeMismatch,
    InvalidWindow,
    NotTransitive,
    OrderCapExceeded,
    PreconditionViolated,
)
from .perm import Permutation, cycle_decomposition, parity

DEFAULT_CLOSURE_CAP = 4_000_000


@dataclass(frozen=True)
class OrbitPartition:
    degree: int
    orbit_id: tuple[int, ...]  # per 1-based point, ids numbered by first appearance
    count: int

    @property
    def transitive(self) -> bool:
        return self.count == 1

    def orbits(self) -> list[set[int]]:
        out = [set() for _ in range(self.count)]
        for x, k in enumerate(self.orbit_id, start=1):
            out[k].add(x)
        return out


@dataclass(frozen=True)
class BlockSystem:
    degree: int
    block_id: tuple[int, ...]  # per 1-based point
    block_size: int

    def blocks(self) -> list[set[int]]:
        out: dict[int, set[int]] = {}
        for x, k in enumerate(self.block_id, start=1):
            out.setdefault(k, set()).add(x)
        return [out[k] for k in sorted(out)]

    @property
    def trivial(self) -> bool:
        return self.block_size in (1, self.degree)


@dataclass(frozen=True)
class GroupClass:
    kind: str  # "Alternating", "Symmetric" or "Other"
    justification: str  # "jordan" or "closure"
    order: Optional[int] = None


def _check_gens(gens: Sequence[Permutation], n: int) -> None:
    for g in gens:
        if g.degree != n:
            raise DegreeMismatch(f"generator of degree {g.degree}, expected {n}")


def _relabel(labels: Sequence[int]) -> tuple[tuple[int, ...], int]:
    seen: dict[int, int] = {}
    out = []
    for v in labels:
        out.append(seen.setdefault(v, len(seen)))
    return tuple(out), len(seen)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def orbits(gens: Sequence[Permutation], n: int) -> OrbitPartition:
    _check_gens(gens, n)
    ds = _DisjointSet(n)
    for g in gens:
        for x, y in enumerate(g.images):
            ds.union(x, y)
    ids, count = _relabel([ds.find(x) for x in range(n)])
    return OrbitPartition(n, ids, count)


def is_transitive(gens: Sequence[Permutation], n: int) -> bool:
    return orbits(gens, n).transitive


def transitivity_criterion(p: int, n: int, tau: Permutation) -> bool:
    """Whether ``(1 2 ... p)`` and ``tau`` generate a transitive group, decided
    from the cycle structure of ``tau`` alone: no point above ``p`` is fixed and
    every cycle of ``tau`` meets ``{1, ..., p}``."""
    if not 1 < p < n:
        raise InvalidWindow(f"need 1 < p < n, got p={p}, n={n}")
    if tau.degree != n:
        raise DegreeMismatch(f"tau has degree {tau.degree}, expected {n}")
    form, _, fixed = cycle_decomposition(tau)
    if any(y > p for y in fixed):
        return False
    return all(min(c) <= p for c in form.cycles)


def block_system(gens: Sequence[Permutation], n: int, seed_pair: tuple[int, int]) -> BlockSystem:
    """Finest block system in which the 1-based points ``seed_pair`` share a block.

    Classes are merged under generator images until stable; the group must be
    transitive.
    """
    _check_gens(gens, n)
    if not is_transitive(gens, n):
        raise NotTransitive("block systems are only defined for transitive groups")
    x, y = seed_pair
    for v in (x, y):
        if not 1 <= v <= n:
            raise ValueError(f"point {v} outside 1..{n}")
    ds = _DisjointSet(n)
    pending = []
    if ds.union(x - 1, y - 1):
        pending.append((x - 1, y - 1))
    images = [g.images for g in gens]
    while pending:
        a, b = pending.pop()
        for img in images:
            ga, gb = img[a], img[b]
            if ds.union(ga, gb):
                pending.append((ga, gb))
    ids, count = _relabel([ds.find(v) for v in range(n)])
    return BlockSystem(n, ids, n // count)


def is_primitive(gens: Sequence[Permutation], n: int) -> tuple[bool, Optional[BlockSystem]]:
    _check_gens(gens, n)
    if not is_transitive(gens, n):
        raise NotTransitive("primitivity is only defined for transitive groups")
    for y in range(2, n + 1):
        bs = block_system(gens, n, (1, y))
        if bs.block_size < n:
            return False, bs
    return True, None


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k < 4:
        return True
    if k % 2 == 0:
        return False
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def _p_cycle_length(g: Permutation) -> Optional[int]:
    ct = g.cycle_type()
    return ct[0] if len(ct) == 1 else None


def primitivity_shortcut(
    gens: Sequence[Permutation], n: int, p: int, witness: Optional[Permutation] = None
) -> bool:
    """Primitivity from a p-cycle with p prime and p > n/2 in a transitive group.

    The p-cycle is either ``witness`` (which must be a product of the
    generators the caller vouches for) or one of the generators.
    """
    _check_gens(gens, n)
    if not is_prime(p):
        raise PreconditionViolated(f"p={p} is not prime")
    if 2 * p <= n:
        raise PreconditionViolated(f"p={p} is not greater than n/2={n / 2}")
    candidates = [witness] if witness is not None else list(gens)
    if not any(_p_cycle_length(g) == p for g in candidates):
        raise PreconditionViolated(f"no {p}-cycle among the supplied permutations")
    if not is_transitive(gens, n):
        raise PreconditionViolated("group is not transitive")
    return True


def jordan_classify(gens: Sequence[Permutation], n: int, p_cycle_witness: Permutation) -> GroupClass:
    """Alternating or Symmetric for a transitive group holding a prime cycle.

    The witness must be one of the generators, a p-cycle with p prime and
    ``n/2 < p <= n - 3``. Primitivity then follows from the shortcut lemma and
    the group is A_n or S_n according to the parities of the generators.
    Raises :class:`PreconditionViolated` otherwise; no fallback is attempted.
    """
    _check_gens(gens, n)
    if p_cycle_witness not in gens:
        raise PreconditionViolated("witness is not one of the generators")
    p = _p_cycle_length(p_cycle_witness)
    if p is None:
        raise PreconditionViolated("witness is not a cycle")
    if not is_prime(p):
        raise PreconditionViolated(f"witness length {p} is not prime")
    if p > n - 3:
        raise PreconditionViolated(f"prime {p} exceeds n - 3 = {n - 3}")
    primitivity_shortcut(gens, n, p, witness=p_cycle_witness)
    if all(parity(g) == "even" for g in gens):
        return GroupClass("Alternating", "jordan", factorial(n) // 2)
    return GroupClass("Symmetric", "jordan", factorial(n))


def _closure_by_set(gens: Sequence[Permutation], n: int, cap: int) -> int:
    gens_arr = np.array([g.images for g in gens], dtype=np.int64)
    dtype = np.uint8 if n <= 256 else np.uint32
    ident = np.arange(n, dtype=dtype)
    seen = {ident.tobytes()}
    frontier = ident[None, :]
    while frontier.shape[0]:
        nxt = []
        for g in gens_arr:
            cand = frontier[:, g]
            for row in cand:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise OrderCapExceeded(f"group order exceeds cap {cap}")
                    nxt.append(row)
        frontier = np.array(nxt, dtype=dtype).reshape(-1, n)
    return len(seen)


def closure_order(gens: Sequence[Permutation], n: int, cap: int = DEFAULT_CLOSURE_CAP) -> int:
    """Exact order of ``<gens>`` by breadth-first closure; raises
    :class:`OrderCapExceeded` as soon as more than ``cap`` elements appear."""
    _check_gens(gens, n)
    if not gens:
        return 1
    if n <= _kernels.MAX_RANKED_DEGREE:
        gens_arr = np.array([g.images for g in gens], dtype=np.int64)
        order = _kernels.closure_ranked(gens_arr, cap)
        if order < 0:
            raise OrderCapExceeded(f"group order exceeds cap {cap}")
        return order
    return _closure_by_set(gens, n, cap)


def classify_by_closure(gens: Sequence[Permutation], n: int, cap: int = DEFAULT_CLOSURE_CAP) -> GroupClass:
    order = closure_order(gens, n, cap)
    full = factorial(n)
    if order == full:
        return GroupClass("Symmetric", "closure", order)
    if 2 * order == full:
        return GroupClass("Alternating", "closure", order)
    return GroupClass("Other", "closure", order)
