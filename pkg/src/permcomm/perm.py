"""Exact permutation arithmetic.

Permutations act on the left: ``(a * b)(x) == a(b(x))``, so the product
string ``"(1 2)(2 3)"`` applies ``(2 3)`` first and equals ``(1 2 3)``.

Points are 1-based on every external surface (parser, formatter, ``image``)
and 0-based in :attr:`Permutation.images`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CycleSyntaxError,
    DegreeMismatch,
    PointOutOfRange,
    RepeatedPointInCycle,
)

__all__ = [
    "Permutation",
    "CycleForm",
    "parse_cycles",
    "format_cycles",
    "compose",
    "invert",
    "commutator",
    "parity",
    "cycle_decomposition",
    "cycle",
]


class Permutation:
    """An immutable bijection of ``{1, ..., n}``.

    ``images[i]`` is the 0-based image of the 0-based point ``i``.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], *, check: bool = True):
        images = tuple(int(v) for v in images)
        if check:
            if not images:
                raise ValueError("degree must be >= 1")
            if sorted(images) != list(range(len(images))):
                raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        if n < 1:
            raise ValueError("degree must be >= 1")
        return cls(range(n), check=False)

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> Permutation:
        """Build from a 1-based image list, ``images[x-1] = perm(x)``."""
        return cls(v - 1 for v in images)

    @classmethod
    def from_array(cls, arr) -> Permutation:
        return cls(np.asarray(arr).tolist())

    @property
    def degree(self) -> int:
        return len(self.images)

    def image(self, x: int) -> int:
        """1-based image of the 1-based point ``x``."""
        return self.images[x - 1] + 1

    def __call__(self, x: int) -> int:
        return self.image(x)

    def to_array(self, dtype=np.int64) -> np.ndarray:
        return np.array(self.images, dtype=dtype)

    def one_based(self) -> list[int]:
        return [v + 1 for v in self.images]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __invert__(self) -> Permutation:
        return invert(self)

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else invert(self)
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = compose(result, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.images)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def __str__(self):
        return format_cycles(self)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, v in enumerate(self.images) if i != v)

    @property
    def fixed(self) -> frozenset[int]:
        return frozenset(i + 1 for i, v in enumerate(self.images) if i == v)

    def cycle_type(self) -> tuple[int, ...]:
        """Nontrivial cycle lengths in decreasing order."""
        return tuple(sorted((len(c) for c in _raw_cycles(self.images)), reverse=True))

    def is_cycle(self, length: int | None = None) -> bool:
        ct = self.cycle_type()
        return len(ct) == 1 and (length is None or ct[0] == length)

    def is_even(self) -> bool:
        return parity(self) == "even"

    def order(self) -> int:
        from math import lcm

        return lcm(1, *self.cycle_type())

    def conjugate_by(self, g: Permutation) -> Permutation:
        """Return ``g * self * g^-1``."""
        _check_degrees(self, g)
        out = [0] * self.degree
        for i, v in enumerate(self.images):
            out[g.images[i]] = g.images[v]
        return Permutation(out, check=False)


@dataclass(frozen=True)
class CycleForm:
    """Canonical disjoint-cycle form: each cycle starts at its minimum point,
    cycles sorted by that minimum, fixed points omitted. Points are 1-based."""

    degree: int
    cycles: tuple[tuple[int, ...], ...]

    def to_permutation(self) -> Permutation:
        images = list(range(self.degree))
        for c in self.cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                images[a - 1] = b - 1
        return Permutation(images)

    def __str__(self):
        if not self.cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)


def _check_degrees(*perms: Permutation) -> None:
    n = perms[0].degree
    for p in perms[1:]:
        if p.degree != n:
            raise DegreeMismatch(f"degrees differ: {n} vs {p.degree}")


def _raw_cycles(images: Sequence[int]) -> list[list[int]]:
    """0-based nontrivial cycles, each starting at its minimum point."""
    seen = [False] * len(images)
    out = []
    for start in range(len(images)):
        if seen[start] or images[start] == start:
            continue
        c = [start]
        seen[start] = True
        x = images[start]
        while x != start:
            seen[x] = True
            c.append(x)
            x = images[x]
        out.append(c)
    return out


_CYCLE_RE = re.compile(r"\(\s*(\d+(?:(?:\s*,\s*|\s+)\d+)+)\s*\)")
_SPLIT_RE = re.compile(r"\s*,\s*|\s+")


def cycle(points: Sequence[int], degree: int) -> Permutation:
    """The cycle ``(points[0] points[1] ...)`` of the given degree (1-based)."""
    images = list(range(degree))
    if len(set(points)) != len(points):
        raise RepeatedPointInCycle(f"repeated point in cycle {tuple(points)}")
    for x in points:
        if not 1 <= x <= degree:
            raise PointOutOfRange(f"point {x} outside 1..{degree}")
    for a, b in zip(points, list(points[1:]) + list(points[:1])):
        images[a - 1] = b - 1
    return Permutation(images, check=False)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse a product of cycles; the rightmost cycle is applied first.

    >>> parse_cycles("(1 2)(2 3)", 3) == parse_cycles("(1 2 3)", 3)
    True
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    s = text.strip()
    if re.fullmatch(r"\(\s*\)", s):
        return Permutation.identity(degree)
    pos = 0
    cycles = []
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(s, pos)
        if m is None:
            raise CycleSyntaxError(f"malformed cycle text at offset {pos}: {text!r}")
        cycles.append([int(t) for t in _SPLIT_RE.split(m.group(1))])
        pos = m.end()
    if not cycles:
        raise CycleSyntaxError(f"empty cycle text: {text!r}")
    result = Permutation.identity(degree)
    for pts in cycles:
        for x in pts:
            if x < 1 or x > degree:
                raise PointOutOfRange(f"point {x} outside 1..{degree}")
        result = compose(result, cycle(pts, degree))
    return result


def format_cycles(a: Permutation) -> str:
    return str(cycle_decomposition(a)[0])


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a * b``, i.e. ``x -> a(b(x))``."""
    _check_degrees(a, b)
    ai = a.images
    return Permutation([ai[v] for v in b.images], check=False)


def invert(a: Permutation) -> Permutation:
    out = [0] * a.degree
    for i, v in enumerate(a.images):
        out[v] = i
    return Permutation(out, check=False)


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """``[a, b] = a b a^-1 b^-1``."""
    _check_degrees(a, b)
    return compose(compose(a, b), compose(invert(a), invert(b)))


def parity(a: Permutation) -> str:
    transpositions = sum(len(c) - 1 for c in _raw_cycles(a.images))
    return "odd" if transpositions % 2 else "even"


def cycle_decomposition(a: Permutation) -> tuple[CycleForm, frozenset[int], frozenset[int]]:
    """Canonical cycle form, support and fixed-point set (all 1-based)."""
    raw = _raw_cycles(a.images)
    form = CycleForm(a.degree, tuple(tuple(x + 1 for x in c) for c in raw))
    support = frozenset(x + 1 for c in raw for x in c)
    fixed = frozenset(range(1, a.degree + 1)) - support
    return form, support, fixed
