"""Permutations of a finite point set.

Points are 0-based internally and 1-based in the disjoint-cycle text format.
Products act on the right: ``x^(g*h) = (x^g)^h``, so ``g * h`` applies ``g``
first. Conjugation is ``g ^ h == ~h * g * h``.
"""

from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Sequence

import numpy as np


class DegreeMismatch(ValueError):
    pass


class CycleSyntaxError(ValueError):
    pass


def dtype_for(degree: int) -> np.dtype:
    if degree <= 256:
        return np.dtype(np.uint8)
    if degree <= 65536:
        return np.dtype(np.uint16)
    return np.dtype(np.int32)


class Permutation:
    """An immutable permutation of ``range(degree)``."""

    __slots__ = ("_a", "_key", "_hash")

    def __init__(self, images: Sequence[int] | np.ndarray, check: bool = True):
        a = np.asarray(images)
        n = a.shape[0]
        if check:
            if a.ndim != 1 or n == 0:
                raise ValueError("images must be a non-empty 1-d sequence")
            seen = np.zeros(n, dtype=bool)
            if a.min() < 0 or a.max() >= n:
                raise ValueError("image out of range")
            seen[a] = True
            if not seen.all():
                raise ValueError("images do not form a bijection")
        a = a.astype(dtype_for(n), copy=True)
        a.flags.writeable = False
        self._a = a
        self._key = None
        self._hash = None

    @classmethod
    def _raw(cls, a: np.ndarray) -> "Permutation":
        """Wrap an array known to be a valid permutation (no copy if dtype fits)."""
        p = cls.__new__(cls)
        want = dtype_for(a.shape[0])
        if a.dtype != want:
            a = a.astype(want)
        elif a.flags.writeable:
            a = a.copy()
        a.flags.writeable = False
        p._a = a
        p._key = None
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(np.arange(degree, dtype=dtype_for(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles."""
        a = np.arange(degree, dtype=np.int64)
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if x < 0 or x >= degree:
                    raise ValueError(f"point {x + 1} outside degree {degree}")
                if x in seen:
                    raise CycleSyntaxError(f"point {x + 1} occurs in more than one cycle")
                seen.add(x)
            for i, x in enumerate(cyc):
                a[x] = cyc[(i + 1) % len(cyc)]
        return cls._raw(a)

    # -- basic data --------------------------------------------------------

    @property
    def degree(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only image table, ``array[x] == x^g``."""
        return self._a

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self._a.tobytes()
        return self._key

    def __call__(self, x: int) -> int:
        return int(self._a[x])

    def __len__(self) -> int:
        return self.degree

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return (self.degree, self._a.tolist()) < (other.degree, other._a.tolist())

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._a)
        inv[self._a] = np.arange(self.degree, dtype=self._a.dtype)
        return Permutation._raw(inv)

    def __pow__(self, k: int) -> "Permutation":
        return power(self, k)

    def __xor__(self, h: "Permutation") -> "Permutation":
        return conjugate(self, h)

    def conjugate(self, h: "Permutation") -> "Permutation":
        return conjugate(self, h)

    def is_identity(self) -> bool:
        return bool((self._a == np.arange(self.degree)).all())

    def support(self) -> list[int]:
        return np.nonzero(self._a != np.arange(self.degree))[0].tolist()

    def first_moved(self) -> int | None:
        moved = np.nonzero(self._a != np.arange(self.degree))[0]
        return int(moved[0]) if moved.size else None

    def cycles(self) -> list[list[int]]:
        """Nontrivial cycles (0-based), each starting at its least point."""
        a = self._a.tolist()
        seen = [False] * len(a)
        out = []
        for x in range(len(a)):
            if seen[x] or a[x] == x:
                continue
            cyc = [x]
            seen[x] = True
            y = a[x]
            while y != x:
                seen[y] = True
                cyc.append(y)
                y = a[y]
            out.append(cyc)
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return order(self)

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def embed(self, new_degree: int, offset: int = 0) -> "Permutation":
        return embed(self, new_degree, offset)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """The product that moves ``x`` to ``(x^a)^b``."""
    if a.degree != b.degree:
        raise DegreeMismatch(f"cannot compose degree {a.degree} with degree {b.degree}")
    return Permutation._raw(b._a[a._a])


def inverse(g: Permutation) -> Permutation:
    return g.inverse()


def conjugate(g: Permutation, h: Permutation) -> Permutation:
    """``h^-1 * g * h``; maps ``x^h`` to ``(x^g)^h``."""
    if g.degree != h.degree:
        raise DegreeMismatch(f"cannot conjugate degree {g.degree} by degree {h.degree}")
    out = np.empty_like(h._a)
    out[h._a] = h._a[g._a]
    return Permutation._raw(out)


def power(g: Permutation, k: int) -> Permutation:
    if k < 0:
        g, k = g.inverse(), -k
    result = np.arange(g.degree, dtype=g._a.dtype)
    base = g._a
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return Permutation._raw(result)


def order(g: Permutation) -> int:
    return reduce(math.lcm, (len(c) for c in g.cycles()), 1)


def embed(g: Permutation, new_degree: int, offset: int = 0) -> Permutation:
    """Pad ``g`` with fixed points; ``offset`` shifts its points upward."""
    if new_degree < g.degree + offset:
        raise DegreeMismatch(f"cannot embed degree {g.degree} at offset {offset} into {new_degree}")
    a = np.arange(new_degree, dtype=np.int64)
    a[offset:offset + g.degree] = g._a.astype(np.int64) + offset
    return Permutation._raw(a)


def direct_sum(a: Permutation, b: Permutation) -> Permutation:
    """``a`` on the first points, ``b`` on the following ones."""
    return Permutation._raw(np.concatenate([a._a.astype(np.int64), b._a.astype(np.int64) + a.degree]))


def restrict(g: Permutation, points: Sequence[int]) -> Permutation:
    """Action of ``g`` on an invariant block of points, renumbered 0..len-1."""
    pts = list(points)
    index = {p: i for i, p in enumerate(pts)}
    try:
        return Permutation([index[int(g._a[p])] for p in pts])
    except KeyError:
        raise ValueError("points are not invariant under the permutation") from None


def format_cycles(g: Permutation) -> str:
    cycles = g.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycles)


_CYCLE_TEXT = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse disjoint-cycle text into 1-based cycles."""
    s = "".join(text.split())
    if not s:
        raise CycleSyntaxError("empty cycle text")
    pos = 0
    cycles = []
    for m in _CYCLE_TEXT.finditer(s):
        if m.start() != pos:
            raise CycleSyntaxError(f"unexpected text {s[pos:m.start()]!r}")
        pos = m.end()
        body = m.group(1)
        if body == "":
            continue
        try:
            cyc = [int(t) for t in body.split(",")]
        except ValueError:
            raise CycleSyntaxError(f"malformed cycle ({body})") from None
        if any(x < 1 for x in cyc):
            raise CycleSyntaxError(f"points are 1-based, got ({body})")
        if len(set(cyc)) != len(cyc):
            raise CycleSyntaxError(f"repeated point in cycle ({body})")
        cycles.append(cyc)
    if pos != len(s):
        raise CycleSyntaxError(f"unexpected text {s[pos:]!r}")
    return cycles


def parse(text: str, degree: int | None = None) -> Permutation:
    """Parse ``"(1,2)(3,4)"``; the degree defaults to the largest point named."""
    cycles = parse_cycles(text)
    largest = max((max(c) for c in cycles), default=1)
    if degree is None:
        degree = largest
    elif largest > degree:
        raise CycleSyntaxError(f"point {largest} exceeds degree {degree}")
    return Permutation.from_cycles([[x - 1 for x in c] for c in cycles], degree)


def parse_list(text: str, degree: int | None = None) -> list[Permutation]:
    """Parse a comma/semicolon separated generator list such as ``"(1,2,3); (1,2)"``."""
    parts = [p for p in re.split(r"(?<=\))\s*[;,]\s*(?=\()", text.strip()) if p]
    perms_cycles = [parse_cycles(p) for p in parts]
    if degree is None:
        degree = max((max(c) for cs in perms_cycles for c in cs), default=1)
    return [parse(p, degree) for p in parts]
