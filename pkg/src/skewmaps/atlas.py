"""Named groups and actions, mod-p arithmetic, and Cayley tables."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .groups import CapExceeded, PermGroup, random_element
from .perm import Permutation, embed, parse, restrict


class SelfCheckFailed(RuntimeError):
    pass


class GroupSpecError(ValueError):
    pass


# ---------------------------------------------------------------------------
# mod-p arithmetic


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _require_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.value
        return other

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._coerce(other) - self.value, self.p)

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __int__(self) -> int:
        return self.value


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> FieldElem | None:
    """Smaller square root of ``a`` modulo an odd prime (Tonelli-Shanks)."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return FieldElem(0, p)
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return FieldElem(min(r, p - r), p)


def primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


# ---------------------------------------------------------------------------
# projective line and PSL(2,p)


@dataclass(frozen=True)
class ProjectivePoint:
    """Normalized [x:1], or [1:0] for the point at infinity."""
    x: int
    y: int
    p: int

    @classmethod
    def normalize(cls, x: int, y: int, p: int) -> "ProjectivePoint":
        x, y = x % p, y % p
        if y:
            return cls(x * pow(y, -1, p) % p, 1, p)
        if x == 0:
            raise ValueError("[0:0] is not a projective point")
        return cls(1, 0, p)

    @property
    def index(self) -> int:
        """0..p-1 for [x:1], p for infinity (the last point)."""
        return self.x if self.y else self.p


def projective_points(p: int) -> list[ProjectivePoint]:
    return [ProjectivePoint(x, 1, p) for x in range(p)] + [ProjectivePoint(1, 0, p)]


def matrix_to_perm(m: Sequence[Sequence[int]], p: int) -> Permutation:
    """Right action ``[x:y] -> [x:y]*m`` on the p+1 points of the projective line."""
    _require_odd_prime(p)
    (a, b), (c, d) = m
    if (a * d - b * c) % p == 0:
        raise ValueError("singular matrix")
    images = []
    for pt in projective_points(p):
        images.append(ProjectivePoint.normalize(pt.x * a + pt.y * c, pt.x * b + pt.y * d, p).index)
    return Permutation(images)


def psl2(p: int) -> PermGroup:
    _require_odd_prime(p)
    G = PermGroup([matrix_to_perm([[1, 1], [0, 1]], p), matrix_to_perm([[0, 1], [-1, 0]], p)],
                  name=f"PSL(2,{p})")
    _self_check(G, p * (p * p - 1) // 2)
    return G


def pgl2(p: int) -> PermGroup:
    _require_odd_prime(p)
    w = primitive_root(p)
    G = PermGroup([matrix_to_perm([[1, 1], [0, 1]], p), matrix_to_perm([[0, 1], [-1, 0]], p),
                   matrix_to_perm([[w, 0], [0, 1]], p)], name=f"PGL(2,{p})")
    _self_check(G, p * (p * p - 1))
    return G


# ---------------------------------------------------------------------------
# symmetric, alternating, cyclic and small groups


def _self_check(G: PermGroup, expected: int) -> PermGroup:
    if G.order() != expected:
        raise SelfCheckFailed(f"{G.name}: chain order {G.order()} != expected {expected}")
    return G


def symmetric(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens = [Permutation.from_cycles([[0, 1]], n), Permutation.from_cycles([list(range(n))], n)]
    return PermGroup(gens, n, name=f"S({n})")


def alternating(n: int) -> PermGroup:
    gens = []
    if n >= 3:
        cyc = list(range(n)) if n % 2 else list(range(1, n))
        gens = [Permutation.from_cycles([[0, 1, 2]], n), Permutation.from_cycles([cyc], n)]
    return PermGroup(gens, n, name=f"A({n})")


def cyclic(n: int) -> PermGroup:
    return PermGroup([Permutation.from_cycles([list(range(n))], n)], n, name=f"C({n})")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n on n points (n >= 3)."""
    refl = Permutation([(-i) % n for i in range(n)])
    return PermGroup([Permutation.from_cycles([list(range(n))], n), refl], n, name=f"D({n})")


def quaternion8() -> PermGroup:
    """Q8 in its regular representation on 8 points."""
    # elements +-1, +-i, +-j, +-k encoded as (sign, unit) with unit in 1,i,j,k
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    idx = {e: n for n, e in enumerate(elems)}

    def right_mult(g):
        out = []
        for s, u in elems:
            t, w = units[(u, g[1])]
            out.append(idx[(s * g[0] * t, w)])
        return Permutation(out)

    return PermGroup([right_mult((1, "i")), right_mult((1, "j"))], 8, name="Q8")


# ---------------------------------------------------------------------------
# Mathieu groups

# M23 fixes the point at infinity of PL(23) inside M24 = <x+1, 2x, -1/x, d>, where
# d(x) = x^3/9 on nonzero squares and 9x^3 on non-squares (Conway's generator).
# The two-element generating sets below were found by a seeded search inside that
# stabilizer (points 0..22 of PL(23) written as 1..23); M22 fixes point 23.
# Constructors re-verify the chain order before returning.
_M23_GENERATORS = (
    "(1,21)(4,13)(5,15)(8,12)(11,16)(14,20)(18,22)(19,23)",
    "(1,3)(2,19,17,8,7,14,5,21,4,12,6,9,22,15)(10,23,18,13,16,11,20)",
)
_M22_GENERATORS = (
    "(2,5)(3,17)(4,18)(6,16)(7,12)(10,21)(11,15)(13,20)",
    "(1,4,22,15,5,17,6,3)(2,9,14,12,7,21,8,19)(10,20,16,18)(11,13)",
)
M23_ORDER = 10200960
M22_ORDER = 443520


def mathieu23() -> PermGroup:
    G = PermGroup([parse(t, 23) for t in _M23_GENERATORS], name="M23")
    return _self_check(G, M23_ORDER)


def mathieu22() -> PermGroup:
    G = PermGroup([parse(t, 22) for t in _M22_GENERATORS], name="M22")
    return _self_check(G, M22_ORDER)


def mathieu24_from_projective_line() -> PermGroup:
    """Independent construction of M24 on PL(23) (point at infinity is 24)."""
    p, inf = 23, 23
    squares = {x * x % p for x in range(1, p)}

    def perm(f):
        return Permutation([f(x) for x in range(24)])

    def d(x):
        if x in (0, inf):
            return x
        return x ** 3 * pow(9, -1, p) % p if x in squares else 9 * x ** 3 % p

    return PermGroup([
        perm(lambda x: inf if x == inf else (x + 1) % p),
        perm(lambda x: inf if x == inf else 2 * x % p),
        perm(lambda x: 0 if x == inf else inf if x == 0 else -pow(x, -1, p) % p),
        perm(d),
    ], name="M24")


# ---------------------------------------------------------------------------
# direct powers


def direct_power(T: PermGroup, l: int) -> PermGroup:
    """T^l acting on l disjoint copies of T's points; coordinate i on block i."""
    n = T.degree * l
    gens = [coordinate_embed(t, i, l) for i in range(1, l + 1) for t in T.generators]
    name = f"{T.name}^{l}" if T.name else None
    return PermGroup(gens, n, name=name)


def coordinate_embed(t: Permutation, i: int, l: int) -> Permutation:
    """The copy of t acting on coordinate block i (1-based) of T^l."""
    if not 1 <= i <= l:
        raise IndexError(f"coordinate {i} outside 1..{l}")
    return embed(t, t.degree * l, offset=(i - 1) * t.degree)


def coordinate_rotation(block_degree: int, l: int) -> Permutation:
    """Block l-cycle sending coordinate i to coordinate i+1."""
    n = block_degree * l
    return Permutation([(x + block_degree) % n for x in range(n)])


def project(g: Permutation, i: int, block_degree: int) -> Permutation:
    """Component of g on coordinate block i (g must preserve that block)."""
    l = g.degree // block_degree
    if not 1 <= i <= l:
        raise IndexError(f"coordinate {i} outside 1..{l}")
    return restrict(g, range((i - 1) * block_degree, i * block_degree))


def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    n = A.degree + B.degree
    gens = [embed(a, n) for a in A.generators] + [embed(b, n, A.degree) for b in B.generators]
    return PermGroup(gens, n)


# ---------------------------------------------------------------------------
# Cayley tables


@dataclass
class CayleyTable:
    """Multiplication table with the identity at index 0.

    ``table[a, b]`` is the index of ``elements[a] * elements[b]``.
    """
    table: np.ndarray
    elements: list[Permutation] | None = None
    generators: list[int] = field(default_factory=list)
    name: str | None = None

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table)
        n = self.table.shape[0]
        if self.table.shape != (n, n) or not (self.table[0] == np.arange(n)).all() \
                or not (self.table[:, 0] == np.arange(n)).all():
            raise ValueError("index 0 must be a two-sided identity")
        self.inverse = np.argmin(self.table, axis=1)
        if not (self.table[np.arange(n), self.inverse] == 0).all():
            raise ValueError("table has elements without inverses")
        self._index = None

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def index_of(self, g: Permutation) -> int:
        if self._index is None:
            self._index = {e.key: i for i, e in enumerate(self.elements)}
        return self._index[g.key]

    def check_associative(self, samples: int = 20000, seed: int = 0) -> bool:
        """Exhaustive for n <= 200, sampled above."""
        T, n = self.table, self.n
        if n <= 200:
            left = T[T, :]                      # (ab)c indexed [a, b, c]
            right = T[:, T]                     # a(bc) indexed [a, b, c]
            return bool((left == right).all())
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        return bool((T[T[a, b], c] == T[a, T[b, c]]).all())

    @classmethod
    def from_elements(cls, elements: Sequence[Permutation], name: str | None = None) -> "CayleyTable":
        """Table of an explicit list of elements closed under products (identity first)."""
        elements = list(elements)
        idx = {e.key: i for i, e in enumerate(elements)}
        n = len(elements)
        T = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                T[i, j] = idx[(a * b).key]
        return cls(T, elements, name=name)


def cayley_table(G: PermGroup, cap: int = 100_000) -> CayleyTable:
    """Elements in first-seen breadth-first order from the generators, identity first."""
    order = G.order()
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds table cap {cap}")
    gens = [g.array for g in G.generators]
    ident = G.identity().array
    elems = [ident]
    index = {ident.tobytes(): 0}
    parent = [(-1, -1)]
    right = [np.empty(order, dtype=np.int64) for _ in gens]
    pos = 0
    while pos < len(elems):
        a = elems[pos]
        for k, s in enumerate(gens):
            c = s[a]
            key = c.tobytes()
            j = index.get(key)
            if j is None:
                j = len(elems)
                index[key] = j
                elems.append(c)
                parent.append((pos, k))
            right[k][pos] = j
        pos += 1
    if len(elems) != order:
        raise AssertionError("breadth-first closure disagrees with the chain order")
    T = np.empty((order, order), dtype=np.int32 if order > 32767 else np.int16)
    T[:, 0] = np.arange(order)
    for j in range(1, order):
        p, k = parent[j]
        T[:, j] = right[k][T[:, p]]
    gen_idx = [index[s.tobytes()] for s in gens]
    tab = CayleyTable(T, [Permutation._raw(e) for e in elems], gen_idx, name=G.name)
    tab._index = {k: v for k, v in index.items()}
    return tab


def translation(tab: CayleyTable, g: int) -> Permutation:
    """L_g: h -> g*h on element indices."""
    return Permutation._raw(tab.table[g].astype(np.int64))


def regular_rep(tab: CayleyTable) -> PermGroup:
    """Left regular representation. Under function composition L_g o L_h = L_gh."""
    gens = tab.generators or list(range(1, tab.n))
    return PermGroup([translation(tab, g) for g in gens], tab.n,
                     name=f"Reg({tab.name})" if tab.name else None, order_hint=tab.n)


# ---------------------------------------------------------------------------
# GroupSpec grammar


_SPEC_TOKEN = re.compile(r"\s*(PSL|PGL|Reg|M22|M23|Q8|[ASCD]|\d+|[(),^])")


def parse_group_spec(text: str) -> PermGroup:
    """``A(n) | S(n) | C(n) | D(n) | Q8 | PSL(2,p) | PGL(2,p) | M22 | M23 | SPEC^l | Reg(SPEC)``.

    The parentheses may be dropped for the one-letter families: ``A5``, ``C12``.
    """
    tokens = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        m = _SPEC_TOKEN.match(s, pos)
        if not m:
            raise GroupSpecError(f"bad group spec {text!r} at {s[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    stream = list(reversed(tokens))

    def take(expect: str | None = None) -> str:
        if not stream:
            raise GroupSpecError(f"truncated group spec {text!r}")
        t = stream.pop()
        if expect is not None and t != expect:
            raise GroupSpecError(f"expected {expect!r} in {text!r}, got {t!r}")
        return t

    def number() -> int:
        t = take()
        if not t.isdigit():
            raise GroupSpecError(f"expected a number in {text!r}, got {t!r}")
        return int(t)

    def atom() -> PermGroup:
        t = take()
        if t in ("A", "S", "C", "D"):
            if stream and stream[-1].isdigit():
                n = number()
            else:
                take("(")
                n = number()
                take(")")
            return {"A": alternating, "S": symmetric, "C": cyclic, "D": dihedral}[t](n)
        if t in ("PSL", "PGL"):
            take("(")
            if number() != 2:
                raise GroupSpecError("only dimension 2 is supported")
            take(",")
            p = number()
            take(")")
            return psl2(p) if t == "PSL" else pgl2(p)
        if t == "M22":
            return mathieu22()
        if t == "M23":
            return mathieu23()
        if t == "Q8":
            return quaternion8()
        if t == "Reg":
            take("(")
            inner = expr()
            take(")")
            R = regular_rep(cayley_table(inner))
            R.name = f"Reg({inner.name})"
            return R
        raise GroupSpecError(f"unknown group {t!r} in {text!r}")

    def expr() -> PermGroup:
        G = atom()
        while stream and stream[-1] == "^":
            take("^")
            G = direct_power(G, number())
        return G

    G = expr()
    if stream:
        raise GroupSpecError(f"trailing text in group spec {text!r}")
    G.name = "".join(tokens)
    return G


def find_a5_in_psl2_11(seed: int = 0, attempts: int = 5000) -> PermGroup:
    """An A5 subgroup of PSL(2,11), from a random (2,3,5)-generating pair."""
    X = psl2(11)
    rng = random.Random(seed)
    for _ in range(attempts):
        a = random_element(X, rng)
        b = random_element(X, rng)
        if a.order() == 2 and b.order() == 3 and (a * b).order() == 5:
            H = PermGroup([a, b], X.degree, name="A(5)")
            if H.order() == 60:
                return H
    raise RuntimeError("no A5 found; increase attempts")


def embed_subgroup(X: PermGroup, G: PermGroup, seed: int = 0) -> PermGroup:
    """Realize G inside X for the pairs the CLI accepts."""
    if G.degree <= X.degree:
        gens = [embed(g, X.degree) for g in G.generators]
        if all(X.contains(g) for g in gens):
            return PermGroup(gens, X.degree, name=G.name)
    if X.name == "PSL(2,11)" and G.order() == 60:
        return find_a5_in_psl2_11(seed)
    raise GroupSpecError(f"cannot embed {G.name} in {X.name}")
