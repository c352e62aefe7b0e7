"""Independent reference computations on plain tuples.

Nothing here imports the package: permutations are tuples of 0-based images,
groups are closed by breadth-first search, and the skew identity is checked
by direct search over powers. Slow, but small enough to audit by eye.
"""

from __future__ import annotations

from itertools import permutations
from math import gcd


def mul(a, b):
    """x -> b[a[x]] (apply a first)."""
    return tuple(b[x] for x in a)


def inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def conj(g, h):
    return mul(mul(inv(h), g), h)


def ident(n):
    return tuple(range(n))


def cycle(points, n):
    a = list(range(n))
    for i, x in enumerate(points):
        a[x] = points[(i + 1) % len(points)]
    return tuple(a)


def order(a):
    k, x, e = 1, a, ident(len(a))
    while x != e:
        x = mul(x, a)
        k += 1
    return k


def closure(gens):
    n = len(gens[0])
    seen = {ident(n)}
    frontier = [ident(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def table_from_elements(elems):
    """Multiplication table with the identity moved to index 0."""
    elems = sorted(elems)
    e = ident(len(elems[0]))
    elems.remove(e)
    elems = [e] + elems
    idx = {g: i for i, g in enumerate(elems)}
    return [[idx[mul(a, b)] for b in elems] for a in elems]


def cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def quaternion_table():
    # elements (s, k): s * i^k style encoding via 2x2 complex matrices would be overkill;
    # use the unit quaternions {+-1, +-i, +-j, +-k} with explicit rules
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {("1", x): x for x in "1ijk"}
    base.update({(x, "1"): x for x in "1ijk"})
    base.update({("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
                 ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
                 ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"})

    def split(x):
        return (x[1:], -1) if x.startswith("-") else (x, 1)

    def m(a, b):
        (ua, sa), (ub, sb) = split(a), split(b)
        r = base[(ua, ub)]
        ur, sr = split(r)
        s = sa * sb * sr
        return ur if s == 1 else "-" + ur

    return [[names.index(m(a, b)) for b in names] for a in names]


def is_skew(T, s):
    """Whether s is a skew-morphism of the group with table T (identity index 0)."""
    n = len(T)
    if s[0] != 0:
        return False
    k = order(tuple(s))
    powers = [ident(n)]
    for _ in range(1, k):
        powers.append(tuple(s[x] for x in powers[-1]))
    for g in range(n):
        # need some e with s(gh) = s(g) * s^e(h) for all h
        ok = any(all(s[T[g][h]] == T[s[g]][powers[e][h]] for h in range(n)) for e in range(k))
        if not ok:
            return False
    return True


def skew_morphisms(T):
    n = len(T)
    return [(0,) + p for p in permutations(range(1, n)) if is_skew(T, (0,) + p)]


def legendre_sqrt(a, p):
    """All x in 0..p-1 with x^2 = a (mod p)."""
    return [x for x in range(p) if (x * x - a) % p == 0]


def delta_set(p):
    half = (p - 1) // 2

    def lam(a):
        a %= p
        return a if a <= half else p - a

    out = {1}
    if p % 8 in (1, 7):
        out |= {lam(x) for x in legendre_sqrt(2, p)}
    if p % 12 in (1, 11):
        out |= {lam(x) for x in legendre_sqrt(3, p)}
    if p % 5 in (1, 4):
        inv2 = pow(2, -1, p)
        out |= {lam((-1 + x) * inv2) for x in legendre_sqrt(5, p)}
    return sorted(out)


def projective_line_action(m, p):
    """Right action of a 2x2 matrix on [x:1] (index x) and [1:0] (index p)."""
    (a, b), (c, d) = m
    pts = [(x, 1) for x in range(p)] + [(1, 0)]

    def index(x, y):
        x, y = x % p, y % p
        if y == 0:
            return p
        return x * pow(y, -1, p) % p

    return tuple(index(x * a + y * c, x * b + y * d) for x, y in pts)


def psl2_elements(p):
    return closure([projective_line_action([[1, 1], [0, 1]], p), projective_line_action([[0, 1], [-1, 0]], p)])


def lcm(a, b):
    return a * b // gcd(a, b)
