"""Skew-morphisms, skew-product groups and their classification.

A skew-morphism of a group G is an identity-fixing permutation ``s`` of G with
an integer power function ``pi`` such that ``s(g*h) == s(g) * s^pi(g)(h)``.
Power-function values are stored as residues in ``1..|s|`` so that the identity
element (and every automorphism) has power 1.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np

from .atlas import CayleyTable, cayley_table, regular_rep, translation
from .groups import (CapExceeded, PermGroup,
                     core_of_subgroup, derived_subgroup)
from .perm import Permutation, compose


class SkewRejected(ValueError):
    """The permutation violates the skew-morphism identity; ``witness`` is (g, h)."""

    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class FactorizationError(ValueError):
    pass


class Kind(enum.Enum):
    BALANCED = "Balanced"
    SIMPLE = "SimpleKind"
    MIXED = "Mixed"


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class SkewMorphism:
    base: CayleyTable
    sigma: Permutation
    pi: np.ndarray
    exhaustive: bool = True

    @property
    def order(self) -> int:
        return self.sigma.order()

    def __call__(self, g: int) -> int:
        return self.sigma(g)

    def power(self, g: int) -> int:
        return int(self.pi[g])

    def is_automorphism(self) -> bool:
        return bool((self.pi % self.order == 1 % self.order).all())

    def to_json(self, group_spec: str, kind: Kind | None = None, core_order: int | None = None,
                cap: int = 5000) -> dict:
        out = {"group_spec": group_spec, "order_sigma": self.order}
        if self.base.n <= cap:
            out["images"] = [int(x) for x in self.sigma.array]
            out["pi"] = [int(x) for x in self.pi]
        out["kind"] = kind.value if kind else None
        out["core_order"] = core_order
        return out


def _powers(sigma: Permutation) -> np.ndarray:
    """Row k holds the image table of sigma^k, for 0 <= k < |sigma|."""
    k = sigma.order()
    a = sigma.array.astype(np.int64)
    rows = np.empty((k, a.shape[0]), dtype=np.int64)
    rows[0] = np.arange(a.shape[0])
    for i in range(1, k):
        rows[i] = a[rows[i - 1]]
    return rows


def verify_skew(base: CayleyTable, sigma: Permutation, exhaustive_cap: int = 5000,
                samples: int = 100_000, seed: int = 0) -> SkewMorphism:
    """Check the skew identity and recover the power function.

    Exhaustive over all pairs when the group has at most ``exhaustive_cap``
    elements; otherwise every g is checked against a fixed-seed sample of h.
    """
    n = base.n
    if sigma.degree != n:
        raise ValueError(f"permutation of degree {sigma.degree} on a group of order {n}")
    if sigma(0) != 0:
        raise SkewRejected("sigma does not fix the identity", (0,))
    T = base.table.astype(np.int64)
    inv = base.inverse
    s = sigma.array.astype(np.int64)
    P = _powers(sigma)
    order = P.shape[0]
    exhaustive = n <= exhaustive_cap
    if exhaustive:
        cols = np.arange(n)
    else:
        rng = np.random.default_rng(seed)
        m = max(8, samples // n)
        cols = np.unique(np.concatenate([[1], rng.integers(1, n, size=m)]))
    Pc = P[:, cols]
    lookup = {Pc[k].tobytes(): k for k in range(order)}
    pi = np.empty(n, dtype=np.int64)
    for g in range(n):
        # sigma^k(h) must equal sigma(g)^-1 * sigma(g*h)
        t = T[inv[s[g]], s[T[g, cols]]]
        k = lookup.get(t.tobytes())
        if k is None:
            cand = np.ones(order, dtype=bool)
            for j, h in enumerate(cols):
                cand &= Pc[:, j] == t[j]
                if not cand.any():
                    raise SkewRejected(f"no power of sigma works for g={g} at h={h}", (g, int(h)))
            raise AssertionError("unreachable: candidate powers left but no row matched")
        pi[g] = k if k else order
    return SkewMorphism(base, sigma, pi, exhaustive)


# ---------------------------------------------------------------------------
# skew-product groups


@dataclass
class SkewProduct:
    X: PermGroup
    LG: PermGroup
    sigma_perm: Permutation
    kind: Kind
    core: PermGroup
    sm: SkewMorphism

    def as_factorization(self) -> tuple[PermGroup, PermGroup, Permutation, CayleyTable]:
        """Data for rebuilding the skew-morphism with ``from_factorization``.

        Products in this library apply the left factor first, the opposite of
        the composition in which ``s o L_g = L_s(g) o s^pi(g)``. Under that
        product ``g -> L_{g^-1}`` is an isomorphism onto L_G and the relation
        becomes ``y * L_{g^-1} = L_{s(g)^-1} * y^pi(g)`` with ``y = s^-1``.
        """
        base = self.sm.base
        elems = [translation(base, int(base.inverse[g])) for g in range(base.n)]
        tab = CayleyTable(base.table.copy(), elems, list(base.generators))
        return self.X, self.LG, self.sigma_perm.inverse(), tab


def classify_core(core_order: int, G_order: int) -> Kind:
    if core_order == G_order:
        return Kind.BALANCED
    if core_order == 1:
        return Kind.SIMPLE
    return Kind.MIXED


def skew_product(sm: SkewMorphism, samples: int = 200, seed: int = 0) -> SkewProduct:
    """X = <L_G, sigma> on the elements of G, with its core and kind."""
    base = sm.base
    n = base.n
    LG = regular_rep(base)
    sig = sm.sigma
    X = PermGroup(list(LG.generators) + [sig], n, order_hint=n * sm.order)
    if X.order() != n * sm.order:
        raise AssertionError(f"|X| = {X.order()} but |G||sigma| = {n * sm.order}")
    rng = random.Random(seed)
    picks = range(n) if n <= samples else [rng.randrange(n) for _ in range(samples)]
    for g in picks:
        Lg = translation(base, g)
        lhs = compose(Lg, sig)                                  # sigma o L_g
        rhs = compose(sig ** sm.power(g), translation(base, sig(g)))  # L_sigma(g) o sigma^pi(g)
        if lhs != rhs:
            raise AssertionError(f"commuting relation fails at g={g}")
    # <sigma> is the full stabilizer of the identity, hence core-free
    if X.stabilizer(0).order() != sm.order:
        raise AssertionError("<sigma> is not the stabilizer of the identity")
    core = core_of_subgroup(X, LG)
    return SkewProduct(X, LG, sig, classify_core(core.order(), n), core, sm)


# ---------------------------------------------------------------------------
# factorizations


def cyclic_core_exponent(X: PermGroup, y: Permutation) -> int:
    """Least d dividing |y| with <y^d> normal in X; the core of <y> is <y^d>."""
    k = y.order()
    for d in sorted(d for d in range(1, k + 1) if k % d == 0):
        z = y ** d
        if z.is_identity():
            return k
        powers = {(z ** e).key for e in range(k // d)}
        if all((z ^ x).key in powers for x in X.generators):
            return d
    return k


class LazySkewMorphism:
    """Skew-morphism of a large group evaluated on demand from a factorization."""

    def __init__(self, X: PermGroup, G: PermGroup, y: Permutation):
        self.X, self.G, self.y = X, G, y
        self.order = y.order()
        self._yinv = [y ** (-i) for i in range(self.order)]
        self._eval = lru_cache(maxsize=65536)(self._factor)

    def _factor(self, key: bytes) -> tuple[Permutation, int]:
        g = Permutation(np.frombuffer(key, dtype=self.y.array.dtype), check=False)
        z = self.y * g
        for i, yi in enumerate(self._yinv):
            w = z * yi
            if self.G.contains(w):
                return w, (i if i else self.order)
        raise AssertionError("no factorization found")

    def image(self, g: Permutation) -> Permutation:
        return self._eval(g.key)[0]

    def power(self, g: Permutation) -> int:
        return self._eval(g.key)[1]

    def check_axiom(self, samples: int = 1000, seed: int = 0) -> bool:
        """Sampled check of s(gh) = s(g) s^pi(g)(h)."""
        rng = random.Random(seed)
        for _ in range(samples):
            g = self.G.random_element(rng)
            h = self.G.random_element(rng)
            lhs = self.image(g * h)
            sh = h
            for _ in range(self.power(g) % self.order):
                sh = self.image(sh)
            if lhs != self.image(g) * sh:
                return False
        return True


def from_factorization(X: PermGroup, G: PermGroup, y: Permutation, table: CayleyTable | None = None,
                       cap: int = 5000) -> SkewMorphism | LazySkewMorphism:
    """Skew-morphism of G defined by ``y*g == s(g) * y^pi(g)`` in X = G<y>."""
    for g in G.generators:
        if not X.contains(g):
            raise FactorizationError(f"G is not a subgroup of X: {g} not in X")
    if not X.contains(y):
        raise FactorizationError("y is not in X")
    k = y.order()
    if G.order() * k != X.order():
        raise FactorizationError(f"|G|*|y| = {G.order() * k} differs from |X| = {X.order()}")
    for q in _prime_factors(k):
        if G.contains(y ** (k // q)):
            raise FactorizationError(f"<y> meets G nontrivially (y^{k // q} lies in G)")
    if cyclic_core_exponent(X, y) != k:
        raise FactorizationError("<y> is not core-free in X")
    if G.order() > cap:
        return LazySkewMorphism(X, G, y)
    if table is None:
        table = cayley_table(G)
    yinv = [y ** (-i) for i in range(k)]
    n = table.n
    images = np.empty(n, dtype=np.int64)
    pi = np.empty(n, dtype=np.int64)
    for idx, g in enumerate(table.elements):
        z = y * g
        for i, yi in enumerate(yinv):
            w = z * yi
            if G.contains(w):
                images[idx] = table.index_of(w)
                pi[idx] = i if i else k
                break
        else:
            raise AssertionError("element without factorization")
    sm = verify_skew(table, Permutation(images))
    if not (sm.pi % sm.order == pi % sm.order).all():
        raise AssertionError("power function from the factorization disagrees with verify_skew")
    return sm


# ---------------------------------------------------------------------------
# classification


def classify(X: PermGroup, G: PermGroup) -> Kind:
    core = core_of_subgroup(X, G)
    return classify_core(core.order(), G.order())


class MixedDecompositionError(AssertionError):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


@dataclass
class MixedDecomposition:
    i: int
    G1: PermGroup
    X1: PermGroup
    X2: PermGroup
    g_part: Permutation
    tau: Permutation
    tau_order: int
    checks: dict[str, bool] = field(default_factory=dict)


def decompose_mixed(X: PermGroup, G: PermGroup, sigma: Permutation) -> MixedDecomposition:
    """Split a mixed skew product as (G1:<sigma^i>) x X2 with sigma^j = g*tau.

    X2 is computed as the pointwise stabilizer, inside X', of the points moved
    by G1. Such elements always centralize G1; the order check below confirms
    they form the whole centralizer complement.
    """
    core = core_of_subgroup(X, G)
    kind = classify_core(core.order(), G.order())
    if kind is not Kind.MIXED:
        raise ValueError(f"skew product is {kind.value}, not Mixed")
    G1 = core
    n = sigma.order()
    report: dict = {"core_order": G1.order(), "sigma_order": n}

    i = n
    X1 = G1
    for d in sorted(d for d in range(1, n + 1) if n % d == 0):
        H = PermGroup(list(G1.generators) + [sigma ** d], X.degree)
        if H.is_normal_in(X):
            i, X1 = d, H
            break
    j = n // i
    Xd = derived_subgroup(X)
    support = sorted({p for g in G1.generators for p in g.support()})
    X2 = Xd.pointwise_stabilizer(support)
    checks: dict[str, bool] = {}
    checks["derived = G1 x X2"] = X2.order() * G1.order() == Xd.order()
    checks["X = X1 x X2 (orders)"] = X1.order() * X2.order() == X.order()
    checks["X1, X2 commute"] = all((a * b) == (b * a) for a in X1.generators for b in X2.generators)
    checks["X1 normal"] = X1.is_normal_in(X)
    checks["X2 normal"] = X2.is_normal_in(X)
    sj = sigma ** j
    checks["sigma^j in derived"] = Xd.contains(sj)
    # g is the element of G1 matching sigma^j on G1's support
    ch = G1.chain_with_base(support)
    residue, lvl = ch.strip(sj.array)
    tau = Permutation._raw(residue)
    g_part = sj * ~tau
    checks["g in G1"] = G1.contains(g_part)
    checks["tau in X2"] = X2.contains(tau)
    checks["g^(sigma^i) = g"] = (g_part ^ (sigma ** i)) == g_part
    tau_order = tau.order()
    checks["|g| divides |tau|"] = tau_order % g_part.order() == 0
    checks["|tau| = i"] = tau_order == i
    checks["<sigma> = <sigma^i> x <g tau> (orders)"] = (sigma ** i).order() * (g_part * tau).order() == n \
        and math.gcd((sigma ** i).order(), (g_part * tau).order()) == 1
    checks["i proper divisor"] = i < n
    checks["X2 perfect"] = X2.is_perfect()
    report.update({"i": i, "j": j, "X1_order": X1.order(), "X2_order": X2.order(),
                   "tau_order": tau_order, "g_order": g_part.order(), "checks": checks})
    if not all(checks.values()):
        failed = [k for k, v in checks.items() if not v]
        raise MixedDecompositionError(f"side conditions failed: {failed}", report)
    return MixedDecomposition(i, G1, X1, X2, g_part, tau, tau_order, checks)


# ---------------------------------------------------------------------------
# tiny enumeration


def brute_force_skew(base: CayleyTable) -> list[SkewMorphism]:
    """All skew-morphisms by filtering every identity-fixing permutation."""
    n = base.n
    out = []
    for rest in permutations(range(1, n)):
        try:
            out.append(verify_skew(base, Permutation((0,) + rest)))
        except SkewRejected:
            pass
    return out


def enumerate_skew_tiny(base: CayleyTable, cap: int = 12) -> list[SkewMorphism]:
    """All skew-morphisms of a group of order at most ``cap`` by backtracking.

    A partial assignment is pruned when, for some g, the targets
    ``s(g)^-1 s(gh)`` force incompatible powers on already closed cycles.
    """
    n = base.n
    if n > cap:
        raise CapExceeded(f"group order {n} exceeds tiny-enumeration cap {cap}")
    T = base.table.tolist()
    inv = [int(x) for x in base.inverse]
    img = [-1] * n
    img[0] = 0
    used = [False] * n
    used[0] = True
    results = []

    def chain(h: int, target: int) -> tuple[int | None, int | None]:
        """(distance to target, closed cycle length) along the partial orbit of h."""
        d, x, dist = 0, h, None
        while True:
            if x == target and dist is None:
                dist = d
            y = img[x]
            if y < 0:
                return dist, None
            d += 1
            if y == h:
                return dist, d
            x = y

    def consistent() -> bool:
        for g in range(n):
            sg = img[g]
            if sg < 0:
                continue
            congr: list[tuple[int, int]] = []
            for h in range(n):
                gh = T[g][h]
                if img[gh] < 0:
                    continue
                t = T[inv[sg]][img[gh]]
                dist, length = chain(h, t)
                if length is None:
                    continue
                if dist is None:
                    return False
                for a, m in congr:
                    if (dist - a) % math.gcd(m, length):
                        return False
                congr.append((dist, length))
        return True

    def extend(x: int) -> None:
        if x == n:
            try:
                results.append(verify_skew(base, Permutation(img)))
            except SkewRejected:
                pass
            return
        for v in range(1, n):
            if used[v]:
                continue
            img[x] = v
            used[v] = True
            if consistent():
                extend(x + 1)
            used[v] = False
            img[x] = -1

    extend(1)
    return results
