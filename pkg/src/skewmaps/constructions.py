"""Explicit families of regular Cayley maps on (characteristically) simple groups.

Each construction builds a concrete permutation realization and hands it to
``make_map``; nothing bypasses map validation. Realizations:

* inner-automorphism skew products on the regular representation (P, Q
  families and the one- and two-coordinate balanced maps),
* ``T wr C_l`` on ``l`` blocks when sigma is the block rotation,
* untwisting: ``A:<Inn(a)>`` is realized as ``<A, a*c>`` where ``c`` is a cycle
  on fresh points whose order is the order of the automorphism.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Sequence


from . import atlas
from .atlas import CayleyTable, FieldElem, cayley_table, matrix_to_perm, regular_rep, sqrt_mod, translation
from .groups import (PermGroup, generates, is_primitive, is_transitive, random_element)
from .maps import RegularCayleyMap, direct_product, make_map
from .perm import Permutation, embed, restrict
from .skew import Kind, MixedDecomposition, classify, cyclic_core_exponent, decompose_mixed

logger = logging.getLogger(__name__)


class ConstructionFailed(AssertionError):
    """A construction check failed; ``report`` holds the witnesses."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


def _check_prime_at_least_5(p: int) -> None:
    if p < 5 or not atlas.is_prime(p):
        raise ValueError(f"p = {p} must be a prime at least 5")


# ---------------------------------------------------------------------------
# the Delta(p) sets and the P / Q families


def lambda_(a: int, p: int) -> int:
    """The member of {a, -a} lying in 1..(p-1)/2."""
    a %= p
    if a == 0:
        raise ValueError("lambda is defined on nonzero residues")
    return a if a <= (p - 1) // 2 else p - a


@dataclass(frozen=True)
class DeltaSet:
    p: int
    members: frozenset[int]

    @property
    def complement(self) -> list[int]:
        return [d for d in range(1, (self.p - 1) // 2 + 1) if d not in self.members]


def delta_set(p: int) -> DeltaSet:
    _check_prime_at_least_5(p)
    members = {1}
    if p % 8 in (1, 7):
        members.add(lambda_(int(sqrt_mod(2, p)), p))
    if p % 12 in (1, 11):
        members.add(lambda_(int(sqrt_mod(3, p)), p))
    if p % 5 in (1, 4):
        root = sqrt_mod(5, p)
        half = FieldElem(2, p).inverse()
        for r in (root, -root):
            members.add(lambda_(int((FieldElem(-1, p) + r) * half), p))
    return DeltaSet(p, frozenset(members))


@dataclass(frozen=True)
class ConicSolution:
    p: int
    delta: int
    alpha: FieldElem
    beta: FieldElem


def solve_conic(p: int, delta: int) -> ConicSolution:
    """Lexicographically least (alpha, beta) with a^2 + b^2 - a + delta*b + 1 = 0."""
    for a in range(p):
        for b in range(p):
            if (a * a + b * b - a + delta * b + 1) % p == 0:
                return ConicSolution(p, delta, FieldElem(a, p), FieldElem(b, p))
    raise ConstructionFailed(f"conic has no solution for p={p}, delta={delta}")


def r_delta_matrix(p: int, delta: int) -> list[list[int]]:
    sol = solve_conic(p, delta)
    a, b = int(sol.alpha), int(sol.beta)
    return [[a, b], [(b + delta) % p, (1 - a) % p]]


S_MATRIX = [[0, 1], [-1, 0]]
R_UNIPOTENT = [[1, 1], [0, 1]]


def s_c_matrix(p: int, c: int) -> list[list[int]]:
    return [[0, int(-FieldElem(c, p).inverse())], [c % p, 0]]


@dataclass
class InnerMap:
    """A balanced map M(G:<Inn(r)>, Inn(r), s) with its regular realization."""
    map: RegularCayleyMap
    r: Permutation
    s: Permutation
    table: CayleyTable
    kind: Kind


def inner_automorphism_perm(tab: CayleyTable, r: Permutation) -> Permutation:
    """Conjugation x -> x^r as a permutation of element indices."""
    return Permutation([tab.index_of(e ^ r) for e in tab.elements])


def balanced_inner_map(T: PermGroup, r: Permutation, s: Permutation, tab: CayleyTable | None = None,
                       run_classify: bool = True) -> InnerMap:
    """Realize M(T:<Inn(r)>, Inn(r), L_s) on the elements of T."""
    if tab is None:
        tab = cayley_table(T)
    sigma = inner_automorphism_perm(tab, r)
    iota = translation(tab, tab.index_of(s))
    LG = regular_rep(tab)
    X = PermGroup(list(LG.generators) + [sigma], tab.n, order_hint=tab.n * sigma.order())
    m = make_map(X, LG, sigma, iota)
    kind = classify(X, LG) if run_classify else Kind.BALANCED
    return InnerMap(m, r, s, tab, kind)


def _psl2_pair(p: int, r_mat, s_mat) -> tuple[PermGroup, Permutation, Permutation]:
    T = atlas.psl2(p)
    r, s = matrix_to_perm(r_mat, p), matrix_to_perm(s_mat, p)
    if not generates(T, [r, s]):
        raise ConstructionFailed(f"<r, s> is a proper subgroup of PSL(2,{p})",
                                 {"r": str(r), "s": str(s)})
    return T, r, s


def map_P(p: int, delta: int, tab: CayleyTable | None = None) -> InnerMap:
    _check_prime_at_least_5(p)
    if delta not in delta_set(p).complement:
        raise ValueError(f"delta = {delta} is not in F' \\ Delta({p})")
    T, r, s = _psl2_pair(p, r_delta_matrix(p, delta), S_MATRIX)
    if r.order() != 3:
        raise ConstructionFailed(f"r_delta has order {r.order()}, expected 3", {"r": str(r)})
    return balanced_inner_map(T, r, s, tab)


def map_Q(p: int, c: int, tab: CayleyTable | None = None) -> InnerMap:
    _check_prime_at_least_5(p)
    if not 1 <= c <= (p - 1) // 2:
        raise ValueError(f"c = {c} outside 1..{(p - 1) // 2}")
    T, r, s = _psl2_pair(p, R_UNIPOTENT, s_c_matrix(p, c))
    if r.order() != p or s.order() != 2:
        raise ConstructionFailed("unexpected element orders", {"r": str(r), "s": str(s)})
    return balanced_inner_map(T, r, s, tab)


@dataclass
class BalancedClassification:
    p: int
    valency: int
    pair_count: int
    orbit_count: int
    family_orbits: list[int]
    representatives: list[tuple[Permutation, Permutation]]
    details: dict = field(default_factory=dict)

    @property
    def bijective(self) -> bool:
        return sorted(self.family_orbits) == list(range(self.orbit_count))


def classify_balanced_psl2(p: int, valency: int) -> BalancedClassification:
    """Generating (valency, 2) pairs of PSL(2,p) up to PGL(2,p), matched to the P or Q family."""
    _check_prime_at_least_5(p)
    if p > 13:
        raise ValueError("desk cap: p <= 13")
    if valency not in (3, p):
        raise ValueError("valency must be 3 or p")
    T = atlas.psl2(p)
    aut = atlas.pgl2(p)
    elems = list(T.elements())
    rs = [g for g in elems if g.order() == valency]
    invs = [g for g in elems if g.order() == 2]
    pairs = [(r, s) for r in rs for s in invs if generates(T, [r, s])]
    index = {(r.key, s.key): k for k, (r, s) in enumerate(pairs)}
    orbit_of = [-1] * len(pairs)
    reps = []
    for k in range(len(pairs)):
        if orbit_of[k] >= 0:
            continue
        oid = len(reps)
        orbit_of[k] = oid
        stack, members = [k], [k]
        while stack:
            r, s = pairs[stack.pop()]
            for a in aut.generators:
                j = index[((r ^ a).key, (s ^ a).key)]
                if orbit_of[j] < 0:
                    orbit_of[j] = oid
                    stack.append(j)
                    members.append(j)
        reps.append((len(members), min(members, key=lambda j: (pairs[j][0].array.tolist(),
                                                               pairs[j][1].array.tolist()))))
    family_orbits = []
    if valency == 3:
        params = delta_set(p).complement
        mats = [r_delta_matrix(p, d) for d in params]
        fam = [(matrix_to_perm(m, p), matrix_to_perm(S_MATRIX, p)) for m in mats]
    else:
        params = list(range(1, (p - 1) // 2 + 1))
        fam = [(matrix_to_perm(R_UNIPOTENT, p), matrix_to_perm(s_c_matrix(p, c), p)) for c in params]
    for r, s in fam:
        k = index.get((r.key, s.key))
        if k is None:
            raise ConstructionFailed("family member is not a generating pair", {"r": str(r), "s": str(s)})
        family_orbits.append(orbit_of[k])
    details = {"order_v_elements": len(rs), "involutions": len(invs), "aut_order": aut.order(),
               "orbit_sizes": sorted({size for size, _ in reps}), "family_params": params,
               "formula_count": len(params)}
    return BalancedClassification(p, valency, len(pairs), len(reps), family_orbits,
                                  [pairs[j] for _, j in reps], details)


# ---------------------------------------------------------------------------
# A_{m+1} generated by a full cycle and (1,2)(3,4)


@dataclass
class Am1Result:
    m: int
    generated: bool
    a_word: Permutation
    order: int


def lemma_am1(m: int) -> Am1Result:
    if m % 2 or m < 6 or m > 40:
        raise ValueError("m must be even with 6 <= m <= 40")
    n = m + 1
    sigma = Permutation.from_cycles([list(range(n))], n)
    iota = Permutation.from_cycles([[0, 1], [2, 3]], n)
    a = Permutation.identity(n)
    for k in range(1, m, 2):
        a = a * (iota ^ (sigma ** k))
    order = PermGroup([sigma, iota], n).order()
    return Am1Result(m, order == math.factorial(n) // 2, a, order)


def simple_am_map(m: int) -> RegularCayleyMap:
    """(A_{m+1}, A_m, (1..m+1), (1,2)(3,4)) with A_m the stabilizer of the last point."""
    n = m + 1
    X = atlas.alternating(n)
    G = PermGroup([embed(g, n) for g in atlas.alternating(m).generators], n)
    sigma = Permutation.from_cycles([list(range(n))], n)
    iota = Permutation.from_cycles([[0, 1], [2, 3]], n)
    return make_map(X, G, sigma, iota)


# ---------------------------------------------------------------------------
# search helpers for generating data


def _prime(n: int) -> bool:
    return n > 1 and atlas.is_prime(n)


def find_generating_pair(T: PermGroup, seed: int = 0, attempts: int = 20000,
                         prime: int | None = None) -> tuple[Permutation, Permutation]:
    """An involution t and an element r of prime order with <t, r> = T."""
    rng = random.Random(seed)
    invs, rs = [], []
    for _ in range(attempts):
        g = random_element(T, rng)
        k = g.order()
        if k % 2 == 0 and len(invs) < 40:
            invs.append(g ** (k // 2))
        for q in ([prime] if prime else [q for q in range(3, k + 1) if k % q == 0 and _prime(q)]):
            if k % q == 0 and len(rs) < 40:
                rs.append(g ** (k // q))
        if invs and rs:
            t, r = invs[-1], rs[-1]
            if generates(T, [t, r]):
                return t, r
    raise ConstructionFailed("no generating (involution, prime-order) pair found; raise attempts")


def find_involution_triple(T: PermGroup, seed: int = 0, attempts: int = 20000) -> list[Permutation]:
    """Three involutions generating T."""
    rng = random.Random(seed)
    pool: list[Permutation] = []
    for _ in range(attempts):
        g = random_element(T, rng)
        k = g.order()
        if k % 2:
            continue
        pool.append(g ** (k // 2))
        if len(pool) >= 3:
            triple = pool[-3:]
            if generates(T, triple):
                return triple
    raise ConstructionFailed("no generating involution triple found; raise attempts")


# ---------------------------------------------------------------------------
# balanced maps on T^l


@dataclass
class BalancedResult:
    T_name: str
    l: int
    realization: str
    sigma: Permutation
    iota: Permutation
    G: PermGroup
    X: PermGroup | None
    closure_order: int
    verified: bool
    map: RegularCayleyMap | None = None
    details: dict = field(default_factory=dict)


def _closure_order(iota: Permutation, sigma: Permutation, degree: int) -> int:
    """Order of <iota^<sigma>>."""
    return PermGroup([iota ^ (sigma ** k) for k in range(sigma.order())], degree).order()


def balanced_construction(T: PermGroup, l: int, data: dict | None = None, seed: int = 0,
                          regular_cap: int = 5000) -> BalancedResult:
    """Balanced map on T^l: sigma an automorphism of T^l, iota an involution of T^l.

    ``data`` may carry ``t`` and ``r`` (l <= 3) or ``x`` (three involutions, l >= 4);
    otherwise they are searched for with ``seed``.
    """
    if l < 1:
        raise ValueError("l must be positive")
    data = dict(data or {})
    name = T.name or f"T{T.order()}"
    if l <= 3:
        if "t" not in data or "r" not in data:
            data["t"], data["r"] = find_generating_pair(T, seed)
        t, r = data["t"], data["r"]
        if t.order() != 2 or not _prime(r.order()) or not generates(T, [t, r]):
            raise ValueError("data must be an involution and a prime-order element generating T")
        if l <= 2 and T.order() ** l <= regular_cap:
            return _balanced_regular(T, l, t, r, name)
        return _balanced_untwisted(T, l, t, r, name)
    if "x" not in data:
        data["x"] = find_involution_triple(T, seed)
    xs = list(data["x"])
    if len(xs) != 3 or any(x.order() != 2 for x in xs) or not generates(T, xs):
        raise ValueError("data must hold three involutions generating T")
    return _balanced_wreath(T, l, xs, name)


def _balanced_regular(T: PermGroup, l: int, t: Permutation, r: Permutation, name: str) -> BalancedResult:
    if l == 1:
        im = balanced_inner_map(T, r, t)
        m = im.map
        closure = _closure_order(m.iota, m.sigma, m.X.degree)
        return BalancedResult(name, 1, "regular", m.sigma, m.iota, m.G, m.X, closure,
                              closure == T.order() and im.kind is Kind.BALANCED, m,
                              {"sigma_order": m.sigma.order(), "X_order": m.X.order(), "kind": im.kind.value})
    k = T.degree
    G = atlas.direct_power(T, 2)
    tab = cayley_table(G)
    rot = atlas.coordinate_rotation(k, 2)
    r1 = atlas.coordinate_embed(r, 1, 2)
    # sigma = Inn(phi_1(r)) followed by the coordinate swap
    sigma = Permutation([tab.index_of((e ^ r1) ^ rot) for e in tab.elements])
    iota_el = atlas.coordinate_embed(t, 1, 2) * atlas.coordinate_embed(t, 2, 2)
    iota = translation(tab, tab.index_of(iota_el))
    LG = regular_rep(tab)
    X = PermGroup(list(LG.generators) + [sigma], tab.n, order_hint=tab.n * sigma.order())
    m = make_map(X, LG, sigma, iota)
    closure = _closure_order(iota, sigma, tab.n)
    kind = classify(X, LG)
    return BalancedResult(name, 2, "regular", sigma, iota, LG, X, closure,
                          closure == tab.n and kind is Kind.BALANCED, m,
                          {"sigma_order": sigma.order(), "X_order": X.order(), "kind": kind.value})


def _balanced_untwisted(T: PermGroup, l: int, t: Permutation, r: Permutation, name: str) -> BalancedResult:
    """sigma = Inn(phi_1(r)) * rotation, realized as phi_1(r)*rot*c with c on fresh points."""
    k = T.degree
    w = k * l
    g = atlas.coordinate_embed(r, 1, l) * atlas.coordinate_rotation(k, l)
    inner = g ** l                  # lies in T^l, which has trivial center
    sigma_order = l * inner.order()
    n = w + sigma_order
    cyc = Permutation.from_cycles([list(range(w, n))], n)
    sigma = embed(g, n) * cyc
    G = PermGroup([embed(x, n) for x in atlas.direct_power(T, l).generators], n)
    iota = embed(atlas.coordinate_embed(t, 1, l) * atlas.coordinate_embed(t, 2, l), n)
    X = PermGroup(list(G.generators) + [sigma], n)
    if X.order() != G.order() * sigma_order:
        raise ConstructionFailed("untwisted realization is not faithful", {"X_order": X.order()})
    m = make_map(X, G, sigma, iota)
    closure = _closure_order(iota, sigma, n)
    kind = classify(X, G)
    return BalancedResult(name, l, "untwisted", sigma, iota, G, X, closure,
                          closure == G.order() and kind is Kind.BALANCED, m,
                          {"sigma_order": sigma_order, "X_order": X.order(), "kind": kind.value,
                           "fresh_points": sigma_order})


def _balanced_wreath(T: PermGroup, l: int, xs: Sequence[Permutation], name: str) -> BalancedResult:
    """T wr C_l on l blocks: sigma is the block rotation, iota = phi_1(x1) phi_2(x2) phi_3(x3)."""
    k = T.degree
    n = k * l
    sigma = atlas.coordinate_rotation(k, l)
    iota = Permutation.identity(n)
    for i, x in enumerate(xs, start=1):
        iota = iota * atlas.coordinate_embed(x, i, l)
    G = atlas.direct_power(T, l)
    X = PermGroup(list(G.generators) + [sigma], n)
    closure = _closure_order(iota, sigma, n)
    m = make_map(X, G, sigma, iota)
    kind = classify(X, G)
    return BalancedResult(name, l, "wreath", sigma, iota, G, X, closure,
                          closure == G.order() and kind is Kind.BALANCED, m,
                          {"sigma_order": l, "X_order": X.order(), "kind": kind.value})


# ---------------------------------------------------------------------------
# mixed maps


@dataclass
class MixedResult:
    map: RegularCayleyMap
    kind: Kind
    sigma_order: int
    decomposition: MixedDecomposition | None
    checks: dict[str, bool]


def mixed_product_map(m: int, l: int, seed: int = 0, decompose: bool = True) -> MixedResult:
    """Balanced map on A_m^(l-1) (block rotation) times the simple map on A_m inside A_{m+1}."""
    if m % 2 or m < 6 or l < 5:
        raise ValueError("need m even, m >= 6, l >= 5")
    if math.gcd(l - 1, m + 1) != 1:
        raise ValueError(f"gcd(l-1, m+1) = {math.gcd(l - 1, m + 1)} != 1")
    if m > 10 or l > 6:
        raise ValueError("desk cap: m <= 10, l <= 6")
    Am = atlas.alternating(m)
    b = balanced_construction(Am, l - 1, seed=seed)
    m2 = simple_am_map(m)
    prod = direct_product(b.map, m2)
    kind = classify(prod.X, prod.G)
    sigma_order = prod.sigma.order()
    checks = {"balanced factor verified": b.verified,
              "<sigma> = <sigma1> x <sigma2>": sigma_order == (l - 1) * (m + 1),
              "kind Mixed": kind is Kind.MIXED,
              "sigma core-free": cyclic_core_exponent(prod.X, prod.sigma) == sigma_order}
    dec = decompose_mixed(prod.X, prod.G, prod.sigma) if decompose and kind is Kind.MIXED else None
    if not all(checks.values()):
        raise ConstructionFailed(f"mixed product checks failed: {[k for k, v in checks.items() if not v]}", checks)
    return MixedResult(prod, kind, sigma_order, dec, checks)


@dataclass
class MixedExampleResult:
    map: RegularCayleyMap
    kind: Kind
    decomposition: MixedDecomposition
    checks: dict[str, bool]
    layout: dict[str, list[int]]


def mixed_example(n: int = 3, p: int = 5) -> MixedExampleResult:
    """Indecomposable mixed map on A_m x A_m, m = n + p.

    Points: Omega (m), fresh cycle for Inn(r1) (p), Omega-bar (m + 1).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    if not atlas.is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p <= n or (p + 1) % n:
        raise ValueError("need p > n and p = -1 mod n")
    m = n + p
    omega = list(range(m))
    fresh = list(range(m, m + p))
    bar = list(range(m + p, 2 * m + p + 1))
    N = 2 * m + p + 1

    def cyc(*cycles):
        return Permutation.from_cycles([list(c) for c in cycles], N)

    r1 = cyc(omega[:p])
    s1 = cyc(*[(i, p + i) for i in range(n)], (n, n + 1))
    g1 = cyc(omega[p:p + n])
    c = cyc(fresh)
    r2 = cyc(bar)
    s2 = cyc((bar[0], bar[1]), (bar[2], bar[3]))
    sigma1 = r1 * c * g1                 # Inn(r1) untwisted as r1 * c, then g1
    sigma = sigma1 * r2
    iota = s1 * s2

    A_omega = PermGroup([embed(g, N) for g in atlas.alternating(m).generators], N)
    A_bar = PermGroup([embed(g, N, m + p) for g in atlas.alternating(m + 1).generators], N)
    A_bar_minus = PermGroup([embed(g, N, m + p + 1) for g in atlas.alternating(m).generators], N)
    G = PermGroup(list(A_omega.generators) + list(A_bar_minus.generators), N)
    X = PermGroup(list(A_omega.generators) + [c] + list(A_bar.generators), N)

    checks: dict[str, bool] = {}
    H = PermGroup([restrict(r1, omega), restrict(s1, omega)], m)
    checks["step1: <r1,s1> transitive"] = is_transitive(H)
    checks["step1: <r1,s1> primitive"] = is_primitive(H)
    checks["step1: <r1,s1> = A_Omega"] = H.order() == math.factorial(m) // 2
    X1 = PermGroup(list(A_omega.generators) + [c], N)
    checks["step1: X1 = <sigma1, iota1>"] = PermGroup([sigma1, s1], N).order() == X1.order()
    checks["step2: <sigma, iota> = X"] = generates(X, [sigma, iota])
    checks["step2: G meets <sigma> trivially"] = all(
        not G.contains(sigma ** (sigma.order() // q)) for q in range(2, sigma.order() + 1)
        if sigma.order() % q == 0 and atlas.is_prime(q))
    checks["step2: |G||sigma| = |X|"] = G.order() * sigma.order() == X.order()
    sp = sigma ** p
    checks["step3: sigma^p not in A_Omega"] = not A_omega.contains(sp)
    checks["step3: sigma^p not in A_Omega-bar"] = not A_bar.contains(sp)
    # the same facts read off the two direct-factor quotients
    checks["step3: sigma^p nontrivial mod A_Omega"] = not restrict(sp, fresh + bar).is_identity()
    checks["step3: sigma^p nontrivial mod A_Omega-bar"] = not restrict(sp, omega + fresh).is_identity()
    checks["sigma core-free"] = cyclic_core_exponent(X, sigma) == sigma.order()
    if not all(checks.values()):
        raise ConstructionFailed(f"checks failed: {[k for k, v in checks.items() if not v]}", checks)
    mp = make_map(X, G, sigma, iota)
    kind = classify(X, G)
    if kind is not Kind.MIXED:
        raise ConstructionFailed(f"classified {kind.value}, expected Mixed", checks)
    dec = decompose_mixed(X, G, sigma)
    layout = {"omega": omega, "fresh": fresh, "omega_bar": bar}
    return MixedExampleResult(mp, kind, dec, checks, layout)
