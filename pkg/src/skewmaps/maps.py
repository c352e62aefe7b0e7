"""Regular Cayley maps as triples (X, sigma, iota) and their censuses."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import atlas
from .groups import (PermGroup, centralizer, conjugacy_class, conjugating_element, find_element_of_order,
                     generates)
from .perm import Permutation, direct_sum, embed, format_cycles, parse

logger = logging.getLogger(__name__)


class MapInvalid(ValueError):
    """The triple violates a map invariant; ``reasons`` names each failure."""

    def __init__(self, reasons: list[str]):
        super().__init__("invalid map: " + ", ".join(reasons))
        self.reasons = reasons


class MapRejected(ValueError):
    pass


class CensusMismatch(AssertionError):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


@dataclass(eq=False)
class RegularCayleyMap:
    X: PermGroup
    G: PermGroup
    sigma: Permutation
    iota: Permutation

    @cached_property
    def vertex_valency(self) -> int:
        return self.sigma.order()

    @cached_property
    def face_valency(self) -> int:
        return (self.sigma * self.iota).order()

    @property
    def n_vertices(self) -> int:
        return self.X.order() // self.vertex_valency

    @property
    def n_edges(self) -> int:
        return self.X.order() // 2

    @property
    def n_faces(self) -> int:
        return self.X.order() // self.face_valency

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def summary(self) -> dict:
        return {"vertex_valency": self.vertex_valency, "face_valency": self.face_valency,
                "genus": self.genus, "n_vertices": self.n_vertices, "n_edges": self.n_edges,
                "n_faces": self.n_faces}


def _meets_trivially(G: PermGroup, sigma: Permutation) -> bool:
    k = sigma.order()
    primes = [q for q in range(2, k + 1) if k % q == 0 and all(q % r for r in range(2, q))]
    return not any(G.contains(sigma ** (k // q)) for q in primes)


def make_map(X: PermGroup, G: PermGroup, sigma: Permutation, iota: Permutation) -> RegularCayleyMap:
    """Validate (X, sigma, iota) as a regular Cayley map with vertex group G."""
    reasons = []
    if iota.is_identity() or not (iota * iota).is_identity():
        reasons.append("iota-not-involution")
    if not (X.contains(sigma) and X.contains(iota)) or not generates(X, [sigma, iota]):
        reasons.append("not-generating")
    if not G.is_subgroup_of(X) or G.order() * sigma.order() != X.order() or not _meets_trivially(G, sigma):
        reasons.append("not-complementary")
    if reasons:
        raise MapInvalid(reasons)
    m = RegularCayleyMap(X, G, sigma, iota)
    if m.euler_characteristic % 2 or m.genus < 0:
        raise AssertionError(f"Euler characteristic {m.euler_characteristic} is not admissible")
    return m


def face_valency(m: RegularCayleyMap) -> int:
    return m.face_valency


def genus(m: RegularCayleyMap) -> int:
    return m.genus


def isomorphic(m1: RegularCayleyMap, m2: RegularCayleyMap, aut: PermGroup) -> bool:
    """Whether some a in ``aut`` conjugates (sigma1, iota1) to (sigma2, iota2).

    ``aut`` must contain X and normalize it. Sigma is transported first; the
    remaining freedom is the centralizer of sigma1.
    """
    X = m1.X
    if not (m2.X.is_subgroup_of(X) and X.is_subgroup_of(m2.X)):
        raise ValueError("maps live on different groups")
    if not all(X.contains(g ^ a) for g in X.generators for a in aut.generators):
        raise ValueError("automorphism group does not normalize X")
    a0 = conjugating_element(aut, m1.sigma, m2.sigma)
    if a0 is None:
        return False
    C = centralizer(aut, m1.sigma)
    for c in C.elements():
        if (m1.iota ^ (c * a0)) == m2.iota:
            return True
    return False


def direct_product(m1: RegularCayleyMap, m2: RegularCayleyMap) -> RegularCayleyMap:
    """Map (<s,i>, (s1,s2), (i1,i2)) with vertex group G1 x G2."""
    n = m1.X.degree + m2.X.degree
    sigma = direct_sum(m1.sigma, m2.sigma)
    iota = direct_sum(m1.iota, m2.iota)
    X = PermGroup([sigma, iota], n)
    G = PermGroup([embed(g, n) for g in m1.G.generators]
                  + [embed(g, n, m1.X.degree) for g in m2.G.generators], n)
    try:
        return make_map(X, G, sigma, iota)
    except MapInvalid as exc:
        detail = []
        if "not-complementary" in exc.reasons:
            if not G.is_subgroup_of(X):
                detail.append("G1 x G2 is not inside <sigma, iota>")
            if G.order() * sigma.order() != X.order():
                detail.append(f"|G1 x G2| * |sigma| = {G.order() * sigma.order()} but |X| = {X.order()}")
        raise MapRejected("; ".join(exc.reasons + detail)) from exc


# ---------------------------------------------------------------------------
# JSON


def map_to_json(m: RegularCayleyMap) -> dict:
    return {"degree": m.X.degree,
            "X": [format_cycles(g) for g in m.X.generators],
            "G": [format_cycles(g) for g in m.G.generators],
            "sigma": format_cycles(m.sigma), "iota": format_cycles(m.iota),
            **m.summary()}


def map_from_json(data: dict) -> RegularCayleyMap:
    n = data["degree"]
    X = PermGroup([parse(t, n) for t in data["X"]], n)
    G = PermGroup([parse(t, n) for t in data["G"]], n)
    return make_map(X, G, parse(data["sigma"], n), parse(data["iota"], n))


# ---------------------------------------------------------------------------
# census

# published face valency rows; the A5 entry 16 is not an element order of PSL(2,11)
REFERENCE_FACE_VALENCIES = {
    "A5": {3: 1, 5: 2, 16: 1, 11: 1},
    "M22": {4: 4, 5: 12, 6: 28, 7: 32, 8: 32, 11: 68, 14: 64, 15: 56, 23: 34},
}
REFERENCE_COUNTS = {"A5": 5, "M22": 330}


@dataclass
class MapCensus:
    group_spec: str
    automorphism_group_spec: str
    class_count: int
    representatives: list[tuple[Permutation, Permutation]]
    valency_multiset: dict[int, int]
    X: PermGroup | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        reps = []
        for s, i in self.representatives:
            fv = (s * i).order()
            vv = s.order()
            xo = self.X.order()
            chi = xo // vv - xo // 2 + xo // fv
            reps.append({"sigma": format_cycles(s), "iota": format_cycles(i), "vertex_valency": vv,
                         "face_valency": fv, "genus": (2 - chi) // 2})
        return {"group": self.group_spec, "aut_group": self.automorphism_group_spec,
                "class_count": self.class_count, "reps": reps,
                "valency_multiset": {str(k): v for k, v in sorted(self.valency_multiset.items())},
                "details": self.details}


def format_multiset(ms: dict[int, int]) -> str:
    return ", ".join(f"{k}^({v})" if v > 1 else f"{k}" for k, v in sorted(ms.items()))


def face_valency_tsv(censuses: Sequence[MapCensus]) -> str:
    lines = ["group\tmaps\tface valency\treference maps\treference face valency"]
    for c in censuses:
        ref = REFERENCE_FACE_VALENCIES.get(c.group_spec)
        lines.append("\t".join([c.group_spec, str(c.class_count), format_multiset(c.valency_multiset),
                                str(REFERENCE_COUNTS.get(c.group_spec, "")),
                                format_multiset(ref) if ref else ""]))
    return "\n".join(lines) + "\n"


def compare_face_valencies(c: MapCensus) -> dict:
    """Entry-by-entry comparison of a derived multiset with the reference row."""
    ref = REFERENCE_FACE_VALENCIES[c.group_spec]
    derived = c.valency_multiset
    keys = sorted(set(ref) | set(derived))
    rows = {k: (ref.get(k, 0), derived.get(k, 0)) for k in keys}
    matched = sum(min(p, d) for p, d in rows.values())
    mismatches = {k: v for k, v in rows.items() if v[0] != v[1]}
    return {"matched_entries": matched, "reference_total": sum(ref.values()),
            "derived_total": sum(derived.values()), "mismatches": mismatches,
            "exact": not mismatches}


def _pair_key(s: Permutation, i: Permutation) -> tuple:
    return (s.array.tolist(), i.array.tolist())


def census_a5(seed: int = 0) -> MapCensus:
    """Simple regular Cayley maps on A5: X = PSL(2,11), Aut(X) = PGL(2,11)."""
    X = atlas.psl2(11)
    aut = atlas.pgl2(11)
    G = atlas.find_a5_in_psl2_11(seed)
    elems = list(X.elements())
    involutions = [g for g in elems if g.order() == 2]
    elevens = [g for g in elems if g.order() == 11]
    inv_class = conjugacy_class(X, involutions[0])
    centralizer_inv = X.order() // len(inv_class)
    if len(inv_class) != len(involutions):
        raise CensusMismatch("involutions do not form a single class", {"class": len(inv_class)})
    # X = G<sigma> with trivial intersection is forced by |G| * 11 = |X| and 11 not dividing |G|
    automatic = all(G.order() * s.order() == X.order() and not G.contains(s) for s in elevens)
    delta = []
    for s in elevens:
        for t in involutions:
            if generates(X, [s, t]):
                delta.append((s, t))
    # orbit partition of Delta under conjugation by PGL(2,11)
    index = {(s.key, t.key): k for k, (s, t) in enumerate(delta)}
    parent = list(range(len(delta)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (s, t) in enumerate(delta):
        for a in aut.generators:
            j = index[((s ^ a).key, (t ^ a).key)]
            rk, rj = find(k), find(j)
            if rk != rj:
                parent[max(rk, rj)] = min(rk, rj)
    orbits: dict[int, list[int]] = {}
    for k in range(len(delta)):
        orbits.setdefault(find(k), []).append(k)
    reps = sorted((min((delta[k] for k in orb), key=lambda p: _pair_key(*p)) for orb in orbits.values()),
                  key=lambda p: _pair_key(*p))
    orbit_sizes = sorted(len(o) for o in orbits.values())
    formula = len(delta) // aut.order()
    details = {
        "X_order": X.order(), "aut_order": aut.order(),
        "involutions": len(involutions), "involution_centralizer_order": centralizer_inv,
        "order_11_elements": len(elevens), "delta_size": len(delta),
        "delta_formula": X.order() ** 2 // 66,
        "orbit_partition_count": len(orbits), "formula_count": formula,
        "delta_divisible": len(delta) % aut.order() == 0,
        "semiregular": all(sz == aut.order() for sz in orbit_sizes),
        "complement_automatic": automatic,
        "all_pairs_generate": len(delta) == len(elevens) * len(involutions),
    }
    if len(orbits) != formula or not details["semiregular"] or not automatic:
        raise CensusMismatch("A5 census cross-checks disagree", details)
    ms = Counter((s * t).order() for s, t in reps)
    return MapCensus("A5", "PGL(2,11)", len(orbits), reps, dict(ms), X, details)


def _sigma_slice(X: PermGroup, sigma0: Permutation, involutions: Sequence[Permutation]):
    """Generating involutions for a fixed sigma0 and their <sigma0>-orbit representatives."""
    valid = [t for t in involutions if generates(X, [sigma0, t])]
    k = sigma0.order()
    powers = [sigma0 ** e for e in range(k)]
    seen: set[bytes] = set()
    reps = []
    for t in valid:
        if t.key in seen:
            continue
        orb = [t ^ p for p in powers]
        seen.update(o.key for o in orb)
        reps.append(min(orb, key=lambda p: p.array.tolist()))
    return valid, reps


def census_m22(seed: int = 0) -> MapCensus:
    """Simple regular Cayley maps on M22: X = Aut(X) = M23, never materializing Delta."""
    X = atlas.mathieu23()
    G = PermGroup([embed(g, 23) for g in atlas.mathieu22().generators], 23)
    if not G.is_subgroup_of(X) or G.order() * 23 != X.order():
        raise CensusMismatch("M22 is not a complement to an element of order 23 in M23", {})
    inv = find_element_of_order(X, 2, seed)
    sigma0 = find_element_of_order(X, 23, seed)
    involutions = conjugacy_class(X, inv)
    class0 = conjugacy_class(X, sigma0)
    keys0 = {c.key for c in class0}
    other = next((sigma0 ** e for e in range(2, 23) if (sigma0 ** e).key not in keys0), None)
    if other is None:
        raise CensusMismatch("only one class of elements of order 23 found", {})
    reps_by_class = []
    per_class = []
    for rep in (sigma0, other):
        if G.contains(rep):
            raise CensusMismatch("sigma meets the vertex group", {})
        valid, reps = _sigma_slice(X, rep, involutions)
        if len(valid) % 23:
            raise CensusMismatch("valid involutions not divisible by 23", {"valid": len(valid)})
        per_class.append({"sigma": format_cycles(rep), "valid_involutions": len(valid),
                          "orbits": len(reps)})
        reps_by_class.extend((rep, t) for t in reps)
    centralizer_inv = X.order() // len(involutions)
    centralizer_23 = X.order() // len(class0)
    delta_slice = sum(len(class0) * pc["valid_involutions"] for pc in per_class)
    delta_formula = (X.order() // centralizer_inv) * (2 * X.order() // 23)
    total = len(reps_by_class)
    formula = X.order() // (1344 * 23)
    details = {"X_order": X.order(), "aut_order": X.order(), "involutions": len(involutions),
               "involution_centralizer_order": centralizer_inv, "order_23_class_size": len(class0),
               "order_23_centralizer_order": centralizer_23, "per_class": per_class,
               "delta_from_slices": delta_slice, "delta_formula": delta_formula,
               "slice_count": total, "formula_count": formula,
               "delta_over_aut": delta_formula // X.order()}
    if total != formula or delta_slice != delta_formula or delta_formula % X.order():
        raise CensusMismatch("M22 census cross-checks disagree", details)
    reps_by_class.sort(key=lambda p: _pair_key(*p))
    ms = Counter((s * t).order() for s, t in reps_by_class)
    return MapCensus("M22", "M23", total, reps_by_class, dict(ms), X, details)


def census_simple(group: str, seed: int = 0) -> MapCensus:
    key = group.upper()
    if key == "A5":
        return census_a5(seed)
    if key == "M22":
        return census_m22(seed)
    raise ValueError(f"no simple census for {group}")


def involutions_of_alternating(n: int) -> list[Permutation]:
    """Every even involution of degree n (products of 2k disjoint transpositions)."""
    out = []

    def build(points: list[int], pairs: list[tuple[int, int]]):
        if pairs and len(pairs) % 2 == 0:
            out.append(Permutation.from_cycles([list(p) for p in pairs], n))
        if len(points) < 2:
            return
        first_free = points
        for a_pos in range(len(first_free)):
            a = first_free[a_pos]
            if pairs and a < pairs[-1][0]:
                continue
            for b in first_free[a_pos + 1:]:
                rest = [x for x in first_free if x not in (a, b)]
                build(rest, pairs + [(a, b)])

    build(list(range(n)), [])
    return out


def count_even_involutions(n: int) -> int:
    from math import factorial
    total = 0
    k = 2
    while 2 * k <= n:
        total += factorial(n) // (factorial(n - 2 * k) * 2 ** k * factorial(k))
        k += 2
    return total


def census_am(m: int) -> MapCensus:
    """Generating involutions z with <(1..m+1), z> = A_{m+1}, up to <sigma0>-conjugacy."""
    if m % 2 or m < 6:
        raise ValueError("m must be even and at least 6")
    if m > 12:
        raise ValueError("desk cap: m <= 12")
    n = m + 1
    X = atlas.alternating(n)
    sigma0 = Permutation.from_cycles([list(range(n))], n)
    invs = involutions_of_alternating(n)
    if len(invs) != count_even_involutions(n):
        raise CensusMismatch("involution enumeration miscounted", {"found": len(invs)})
    powers = [sigma0 ** e for e in range(n)]
    seen: set[bytes] = set()
    reps, raw = [], 0
    for t in invs:
        if t.key in seen:
            continue
        orb = {(t ^ p).key: t ^ p for p in powers}
        seen.update(orb)
        rep = min(orb.values(), key=lambda p: p.array.tolist())
        if generates(X, [sigma0, rep]):
            raw += len(orb)
            reps.append((sigma0, rep))
    witness = Permutation.from_cycles([[0, 1], [2, 3]], n)
    witness_key = min(((witness ^ p) for p in powers), key=lambda p: p.array.tolist()).key
    details = {"involutions": len(invs), "generating_involutions": raw, "classes": len(reps),
               "standard_iota_generates": any(r.key == witness_key for _, r in reps)}
    reps.sort(key=lambda p: _pair_key(*p))
    ms = Counter((s * t).order() for s, t in reps)
    return MapCensus(f"A{m}", f"S{n}", len(reps), reps, dict(ms), X, details)
