"""Headline results, each checked at its stated tolerance and time limit.

Every test appends one PASS/FAIL line; the lines are printed in the pytest
terminal summary under "acceptance criteria".
"""

import time
from contextlib import contextmanager

import pytest

import oracle as O
from conftest import ACCEPTANCE_LINES
from skewmaps import atlas, maps
from skewmaps import constructions as C
from skewmaps.atlas import cayley_table, parse_group_spec
from skewmaps.groups import PermGroup, find_element_of_order
from skewmaps.perm import embed, format_cycles, parse
from skewmaps.skew import (Kind, brute_force_skew, classify_core, enumerate_skew_tiny, from_factorization,
                           skew_product)


@contextmanager
def criterion(name: str, limit: float | None = None):
    t0 = time.perf_counter()
    status, note = "FAIL", ""
    timing: dict[str, float] = {}
    try:
        yield timing
        elapsed = timing.get("elapsed", time.perf_counter() - t0)
        if limit is not None and elapsed > limit:
            note = f" (took {elapsed:.1f}s, limit {limit:.0f}s)"
            raise AssertionError(f"{name} exceeded its time limit{note}")
        status = "PASS"
        note = f" ({elapsed:.1f}s)"
    finally:
        line = f"{status} {name}{note}"
        ACCEPTANCE_LINES.append(line)
        print(line)


@pytest.fixture(scope="module")
def a5():
    t0 = time.perf_counter()
    c = maps.census_simple("A5")
    return c, time.perf_counter() - t0


@pytest.fixture(scope="module")
def m22():
    t0 = time.perf_counter()
    c = maps.census_simple("M22")
    return c, time.perf_counter() - t0


def test_a5_census(a5):
    with criterion("A5 census: 5 classes by orbit partition and by |Delta|/|Aut|, under 1 min", 60) as t:
        c, t["elapsed"] = a5
        assert c.class_count == 5
        assert c.details["orbit_partition_count"] == 5
        assert c.details["delta_size"] // c.details["aut_order"] == 5 == c.details["formula_count"]
        assert c.details["aut_order"] == 1320


def test_a5_intermediate_quantities(a5):
    with criterion("A5 intermediates: 55 involutions (centralizer 12) x 120 elements of order 11 = |Delta| 6600"):
        c, _ = a5
        d = c.details
        assert d["involutions"] == 55 and d["involution_centralizer_order"] == 12
        assert d["order_11_elements"] == 120
        assert d["delta_size"] == 6600 == d["delta_formula"] == 55 * 120


def test_m22_census(m22):
    with criterion("M22 census: 330 classes (165 per order-23 class) = |X|/(1344*23), under 30 min",
                   30 * 60) as t:
        c, t["elapsed"] = m22
        assert c.class_count == 330
        assert [pc["orbits"] for pc in c.details["per_class"]] == [165, 165]
        assert c.details["formula_count"] == 10200960 // (1344 * 23) == 330
        assert c.details["delta_from_slices"] == c.details["delta_formula"]


def test_face_valency_multisets(a5, m22):
    with criterion("Face valency multisets: M22 exact; A5 four of five, the '16' reported as impossible"):
        cm = maps.compare_face_valencies(m22[0])
        assert cm["exact"], cm["mismatches"]
        ca = maps.compare_face_valencies(a5[0])
        assert ca["matched_entries"] == 4
        element_orders = {g.order() for g in atlas.psl2(11).elements()}
        assert 16 not in element_orders and element_orders == {1, 2, 3, 5, 6, 11}
        assert ca["mismatches"] == {6: (0, 1), 16: (1, 0)}


def test_am1_lemma():
    with criterion("A_{m+1} generation: a = (1,2,3) and <sigma, iota> = A_{m+1} for even m in 6..20, under 10 s", 10):
        for m in range(6, 21, 2):
            r = C.lemma_am1(m)
            assert format_cycles(r.a_word) == "(1,2,3)", m
            assert r.generated, m


def test_p_and_q_families():
    with criterion("P/Q families for p in {5,7,11,13}: Balanced maps, counts |F'\\Delta(p)| and (p-1)/2, "
                   "brute-force PGL orbits, under 5 min", 300):
        for p in (5, 7, 11, 13):
            for d in C.delta_set(p).complement:
                im = C.map_P(p, d)
                assert im.kind is Kind.BALANCED and im.map.vertex_valency == 3
            for c in range(1, (p - 1) // 2 + 1):
                im = C.map_Q(p, c)
                assert im.kind is Kind.BALANCED and im.map.vertex_valency == p
            for v, expected in ((3, len(C.delta_set(p).complement)), (p, (p - 1) // 2)):
                bc = C.classify_balanced_psl2(p, v)
                assert bc.orbit_count == expected, (p, v, bc.orbit_count)
                assert bc.bijective, (p, v, bc.family_orbits)


def test_mixed_example():
    with criterion("Mixed example (n,p)=(3,5): three construction steps, Mixed, decomposition side conditions, under 1 min", 60):
        r = C.mixed_example(3, 5)
        assert all(r.checks.values())
        assert r.kind is Kind.MIXED
        d = r.decomposition
        assert d.checks["g^(sigma^i) = g"] and d.checks["|g| divides |tau|"]
        assert all(d.checks.values())


def test_mixed_product_instance():
    with criterion("Mixed product m=6, l=5: valid map, |sigma| = 28, Mixed, under 2 min", 120):
        r = C.mixed_product_map(6, 5)
        assert r.sigma_order == 28
        assert r.kind is Kind.MIXED
        assert all(r.checks.values())


def test_property_suites():
    with criterion("Property suites: exhaustive skew identity (|G| <= 500), round trip, tiny enumeration "
                   "= brute force, exclusive trichotomy"):
        corpus = []
        for spec in ["C3", "C4", "C6", "S3", "D4", "Q8"]:
            tab = cayley_table(parse_group_spec(spec))
            found = enumerate_skew_tiny(tab)
            assert sorted(s.sigma.key for s in found) == sorted(s.sigma.key for s in brute_force_skew(tab)), spec
            corpus.extend(found)
        A6in7 = PermGroup([embed(g, 7) for g in atlas.alternating(6).generators], 7)
        corpus.append(from_factorization(atlas.alternating(7), A6in7, parse("(1,2,3,4,5,6,7)")))
        X = atlas.psl2(11)
        corpus.append(from_factorization(X, atlas.find_a5_in_psl2_11(0), find_element_of_order(X, 11, 0)))
        for sm in corpus:
            assert sm.base.n <= 500 and sm.exhaustive
            assert O.is_skew(sm.base.table.tolist(), tuple(sm.sigma.array.tolist()))
            sp = skew_product(sm)
            back = from_factorization(*sp.as_factorization())
            assert back.sigma == sm.sigma and ((back.pi - sm.pi) % sm.order == 0).all()
            core, n = sp.core.order(), sm.base.n
            assert [core == n, core == 1, 1 < core < n].count(True) == 1
            assert sp.kind is classify_core(core, n)
