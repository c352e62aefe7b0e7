import pytest

import oracle as O
from skewmaps import atlas, skew
from skewmaps.atlas import cayley_table, parse_group_spec, translation
from skewmaps.groups import CapExceeded, PermGroup, derived_subgroup, find_element_of_order
from skewmaps.perm import Permutation, embed, parse
from skewmaps.skew import (FactorizationError, Kind, SkewRejected, brute_force_skew, classify,
                           decompose_mixed, enumerate_skew_tiny, from_factorization, skew_product,
                           verify_skew)

TINY = ["C3", "C4", "C6", "S3", "D4", "Q8"]


def conjugation_perm(tab, r):
    return Permutation([tab.index_of(e ^ r) for e in tab.elements])


def factorization_corpus():
    """(name, X, G, y) complementary factorizations with core-free <y>."""
    S4 = atlas.symmetric(4)
    D4 = PermGroup([parse("(1,2,3,4)"), parse("(1,3)", 4)], 4)
    S3in4 = PermGroup([parse("(1,2,3)", 4), parse("(1,2)", 4)], 4)
    A6in7 = PermGroup([embed(g, 7) for g in atlas.alternating(6).generators], 7)
    return [
        ("S3 = C3<(1,2)>", atlas.symmetric(3), PermGroup([parse("(1,2,3)")], 3), parse("(1,2)", 3)),
        ("S4 = D4<(1,2,3)>", S4, D4, parse("(1,2,3)", 4)),
        ("S4 = S3<(1,2,3,4)>", S4, S3in4, parse("(1,2,3,4)")),
        ("A7 = A6<7-cycle>", atlas.alternating(7), A6in7, parse("(1,2,3,4,5,6,7)")),
        ("PSL(2,11) = A5<y>", atlas.psl2(11), atlas.find_a5_in_psl2_11(0),
         find_element_of_order(atlas.psl2(11), 11, 0)),
    ]


@pytest.fixture(scope="module")
def corpus():
    out = []
    for spec in TINY:
        tab = cayley_table(parse_group_spec(spec))
        out.extend(enumerate_skew_tiny(tab))
    for _, X, G, y in factorization_corpus():
        out.append(from_factorization(X, G, y))
    A5 = atlas.alternating(5)
    tab = cayley_table(A5)
    out.append(verify_skew(tab, conjugation_perm(tab, parse("(1,2,3,4,5)"))))
    return out


def test_automorphisms_have_trivial_power_function():
    tab = cayley_table(atlas.symmetric(3))
    for r in atlas.symmetric(3).elements():
        sm = verify_skew(tab, conjugation_perm(tab, r))
        assert sm.is_automorphism() and (sm.pi == 1).all()
    ident = verify_skew(tab, Permutation.identity(6))
    assert (ident.pi == 1).all()


def test_rejection_carries_a_real_witness():
    tab = cayley_table(atlas.symmetric(3))
    T = tab.table.tolist()
    rejected = 0
    for a in range(1, 6):
        for b in range(a + 1, 6):
            s = Permutation.from_cycles([[a, b]], 6)
            if O.is_skew(T, tuple(s.array.tolist())):
                verify_skew(tab, s)
                continue
            rejected += 1
            with pytest.raises(SkewRejected) as exc:
                verify_skew(tab, s)
            g = exc.value.witness[0]
            # no power of s satisfies the identity at g
            powers = [s ** e for e in range(s.order())]
            assert not any(all(s(T[g][h]) == T[s(g)][p(h)] for h in range(6)) for p in powers)
    assert rejected > 0


def test_identity_must_be_fixed():
    tab = cayley_table(atlas.cyclic(3))
    with pytest.raises(SkewRejected):
        verify_skew(tab, parse("(1,2)", 3))


@pytest.mark.parametrize("spec", TINY)
def test_tiny_enumeration_matches_oracles(spec, oracle_values):
    tab = cayley_table(parse_group_spec(spec))
    found = enumerate_skew_tiny(tab)
    brute = brute_force_skew(tab)
    assert sorted(s.sigma.key for s in found) == sorted(s.sigma.key for s in brute)
    expected = oracle_values["tiny_skew"][spec]
    assert len(found) == expected["skew_morphisms"]
    assert sum(s.is_automorphism() for s in found) == expected["automorphisms"]
    T = tab.table.tolist()
    assert all(O.is_skew(T, tuple(s.sigma.array.tolist())) for s in found)


def test_tiny_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_skew_tiny(cayley_table(atlas.cyclic(13)))


def test_factorization_of_s3():
    sm = from_factorization(atlas.symmetric(3), PermGroup([parse("(1,2,3)")], 3), parse("(1,2)", 3))
    els = sm.base.elements
    assert all(els[sm(i)] == ~els[i] for i in range(3))
    assert (sm.pi == 1).all()


def test_factorization_hypotheses_are_named():
    X = atlas.symmetric(3)
    C4xC2 = PermGroup([parse("(1,2,3,4)", 6), parse("(5,6)")], 6)
    with pytest.raises(FactorizationError, match="meets G"):
        from_factorization(C4xC2, PermGroup([parse("(1,3)(2,4)", 6)], 6), parse("(1,2,3,4)(5,6)"))
    with pytest.raises(FactorizationError, match="differs"):
        from_factorization(X, PermGroup([parse("(1,2)", 3)], 3), parse("(1,2)", 3))
    # <(1,2)(3,4)> x <(1,3)(2,4)> = V4; (1,2)(3,4) is normal in V4, so not core-free
    V4 = PermGroup([parse("(1,2)(3,4)"), parse("(1,3)(2,4)")], 4)
    with pytest.raises(FactorizationError, match="core-free"):
        from_factorization(V4, PermGroup([parse("(1,3)(2,4)")], 4), parse("(1,2)(3,4)"))


@pytest.mark.parametrize("case", range(5))
def test_factorizations_give_valid_skew_morphisms(case):
    name, X, G, y = factorization_corpus()[case]
    sm = from_factorization(X, G, y)
    assert sm.order == y.order()
    T = sm.base.table.tolist()
    if sm.base.n <= 60:
        assert O.is_skew(T, tuple(sm.sigma.array.tolist()))


def test_corpus_round_trip_and_product_sets(corpus):
    for sm in corpus:
        sp = skew_product(sm)
        X, LG, y, tab = sp.as_factorization()
        back = from_factorization(X, LG, y, tab)
        assert back.sigma == sm.sigma
        assert ((back.pi - sm.pi) % sm.order == 0).all()
        n = sm.base.n
        if n * sm.order <= 500 * 12:
            powers = [sm.sigma ** e for e in range(sm.order)]
            Ls = [translation(sm.base, g) for g in range(n)]
            left = {(s * L).key for s in powers for L in Ls}
            right = {(L * s).key for s in powers for L in Ls}
            assert left == right and len(left) == n * sm.order


def test_corpus_skew_product_invariants(corpus):
    for sm in corpus:
        assert sm.exhaustive or sm.base.n > 5000
        sp = skew_product(sm)
        n = sm.base.n
        assert sp.X.order() == n * sm.order
        assert skew.cyclic_core_exponent(sp.X, sp.sigma_perm) == sm.order
        core = sp.core.order()
        kinds = [core == n, core == 1 and n > 1, 1 < core < n]
        assert sum(kinds) == 1 or n == 1
        assert sp.kind is skew.classify_core(core, n)
        if sp.kind is Kind.BALANCED:
            # sigma normalizes L_G exactly when it is an automorphism
            normalizes = all(sp.LG.contains(L ^ sp.sigma_perm) for L in sp.LG.generators)
            assert normalizes == sm.is_automorphism()
        elif sm.is_automorphism():
            pytest.fail("an automorphism always yields a balanced product")


def test_inner_automorphism_of_a5_is_balanced():
    tab = cayley_table(atlas.alternating(5))
    sp = skew_product(verify_skew(tab, conjugation_perm(tab, parse("(1,2,3,4,5)"))))
    assert sp.kind is Kind.BALANCED and sp.X.order() == 300


def test_order_two_automorphism_of_s3_is_balanced():
    tab = cayley_table(atlas.symmetric(3))
    sp = skew_product(verify_skew(tab, conjugation_perm(tab, parse("(1,2)", 3))))
    assert sp.kind is Kind.BALANCED and sp.X.order() == 12


def test_inversion_of_s3_agrees_with_oracle():
    tab = cayley_table(atlas.symmetric(3))
    inv = Permutation([int(x) for x in tab.inverse])
    expected = O.is_skew(tab.table.tolist(), tuple(inv.array.tolist()))
    try:
        verify_skew(tab, inv)
        accepted = True
    except SkewRejected:
        accepted = False
    assert accepted == expected


def test_simple_products_are_perfect():
    for X, G, k in [(atlas.psl2(11), atlas.find_a5_in_psl2_11(0), 11),
                    (atlas.alternating(7), PermGroup([embed(g, 7) for g in atlas.alternating(6).generators], 7), 7)]:
        assert classify(X, G) is Kind.SIMPLE
        assert X.order() == G.order() * k
        assert derived_subgroup(X).order() == X.order()


def test_m23_over_m22_is_simple_kind_with_lazy_evaluation():
    X = atlas.mathieu23()
    G = PermGroup([embed(g, 23) for g in atlas.mathieu22().generators], 23)
    assert classify(X, G) is Kind.SIMPLE
    y = find_element_of_order(X, 23, 0)
    sm = from_factorization(X, G, y)
    assert isinstance(sm, skew.LazySkewMorphism) and sm.order == 23
    assert sm.check_axiom(samples=200)
    assert derived_subgroup(X).order() == X.order()


def test_decompose_mixed_rejects_balanced_input():
    X = atlas.symmetric(3)
    with pytest.raises(ValueError, match="not Mixed"):
        decompose_mixed(X, atlas.alternating(3), parse("(1,2)", 3))


def test_to_json_omits_tables_above_cap():
    tab = cayley_table(atlas.alternating(5))
    sm = verify_skew(tab, conjugation_perm(tab, parse("(1,2,3)", 5)))
    assert "images" in sm.to_json("A(5)") and "images" not in sm.to_json("A(5)", cap=10)
