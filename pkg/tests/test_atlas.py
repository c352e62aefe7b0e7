import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle as O
from skewmaps import atlas
from skewmaps.atlas import (FieldElem, GroupSpecError, cayley_table, coordinate_embed, coordinate_rotation,
                            direct_power, legendre, matrix_to_perm, parse_group_spec, project, regular_rep,
                            sqrt_mod, translation)
from skewmaps.groups import is_primitive
from skewmaps.perm import compose, embed, parse

PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]


@given(st.sampled_from(PRIMES), st.integers(0, 10_000))
def test_sqrt_mod_matches_search(p, a):
    roots = O.legendre_sqrt(a, p)
    r = sqrt_mod(a, p)
    if roots:
        assert int(r) == min(roots)
        assert legendre(a, p) == (0 if a % p == 0 else 1)
    else:
        assert r is None and legendre(a, p) == -1


@given(st.sampled_from(PRIMES), st.integers(1, 1000), st.integers(1, 1000))
def test_field_arithmetic(p, a, b):
    x, y = FieldElem(a, p), FieldElem(b, p)
    assert int(x * y) == a * b % p
    assert int(x - y) == (a - b) % p
    if a % p:
        assert int(x * x.inverse()) == 1
        assert int(y / x * x) == b % p


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_psl2_and_pgl2_orders(p):
    assert atlas.psl2(p).order() == p * (p * p - 1) // 2
    assert atlas.pgl2(p).order() == p * (p * p - 1)


@pytest.mark.parametrize("p", [5, 7])
def test_psl2_matches_closure(p):
    assert atlas.psl2(p).order() == len(O.psl2_elements(p))


@given(st.sampled_from([5, 7, 11]), st.lists(st.integers(0, 10), min_size=8, max_size=8))
def test_matrix_action_is_a_right_action(p, e):
    A = [[e[0], e[1]], [e[2], e[3]]]
    B = [[e[4], e[5]], [e[6], e[7]]]
    if (e[0] * e[3] - e[1] * e[2]) % p == 0 or (e[4] * e[7] - e[5] * e[6]) % p == 0:
        return
    AB = [[sum(A[i][k] * B[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]
    assert compose(matrix_to_perm(A, p), matrix_to_perm(B, p)) == matrix_to_perm(AB, p)
    assert matrix_to_perm(A, p).array.tolist() == list(O.projective_line_action(A, p))


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        matrix_to_perm([[1, 2], [2, 4]], 7)


def test_mathieu_groups():
    M23, M22 = atlas.mathieu23(), atlas.mathieu22()
    assert is_primitive(M23)
    assert M23.stabilizer(22).order() == M22.order()
    assert all(M23.contains(embed(g, 23)) for g in M22.generators)
    assert atlas.mathieu24_from_projective_line().order() == 244823040


def test_direct_power_coordinates():
    T = atlas.alternating(5)
    G = direct_power(T, 3)
    assert G.order() == 60 ** 3
    t = parse("(1,2,3)", 5)
    x = coordinate_embed(t, 2, 3)
    rot = coordinate_rotation(5, 3)
    assert project(x, 2, 5) == t
    assert project(x ^ rot, 3, 5) == t
    assert (rot ** 3).is_identity()


def test_cayley_table_and_regular_representation():
    for spec in ["S(4)", "D(5)", "Q8", "A(5)"]:
        tab = cayley_table(parse_group_spec(spec))
        assert tab.check_associative()
        R = regular_rep(tab)
        assert R.order() == tab.n and R.is_transitive()
        g, h = 3 % tab.n, 5 % tab.n
        # L_g o L_h = L_gh as functions, i.e. apply L_h first
        assert compose(translation(tab, h), translation(tab, g)) == translation(tab, tab.mul(g, h))


def test_cayley_table_elements_multiply_like_the_table():
    tab = cayley_table(atlas.symmetric(3))
    for a in range(6):
        for b in range(6):
            assert tab.elements[a] * tab.elements[b] == tab.elements[tab.mul(a, b)]


@pytest.mark.parametrize("spec,order,degree", [
    ("A(5)", 60, 5), ("S3", 6, 3), ("C(12)", 12, 12), ("PSL(2,11)", 660, 12), ("PGL(2,7)", 336, 8),
    ("A(5)^2", 3600, 10), ("Reg(S(3))", 6, 6), ("M22", 443520, 22), ("D(4)", 8, 4), ("Q8", 8, 8),
])
def test_group_spec_grammar(spec, order, degree):
    G = parse_group_spec(spec)
    assert (G.order(), G.degree) == (order, degree)


@pytest.mark.parametrize("bad", ["A(5", "PSL(3,5)", "X(2)", "A(5))", "PSL(2,9)"])
def test_group_spec_errors(bad):
    with pytest.raises((GroupSpecError, ValueError)):
        parse_group_spec(bad)


def test_a5_inside_psl2_11():
    X = atlas.psl2(11)
    G = atlas.find_a5_in_psl2_11(seed=4)
    assert G.order() == 60 and G.is_subgroup_of(X)
