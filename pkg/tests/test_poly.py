import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conicbundle.errors import AlgebraError, ParseError
from conicbundle.fields import make_field
from conicbundle.linalg import det, inverse, matmul, nullspace, rank, rref, smith_diagonal, int_kernel
from conicbundle.poly import (BinaryForm, MultiPoly, identity_check, parse_poly, resultant,
                              roots_over_extensions, rational_roots)
from conicbundle.reference import E6_SEXTIC
from conicbundle.upoly import UPoly, factor_finite, factor_rational, gcd, squarefree_decomposition

Q = make_field("Q")
F13 = make_field("F13")
XYZ = ("x", "y", "z")


def P(text, vars=XYZ, F=Q):
    return parse_poly(text, vars, F)


coeff = st.integers(-6, 6)


@st.composite
def polys(draw, F=Q, vars=("x", "y"), max_deg=3):
    terms = draw(st.lists(st.tuples(coeff, *[st.integers(0, max_deg) for _ in vars]), max_size=6))
    out = MultiPoly(F, vars)
    for c, *e in terms:
        mono = MultiPoly.const(F, vars, F.from_int(c))
        for v, k in zip(vars, e):
            mono = mono * MultiPoly.var(F, vars, v) ** k
        out = out + mono
    return out


# parsing and printing

def test_parse_cusp():
    f = P("y^2 - x^3", ("x", "y"))
    assert f.degree == 3 and len(f) == 2 and str(f) == "-x^3 + y^2"


def test_parse_sextic():
    f = P(E6_SEXTIC)
    assert f.is_homogeneous(6) and len(f) == 12


def test_syntax_error_offset():
    with pytest.raises(ParseError) as info:
        P("x^2 + + y")
    assert info.value.offset == 6


@pytest.mark.parametrize("text", ["x^", "x*(y", "q + 1", "x^-1", "1/0"])
def test_malformed(text):
    with pytest.raises(AlgebraError):
        P(text)


@given(polys())
def test_print_parse_round_trip(f):
    assert P(str(f), f.vars) == f


@given(polys(F=F13))
def test_print_parse_round_trip_f13(f):
    assert P(str(f), f.vars, F13) == f


# arithmetic

@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == MultiPoly(Q, f.vars)


@given(polys(), polys())
def test_product_rule(f, g):
    assert (f * g).diff("x") == f.diff("x") * g + f * g.diff("x")


@given(polys(), polys())
def test_exact_division(f, g):
    if g.is_zero():
        return
    assert (f * g).exact_div(g) == f


def test_euler_relation():
    f = P(E6_SEXTIC)
    lhs = sum((MultiPoly.var(Q, XYZ, v) * f.diff(v) for v in XYZ), MultiPoly(Q, XYZ))
    assert lhs == f * 6


# resultants

def test_resultant_examples():
    xy = ("x", "y")
    assert resultant(P("y - x^2", xy), P("y", xy), "y") == P("x^2", xy).with_vars(("x",))
    # Sylvester convention: Res_y(y^2 - x^3, y) = -x^3
    assert resultant(P("y^2 - x^3", xy), P("y", xy), "y") == P("-x^3", ("x",))


def test_sextic_discriminant_resultant():
    f = P(E6_SEXTIC)
    r = resultant(f.diff("x"), f.diff("y"), "z")
    assert not r.is_zero() and r.degree <= 25


@given(polys(max_deg=2), polys(max_deg=2), polys(max_deg=2))
def test_resultant_multiplicative(f, g, h):
    if min(f.degree_in("y"), g.degree_in("y"), h.degree_in("y")) < 1:
        return
    lhs = resultant(f * g, h, "y")
    assert lhs == resultant(f, h, "y") * resultant(g, h, "y")


@given(polys(max_deg=2), polys(max_deg=2))
def test_resultant_detects_common_factor(f, g):
    if f.degree_in("y") < 1 or g.degree_in("y") < 0 or g.is_zero():
        return
    c = P("y - x", ("x", "y"))
    assert resultant(f * c, g * c, "y").is_zero()


# binary forms and roots

def _roots(text, F, max_degree=6):
    return [(str(p), m) for p, m in roots_over_extensions(P(text, ("x", "w"), F), max_degree)]


def test_roots_examples():
    assert _roots("x*w*(x-w)", make_field("F5")) == [("0:1", 1), ("1:0", 1), ("1:1", 1)]
    assert _roots("(x-w)^2*w", F13) == [("1:0", 1), ("1:1", 2)]
    r = roots_over_extensions(P("x^2+w^2", ("x", "w"), make_field("F7")), 2)
    assert len(r) == 2 and all(p.field.order == 49 and m == 1 for p, m in r)


def test_roots_remainder_beyond_max_degree():
    r = roots_over_extensions(P("x^2+w^2", ("x", "w"), make_field("F7")), 1)
    assert list(r) == [] and r.remainder.u.degree == 2


def test_rational_roots():
    r = rational_roots(P("(2*x - w)*(x^2 - 2*w^2)*w", ("x", "w")))
    assert sorted((str(p), m) for p, m in r) == [("1/2:1", 1), ("1:0", 1)]
    assert r.remainder.u.degree == 2


@given(st.lists(st.integers(0, 12), min_size=1, max_size=5))
def test_roots_recover_linear_factors(rs):
    u = UPoly.from_ints(F13, [1])
    for a in rs:
        u = u * UPoly.from_ints(F13, [-a, 1])
    b = BinaryForm(u, u.degree)
    found = {}
    for p, m in roots_over_extensions(b):
        found[p.coords[0]] = m
    assert found == {a: rs.count(a) for a in set(rs)}


# univariate factorization

@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7))
def test_finite_factorization_product(cs):
    u = UPoly.from_ints(F13, cs)
    if u.degree < 1:
        return
    prod = UPoly.const(F13, u.lc)
    for g, m in factor_finite(u):
        prod = prod * g**m
    assert prod == u


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7))
def test_squarefree_decomposition(cs):
    u = UPoly.from_ints(F13, cs)
    if u.degree < 1:
        return
    prod = UPoly.const(F13, u.lc)
    for g, m in squarefree_decomposition(u):
        assert gcd(g, g.deriv()).degree == 0
        prod = prod * g**m
    assert prod == u


def test_rational_factorization():
    u = UPoly(Q, [Fraction(c) for c in (-2, 0, 0, 1)]) * UPoly(Q, [Fraction(-1), Fraction(1)]) ** 2
    assert sorted((g.degree, m) for g, m in factor_rational(u)) == [(1, 2), (3, 1)]


# linear algebra

@st.composite
def rational_matrices(draw, n=None):
    rows = draw(st.integers(1, 5)) if n is None else n
    cols = draw(st.integers(1, 5)) if n is None else n
    ent = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    return [[draw(ent) for _ in range(cols)] for _ in range(rows)]


@given(rational_matrices())
def test_rank_agrees_with_rref(M):
    assert rank(M, Q) == len(rref(M, Q)[1])


@given(rational_matrices())
def test_nullspace(M):
    for v in nullspace(M, len(M[0]), Q):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


@given(rational_matrices(n=3))
def test_inverse(M):
    if det(M, Q) == 0:
        return
    I = matmul(M, inverse(M, Q), Q)
    assert I == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_smith_examples():
    assert smith_diagonal([[2, 4], [6, 8]]) == [2, 4]
    assert smith_diagonal([[1, 0], [0, 0]]) == [1]


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3))
def test_int_kernel(A):
    for v in int_kernel(A, 3):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in A)
    assert len(int_kernel(A, 3)) == 3 - rank([[Fraction(a) for a in r] for r in A], Q)


# identity checking

def test_identity_check_examples():
    vars = ("a", "b")
    lhs = P("(b^2 - a^2)^2 + 4*a^2*b^2", vars)
    assert identity_check(lhs, P("(a^2 + b^2)^2", vars))
    assert not identity_check(P("x"), P("y"))


def test_identity_check_relations_and_inverses():
    vars = ("u", "w", "x")
    assert identity_check(P("x*w", vars), P("1", vars), relations=[("x", P("u", vars))],
                          inverses=[("u", "w")])
    # an inverse symbol that survives makes the check fail
    assert not identity_check(P("w", vars), P("w", vars), inverses=[("u", "w")])


def test_random_identity_cross_check():
    rng = random.Random(3)
    for _ in range(20):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        f = P(f"(x + {a})*(x + {b})", ("x",))
        g = P(f"x^2 + {a + b}*x + {a * b}", ("x",))
        assert identity_check(f, g)
