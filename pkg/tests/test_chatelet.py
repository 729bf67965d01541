from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conicbundle.chatelet import (DICTIONARY, P4, alternative_phi, build_chatelet,
                                  cubic_discriminant, discriminant_by_resultant, has_root,
                                  parse_cubic, quadrics, quartic_form, restrict_to_cone)
from conicbundle.errors import GeometryError
from conicbundle.fields import make_field
from conicbundle.poly import parse_poly
from conicbundle.upoly import UPoly

Q = make_field("Q")


def test_x3_minus_2():
    data = build_chatelet(parse_cubic("x^3 - 2", Q))
    assert data.a == -108
    assert data.extension.spec == "Q(sqrt -108)"
    assert len(data.singular_points) == 2
    d = data.to_dict()
    assert d["singular_points"] == ["0:0:0:r:1", "0:0:0:-r:1"]


@pytest.mark.parametrize("text, hypothesis", [
    ("x^3 - 3*x + 1", "Galois group S3: non-square discriminant"),
    ("x^3 - x", "Galois group S3: no root in k"),
    ("x^2 + 1", "cubic"),
])
def test_rejections_over_q(text, hypothesis):
    with pytest.raises(GeometryError) as info:
        build_chatelet(parse_cubic(text, Q))
    assert info.value.hypothesis == hypothesis


def test_cyclic_discriminant_value():
    assert cubic_discriminant(parse_cubic("x^3 - 3*x + 1", Q)) == 81


def test_finite_field_cases():
    with pytest.raises(GeometryError):
        build_chatelet(parse_cubic("x^3 - 2", make_field("F7")))  # disc 4 is a square
    with pytest.raises(GeometryError):
        build_chatelet(parse_cubic("x^3 - 2", make_field("F5")))  # 3^3 = 2
    with pytest.raises(GeometryError) as info:
        build_chatelet(parse_cubic("x^3 - 2", make_field("F3")))
    assert info.value.hypothesis == "characteristic not 3"


def test_irreducible_cubic_over_fp_has_square_discriminant():
    # over a finite field the Galois group of an irreducible cubic is cyclic
    F = make_field("F13")
    for c in range(13):
        for d in range(13):
            f = parse_cubic(f"x^3 + {c}*x + {d}", F)
            if not has_root(f):
                assert F.is_square(cubic_discriminant(f))


cubics = st.tuples(st.integers(1, 5), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))


@given(cubics)
def test_discriminant_two_routes_over_q(cs):
    f = UPoly(Q, [Fraction(c) for c in reversed(cs)])
    assert cubic_discriminant(f) == discriminant_by_resultant(f)


@given(cubics, st.sampled_from([5, 7, 11, 101]))
def test_discriminant_two_routes_over_fp(cs, p):
    F = make_field(f"F{p}")
    f = UPoly.from_ints(F, list(reversed(cs)))
    if f.degree == 3:
        assert cubic_discriminant(f) == discriminant_by_resultant(f)


@given(cubics)
def test_cone_restriction(cs):
    f = UPoly(Q, [Fraction(c) for c in reversed(cs)])
    quartic = quartic_form(f)
    a = cubic_discriminant(f)
    q1, q2 = quadrics(Q, quartic, a)
    assert restrict_to_cone(q1).is_zero()
    vs = ("x", "w", "y", "z")
    expected = parse_poly(f"y^2 - ({a})*z^2", vs, Q) - quartic.with_vars(vs)
    assert restrict_to_cone(q2).with_vars(vs) == expected


@given(cubics)
def test_dictionary_choice_is_immaterial_modulo_first_quadric(cs):
    f = UPoly(Q, [Fraction(c) for c in reversed(cs)])
    quartic = quartic_form(f)
    q1, q2 = quadrics(Q, quartic, Fraction(1))
    phi = parse_poly("y^2 - z^2", P4, Q) - q2
    c2 = quartic.coefficient({"x": 2, "w": 2})
    assert alternative_phi(quartic) - phi == q1.scale(-c2)


def test_dictionary_is_consistent_on_the_cone():
    for i, (e0, e1, e2) in DICTIONARY.items():
        assert 2 * e0 + e1 == i and e1 + 2 * e2 == 4 - i
