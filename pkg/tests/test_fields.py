from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conicbundle.errors import FieldError
from conicbundle.fields import field_elements, is_prime, is_square, make_field

SPECS = ["F3", "F13", "F101", "F5^2", "F3^3", "F7^2", "Q", "Q(sqrt -108)", "F7(sqrt 3)"]


def elements_strategy(F):
    if F.is_finite:
        elems = F.elements()
        return st.sampled_from(elems)
    fr = st.fractions(min_value=-50, max_value=50, max_denominator=20)
    if F.kind == "rational":
        return fr
    return st.tuples(fr, fr)


def test_f13_descriptor():
    F = make_field("F13")
    assert (F.kind, F.characteristic, F.order, F.degree) == ("prime", 13, 13, 1)


def test_square_radicand_rejected():
    with pytest.raises(FieldError):
        make_field(kind="quadratic-extension", radicand=1, base="Q")
    with pytest.raises(FieldError):
        make_field("Q(sqrt 4)")


def test_f25_modulus_is_lex_smallest():
    F = make_field(kind="prime-power", p=5, k=2)
    assert F.modulus == (2, 0, 1)  # x^2 + 2


@pytest.mark.parametrize("spec", ["F2", "F2^3", "F4", "F2(sqrt 3)"])
def test_characteristic_two_banned(spec):
    with pytest.raises(FieldError):
        make_field(spec)


@pytest.mark.parametrize("spec", ["F15", "F1", "G7", "F7^0", "Q(sqrt)"])
def test_bad_specs(spec):
    with pytest.raises(FieldError):
        make_field(spec)


def test_is_square_examples():
    F13 = make_field("F13")
    assert is_square(F13(4))
    assert not is_square(F13(2))
    assert not make_field("Q").is_square(Fraction(-108))


def test_field_elements():
    assert [e.raw for e in field_elements(make_field("F3"))] == [0, 1, 2]
    elems = make_field("F3^2").elements()
    assert len(elems) == 9 and len(set(elems)) == 9


def test_primality():
    small = [n for n in range(60) if is_prime(n)]
    assert small == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2**31 - 1) and not is_prime(2**31 + 1)


@pytest.mark.parametrize("spec", SPECS)
def test_axioms(spec):
    F = make_field(spec)

    @given(elements_strategy(F), elements_strategy(F), elements_strategy(F))
    def run(a, b, c):
        if F.kind != "prime" and not F.is_finite:
            a, b, c = (F.from_fraction(x) if F.kind == "rational" else
                       (x[0], x[1]) for x in (a, b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == F.zero
        if not F.is_zero(a):
            assert F.mul(a, F.inv(a)) == F.one
        assert F.parse(F.to_str(a)) == a

    run()


@pytest.mark.parametrize("spec", ["F3", "F13", "F5^2", "F3^3", "F7(sqrt 3)"])
def test_frobenius_and_square_count(spec):
    F = make_field(spec)
    q = F.order
    elems = F.elements()
    assert all(F.pow(x, q) == x for x in elems)
    squares = [x for x in elems if F.is_square(x)]
    assert len(squares) == (q + 1) // 2
    assert all(F.is_square(F.mul(x, x)) for x in elems)


@given(st.fractions(max_denominator=50))
def test_rational_squares(x):
    Q = make_field("Q")
    assert Q.is_square(x * x)
    if x < 0:
        assert not Q.is_square(x)


def test_quadratic_extension_generator():
    K = make_field("Q(sqrt -108)")
    r = K.generator
    assert K.mul(r, r) == K.from_int(-108)
    assert K.to_str(K.neg(r)) == "-r"
