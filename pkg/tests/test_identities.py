from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conicbundle.identities import (DETERMINANT_FIXTURES, FROZEN_T, GENERATORS, IDENTITY_FIXTURES,
                                    REP_VARS, TRANSITION, conjugation_matrix, degenerate_fiber,
                                    example_conic_mutant, intertwiner_equations, rep_spot_check,
                                    solve_intertwiner, specialize_example, trace_identity,
                                    verify_rep_decomposition)
from conicbundle.fields import make_field
from conicbundle.linalg import det, nullspace
from conicbundle.poly import MultiPoly

Q = make_field("Q")
NAMES = [f.name for f in IDENTITY_FIXTURES]


@pytest.mark.parametrize("fixture", IDENTITY_FIXTURES, ids=NAMES)
def test_identity_fixture_holds(fixture):
    assert fixture.check()
    assert fixture.residual().is_zero()


@pytest.mark.parametrize("fixture", IDENTITY_FIXTURES, ids=NAMES)
def test_identity_fixture_numeric_route(fixture):
    assert fixture.spot_check(trials=10)


@pytest.mark.parametrize("fixture", IDENTITY_FIXTURES, ids=NAMES)
def test_corrupted_fixture_fails(fixture):
    bad = fixture.corrupted()
    assert not bad.check()
    assert not bad.spot_check(trials=5)


def test_mutant_breaks_identity():
    m = example_conic_mutant()
    assert not m.check()
    assert not m.spot_check(trials=5)


def test_specialization():
    x, y, z = specialize_example(1, 1, 0, 1)
    assert (x, y, z) == (1, 0, 1)
    assert x * x + y * y - z * z == 0


@given(st.fractions(max_denominator=9), st.fractions(max_denominator=9),
       st.fractions(max_denominator=9), st.fractions(max_denominator=9))
def test_specialization_lies_on_conic(k, l, a, b):
    x, y, z = specialize_example(k, l, a, b)
    assert k * k * x * x + l * l * y * y - z * z == 0


def test_transition_needs_inverse_declaration():
    # with 1/u1 left undeclared, w1 survives on the left
    assert TRANSITION.check()
    assert not replace(TRANSITION, inverses=()).check()


@pytest.mark.parametrize("fixture", DETERMINANT_FIXTURES, ids=[f.name for f in DETERMINANT_FIXTURES])
def test_determinant_fixture(fixture):
    assert fixture.check()
    assert fixture.spot_check()
    assert not fixture.corrupted().check()


def test_degenerate_fiber():
    special, r = degenerate_fiber()
    assert str(special) == "x^2" and r == 1


# representation decomposition

def test_rep_decomposition():
    dec = verify_rep_decomposition()
    assert dec.ok
    assert dec.intertwiner_dimension == 3
    assert dec.T == tuple(tuple(Fraction(c) for c in row) for row in FROZEN_T)
    assert all(c.denominator in (1, 2) for row in dec.T_inverse for c in row)


def test_frozen_t_numeric_route():
    assert rep_spot_check(FROZEN_T)


def test_wrong_t_rejected():
    bad = ((1, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0))
    assert not verify_rep_decomposition(bad).ok
    swapped = ((1, 0, 0, 1), (-1, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0))
    assert not verify_rep_decomposition(swapped).conjugates
    assert not rep_spot_check(swapped)


def test_trace_identities():
    assert all(trace_identity(name) for name in GENERATORS)


def test_identity_element_conjugates_to_identity():
    R = conjugation_matrix((("1", "0"), ("0", "1")))
    one, zero = MultiPoly.const(Q, REP_VARS, 1), MultiPoly(Q, REP_VARS)
    assert R == [[one if i == j else zero for j in range(4)] for i in range(4)]


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_every_invertible_intertwiner_works(coeffs):
    basis = nullspace(intertwiner_equations(), 16, Q)
    vec = [sum((c * v[i] for c, v in zip(coeffs, basis)), Fraction(0)) for i in range(16)]
    T = [vec[4 * i:4 * i + 4] for i in range(4)]
    if det(T, Q) == 0:
        return
    assert verify_rep_decomposition(T).conjugates


def test_solver_dimension():
    dim, T = solve_intertwiner()
    assert dim == 3 and det(T, Q) != 0
