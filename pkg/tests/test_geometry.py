import random

import pytest
from hypothesis import given, settings, strategies as st

from conicbundle.errors import GeometryError
from conicbundle.fields import make_field
from conicbundle.linalg import rank
from conicbundle.plane import (PlaneCurve, collinear, cubic_monomials, determinant3, intersection_cycle,
                               line_through, random_point)
from conicbundle.points import ProjPoint
from conicbundle.reference import F13_CENTER, F13_CUBIC, F13_NODAL_CUBIC, F13_RESIDUAL
from conicbundle.trisection import (cubics_through, embed_degeneracy, odd_intersection_check,
                                    polar_conic, ramification_datum, sample_pair,
                                    satellite_center_check, satellite_closed_form,
                                    satellite_polar_tangency, search_example, trisection,
                                    trisection_invariants, verify_certificate)

Q = make_field("Q")
F13 = make_field("F13")


def curve(text, F=F13):
    return PlaneCurve.parse(text, F)


def point(text, F=F13):
    return ProjPoint.parse(F, text)


@pytest.fixture(scope="module")
def f13():
    C, p = curve(F13_CUBIC), point(F13_CENTER)
    return C, p, trisection(C, p)


# polar conic

def test_polar_examples():
    assert polar_conic(curve("x^3+y^3+z^3", Q), point("1:0:0", Q)) == curve("3*x^2", Q)
    assert polar_conic(curve("x*y*z", Q), point("1:1:1", Q)) == curve("y*z + x*z + x*y", Q)


def test_f13_polar_meets_cubic_at_ramification(f13):
    C, p, T = f13
    assert all(C.contains(r) and T.polar.contains(r) for r in T.ramification_points)


# trisection

def test_f13_residual_points(f13):
    _, _, T = f13
    assert {str(q) for q in T.residual_points} == set(F13_RESIDUAL)
    assert all(q.field == F13 for q in T.residual_points)


def test_f13_invariants(f13):
    _, _, T = f13
    assert all(trisection_invariants(T).values())
    assert satellite_center_check(T)


def test_f13_tangency_shape(f13):
    _, _, T = f13
    cycle = satellite_polar_tangency(T)
    assert sorted(m for _, m in cycle) == [2, 2]


def test_double_line_polar_rejected():
    with pytest.raises(GeometryError) as info:
        trisection(curve("x^3+y^3+z^3", Q), point("1:0:0", Q))
    assert info.value.hypothesis == "simple branching"


def test_center_on_cubic_rejected():
    C = curve(F13_CUBIC)
    q = next(q for q in (point(f"{a}:{b}:1") for a in range(13) for b in range(13)) if C.contains(q))
    with pytest.raises(GeometryError) as info:
        trisection(C, q)
    assert info.value.hypothesis == "p in C"


def test_rationality_error_names_degree():
    with pytest.raises(GeometryError) as info:
        trisection(curve("x^3 + y^3 + z^3 + x*y*z", Q), point("1:2:3", Q))
    assert info.value.hypothesis == "rationality"
    assert info.value.info["degree"] > 1


def test_satellite_random_f101():
    rng = random.Random(11)
    F = make_field("F101")
    done = 0
    while done < 5:
        pair = sample_pair(F, rng)
        if pair is None:
            continue
        T = trisection(*pair)
        assert satellite_center_check(T)
        assert T.satellite.same_curve(satellite_closed_form(*pair))
        done += 1


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_generic_tangency_sums_to_four(seed):
    F = make_field("F31")
    rng = random.Random(seed)
    pair = None
    while pair is None:
        pair = sample_pair(F, rng, prefilter=False)
        try:
            T = trisection(*pair, allow_extensions=True)
        except GeometryError:
            pair = None
    assert sum(m for _, m in intersection_cycle(T.satellite, T.polar, max_degree=4)) == 4


# cubics through points and the embedding

def test_cubic_space_dimensions():
    assert len(cubics_through([], F=F13)) == 10
    pts = [point(t) for t in F13_RESIDUAL]
    basis = cubics_through(pts, singular_at=point(F13_CENTER))
    L = curve(F13_NODAL_CUBIC)
    assert len(basis) >= 1
    # L lies in the span of the basis
    def vec(c):
        return [c.poly.terms.get(m, 0) for m in cubic_monomials()]

    assert rank([vec(b) for b in basis] + [vec(L)], F13) == len(basis)


def test_embed_f13_with_paper_curve(f13):
    C, p, _ = f13
    emb = embed_degeneracy(C, p, c_sing=curve(F13_NODAL_CUBIC))
    assert emb.node.label == "A1" and emb.collinear
    E, d = determinant3(emb.s_points)
    assert E.is_zero(d)
    assert len(emb.s_points) == 3


def test_embed_f13_solves_for_nodal_member(f13):
    C, p, _ = f13
    emb = embed_degeneracy(C, p)
    assert emb.c_sing.same_curve(curve(F13_NODAL_CUBIC))


def test_embed_rejects_curve_missing_residual(f13):
    C, p, _ = f13
    with pytest.raises(GeometryError):
        embed_degeneracy(C, p, c_sing=curve("x*y^2 + y^2*z"))


def test_ramification_datum(f13):
    C, p, _ = f13
    d = ramification_datum(C, p, curve(F13_NODAL_CUBIC))
    assert d.genus == 1 and len(d.nodes) == 2 * d.genus + 4 == 6
    assert d.coincidence


def test_collinearity_primitives():
    a, b = point("1:2:3"), point("4:5:6")
    line = line_through(a, b)
    c = next(q for q in (point(f"{s}:{t}:1") for s in range(13) for t in range(13))
             if line.contains(q) and q not in (a, b))
    assert collinear(a, b, c)
    assert not collinear(point("1:0:0"), point("0:1:0"), point("0:0:1"))


# odd intersection

BASE = ("1:0:0", "0:1:0", "0:0:1", "1:1:1")


def test_odd_intersection_random_cubics():
    F = make_field("F11")
    base = [point(t, F) for t in BASE]
    basis = cubics_through(base)
    rng = random.Random(2)
    done = 0
    while done < 3:
        A, B = [sum((b.poly.scale(F.from_int(rng.randrange(11))) for b in basis), basis[0].poly * 0)
                for _ in range(2)]
        try:
            count, odd = odd_intersection_check(PlaneCurve(A), PlaneCurve(B), base)
        except GeometryError:
            continue
        assert (count, odd) == (5, True)
        done += 1


def test_common_component_rejected():
    A = curve("x^3 + y^3 + 2*z^3", make_field("F11"))
    with pytest.raises(GeometryError):
        odd_intersection_check(A, A)


def test_generic_conics_meet_evenly():
    F = make_field("F11")
    rng = random.Random(5)
    while True:
        A = curve("x^2 + 3*y^2 - z^2", F)
        B = curve(f"x*y + {rng.randrange(1, 11)}*y^2 + 2*z^2 + x*z", F)
        try:
            count, odd = odd_intersection_check(A, B)
        except GeometryError:
            continue
        break
    assert count == 4 and not odd


# search

def test_search_contains_paper_triple():
    emb = verify_certificate(F13, F13_CUBIC, F13_CENTER, F13_NODAL_CUBIC)
    assert emb.collinear


def test_search_deterministic_serial_and_parallel():
    a = search_example(13, 600, 1)
    assert a == search_example(13, 600, 1)
    assert a == search_example(13, 600, 1, workers=2)
    for cert in a:
        emb = verify_certificate(F13, cert["cubic"], cert["center"], cert["c_sing"])
        assert [str(q) for q in emb.s_points] == cert["s_points"]


def test_small_search_may_be_empty():
    assert isinstance(search_example(5, 10, 0), list)


def test_random_point_is_rational():
    rng = random.Random(0)
    assert random_point(F13, rng).field == F13
