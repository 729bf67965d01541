"""Plane curves over exact fields and their intersection cycles."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .errors import AlgebraError, GeometryError
from .fields import Field
from .linalg import det
from .points import ProjPoint
from .poly import (BinaryForm, MultiPoly, parse_poly, rational_roots, remainder_degrees,
                   resultant_binary, roots_over_extensions)
from .upoly import UPoly, descend, embedding, field_of_degree, frobenius, gcd, squarefree_decomposition

XYZ = ("x", "y", "z")


class PlaneCurve:
    """A nonzero homogeneous form in (x, y, z)."""

    __slots__ = ("poly", "degree", "_changes")

    def __init__(self, poly: MultiPoly):
        poly = poly.with_vars(XYZ)
        if poly.is_zero():
            raise AlgebraError("the zero form does not define a curve")
        if not poly.is_homogeneous():
            raise AlgebraError("plane curve equation must be homogeneous")
        self.poly = poly
        self.degree = poly.degree
        self._changes = {}

    @classmethod
    def parse(cls, text: str, F: Field) -> "PlaneCurve":
        return cls(parse_poly(text, XYZ, F))

    @property
    def field(self) -> Field:
        return self.poly.field

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"PlaneCurve({self.field.spec}, {self.poly})"

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def over(self, E: Field) -> MultiPoly:
        """The defining form with coefficients pushed into ``E``."""
        if E == self.field:
            return self.poly
        key = ("over", E)
        if key not in self._changes:
            self._changes[key] = self.poly.base_change(E)
        return self._changes[key]

    def __call__(self, pt: ProjPoint):
        return self.over(pt.field).evaluate(pt.coords)

    def contains(self, pt: ProjPoint) -> bool:
        return pt.field.is_zero(self(pt))

    def partials(self) -> list["MultiPoly"]:
        return [self.poly.diff(v) for v in XYZ]

    def is_singular_at(self, pt: ProjPoint) -> bool:
        E = pt.field
        return self.contains(pt) and all(
            E.is_zero((d.base_change(E) if E != self.field else d).evaluate(pt.coords))
            for d in self.partials())

    def monic(self) -> "PlaneCurve":
        return PlaneCurve(self.poly.monic())

    def same_curve(self, other: "PlaneCurve") -> bool:
        """Equality up to a nonzero scalar."""
        return self.poly.monic() == other.poly.monic()


# -- point utilities ------------------------------------------------------------

def random_element(F: Field, rng: random.Random):
    if F.kind == "prime":
        return rng.randrange(F.p)
    if F.kind == "prime-power":
        return F.from_index(rng.randrange(F.order))
    return F.from_fraction(Fraction(rng.randint(-9, 9)))


def random_point(F: Field, rng: random.Random) -> ProjPoint:
    while True:
        coords = [random_element(F, rng) for _ in range(3)]
        if any(not F.is_zero(c) for c in coords):
            return ProjPoint(F, coords)


def lift_point(pt: ProjPoint, E: Field) -> ProjPoint:
    if pt.field == E:
        return pt
    return ProjPoint(E, [embedding(pt.field, E)(c) for c in pt.coords], normalized=True)


def minimal_point(pt: ProjPoint) -> ProjPoint:
    """Rewrite a point over the smallest subfield containing its coordinates."""
    E = pt.field
    if E.kind != "prime-power":
        return pt
    P = E.prime_field
    for d in range(1, E.k):
        if E.k % d:
            continue
        if all(frobenius(E, a, d) == a for a in pt.coords):
            small = field_of_degree(P, d)
            return ProjPoint(small, [descend(E, a, small) for a in pt.coords], normalized=True)
    return pt


def common_field(fields) -> Field:
    """Smallest field (among our canonical ones) containing all given fields."""
    fields = list(fields)
    base = fields[0]
    if base.kind in ("rational", "quadratic-extension") or not base.is_finite:
        if any(f != base for f in fields):
            raise AlgebraError("no common field")
        return base
    from math import lcm

    k = lcm(*(f.degree for f in fields))
    P = base.prime_field
    return field_of_degree(P, k) if k > 1 else P


def determinant3(points) -> object:
    """3x3 determinant of three points lifted to a common field."""
    E = common_field([p.field for p in points])
    rows = [list(lift_point(p, E).coords) for p in points]
    return E, det(rows, E)


def collinear(a: ProjPoint, b: ProjPoint, c: ProjPoint) -> bool:
    E, d = determinant3([a, b, c])
    return E.is_zero(d)


def line_through(a: ProjPoint, b: ProjPoint) -> PlaneCurve:
    """The line through two distinct points, with coefficients descended to the smallest field."""
    E = common_field([a.field, b.field])
    a, b = lift_point(a, E), lift_point(b, E)
    u, v = a.coords, b.coords
    cross = [E.sub(E.mul(u[1], v[2]), E.mul(u[2], v[1])),
             E.sub(E.mul(u[2], v[0]), E.mul(u[0], v[2])),
             E.sub(E.mul(u[0], v[1]), E.mul(u[1], v[0]))]
    if all(E.is_zero(c) for c in cross):
        raise GeometryError("points coincide; the line is undetermined", "distinct points")
    cp = minimal_point(ProjPoint(E, cross))
    F = cp.field
    terms = {(1, 0, 0): cp[0], (0, 1, 0): cp[1], (0, 0, 1): cp[2]}
    return PlaneCurve(MultiPoly(F, XYZ, terms))


# -- linear coordinate changes ----------------------------------------------------

def transform(curve: MultiPoly, M) -> MultiPoly:
    """``curve(M . X)`` for a 3x3 matrix of raw entries."""
    F = curve.field
    gens = MultiPoly.gens(F, XYZ)
    images = {}
    for i, v in enumerate(XYZ):
        acc = MultiPoly(F, XYZ)
        for j in range(3):
            if not F.is_zero(M[i][j]):
                acc = acc + gens[j].scale(M[i][j])
        images[v] = acc
    return curve.subs(images).with_vars(XYZ)


def apply_matrix(M, pt: ProjPoint, F: Field) -> ProjPoint:
    """M . pt, with M over ``F`` and pt over an extension of ``F``."""
    E = pt.field
    emb = embedding(F, E)
    c = pt.coords
    out = []
    for row in M:
        acc = E.zero
        for a, b in zip(row, c):
            if not F.is_zero(a):
                acc = E.add(acc, E.mul(emb(a), b))
        out.append(acc)
    return ProjPoint(E, out)


def random_matrix(F: Field, rng: random.Random):
    while True:
        M = [[random_element(F, rng) for _ in range(3)] for _ in range(3)]
        if not F.is_zero(det(M, F)):
            return M


def identity_matrix(F: Field):
    return [[F.one if i == j else F.zero for j in range(3)] for i in range(3)]


def _changes(F: Field, seed: int, attempts: int):
    yield identity_matrix(F)
    rng = random.Random(f"change:{seed}")
    for _ in range(attempts - 1):
        yield random_matrix(F, rng)


def fiber(poly: MultiPoly, x0, y0, E: Field) -> UPoly:
    """poly(x0, y0, z) as a univariate polynomial in z over E."""
    P = poly.base_change(E) if E != poly.field else poly
    i = XYZ.index("z")
    d = P.degree_in("z")
    coeffs = [E.zero] * (d + 1)
    pw_x, pw_y = {}, {}
    for e, c in P.terms.items():
        t = c
        if e[0]:
            t = E.mul(t, pw_x.setdefault(e[0], E.pow(x0, e[0])))
        if e[1]:
            t = E.mul(t, pw_y.setdefault(e[1], E.pow(y0, e[1])))
        coeffs[e[i]] = E.add(coeffs[e[i]], t)
    return UPoly(E, coeffs)


def _roots(form: BinaryForm, max_degree: int):
    if form.field.is_finite:
        return roots_over_extensions(form, max_degree)
    return rational_roots(form)


def squarefree_part(u: UPoly) -> UPoly:
    out = UPoly.const(u.field, u.field.one)
    for g, _ in squarefree_decomposition(u):
        out = out * g
    return out


def intersection_cycle(A: PlaneCurve, B: PlaneCurve, max_degree: int = 6, seed: int = 0,
                       attempts: int = 40) -> list[tuple[ProjPoint, int]]:
    """Intersection points of two plane curves with multiplicities.

    A linear change of coordinates moves (0:0:1) off both curves; the
    resultant in z is a binary form whose root multiplicities are the
    local intersection numbers, provided each root's fiber contains a
    single intersection point.  Changes are retried until that holds.
    Points come back over their minimal fields; over Q only rational
    points are supported.
    """
    F = A.field
    if B.field != F:
        raise AlgebraError("curves over different fields")
    for M in _changes(F, seed, attempts):
        Ap, Bp = transform(A.poly, M), transform(B.poly, M)
        if Ap.degree_in("z") != A.degree or Bp.degree_in("z") != B.degree:
            continue
        r, D = resultant_binary(Ap, Bp, "z", ("x", "y"))
        if r.is_zero():
            raise GeometryError("the curves share a component", "zero-dimensional intersection")
        roots = _roots(BinaryForm(r, D), max_degree)
        if roots.remainder is not None:
            what = "rational" if not F.is_finite else f"of degree <= {max_degree}"
            raise GeometryError(f"intersection points not {what}", "rationality",
                                degrees=remainder_degrees(roots.remainder))
        out = []
        for q, m in roots:
            E = q.field
            x0, y0 = q.coords
            g = gcd(fiber(Ap, x0, y0, E), fiber(Bp, x0, y0, E))
            h = squarefree_part(g) if g.degree >= 1 else g
            if h.degree != 1:
                break
            h = h.monic()
            pt = ProjPoint(E, (x0, y0, E.neg(h.c[0])))
            out.append((minimal_point(apply_matrix(M, pt, F)), m))
        else:
            out.sort(key=lambda t: t[0].sort_key())
            return out
    raise GeometryError("no generic projection found", "generic projection")


def subtract_points(cycle, points) -> list[tuple[ProjPoint, int]]:
    """Remove one copy of each listed point from an intersection cycle."""
    counts = {pt: m for pt, m in cycle}
    for pt in points:
        pt = minimal_point(pt)
        if counts.get(pt, 0) < 1:
            raise GeometryError(f"point {pt} is not in the intersection", "incidence")
        counts[pt] -= 1
    return sorted(((p, m) for p, m in counts.items() if m), key=lambda t: t[0].sort_key())


@lru_cache(maxsize=None)
def conic_monomials():
    return [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


@lru_cache(maxsize=None)
def cubic_monomials():
    return [e for e in sorted(((a, b, 3 - a - b) for a in range(4) for b in range(4 - a)),
                              reverse=True)]


def monomial_values(pt: ProjPoint, monomials) -> list:
    E = pt.field
    out = []
    for e in monomials:
        v = E.one
        for c, k in zip(pt.coords, e):
            if k:
                v = E.mul(v, E.pow(c, k))
        out.append(v)
    return out


def rows_over_base(values: list, E: Field, F: Field) -> list[list]:
    """Linear conditions over F equivalent to sum(c_j * values[j]) = 0 in E."""
    if E == F:
        return [list(values)]
    if F.kind == "prime" and E.kind == "prime-power":
        return [[v[i] for v in values] for i in range(E.k)]
    raise GeometryError("points over extensions need a prime base field", "rationality")


def form_from_vector(vec, monomials, F: Field) -> MultiPoly:
    return MultiPoly(F, XYZ, dict(zip(monomials, vec)))
