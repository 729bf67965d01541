"""Local and global singularity analysis of plane curves."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import AlgebraError, GeometryError
from .fields import Field
from .linalg import rank
from .points import ProjPoint
from .poly import (BinaryForm, MultiPoly, form_multiplicity_pattern, gcd_forms, remainder_degrees,
                   resultant_binary)
from .plane import (XYZ, PlaneCurve, _changes, _roots, apply_matrix, fiber, minimal_point,
                    random_element, squarefree_part, transform)
from .upoly import UPoly, embedding, gcd

INFINITE = math.inf


# -- intersection multiplicity ---------------------------------------------------

def _split_zero(P: MultiPoly):
    """(P(x, 0) as a UPoly in the first variable, P with y set to 0 removed check)."""
    F = P.field
    d = max((e[0] for e in P.terms if e[1] == 0), default=-1)
    coeffs = [F.zero] * (d + 1)
    for e, c in P.terms.items():
        if e[1] == 0:
            coeffs[e[0]] = c
    return UPoly(F, coeffs, trusted=True)


def _divide_by_y(P: MultiPoly) -> MultiPoly:
    return MultiPoly(P.field, P.vars, {(e[0], e[1] - 1): c for e, c in P.terms.items()},
                     trusted=True)


def _order(u: UPoly) -> int:
    return next(i for i, c in enumerate(u.c) if not u.field.is_zero(c))


def intersection_multiplicity(f: MultiPoly, g: MultiPoly, bound: int | None = None):
    """Local intersection number at the origin of two bivariate polynomials.

    Follows Fulton's recursion: reduce the degree of g(x, 0) against
    f(x, 0), and split off a factor y when one of them vanishes on the
    x-axis.  Returns ``math.inf`` when f and g share a component through
    the origin.
    """
    f, g = f._coerce(g)
    if len(f.vars) != 2:
        raise AlgebraError("intersection multiplicity needs two variables")
    if f.is_zero() or g.is_zero():
        return INFINITE
    if bound is None:
        bound = max(f.degree, 1) * max(g.degree, 1)
    F = f.field
    x = MultiPoly.var(F, f.vars, f.vars[0])
    total = 0
    stack = [(f, g)]
    while stack:
        A, B = stack.pop()
        while True:
            if A.is_zero() or B.is_zero():
                return INFINITE
            if not F.is_zero(A.constant_term()) or not F.is_zero(B.constant_term()):
                break
            a0, b0 = _split_zero(A), _split_zero(B)
            if a0.is_zero() and b0.is_zero():
                return INFINITE
            if b0.is_zero():
                A, B, a0, b0 = B, A, b0, a0
            if a0.is_zero():
                # A = y * H:  I(y, B) + I(H, B)
                total += _order(b0)
                stack.append((_divide_by_y(A), B))
                break
            if a0.degree > b0.degree:
                A, B, a0, b0 = B, A, b0, a0
            shift = b0.degree - a0.degree
            B = B.scale(a0.lc) - (x ** shift * A).scale(b0.lc)
        if total > bound:
            return INFINITE
    return total


def local_quotient_dimension(f: MultiPoly, g: MultiPoly, max_order: int = 40):
    """Oracle for the intersection number: dim k[x,y]/((f, g) + m^N) until it stabilizes.

    Independent of the recursion above; uses only linear algebra on
    truncated monomial spaces.  Returns ``math.inf`` if no stabilization
    happens below ``max_order``.
    """
    f, g = f._coerce(g)
    F = f.field
    prev = None
    for N in range(1, max_order + 1):
        monos = [(a, d - a) for d in range(N) for a in range(d + 1)]
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for P in (f, g):
            for (a, b) in monos:
                row = [F.zero] * len(monos)
                nz = False
                for (i, j), c in P.terms.items():
                    e = (i + a, j + b)
                    if e in index:
                        row[index[e]] = F.add(row[index[e]], c)
                        nz = True
                if nz:
                    rows.append(row)
        dim = len(monos) - (rank(rows, F) if rows else 0)
        if prev is not None and dim == prev:
            return dim
        prev = dim
    return INFINITE


# -- local certificates -----------------------------------------------------------

@dataclass(frozen=True)
class SingularityCertificate:
    point: ProjPoint
    field_degree: int
    multiplicity: int
    milnor: int
    tangent_cone: tuple
    label: str

    def to_dict(self) -> dict:
        return {
            "point": str(self.point),
            "field": self.point.field.spec,
            "field_degree": self.field_degree,
            "multiplicity": self.multiplicity,
            "milnor": self.milnor,
            "tangent_cone": list(self.tangent_cone),
            "label": self.label,
        }


def ade_label(m: int, mu: int, pattern) -> str:
    pattern = tuple(pattern)
    if m == 2:
        return f"A{mu}"
    if m == 3:
        if pattern == (1, 1, 1):
            return "D4"
        if pattern == (2, 1):
            return f"D{mu}"
        if pattern == (3,) and mu in (6, 7, 8):
            return f"E{mu}"
    return "other"


def local_chart(curve: PlaneCurve, pt: ProjPoint) -> MultiPoly:
    """Affine equation with ``pt`` moved to the origin, in the two remaining variables."""
    E = pt.field
    P = curve.over(E)
    j = max(i for i in range(3) if not E.is_zero(pt[i]))
    rest = [v for i, v in enumerate(XYZ) if i != j]
    gens = {v: MultiPoly.var(E, rest, v) for v in rest}
    images = {XYZ[j]: MultiPoly.const(E, rest, 1)}
    for i, v in enumerate(XYZ):
        if i != j:
            images[v] = gens[v] + MultiPoly(E, rest, {(0, 0): pt[i]})
    return P.subs(images).with_vars(rest)


def local_certificate(curve: PlaneCurve, pt: ProjPoint) -> SingularityCertificate:
    E = pt.field
    if not curve.contains(pt):
        raise GeometryError(f"{pt} is not on the curve", "point on curve")
    if not curve.is_singular_at(pt):
        raise GeometryError(f"{pt} is a smooth point of the curve", "singular point")
    f = local_chart(curve, pt)
    m = f.min_degree()
    fx, fy = (f.diff(v) for v in f.vars)
    mu = intersection_multiplicity(fx, fy)
    if mu == INFINITE:
        raise GeometryError(f"singularity at {pt} is not isolated", "isolated singularity")
    cone = BinaryForm.from_poly(f.homogeneous_part(m))
    pattern = tuple(form_multiplicity_pattern(cone))
    deg = E.degree if E.is_finite else 1
    return SingularityCertificate(pt, deg, m, int(mu), pattern, ade_label(m, int(mu), pattern))


def is_node(curve: PlaneCurve, pt: ProjPoint) -> bool:
    return local_certificate(curve, pt).label == "A1"


# -- global census ------------------------------------------------------------------

class Census(list):
    """Certificates sorted by (extension degree, coordinates); ``unresolved`` lists
    degrees of projection factors beyond the extension bound."""

    unresolved: list = []

    @property
    def milnor_total(self) -> int:
        return sum(c.milnor for c in self)


def _combo(rng: random.Random, F: Field):
    while True:
        a, b = random_element(F, rng), random_element(F, rng)
        if not (F.is_zero(a) and F.is_zero(b)):
            return a, b


def singular_points(curve: PlaneCurve, max_ext: int = 6, seed: int = 0) -> tuple[list, list]:
    """All singular points over extensions of degree <= max_ext, plus unresolved degrees."""
    F = curve.field
    d = curve.degree
    if d < 2:
        return [], []
    rng = random.Random(f"census:{seed}")
    for M in _changes(F, seed, 30):
        P = transform(curve.poly, M)
        if P.degree_in("z") != d:
            continue
        Px, Py, Pz = (P.diff(v) for v in XYZ)
        if Pz.degree_in("z") != d - 1:
            continue
        r1, D1 = resultant_binary(P, Pz, "z", ("x", "y"))
        if r1.is_zero():
            raise GeometryError("curve is not squarefree (Res(F, F_z) = 0)", "squarefree")
        form = BinaryForm(r1, D1)
        for _ in range(2):
            a, b = _combo(rng, F)
            mix = Px.scale(a) + Py.scale(b)
            if not mix.is_zero() and mix.degree_in("z") == d - 1:
                r2, D2 = resultant_binary(P, mix, "z", ("x", "y"))
                form = gcd_forms(form, BinaryForm(r2, D2))
        if form.degree == 0:
            return [], []
        sq = squarefree_part(form.u) if form.u.degree > 0 else UPoly.const(F, F.one)
        roots = _roots(BinaryForm(sq, sq.degree + min(form.infinity_multiplicity, 1)), max_ext)
        unresolved = []
        if roots.remainder is not None:
            unresolved = remainder_degrees(roots.remainder)
        found = set()
        for q, _ in roots:
            E = q.field
            x0, y0 = q.coords
            g = fiber(P, x0, y0, E)
            for part in (Px, Py, Pz):
                g = gcd(g, fiber(part, x0, y0, E))
            if g.degree < 1:
                continue
            h = squarefree_part(g)
            zroots = _roots(BinaryForm(h, h.degree), max(1, max_ext // E.degree)
                            if E.is_finite else 1)
            for z, _ in zroots:
                Z = z.field
                emb = embedding(E, Z)
                pt = ProjPoint(Z, (emb(x0), emb(y0), z.coords[0]))
                found.add(minimal_point(apply_matrix(M, pt, F)))
            if zroots.remainder is not None:
                unresolved += [E.degree * k for k in remainder_degrees(zroots.remainder)]
        pts = sorted(found, key=lambda p: p.sort_key())
        if not all(curve.is_singular_at(p) for p in pts):
            raise GeometryError("census produced a non-singular point", "census consistency")
        return pts, sorted(unresolved)
    raise GeometryError("no suitable projection found", "generic projection")


def singular_census(curve: PlaneCurve, max_ext: int = 6, seed: int = 0) -> Census:
    if not curve.field.is_finite:
        raise GeometryError("the census needs a finite base field", "finite field")
    pts, unresolved = singular_points(curve, max_ext, seed)
    out = Census(local_certificate(curve, p) for p in pts)
    out.unresolved = unresolved
    return out


def is_smooth(curve: PlaneCurve, max_ext: int = 3) -> bool:
    """Smoothness test by the Jacobian ring; a census when the characteristic divides the degree."""
    F = curve.field
    p = F.characteristic
    if F.kind == "rational" or (F.is_finite and curve.degree % p):
        return total_tjurina(curve) == 0
    if F.is_finite:
        try:
            pts, unresolved = singular_points(curve, max_ext)
        except GeometryError as exc:
            if exc.hypothesis == "squarefree":
                return False
            raise
        return not pts and not unresolved
    raise GeometryError("smoothness test supports Q and finite fields", "field")


def _monomials(d: int) -> list[tuple]:
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def jacobian_hilbert_value(curve: PlaneCurve, k: int) -> int:
    """dim of the degree-k part of S / (F_x, F_y, F_z)."""
    F = curve.field
    target = _monomials(k)
    index = {m: i for i, m in enumerate(target)}
    rows = []
    for g in curve.partials():
        if g.is_zero():
            continue
        for m in _monomials(k - g.degree):
            row = [F.zero] * len(target)
            for e, c in g.terms.items():
                row[index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]] = c
            rows.append(row)
    return len(target) - (rank(rows, F) if rows else 0)


def total_tjurina(curve: PlaneCurve, start: int | None = None, limit: int | None = None) -> int:
    """Degree of the singular scheme: the stable value of the Hilbert function of the
    Jacobian ring.  Requires the characteristic not to divide the degree, so that
    F lies in the ideal of its partials.  Returns ``math.inf`` when the value does not
    settle below ``limit`` (a curve with a multiple component).
    """
    d = curve.degree
    p = curve.field.characteristic
    if p and d % p == 0:
        raise GeometryError("characteristic divides the degree", "Euler relation")
    k = start if start is not None else max(3 * d - 5, 0)
    if limit is None:
        limit = 3 * d + 6
    prev = jacobian_hilbert_value(curve, k)
    while k < limit:
        k += 1
        cur = jacobian_hilbert_value(curve, k)
        if cur == prev:
            return cur
        prev = cur
    return INFINITE
