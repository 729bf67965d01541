"""Chatelet surfaces y^2 - a z^2 = f(x) and their model as an intersection of two quadrics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError
from .fields import Field, make_field
from .linalg import det, rank
from .poly import MultiPoly, parse_poly, sylvester_rows
from .upoly import UPoly, factor_rational, roots_in_field

P4 = ("u0", "u1", "u2", "y", "z")
XW = ("x", "w")

# x^i w^(4-i) -> exponent vector in (u0, u1, u2)
DICTIONARY = {
    4: (2, 0, 0),
    3: (1, 1, 0),
    2: (0, 2, 0),
    1: (0, 1, 1),
    0: (0, 0, 2),
}


def cubic_discriminant(f: UPoly):
    """18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2 for f = a x^3 + b x^2 + c x + d."""
    if f.degree != 3:
        raise GeometryError("f must have degree exactly 3", "cubic", degree=f.degree)
    F = f.field
    d, c, b, a = f.c
    n = F.from_int
    terms = [
        F.mul(n(18), F.mul(F.mul(a, b), F.mul(c, d))),
        F.neg(F.mul(n(4), F.mul(F.pow(b, 3), d))),
        F.mul(F.mul(b, b), F.mul(c, c)),
        F.neg(F.mul(n(4), F.mul(a, F.pow(c, 3)))),
        F.neg(F.mul(n(27), F.mul(F.mul(a, a), F.mul(d, d)))),
    ]
    out = F.zero
    for t in terms:
        out = F.add(out, t)
    return out


def discriminant_by_resultant(f: UPoly):
    """-Res(f, f') / lc(f), the normalization valid for cubics."""
    F = f.field
    rows = sylvester_rows(list(reversed(f.c)), list(reversed(f.deriv().c)), F.zero)
    return F.neg(F.mul(det(rows, F), F.inv(f.lc)))


def has_root(f: UPoly) -> bool:
    F = f.field
    if F.kind == "rational":
        return any(g.degree == 1 for g, _ in factor_rational(f))
    return bool(roots_in_field(f))


@dataclass(frozen=True)
class ChateletData:
    field: Field
    cubic: UPoly
    a: object
    quartic: MultiPoly
    quadrics: tuple
    extension: Field
    singular_points: tuple

    def to_dict(self) -> dict:
        F, K = self.field, self.extension
        return {
            "field": F.spec,
            "cubic": str(MultiPoly.from_upoly(self.cubic, ("x",), "x")),
            "a": F.to_str(self.a),
            "quartic": str(self.quartic),
            "quadrics": [str(q) for q in self.quadrics],
            "extension": K.spec,
            "singular_points": [":".join(K.to_str(c) for c in pt) for pt in self.singular_points],
        }


def _square_class_radicand(F: Field, a):
    """An integer-valued radicand with the same square class as ``a``, and sqrt(a) / sqrt(radicand)."""
    if F.kind != "rational":
        return a, F.one
    q = Fraction(a)
    return q * q.denominator**2, Fraction(1, q.denominator)


def quartic_form(f: UPoly) -> MultiPoly:
    """F(x, w) = w * w^3 f(x/w)."""
    F = f.field
    terms = {(i, 4 - i): c for i, c in enumerate(f.c) if not F.is_zero(c)}
    return MultiPoly(F, XW, terms)


def quadrics(F: Field, quartic: MultiPoly, a) -> tuple[MultiPoly, MultiPoly]:
    g = dict(zip(P4, MultiPoly.gens(F, P4)))
    q1 = g["u1"] ** 2 - g["u0"] * g["u2"]
    phi = MultiPoly(F, P4)
    for (i, _), c in quartic.terms.items():
        e = DICTIONARY[i]
        phi = phi + MultiPoly(F, P4, {e + (0, 0): c})
    q2 = g["y"] ** 2 - (g["z"] ** 2).scale(a) - phi
    return q1, q2


def jacobian_rank(polys, point, K: Field) -> int:
    rows = []
    for q in polys:
        qK = q.base_change(K)
        rows.append([qK.diff(v).evaluate(point) for v in P4])
    return rank(rows, K)


def build_chatelet(f: UPoly) -> ChateletData:
    F = f.field
    if f.degree != 3:
        raise GeometryError("f must have degree exactly 3", "cubic", degree=f.degree)
    if F.characteristic == 3:
        raise GeometryError("the S3 test is not valid in characteristic 3", "characteristic not 3")
    if F.kind not in ("rational", "prime"):
        raise GeometryError("Chatelet surfaces are built over Q or F_p", "base field")
    a = cubic_discriminant(f)
    if has_root(f):
        raise GeometryError("f has a root in k; the Galois group is not S3", "Galois group S3: no root in k")
    if F.is_square(a):
        raise GeometryError(f"disc(f) = {F.to_str(a)} is a square; the Galois group is cyclic",
                            "Galois group S3: non-square discriminant", a=F.to_str(a))
    quartic = quartic_form(f)
    q1, q2 = quadrics(F, quartic, a)
    rad, scale = _square_class_radicand(F, a)
    K = make_field(kind="quadratic-extension", radicand=Fraction(rad) if F.kind == "rational"
                   else Fraction(int(rad)), base=F)
    emb = K.from_fraction if F.kind == "rational" else (lambda c: (c, F.zero))
    root = K.mul(K.generator, emb(scale))
    points = []
    for s in (root, K.neg(root)):
        pt = (K.zero, K.zero, K.zero, s, K.one)
        for q in (q1, q2):
            if not K.is_zero(q.base_change(K).evaluate(pt)):
                raise GeometryError("singular point candidate is not on the surface", "singular points")
        if jacobian_rank((q1, q2), pt, K) > 1:
            raise GeometryError("Jacobian has rank 2 at a candidate point", "singular points")
        points.append(pt)
    return ChateletData(F, f, a, quartic, (q1, q2), K, tuple(points))


def restrict_to_cone(q: MultiPoly) -> MultiPoly:
    """Pull a form in (u0, u1, u2, y, z) back along u0 = x^2, u1 = x w, u2 = w^2."""
    F = q.field
    x, w = MultiPoly.var(F, XW, "x"), MultiPoly.var(F, XW, "w")
    return q.subs({"u0": x * x, "u1": x * w, "u2": w * w})


def alternative_phi(quartic: MultiPoly) -> MultiPoly:
    """The dictionary with x^2 w^2 -> u0 u2 instead of u1^2."""
    F = quartic.field
    phi = MultiPoly(F, P4)
    for (i, _), c in quartic.terms.items():
        e = (1, 0, 1) if i == 2 else DICTIONARY[i]
        phi = phi + MultiPoly(F, P4, {e + (0, 0): c})
    return phi


def parse_cubic(text: str, F: Field) -> UPoly:
    return parse_poly(text, ("x",), F).to_upoly("x")
