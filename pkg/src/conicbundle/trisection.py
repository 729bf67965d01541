"""Projection of a plane cubic from an external point.

The pipeline goes: ramification and residual points, polar and satellite
conics, a cubic nodal at the center through the residual points, the
three remaining points of intersection, and the line through them.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import lcm

from .errors import GeometryError
from .fields import Field, _pgcd, _ppowmod, make_field
from .linalg import inverse, nullspace
from .points import ProjPoint
from .poly import BinaryForm, MultiPoly, remainder_degrees
from .plane import (XYZ, PlaneCurve, _roots, collinear, conic_monomials, cubic_monomials,
                    form_from_vector, intersection_cycle, lift_point, line_through,
                    minimal_point, monomial_values, random_element, random_matrix,
                    rows_over_base, subtract_points, transform)
from .singularities import SingularityCertificate, is_smooth, local_certificate, singular_points
from .upoly import UPoly, embedding, gcd, is_squarefree, powmod


def polar_conic(C: PlaneCurve, p: ProjPoint) -> PlaneCurve:
    """First polar p0*C_x + p1*C_y + p2*C_z."""
    F = C.field
    if p.field != F:
        raise GeometryError("center must be defined over the curve's field", "rationality")
    acc = MultiPoly(F, XYZ)
    for c, v in zip(p.coords, XYZ):
        if not F.is_zero(c):
            acc = acc + C.poly.diff(v).scale(c)
    if acc.is_zero():
        raise GeometryError("the polar conic vanishes identically", "nonzero polar")
    return PlaneCurve(acc)


def satellite_closed_form(C: PlaneCurve, p: ProjPoint) -> PlaneCurve:
    """l^2 - 4 C(p) P, with l the tangent form of C at p and P the polar conic.

    For X on C the line pX meets C again in the roots of
    C(p) s^2 + l(X) s + P(X); these coincide exactly when this conic
    vanishes at X.  Used only as a cross-check of the interpolated conic.
    """
    F = C.field
    ell = MultiPoly(F, XYZ)
    for v in XYZ:
        ell = ell + MultiPoly(F, XYZ, {tuple(int(v == w) for w in XYZ):
                                      C.poly.diff(v).evaluate(p.coords)})
    a = C.poly.evaluate(p.coords)
    return PlaneCurve(ell * ell - polar_conic(C, p).poly.scale(F.mul(F.from_int(4), a)))


@dataclass(frozen=True)
class TrisectionData:
    curve: PlaneCurve
    center: ProjPoint
    polar: PlaneCurve
    satellite: PlaneCurve
    pairs: tuple  # ((r_i, p_i), ...)
    branch_form: BinaryForm = field(compare=False)
    basis: tuple = field(compare=False)  # (center, e1, e2) as coordinate triples

    @property
    def ramification_points(self):
        return [r for r, _ in self.pairs]

    @property
    def residual_points(self):
        return [q for _, q in self.pairs]

    def to_dict(self) -> dict:
        return {
            "field": self.curve.field.spec,
            "cubic": str(self.curve),
            "center": str(self.center),
            "polar": str(self.polar),
            "satellite": str(self.satellite),
            "pairs": [{"ramification": str(r), "residual": str(q), "field": r.field.spec}
                      for r, q in self.pairs],
        }


def _complement(p: ProjPoint):
    """Two unit vectors completing p to a basis."""
    F = p.field
    j = max(i for i in range(3) if not F.is_zero(p[i]))
    units = []
    for i in range(3):
        if i != j:
            units.append(tuple(F.one if k == i else F.zero for k in range(3)))
    return units


def line_restriction(C: PlaneCurve, p: ProjPoint, e1, e2):
    """Coefficients (a, b, c, e) of C(s p + u e1 + e2) in powers s^3, s^2, s, 1.

    ``a`` is a raw scalar; b, c, e are UPolys in u (forms of degree 1, 2, 3
    after homogenizing with v).
    """
    F = C.field
    S, U, V = "s", "u", "v"
    vars3 = (S, U, V)
    s, u, v = MultiPoly.gens(F, vars3)
    images = {}
    for i, name in enumerate(XYZ):
        images[name] = s.scale(p[i]) + u.scale(e1[i]) + v.scale(e2[i])
    R = C.poly.subs(images).with_vars(vars3).subs({V: 1})
    parts = R.coeffs_in(S) + [MultiPoly(F, (U,))] * 4
    a = parts[3].constant_term()
    b, c, e = (parts[k].with_vars((U,)).to_upoly(U) if not parts[k].is_zero() else UPoly(F)
               for k in (2, 1, 0))
    return a, b, c, e


def branch_form(a, b: UPoly, c: UPoly, e: UPoly) -> BinaryForm:
    """Discriminant in s of a s^3 + b s^2 + c s + e, a binary sextic in (u : v)."""
    F = b.field
    A = UPoly.const(F, a)

    def k(n):
        return UPoly.const(F, F.from_int(n))

    disc = (b * b * c * c - k(4) * A * c * c * c - k(4) * b * b * b * e
            - k(27) * A * A * e * e + k(18) * A * b * c * e)
    return BinaryForm(disc, 6)


def _form_value(u: UPoly, degree: int, q: ProjPoint, E: Field):
    """Value of the degree-``degree`` form with dehomogenization ``u`` at (u0 : v0)."""
    emb = embedding(u.field, E)
    if E.is_zero(q[1]):
        return emb(u.c[degree]) if u.degree >= degree else E.zero
    acc = E.zero
    for coef in reversed(u.c):
        acc = E.add(E.mul(acc, q[0]), emb(coef))
    return acc


def trisection(C: PlaneCurve, p: ProjPoint, allow_extensions: bool = False) -> TrisectionData:
    """Ramification points, residual points, polar and satellite conics of projection from p.

    Without ``allow_extensions`` every ramification point must be rational
    over the curve's field; otherwise a ``GeometryError`` reports the
    extension degree needed.
    """
    F = C.field
    if C.degree != 3:
        raise GeometryError("trisection needs a plane cubic", "cubic")
    if C.contains(p):
        raise GeometryError("the center lies on the cubic (p in C)", "p in C")
    if not is_smooth(C):
        raise GeometryError("the cubic is singular", "smooth cubic")
    P = polar_conic(C, p)
    e1, e2 = _complement(p)
    a, b, c, e = line_restriction(C, p, e1, e2)
    B = branch_form(a, b, c, e)
    if B.is_zero() or B.degree - B.u.degree > 1 or not is_squarefree(B.u):
        raise GeometryError("branching is not simple (repeated ramification point)",
                            "simple branching")
    roots = _roots(B, 6)
    if roots.remainder is not None:
        degs = remainder_degrees(roots.remainder)
        raise GeometryError(f"ramification points need extensions of degree {degs}",
                            "rationality", degree=lcm(*degs))
    degs = sorted({q.field.degree for q, _ in roots})
    if not allow_extensions and degs != [1]:
        need = lcm(*degs)
        raise GeometryError(f"ramification points are not rational over {F.spec}; "
                            f"a degree-{need} extension is needed", "rationality", degree=need)
    pairs = []
    for q, _ in roots:
        E = q.field
        emb = embedding(F, E)
        aa = emb(a)
        bb = _form_value(b, 1, q, E)
        cc = _form_value(c, 2, q, E)
        ee = _form_value(e, 3, q, E)
        cubic = UPoly(E, [ee, cc, bb, aa])
        dbl = gcd(cubic, cubic.deriv())
        if dbl.degree != 1:
            raise GeometryError("line is not simply tangent", "simple branching")
        s0 = E.neg(dbl.monic().c[0])
        s1 = E.sub(E.neg(E.div(bb, aa)), E.add(s0, s0))
        base = [E.add(E.mul(q[0], emb(x1)), E.mul(q[1], emb(x2))) for x1, x2 in zip(e1, e2)]
        pe = [emb(x) for x in p.coords]
        r = ProjPoint(E, [E.add(E.mul(s0, x), y) for x, y in zip(pe, base)])
        res = ProjPoint(E, [E.add(E.mul(s1, x), y) for x, y in zip(pe, base)])
        pairs.append((minimal_point(r), minimal_point(res)))
    pairs.sort(key=lambda t: t[1].sort_key())
    S = interpolate_conic([q for _, q in pairs], F)
    return TrisectionData(C, p, P, S, tuple(pairs), B, (p.coords, e1, e2))


def interpolate_conic(points, F: Field) -> PlaneCurve:
    """The unique conic through a Galois-stable set of points (rank-5 system)."""
    monos = conic_monomials()
    rows = []
    for pt in points:
        rows += rows_over_base(monomial_values(pt, monos), pt.field, F)
    ns = nullspace(rows, len(monos), F)
    if len(ns) != 1:
        raise GeometryError(f"satellite system has rank {len(monos) - len(ns)} < 5",
                            "unique satellite conic")
    return PlaneCurve(form_from_vector(ns[0], monos, F)).monic()


def satellite_center_check(T: TrisectionData) -> bool:
    return not T.center.field.is_zero(T.satellite(T.center))


def satellite_polar_tangency(T: TrisectionData) -> list:
    return intersection_cycle(T.satellite, T.polar, max_degree=4)


def trisection_invariants(T: TrisectionData) -> dict:
    """Incidence checks that every valid trisection satisfies."""
    C, P, S, p = T.curve, T.polar, T.satellite, T.center
    rs = T.ramification_points
    return {
        "collinear_triples": all(collinear(lift_point(p, r.field), r, q) for r, q in T.pairs),
        "ramification_on_C_and_P": all(C.contains(r) and P.contains(r) for r in rs),
        "residual_on_C_and_S": all(C.contains(q) and S.contains(q) for q in T.residual_points),
        "distinct_ramification": len(set(rs)) == 6,
        "ramification_not_residual": not set(rs) & set(T.residual_points),
        "satellite_matches_closed_form": S.same_curve(satellite_closed_form(C, p)),
    }


# -- cubics through points -------------------------------------------------------------

def cubics_through(points, singular_at: ProjPoint | None = None, F: Field | None = None) -> list:
    """Basis of the cubic forms through ``points`` (and singular at ``singular_at``)."""
    if F is None:
        F = (singular_at.field if singular_at is not None else points[0].field)
    monos = cubic_monomials()
    rows = []
    for pt in points:
        rows += rows_over_base(monomial_values(pt, monos), pt.field, F)
    if singular_at is not None:
        E = singular_at.field
        for i in range(3):
            vals = []
            for mono in monos:
                if mono[i] == 0:
                    vals.append(E.zero)
                    continue
                d = list(mono)
                d[i] -= 1
                v = E.from_int(mono[i])
                for c, k in zip(singular_at.coords, d):
                    if k:
                        v = E.mul(v, E.pow(c, k))
                vals.append(v)
            rows += rows_over_base(vals, E, F)
    basis = nullspace(rows, len(monos), F) if rows else nullspace([], len(monos), F)
    if not basis:
        raise GeometryError("no cubic satisfies the conditions", "nonempty system")
    return [PlaneCurve(form_from_vector(v, monos, F)) for v in basis]


def _pencil(basis, F: Field, limit: int):
    yield from basis
    if len(basis) < 2:
        return
    count = 0
    for t in range(1, (F.order or limit) if F.is_finite else limit):
        lam = F.from_int(t) if F.kind != "prime-power" else F.from_index(t)
        yield PlaneCurve(basis[0].poly + basis[1].poly.scale(lam))
        count += 1
        if count >= limit:
            return


def nodal_member(basis, s4: ProjPoint, limit: int = 64):
    """First member of the family with singular locus exactly {s4}, a node."""
    F = s4.field
    for cand in _pencil(basis, F, limit):
        try:
            pts, unresolved = singular_points(cand, 3)
        except GeometryError:
            continue
        if pts != [s4] or unresolved:
            continue
        cert = local_certificate(cand, s4)
        if cert.label == "A1":
            return cand.monic(), cert
    return None, None


@dataclass(frozen=True)
class Embedding:
    trisection: TrisectionData
    c_sing: PlaneCurve
    node: SingularityCertificate
    cycle: tuple  # C . C_sing as (point, multiplicity)
    s_points: tuple
    line: PlaneCurve
    collinear: bool

    def to_dict(self) -> dict:
        d = self.trisection.to_dict()
        d.update({
            "c_sing": str(self.c_sing),
            "node": self.node.to_dict(),
            "intersection": [{"point": str(q), "field": q.field.spec, "multiplicity": m}
                             for q, m in self.cycle],
            "s_points": [str(q) for q in self.s_points],
            "line": str(self.line),
            "collinear": self.collinear,
        })
        return d


def embed_degeneracy(C: PlaneCurve, s4: ProjPoint, c_sing: PlaneCurve | None = None,
                     allow_extensions: bool = False) -> Embedding:
    """Choose a nodal cubic through the residual points and certify the collinear triple.

    ``c_sing`` may be supplied (for instance the curve from a certificate);
    it is then validated instead of searched for.
    """
    T = trisection(C, s4, allow_extensions=allow_extensions)
    F = C.field
    if c_sing is None:
        basis = cubics_through(T.residual_points, singular_at=s4, F=F)
        c_sing, node = nodal_member(basis, s4)
        if c_sing is None:
            raise GeometryError("no nodal member found among the candidates", "nodal member")
    else:
        if not all(c_sing.contains(q) for q in T.residual_points):
            raise GeometryError("C_sing misses a residual point", "incidence")
        pts, unresolved = singular_points(c_sing, 3)
        if pts != [s4] or unresolved:
            raise GeometryError("C_sing has singular locus other than {s4}", "irreducible nodal")
        node = local_certificate(c_sing, s4)
        if node.label != "A1":
            raise GeometryError("C_sing is not nodal at s4", "node")
    cycle = intersection_cycle(C, c_sing, max_degree=6)
    if sum(m for _, m in cycle) != 9:
        raise GeometryError("intersection cycle does not have degree 9", "Bezout")
    rest = subtract_points(cycle, T.residual_points)
    triple = [q for q, m in rest for _ in range(m)]
    if len(triple) != 3:
        raise GeometryError("residual intersection is not three points", "Bezout")
    if any(q.field.degree > 3 for q in triple):
        raise GeometryError("residual triple needs extension degree > 3", "rationality")
    ok = collinear(*triple)
    distinct = list(dict.fromkeys(triple))
    if len(distinct) < 2:
        raise GeometryError("residual triple is a single point", "distinct points")
    line = line_through(distinct[0], distinct[1])
    if not ok:
        raise GeometryError("s1, s2, s3 are not collinear", "collinearity")
    return Embedding(T, c_sing, node, tuple(cycle), tuple(triple), line.monic(), ok)


# -- ramification datum -------------------------------------------------------------------

def project_from(T: TrisectionData, X: ProjPoint) -> ProjPoint:
    """Image of X under projection from the center, in the (e1, e2) coordinates."""
    F = T.curve.field
    cols = [list(col) for col in T.basis]
    M = [[cols[j][i] for j in range(3)] for i in range(3)]
    Minv = inverse(M, F)
    E = X.field
    emb = embedding(F, E)
    coords = []
    for row in Minv[1:]:
        acc = E.zero
        for a, b in zip(row, X.coords):
            acc = E.add(acc, E.mul(emb(a), b))
        coords.append(acc)
    return minimal_point(ProjPoint(E, coords))


@dataclass(frozen=True)
class RamificationDatum:
    genus: int
    trisection: TrisectionData
    section: PlaneCurve
    nodes: tuple
    branch_images: tuple
    residual_images: tuple

    @property
    def coincidence(self) -> bool:
        return sorted(self.branch_images, key=ProjPoint.sort_key) == sorted(
            self.residual_images, key=ProjPoint.sort_key)

    def to_dict(self) -> dict:
        return {"genus": self.genus, "section": str(self.section),
                "nodes": [str(q) for q in self.nodes],
                "branch_images": [str(q) for q in self.branch_images],
                "coincidence": self.coincidence}


def ramification_datum(C: PlaneCurve, s4: ProjPoint, c_sing: PlaneCurve, genus: int = 1) -> RamificationDatum:
    emb = embed_degeneracy(C, s4, c_sing)
    T = emb.trisection
    nodes = tuple(T.residual_points)
    if len(nodes) != 2 * genus + 4:
        raise GeometryError(f"{len(nodes)} nodes, expected {2 * genus + 4}", "node count")
    branch = tuple(project_from(T, r) for r in T.ramification_points)
    resid = tuple(project_from(T, q) for q in nodes)
    datum = RamificationDatum(genus, T, c_sing, nodes, branch, resid)
    if not datum.coincidence:
        raise GeometryError("branch loci do not coincide", "branch coincidence")
    return datum


# -- odd intersection -----------------------------------------------------------------------

def odd_intersection_check(A: PlaneCurve, B: PlaneCurve, base_points=()) -> tuple[int, bool]:
    """Transversal intersection points of A and B outside the base points, and their parity."""
    if not A.field.is_finite:
        raise GeometryError("odd intersection check needs a finite field", "finite field")
    cycle = intersection_cycle(A, B, max_degree=A.degree * B.degree)
    base = [minimal_point(q) for q in base_points]
    for q in base:
        m = dict(cycle).get(q, 0)
        if m != 1:
            raise GeometryError(f"base point {q} has multiplicity {m}", "transversality")
    rest = subtract_points(cycle, base)
    if any(m != 1 for _, m in rest):
        raise GeometryError("non-transversal residual intersection", "transversality")
    count = len(rest)
    return count, count % 2 == 1


# -- search ---------------------------------------------------------------------------------

def _random_cubic(F: Field, rng: random.Random) -> PlaneCurve | None:
    monos = cubic_monomials()
    vec = [random_element(F, rng) for _ in monos]
    if all(F.is_zero(c) for c in vec):
        return None
    return PlaneCurve(form_from_vector(vec, monos, F)).monic()


def splits_simply(C: PlaneCurve, p: ProjPoint) -> bool:
    """Cheap filter: the branch sextic has six distinct roots in P^1(F_p)."""
    if C.contains(p):
        return False
    e1, e2 = _complement(p)
    B = branch_form(*line_restriction(C, p, e1, e2))
    u = B.u
    if B.is_zero() or B.degree - u.degree > 1 or not is_squarefree(u):
        return False
    if u.degree == 0:
        return True
    F = u.field
    x = UPoly.x(F)
    return (powmod(x, F.order, u) - x % u).is_zero()


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _padd(*terms, p):
    n = max(len(t) for t in terms)
    out = [0] * n
    for t in terms:
        for i, c in enumerate(t):
            out[i] += c
    out = [c % p for c in out]
    while out and out[-1] == 0:
        out.pop()
    return out


def branch_splits_at_origin(vec, p: int) -> bool:
    """Fast filter over F_p for the center (1:0:0): simple branching with all six
    ramification points rational.  ``vec`` lists coefficients in cubic_monomials order."""
    a = vec[0] % p
    if a == 0:
        return False
    b, c, e = [vec[2], vec[1]], [vec[5], vec[4], vec[3]], [vec[9], vec[8], vec[7], vec[6]]
    bb, cc = _pmul(b, b, p), _pmul(c, c, p)
    disc = _padd(_pmul(bb, cc, p), [-4 * a * t for t in _pmul(cc, c, p)],
                 [-4 * t for t in _pmul(_pmul(bb, b, p), e, p)],
                 [-27 * a * a * t for t in _pmul(e, e, p)],
                 [18 * a * t for t in _pmul(_pmul(b, c, p), e, p)], p=p)
    deg = len(disc) - 1
    if deg < 5:
        return False
    deriv = [(i * disc[i]) % p for i in range(1, len(disc))]
    if len(_pgcd(disc, deriv, p)) != 1:
        return False
    xp = _ppowmod([0, 1], p, disc, p)
    xp = xp + [0] * (2 - len(xp)) if len(xp) < 2 else xp
    return _padd(xp, [0, -1], p=p) == []


def sample_pair(F: Field, rng: random.Random, prefilter: bool = True):
    """A uniformly random (cubic, center) pair, drawn as a cubic centered at (1:0:0)
    followed by a random change of coordinates.  With ``prefilter`` the pair is
    returned only when the fast rational-branching test passes, else ``None``."""
    monos = cubic_monomials()
    vec = [random_element(F, rng) for _ in monos]
    if prefilter and (F.kind != "prime" or not branch_splits_at_origin(vec, F.p)):
        return None
    if all(F.is_zero(c) for c in vec):
        return None
    g = random_matrix(F, rng)
    base = form_from_vector(vec, monos, F)
    C = PlaneCurve(transform(base, inverse(g, F))).monic()
    p = ProjPoint(F, [g[i][0] for i in range(3)])
    return C, p


def _candidate(F: Field, seed: int, index: int):
    rng = random.Random(f"search:{F.spec}:{seed}:{index}")
    return sample_pair(F, rng)


def evaluate_candidate(F: Field, pair):
    """A certificate dict when the pair yields an F-rational nodal embedding, else None."""
    if pair is None:
        return None
    C, p = pair
    try:
        emb = embed_degeneracy(C, p)
    except GeometryError:
        return None
    return certificate(emb)


def certificate(emb: Embedding) -> dict:
    T = emb.trisection
    return {"cubic": str(T.curve), "center": str(T.center), "c_sing": str(emb.c_sing),
            "residual_points": [str(q) for q in T.residual_points],
            "s_points": [str(q) for q in emb.s_points], "line": str(emb.line)}


def _search_chunk(args):
    spec, seed, lo, hi = args
    F = make_field(spec)
    out = []
    for i in range(lo, hi):
        cert = evaluate_candidate(F, _candidate(F, seed, i))
        if cert is not None:
            out.append(cert)
    return out


def _canonical_key(F: Field, cert: dict):
    C = PlaneCurve.parse(cert["cubic"], F)
    vec = [F.sort_key(C.poly.terms.get(m, F.zero)) for m in cubic_monomials()]
    p = ProjPoint.parse(F, cert["center"])
    return (vec, p.sort_key(), cert["c_sing"])


def search_example(p: int, budget: int, seed: int, workers: int = 1) -> list[dict]:
    """Seeded search for F_p-rational embeddings; output is sorted canonically."""
    if p < 5 or p >= 1000:
        raise GeometryError("search needs a prime 5 <= p < 1000", "prime range")
    F = make_field(kind="prime", p=p)
    chunk = 250
    jobs = [(F.spec, seed, lo, min(lo + chunk, budget)) for lo in range(0, budget, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_chunk, jobs))
    else:
        results = [_search_chunk(j) for j in jobs]
    merged = {}
    for part in results:
        for cert in part:
            merged[(cert["cubic"], cert["center"])] = cert
    return sorted(merged.values(), key=lambda c: _canonical_key(F, c))


def verify_certificate(F: Field, cubic: str, center: str, c_sing: str) -> Embedding:
    """Re-derive and validate a (C, s4, C_sing) certificate; raises on any failure."""
    C = PlaneCurve.parse(cubic, F)
    s4 = ProjPoint.parse(F, center)
    L = PlaneCurve.parse(c_sing, F)
    return embed_degeneracy(C, s4, c_sing=L)
