"""Exact polynomial identities behind the conic-bundle models.

Each fixture is a pair of polynomials over Q that must agree after a list
of substitutions, an optional clearing monomial, and cancellation of
declared inverse pairs.  Every fixture is checked twice: symbolically, and
numerically at random points over F_101.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import AlgebraError
from .fields import make_field
from .linalg import bareiss_det, det, inverse, matmul, nullspace, rank
from .poly import MultiPoly, cancel_inverses, identity_check, identity_residual, parse_poly

Q = make_field("Q")
SPOT_PRIME = 101


@dataclass(frozen=True)
class IdentityFixture:
    """``clearing * lhs == clearing * rhs`` after ``relations`` (applied in order)."""

    name: str
    vars: tuple
    lhs: str
    rhs: str
    relations: tuple = ()
    clearing: str | None = None
    inverses: tuple = ()
    legend: dict = field(default_factory=dict, compare=False, hash=False)

    def poly(self, text: str) -> MultiPoly:
        return parse_poly(text, self.vars, Q)

    def parts(self):
        rel = [(v, self.poly(e)) for v, e in self.relations]
        clr = self.poly(self.clearing) if self.clearing else None
        return self.poly(self.lhs), self.poly(self.rhs), rel, clr

    def check(self) -> bool:
        lhs, rhs, rel, clr = self.parts()
        return identity_check(lhs, rhs, rel, clr, self.inverses)

    def residual(self) -> MultiPoly:
        lhs, rhs, rel, clr = self.parts()
        return identity_residual(lhs, rhs, rel, clr, self.inverses)

    def spot_check(self, trials: int = 10, seed: int = 0) -> bool:
        """Evaluate both sides at random points over F_101, resolving substitutions numerically."""
        F = make_field(kind="prime", p=SPOT_PRIME)
        lhs, rhs, rel, clr = self.parts()
        lhs, rhs = lhs.reduce_mod(SPOT_PRIME), rhs.reduce_mod(SPOT_PRIME)
        rel = [(v, e.reduce_mod(SPOT_PRIME)) for v, e in rel]
        clr = clr.reduce_mod(SPOT_PRIME) if clr is not None else None
        inv = dict(self.inverses)
        substituted = {v for v, _ in rel}
        rng = random.Random(f"spot:{self.name}:{seed}")
        done = 0
        while done < trials:
            env = {v: (0 if v in substituted else rng.randrange(1, SPOT_PRIME)) for v in self.vars}
            for u, iu in inv.items():
                env[iu] = F.inv(env[u])
            for v, e in reversed(rel):
                env[v] = e.evaluate(env)
            if any(F.mul(env[u], env[iu]) != 1 for u, iu in inv.items()):
                continue
            c = clr.evaluate(env) if clr is not None else 1
            if F.mul(c, lhs.evaluate(env)) != F.mul(c, rhs.evaluate(env)):
                return False
            done += 1
        return True

    def corrupted(self) -> "IdentityFixture":
        """A deliberately broken copy for harness tests."""
        return replace(self, rhs=f"{self.rhs} + 1")


# -- the conic-bundle model ------------------------------------------------------

EXAMPLE_VARS = ("k", "l", "a", "b", "u", "v", "x", "y", "z")
EXAMPLE_LEGEND = {"k": "kappa", "l": "lambda", "a": "alpha", "b": "beta"}
EXAMPLE_MAP = ("l*(-a^2 + b^2)", "2*k*a*b", "k*l*(a^2 + b^2)")

EXAMPLE_CONIC = IdentityFixture(
    name="example-conic",
    vars=EXAMPLE_VARS,
    lhs="u*x^2 + v*y^2 - z^2",
    rhs="0",
    relations=(("x", EXAMPLE_MAP[0]), ("y", EXAMPLE_MAP[1]), ("z", EXAMPLE_MAP[2]),
               ("u", "k^2"), ("v", "l^2")),
    legend=EXAMPLE_LEGEND,
)


def example_conic_mutant() -> IdentityFixture:
    """Flip the sign of one term of the first output: the identity must break.

    Flipping a whole output is invisible since every output appears squared.
    """
    rel = dict(EXAMPLE_CONIC.relations)
    rel["x"] = "l*(a^2 + b^2)"
    return replace(EXAMPLE_CONIC, name="example-conic-mutant",
                   relations=tuple((v, rel[v]) for v, _ in EXAMPLE_CONIC.relations))


def specialize_example(kappa, lam, alpha, beta):
    """The point of the model over (kappa^2, lambda^2) for given parameters."""
    env = {"k": Fraction(kappa), "l": Fraction(lam), "a": Fraction(alpha), "b": Fraction(beta)}
    vars4 = ("k", "l", "a", "b")
    return tuple(parse_poly(e, vars4, Q).evaluate(env) for e in EXAMPLE_MAP)


# chart 1: t0 = v0 t1, u0 = v0 u1;  chart 2: t0 = u0 t2, v0 = u0 v2.
# z1, z2 are the shifted coordinates z - t x; h1, h2 the unshifted ones; w1 = 1/u1.
CHART_VARS = ("t1", "u1", "v0", "k1", "l1", "x1", "y1", "z1", "h1",
              "t2", "v2", "u0", "k2", "l2", "x2", "y2", "z2", "h2", "w1", "a", "b")
CHART_LEGEND = {"k1": "kappa_1", "l1": "lambda_1", "k2": "kappa_2", "l2": "lambda_2",
                "z1": "shifted z_1", "z2": "shifted z_2", "h1": "z_1", "h2": "z_2",
                "w1": "1/u_1", "a": "alpha", "b": "beta"}
CHART1 = "-u1*x1^2 + v0*y1^2 - z1^2 - 2*t1*x1*z1"
CHART2 = "-v2*x2^2 + u0*y2^2 - z2^2 - 2*t2*x2*z2"

CHART_1 = IdentityFixture(
    name="chart-1-derivation",
    vars=CHART_VARS,
    lhs=CHART1,
    rhs="k1^2*x1^2 + l1^2*y1^2 - h1^2",
    relations=(("z1", "h1 - t1*x1"), ("u1", "t1^2 - k1^2"), ("v0", "l1^2")),
    legend=CHART_LEGEND,
)

CHART_2 = IdentityFixture(
    name="chart-2-derivation",
    vars=CHART_VARS,
    lhs=CHART2,
    rhs="k2^2*x2^2 + l2^2*y2^2 - h2^2",
    relations=(("z2", "h2 - t2*x2"), ("v2", "t2^2 - k2^2"), ("u0", "l2^2")),
    legend=CHART_LEGEND,
)

CHART_1_MAP = IdentityFixture(
    name="chart-1-map",
    vars=CHART_VARS,
    lhs=CHART1,
    rhs="0",
    relations=(("x1", "l1*(-a^2 + b^2)"), ("y1", "2*k1*a*b"),
               ("z1", "(k1 + t1)*l1*a^2 + (k1 - t1)*l1*b^2"),
               ("u1", "t1^2 - k1^2"), ("v0", "l1^2")),
    legend=CHART_LEGEND,
)

OVERLAP_RELATIONS = (("u0", "v0*u1"), ("v2", "w1"), ("t2", "t1*w1"))

OVERLAP_V0 = IdentityFixture(
    name="overlap-v0",
    vars=CHART_VARS,
    lhs="v0",
    rhs="u0*v2",
    relations=OVERLAP_RELATIONS,
    inverses=(("u1", "w1"),),
    legend=CHART_LEGEND,
)

OVERLAP_T0 = IdentityFixture(
    name="overlap-t0",
    vars=CHART_VARS,
    lhs="v0*t1",
    rhs="u0*t2",
    relations=OVERLAP_RELATIONS,
    inverses=(("u1", "w1"),),
    legend=CHART_LEGEND,
)

TRANSITION = IdentityFixture(
    name="chart-transition",
    vars=CHART_VARS,
    lhs=f"u1*({CHART2})",
    rhs=CHART1,
    relations=(("x2", "z1"), ("y2", "w1*y1"), ("z2", "x1")) + OVERLAP_RELATIONS,
    clearing="u1^2",
    inverses=(("u1", "w1"),),
    legend=CHART_LEGEND,
)

IDENTITY_FIXTURES = (EXAMPLE_CONIC, CHART_1, CHART_2, CHART_1_MAP, OVERLAP_V0, OVERLAP_T0,
                     TRANSITION)


# -- discriminant determinants ------------------------------------------------------

@dataclass(frozen=True)
class DeterminantFixture:
    """det(matrix) == expected, with the determinant of the symmetric Gram matrix as convention."""

    name: str
    vars: tuple
    matrix: tuple
    expected: str

    def entries(self):
        return [[parse_poly(e, self.vars, Q) for e in row] for row in self.matrix]

    def determinant(self) -> MultiPoly:
        zero = MultiPoly(Q, self.vars)
        one = MultiPoly.const(Q, self.vars, 1)
        return bareiss_det(self.entries(), zero, one)

    def residual(self) -> MultiPoly:
        return (self.determinant() - parse_poly(self.expected, self.vars, Q)).drop_unused()

    def check(self) -> bool:
        return self.residual().is_zero()

    def spot_check(self, trials: int = 10, seed: int = 0) -> bool:
        F = make_field(kind="prime", p=SPOT_PRIME)
        rng = random.Random(f"spot:{self.name}:{seed}")
        M = [[e.reduce_mod(SPOT_PRIME) for e in row] for row in self.entries()]
        target = parse_poly(self.expected, self.vars, Q).reduce_mod(SPOT_PRIME)
        for _ in range(trials):
            env = {v: rng.randrange(SPOT_PRIME) for v in self.vars}
            num = [[e.evaluate(env) for e in row] for row in M]
            if det(num, F) != target.evaluate(env):
                return False
        return True

    def corrupted(self) -> "DeterminantFixture":
        return replace(self, expected=f"{self.expected} + 1")


BLOWUP_DISCRIMINANT = DeterminantFixture(
    name="blowup-discriminant",
    vars=("s", "u", "v", "t"),  # s stands for theta
    matrix=(("s", "0", "0"), ("0", "-u", "-t"), ("0", "-t", "-v")),
    expected="s*(u*v - t^2)",
)

TRANSFORMED_DISCRIMINANT = DeterminantFixture(
    name="elementary-transform-discriminant",
    vars=("u0", "v0", "t0"),
    matrix=(("1", "0", "0"), ("0", "-u0", "-t0"), ("0", "-t0", "-v0")),
    expected="u0*v0 - t0^2",
)

DETERMINANT_FIXTURES = (BLOWUP_DISCRIMINANT, TRANSFORMED_DISCRIMINANT)

TRANSFORMED_CONIC = "x^2 - u0*y^2 - 2*t0*y*z - v0*z^2"


def degenerate_fiber():
    """The transformed conic at t0 = u0 = v0 = 0: returns (polynomial, rank of its Gram matrix)."""
    vs = ("x", "y", "z", "u0", "v0", "t0")
    conic = parse_poly(TRANSFORMED_CONIC, vs, Q)
    zero = MultiPoly(Q, vs)
    special = conic.subs({"u0": zero, "v0": zero, "t0": zero}).drop_unused()
    gram = [[Fraction(0)] * 3 for _ in range(3)]
    for e, c in special.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            gram[i][i] += c
        else:
            gram[i][j] += c / 2
            gram[j][i] += c / 2
    return special, rank(gram, Q)


# -- the representation decomposition -----------------------------------------------

REP_VARS = ("a", "b", "m", "n")  # m = 1/a, n = 1/b
REP_INVERSES = (("a", "m"), ("b", "n"))
GENERATORS = {
    "diagonal": (("a", "0"), ("0", "m")),
    "antidiagonal": (("0", "b"), ("n", "0")),
}
# 1 ; chi ; rho_2 in squared-entry coordinates
TARGET_BLOCKS = {
    "diagonal": (("1", "0", "0", "0"), ("0", "1", "0", "0"),
                 ("0", "0", "a^2", "0"), ("0", "0", "0", "m^2")),
    "antidiagonal": (("1", "0", "0", "0"), ("0", "-1", "0", "0"),
                     ("0", "0", "0", "b^2"), ("0", "0", "n^2", "0")),
}
# frozen output of the solve below, kept for regression
FROZEN_T = ((1, 0, 0, 1), (-1, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0))
TRACE_ROW = (1, 0, 0, 1)


def _rp(text) -> MultiPoly:
    return parse_poly(text, REP_VARS, Q)


def _reduce(p: MultiPoly) -> MultiPoly:
    return cancel_inverses(p, REP_INVERSES)


def _matmul(A, B):
    zero = MultiPoly(Q, REP_VARS)
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            acc = zero
            for k, a in enumerate(row):
                acc = acc + a * B[k][j]
            out_row.append(_reduce(acc))
        out.append(out_row)
    return out


def _inverse2(g):
    (p, q), (r, s) = g
    d = _reduce(p * s - q * r)
    if d.degree != 0 or d.is_zero():
        raise AlgebraError("generator determinant is not a unit constant")
    c = Fraction(1) / d.constant_term()
    return [[s.scale(c), (-q).scale(c)], [(-r).scale(c), p.scale(c)]]


def conjugation_matrix(g) -> list[list[MultiPoly]]:
    """rho_2^dual (x) rho_2 as X -> g X g^-1 on the basis E11, E12, E21, E22."""
    g = [[_rp(e) for e in row] for row in g]
    gi = _inverse2(g)
    zero, one = MultiPoly(Q, REP_VARS), MultiPoly.const(Q, REP_VARS, 1)
    cols = []
    for k in range(2):
        for l in range(2):
            E = [[one if (i, j) == (k, l) else zero for j in range(2)] for i in range(2)]
            img = _matmul(_matmul(g, E), gi)
            cols.append([img[0][0], img[0][1], img[1][0], img[1][1]])
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def intertwiner_equations():
    """Linear rows in the 16 entries of T encoding T R(g) = B(g) T for both generators."""
    rows = []
    for name, g in GENERATORS.items():
        R = conjugation_matrix(g)
        B = [[_rp(e) for e in row] for row in TARGET_BLOCKS[name]]
        for i in range(4):
            for j in range(4):
                # sum_k T[i][k] R[k][j] - sum_k B[i][k] T[k][j]
                coeff = {}
                for k in range(4):
                    coeff[4 * i + k] = coeff.get(4 * i + k, MultiPoly(Q, REP_VARS)) + R[k][j]
                    coeff[4 * k + j] = coeff.get(4 * k + j, MultiPoly(Q, REP_VARS)) - B[i][k]
                monos = set()
                for p in coeff.values():
                    monos |= set(_reduce(p).terms)
                for mono in sorted(monos):
                    row = [Fraction(0)] * 16
                    for idx, p in coeff.items():
                        row[idx] = _reduce(p).terms.get(mono, Fraction(0))
                    if any(row):
                        rows.append(row)
    return rows


@dataclass(frozen=True)
class RepDecomposition:
    intertwiner_dimension: int
    T: tuple
    T_inverse: tuple
    trace_projection: bool
    conjugates: bool
    matches_frozen: bool
    dyadic: bool

    @property
    def ok(self) -> bool:
        return (self.trace_projection and self.conjugates and self.matches_frozen and self.dyadic)

    def to_dict(self) -> dict:
        return {
            "intertwiner_dimension": self.intertwiner_dimension,
            "T": [[str(c) for c in row] for row in self.T],
            "T_inverse": [[str(c) for c in row] for row in self.T_inverse],
            "trace_projection": self.trace_projection,
            "block_diagonal": self.conjugates,
            "matches_frozen": self.matches_frozen,
            "entries_in_Z[1/2]": self.dyadic,
        }


def solve_intertwiner():
    """Constant T with T R(g) T^-1 = blockdiag(1, chi, rho_2') for both generators.

    The solution space of the linear system is the space of intertwiners;
    T is the sum of its reduced-echelon basis, rescaled so that its first
    row is the trace.  Raises if that T is singular.
    """
    basis = nullspace(intertwiner_equations(), 16, Q)
    if not basis:
        raise AlgebraError("no constant intertwiner exists for both generators")
    vec = [sum((v[i] for v in basis), Fraction(0)) for i in range(16)]
    T = [vec[4 * i:4 * i + 4] for i in range(4)]
    lead = next((c for c in T[0] if c), None)
    if lead is None:
        raise AlgebraError("the intertwiner kills the trivial block")
    T[0] = [c / lead for c in T[0]]
    return len(basis), T


def verify_rep_decomposition(T=None) -> RepDecomposition:
    dim, solved = solve_intertwiner()
    T = [list(map(Fraction, row)) for row in (T if T is not None else solved)]
    try:
        Ti = inverse(T, Q)
    except (ZeroDivisionError, AlgebraError):
        return RepDecomposition(dim, tuple(map(tuple, T)), (), False, False, False, False)
    Tp = [[MultiPoly.const(Q, REP_VARS, c) for c in row] for row in T]
    Tip = [[MultiPoly.const(Q, REP_VARS, c) for c in row] for row in Ti]
    conj = True
    for name, g in GENERATORS.items():
        lhs = _matmul(_matmul(Tp, conjugation_matrix(g)), Tip)
        rhs = [[_rp(e) for e in row] for row in TARGET_BLOCKS[name]]
        conj = conj and all(lhs[i][j] == rhs[i][j] for i in range(4) for j in range(4))
    dyadic = all(_is_dyadic(c) for row in T + Ti for c in row)
    return RepDecomposition(
        intertwiner_dimension=dim,
        T=tuple(tuple(row) for row in T),
        T_inverse=tuple(tuple(row) for row in Ti),
        trace_projection=tuple(T[0]) == TRACE_ROW,
        conjugates=conj,
        matches_frozen=tuple(tuple(row) for row in solved) == FROZEN_T,
        dyadic=dyadic,
    )


def _is_dyadic(c: Fraction) -> bool:
    d = c.denominator
    return d & (d - 1) == 0


def rep_spot_check(T, trials: int = 10, seed: int = 0) -> bool:
    """Numeric version over F_101: conjugate by T at random alpha, beta."""
    F = make_field(kind="prime", p=SPOT_PRIME)
    Tn = [[F.from_fraction(Fraction(c)) for c in row] for row in T]
    Tin = inverse(Tn, F)
    rng = random.Random(f"spot:rep:{seed}")
    for _ in range(trials):
        a, b = rng.randrange(1, SPOT_PRIME), rng.randrange(1, SPOT_PRIME)
        env = {"a": a, "b": b, "m": F.inv(a), "n": F.inv(b)}
        for name, g in GENERATORS.items():
            gn = [[_rp(e).reduce_mod(SPOT_PRIME).evaluate(env) for e in row] for row in g]
            gin = inverse(gn, F)
            R = [[0] * 4 for _ in range(4)]
            for col, (k, l) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
                E = [[int((i, j) == (k, l)) for j in range(2)] for i in range(2)]
                img = matmul(matmul(gn, E, F), gin, F)
                for row, (i, j) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
                    R[row][col] = img[i][j]
            got = matmul(matmul(Tn, R, F), Tin, F)
            want = [[_rp(e).reduce_mod(SPOT_PRIME).evaluate(env) for e in row]
                    for row in TARGET_BLOCKS[name]]
            if got != want:
                return False
    return True


def trace_identity(name: str) -> bool:
    """tr R(g) = 1 + chi(g) + tr rho_2'(g) symbolically."""
    R = conjugation_matrix(GENERATORS[name])
    B = [[_rp(e) for e in row] for row in TARGET_BLOCKS[name]]
    tr = lambda M: _reduce(sum((M[i][i] for i in range(4)), MultiPoly(Q, REP_VARS)))
    return tr(R) == tr(B)
