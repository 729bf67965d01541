"""First cohomology of a finite group acting on a lattice."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AlgebraError
from .fields import make_field
from .linalg import int_kernel, rref, smith_diagonal

Q = make_field("Q")


@dataclass(frozen=True)
class CohomologyResult:
    group_order: int
    module_rank: int
    divisors: tuple = field(default=())

    @property
    def vanishes(self) -> bool:
        return not self.divisors

    def to_dict(self) -> dict:
        return {"group_order": self.group_order, "module_rank": self.module_rank,
                "elementary_divisors": list(self.divisors)}


def _matmul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def _identity(r):
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def _rational_row_basis(rows, ncols):
    """Integer rows spanning the same rational row space (primitive RREF rows)."""
    if not rows:
        return []
    R, _ = rref([[Fraction(a) for a in row] for row in rows], Q)
    out = []
    for row in R:
        den = 1
        for a in row:
            den = den * a.denominator // _gcd(den, a.denominator)
        out.append([int(a * den) for a in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _coordinates(K, vectors):
    """Integer coordinates of each vector in the Z-basis given by the columns of K."""
    n, k = len(K), len(K[0]) if K else 0
    out = []
    for v in vectors:
        aug = [[Fraction(K[i][j]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
        R, piv = rref(aug, Q)
        if k in piv:
            raise AlgebraError("vector not in the span of the basis")
        sol = [Fraction(0)] * k
        for row, pc in zip(R, piv):
            sol[pc] = row[k]
        if any(c.denominator != 1 for c in sol):
            raise AlgebraError("coordinates are not integral")
        out.append([int(c) for c in sol])
    return out


def _check_group(mats):
    r = len(mats[0])
    I = _identity(r)
    elems = set(mats)
    if I not in elems:
        raise AlgebraError("group must contain the identity")
    for A in mats:
        for B in mats:
            if _matmul(A, B) not in elems:
                raise AlgebraError("matrices are not closed under multiplication")
    return r, I


def _result(order, r, Zdim, Bcoords):
    if Zdim == 0:
        return CohomologyResult(order, r, ())
    M = [[Bcoords[j][i] for j in range(len(Bcoords))] for i in range(Zdim)] if Bcoords else [[0]]
    diag = smith_diagonal(M) if Bcoords else []
    if len(diag) < Zdim:
        raise AlgebraError("H^1 has a free part; the group is not finite or the input is wrong")
    divisors = tuple(d for d in diag if d > 1)
    for d in divisors:
        if order % d:
            raise AlgebraError(f"elementary divisor {d} does not divide |H| = {order}")
    return CohomologyResult(order, r, divisors)


def h1(mats, lattice=None) -> CohomologyResult:
    """H^1(H, Z^r) for a finite group of integer matrices, via all cocycle relations.

    A cocycle is phi: H -> Z^r with phi(gh) = phi(g) + g phi(h); phi(1) = 0.
    The relations for every pair give an integer system whose kernel is Z^1;
    coboundaries phi_m(g) = g m - m are written in a Z-basis of Z^1 and the
    quotient is read from the Smith form.
    """
    mats = [tuple(tuple(row) for row in M) for M in mats]
    r, I = _check_group(mats)
    if lattice is not None:
        for M in mats:
            if not lattice.is_isometry(M):
                raise AlgebraError("matrix is not an isometry of the lattice")
    nonid = [M for M in mats if M != I]
    order = len(mats)
    if not nonid:
        return CohomologyResult(1, r, ())
    pos = {M: k for k, M in enumerate(nonid)}
    ncols = len(nonid) * r
    rows = []
    for g in nonid:
        for h in nonid:
            gh = _matmul(g, h)
            for i in range(r):
                row = [0] * ncols
                if gh != I:
                    row[pos[gh] * r + i] += 1
                row[pos[g] * r + i] -= 1
                for j in range(r):
                    row[pos[h] * r + j] -= g[i][j]
                if any(row):
                    rows.append(row)
    basis_rows = _rational_row_basis(rows, ncols)
    K = int_kernel(basis_rows, ncols) if basis_rows else [
        [int(i == j) for i in range(ncols)] for j in range(ncols)]
    Kcols = [[K[j][i] for j in range(len(K))] for i in range(ncols)]  # ncols x dimZ
    cob = []
    for m in range(r):
        vec = []
        for g in nonid:
            vec.extend(g[i][m] - int(i == m) for i in range(r))
        cob.append(vec)
    coords = _coordinates(Kcols, cob) if K else []
    return _result(order, r, len(K), coords)


def h1_cyclic(g) -> CohomologyResult:
    """Oracle for a cyclic group <g>: H^1 = ker(N) / im(g - 1), N = 1 + g + ... + g^(m-1)."""
    g = tuple(tuple(row) for row in g)
    r = len(g)
    I = _identity(r)
    powers = [I]
    while True:
        nxt = _matmul(g, powers[-1])
        if nxt == I:
            break
        powers.append(nxt)
        if len(powers) > 10000:
            raise AlgebraError("matrix has infinite order")
    m = len(powers)
    N = [[sum(P[i][j] for P in powers) for j in range(r)] for i in range(r)]
    K = int_kernel(N, r) if any(any(row) for row in N) else [
        [int(i == j) for i in range(r)] for j in range(r)]
    if not K:
        return CohomologyResult(m, r, ())
    Kcols = [[K[j][i] for j in range(len(K))] for i in range(r)]
    images = [[g[i][j] - int(i == j) for i in range(r)] for j in range(r)]
    coords = _coordinates(Kcols, images)
    return _result(m, r, len(K), coords)
