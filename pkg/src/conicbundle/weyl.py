"""W(D_n) acting on the Neron-Severi lattice of a conic bundle with n singular fibers."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import AlgebraError

Matrix = tuple  # tuple of row tuples


@dataclass(frozen=True)
class SignedPerm:
    """sigma[i] is the image of letter i (0-based); signs[i] = -1 when E_i goes to f - E_sigma(i)."""

    perm: tuple
    signs: tuple

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SignedPerm":
        return cls(tuple(range(n)), (1,) * n)

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        """``self * other`` applies ``other`` first."""
        perm = tuple(self.perm[other.perm[i]] for i in range(self.n))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.n))
        return SignedPerm(perm, signs)

    @property
    def is_even(self) -> bool:
        return self.signs.count(-1) % 2 == 0

    def __str__(self):
        seen, cycles = set(), []
        for i in range(self.n):
            if i in seen or self.perm[i] == i:
                seen.add(i)
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(str(j + 1))
                j = self.perm[j]
            cycles.append("(" + "".join(cyc) + ")")
        # signs are indexed by source: sigma o c_i flips E_i before permuting
        flips = "".join(f"c{i + 1}" for i in range(self.n) if self.signs[i] < 0)
        text = "".join(cycles) + flips
        return text or "1"


_TOKEN = re.compile(r"\(([0-9 ,]*)\)|c([0-9]+)|(1|e)$")


def parse_signed_perm(text: str, n: int) -> SignedPerm:
    """Parse literals such as ``(23)c1c2c3c4``; factors compose right to left."""
    text = text.strip()
    pos = 0
    result = SignedPerm.identity(n)
    factors = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise AlgebraError(f"bad signed permutation {text!r} at offset {pos}")
        if m.group(1) is not None:
            body = m.group(1).replace(",", " ")
            letters = [int(t) for t in body.split()] if " " in body.strip() else [int(ch) for ch in body]
            if any(not 1 <= k <= n for k in letters) or len(set(letters)) != len(letters):
                raise AlgebraError(f"bad cycle in {text!r}")
            perm = list(range(n))
            for a, b in zip(letters, letters[1:] + letters[:1]):
                perm[a - 1] = b - 1
            factors.append(SignedPerm(tuple(perm), (1,) * n))
        elif m.group(2) is not None:
            i = int(m.group(2))
            if not 1 <= i <= n:
                raise AlgebraError(f"c{i} out of range for n = {n}")
            signs = [1] * n
            signs[i - 1] = -1
            factors.append(SignedPerm(tuple(range(n)), tuple(signs)))
        pos = m.end()
    for fct in factors:
        result = result * fct
    return result


# -- lattice -------------------------------------------------------------------------

@dataclass(frozen=True)
class NSLattice:
    """Basis (f, s, E_1..E_n); f.s = 1, s.s = -e, E_i.E_i = -1."""

    n: int
    e: int = 0

    @property
    def rank(self) -> int:
        return self.n + 2

    @property
    def labels(self) -> list[str]:
        return ["f", "s"] + [f"E{i + 1}" for i in range(self.n)]

    @property
    def gram(self) -> Matrix:
        r = self.rank
        G = [[0] * r for _ in range(r)]
        G[0][1] = G[1][0] = 1
        G[1][1] = -self.e
        for i in range(2, r):
            G[i][i] = -1
        return tuple(tuple(row) for row in G)

    def pair(self, a, b) -> int:
        G = self.gram
        return sum(a[i] * G[i][j] * b[j] for i in range(self.rank) for j in range(self.rank))

    def vector(self, **coeffs) -> tuple:
        v = [0] * self.rank
        for name, c in coeffs.items():
            v[self.labels.index(name)] = c
        return tuple(v)

    def reflection(self, root) -> Matrix:
        """x -> x + (x . root) root for a (-2)-root."""
        if self.pair(root, root) != -2:
            raise AlgebraError("reflections need a root of square -2")
        r = self.rank
        cols = []
        for j in range(r):
            ej = [int(i == j) for i in range(r)]
            k = self.pair(ej, root)
            cols.append([ej[i] + k * root[i] for i in range(r)])
        return tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))

    def simple_roots(self) -> list[tuple]:
        n = self.n
        roots = []
        for i in range(n - 1):
            v = [0] * self.rank
            v[2 + i], v[3 + i] = 1, -1
            roots.append(tuple(v))
        if n >= 2:
            v = [0] * self.rank
            v[0], v[2], v[3] = 1, -1, -1
            roots.append(tuple(v))
        return roots

    def is_isometry(self, M: Matrix) -> bool:
        G = self.gram
        return matmul(transpose(M), matmul(G, M)) == G and all(M[i][0] == int(i == 0)
                                                              for i in range(self.rank))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def identity(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def label_matrix(M: Matrix, lattice: NSLattice) -> SignedPerm:
    """Read the signed permutation from the images of E_i."""
    n = lattice.n
    perm, signs = [], []
    for i in range(n):
        col = [M[k][2 + i] for k in range(lattice.rank)]
        Es = col[2:]
        nz = [j for j, c in enumerate(Es) if c]
        if len(nz) != 1 or col[1] != 0:
            raise AlgebraError("matrix does not permute the classes {E_i, f - E_i}")
        j = nz[0]
        if Es[j] == 1 and col[0] == 0:
            signs.append(1)
        elif Es[j] == -1 and col[0] == 1:
            signs.append(-1)
        else:
            raise AlgebraError("matrix does not permute the classes {E_i, f - E_i}")
        perm.append(j)
    return SignedPerm(tuple(perm), tuple(signs))


class FiniteGroup:
    """A finite matrix group given by its element list; index 0 is the identity."""

    def __init__(self, elements, lattice: NSLattice):
        self.lattice = lattice
        self.elements = list(elements)
        self.index = {M: i for i, M in enumerate(self.elements)}
        self.labels = [label_matrix(M, lattice) for M in self.elements]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.index[matmul(self.elements[i], self.elements[j])]

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.mul(i, j) == self.mul(j, i) for i in range(n) for j in range(i + 1, n))

    def find(self, sp: SignedPerm) -> int:
        for i, lab in enumerate(self.labels):
            if lab == sp:
                return i
        raise AlgebraError(f"{sp} is not an element of the group")

    def signature(self) -> tuple:
        return (self.order, tuple(sorted(str(lab) for lab in self.labels)))


def closure(gens, r: int, limit: int | None = None) -> list:
    """All products of the generators, identity first, in breadth-first order."""
    I = identity(r)
    elems = [I]
    seen = {I}
    frontier = [I]
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = matmul(g, A)
                if B not in seen:
                    seen.add(B)
                    elems.append(B)
                    nxt.append(B)
                    if limit is not None and len(elems) > limit:
                        raise AlgebraError(f"closure exceeds {limit} elements")
        frontier = nxt
    return elems


@lru_cache(maxsize=None)
def weyl_group(n: int, e: int = 0) -> FiniteGroup:
    if not 2 <= n <= 6:
        raise AlgebraError("weyl_group supports 2 <= n <= 6")
    lat = NSLattice(n, e)
    gens = [lat.reflection(a) for a in lat.simple_roots()]
    bound = 2 ** (n - 1) * math.factorial(n)
    elems = closure(gens, lat.rank, limit=bound)
    G = FiniteGroup(elems, lat)
    if any(not lab.is_even for lab in G.labels):
        raise AlgebraError("odd signed permutation generated")
    return G


def subgroup(G: FiniteGroup, gens) -> FiniteGroup:
    mats = [G.elements[i] if isinstance(i, int) else i for i in gens]
    return FiniteGroup(closure(mats, G.lattice.rank), G.lattice)


RHO_GENERATORS = ("(23)c1c2c3c4", "(34)c1c2c3c4")


def generated_subgroup(literals, n: int = 4) -> FiniteGroup:
    G = weyl_group(n)
    idx = [G.find(parse_signed_perm(t, n)) for t in literals]
    return subgroup(G, idx)


def rho_image() -> FiniteGroup:
    return generated_subgroup(RHO_GENERATORS, 4)


def subgroups(G: FiniteGroup, max_order: int = 48) -> list[FiniteGroup]:
    """Closures of generating sets of size <= 2, deduplicated and sorted by signature.

    Complete only when every subgroup of G is generated by two elements.
    """
    if G.order > max_order:
        raise AlgebraError(f"subgroup enumeration is limited to order {max_order}")
    found = {}
    n = G.order
    candidates = [()] + [(i,) for i in range(n)] + list(combinations(range(n), 2))
    for gens in candidates:
        H = subgroup(G, gens)
        key = frozenset(H.elements)
        if key not in found:
            found[key] = H
    return sorted(found.values(), key=lambda H: H.signature())
