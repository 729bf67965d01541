"""Dense univariate polynomials over a :class:`~conicbundle.fields.Field`.

Besides ring arithmetic this module carries the finite-field machinery used
for root finding: squarefree decomposition, distinct-degree factorization,
Cantor-Zassenhaus splitting, and embeddings F_{p^a} -> F_{p^c}.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .errors import FieldError
from .fields import Field, extension_of
from .linalg import solve


class UPoly:
    """Coefficients stored low degree first, trailing zeros trimmed."""

    __slots__ = ("field", "c")

    def __init__(self, field: Field, coeffs=(), trusted: bool = False):
        self.field = field
        if trusted:
            self.c = tuple(coeffs)
            return
        c = list(coeffs)
        z = field.is_zero
        while c and z(c[-1]):
            c.pop()
        self.c = tuple(c)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(n) for n in ints])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one], trusted=True)

    @classmethod
    def const(cls, field, raw):
        return cls(field, [raw])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1]

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.field == other.field and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        F = self.field
        return f"UPoly({F.spec}, [{', '.join(F.to_str(a) for a in self.c)}])"

    def __call__(self, a):
        F = self.field
        acc = F.zero
        for coef in reversed(self.c):
            acc = F.add(F.mul(acc, a), coef)
        return acc

    def __add__(self, other):
        F = self.field
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return UPoly(F, out)

    def __neg__(self):
        F = self.field
        return UPoly(F, [F.neg(a) for a in self.c], trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if isinstance(other, UPoly):
            a, b = self.c, other.c
            if not a or not b:
                return UPoly(F)
            if F.kind == "prime":
                p = F.p
                out = [0] * (len(a) + len(b) - 1)
                for i, x in enumerate(a):
                    if x:
                        for j, y in enumerate(b):
                            out[i + j] += x * y
                return UPoly(F, [v % p for v in out])
            out = [F.zero] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if F.is_zero(x):
                    continue
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
            return UPoly(F, out)
        return self.scale(other)

    def scale(self, raw):
        F = self.field
        return UPoly(F, [F.mul(raw, a) for a in self.c])

    def shift(self, n: int):
        """Multiply by x^n."""
        if not self.c:
            return self
        return UPoly(self.field, (self.field.zero,) * n + self.c, trusted=True)

    def __pow__(self, n: int):
        result = UPoly.const(self.field, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        F = self.field
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = other.degree
        if len(r) - 1 < db:
            return UPoly(F), self
        inv = F.inv(other.lc)
        q = [F.zero] * (len(r) - db)
        b = other.c
        if F.kind == "prime":
            p = F.p
            for i in range(len(r) - 1, db - 1, -1):
                c = r[i] * inv % p
                if c:
                    q[i - db] = c
                    base = i - db
                    for j in range(db + 1):
                        r[base + j] = (r[base + j] - c * b[j]) % p
        else:
            for i in range(len(r) - 1, db - 1, -1):
                if F.is_zero(r[i]):
                    continue
                c = F.mul(r[i], inv)
                q[i - db] = c
                base = i - db
                for j in range(db + 1):
                    r[base + j] = F.sub(r[base + j], F.mul(c, b[j]))
        return UPoly(F, q), UPoly(F, r[:db])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.field.inv(self.lc))

    def deriv(self):
        F = self.field
        return UPoly(F, [F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:])

    def map(self, func, target: Field):
        return UPoly(target, [func(a) for a in self.c])


def gcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def powmod(base: UPoly, n: int, mod: UPoly) -> UPoly:
    result = UPoly.const(base.field, base.field.one) % mod
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        n >>= 1
    return result


def _pth_root(f: UPoly) -> UPoly:
    """For f with f' = 0 over a finite field, return g with g^p = f."""
    F = f.field
    p = F.characteristic
    inv_frob = F.order // p  # a -> a^(q/p) inverts Frobenius
    coeffs = [F.pow(f.c[i], inv_frob) for i in range(0, len(f.c), p)]
    return UPoly(F, coeffs)


def squarefree_decomposition(f: UPoly) -> list[tuple[UPoly, int]]:
    """Monic squarefree g_i with f = lc * prod g_i^i, sorted by multiplicity."""
    F = f.field
    if f.degree < 1:
        return []
    out: dict[int, UPoly] = {}

    def add(g, m):
        if g.degree >= 1:
            out[m] = out[m] * g if m in out else g

    c = gcd(f, f.deriv()) if f.deriv() else f.monic()
    w = f.exact_div(c).monic()
    i = 1
    while w.degree >= 1:
        y = gcd(w, c)
        add(w.exact_div(y).monic(), i)
        i += 1
        w = y
        c = c.exact_div(y)
    if c.degree >= 1:
        if F.characteristic == 0:
            raise ArithmeticError("squarefree decomposition failed")  # unreachable in char 0
        p = F.characteristic
        for g, m in squarefree_decomposition(_pth_root(c.monic())):
            add(g, m * p)
    return sorted(((g, m) for m, g in out.items()), key=lambda t: t[1])


def is_squarefree(f: UPoly) -> bool:
    return all(m == 1 for _, m in squarefree_decomposition(f))


def distinct_degree(f: UPoly, max_degree: int | None = None) -> tuple[list[tuple[int, UPoly]], UPoly]:
    """Split a monic squarefree f over F_q into products of irreducibles of equal degree.

    Returns ``([(d, g_d), ...], rest)`` where ``rest`` collects factors of
    degree above ``max_degree``.
    """
    F = f.field
    q = F.order
    out = []
    rest = f.monic()
    x = UPoly.x(F)
    h = x % rest if rest.degree >= 1 else x
    d = 0
    while rest.degree >= 1:
        d += 1
        if max_degree is not None and d > max_degree:
            break
        if 2 * d > rest.degree:
            out.append((rest.degree, rest))
            rest = UPoly.const(F, F.one)
            break
        h = powmod(h, q, rest)
        g = gcd(rest, h - x)
        if g.degree >= 1:
            out.append((d, g))
            rest = rest.exact_div(g).monic()
            h = h % rest if rest.degree >= 1 else h
    if max_degree is not None:
        kept = [(d, g) for d, g in out if d <= max_degree]
        for d, g in out:
            if d > max_degree:
                rest = rest * g
        return kept, rest.monic()
    return out, rest.monic()


def equal_degree(f: UPoly, d: int, seed: int = 0) -> list[UPoly]:
    """Cantor-Zassenhaus: split monic squarefree f (all factors of degree d) into irreducibles."""
    F = f.field
    if f.degree == d:
        return [f.monic()]
    if f.degree < d or f.degree % d:
        raise ArithmeticError("degree mismatch in equal-degree splitting")
    rng = random.Random(seed)
    q = F.order
    e = (q**d - 1) // 2
    while True:
        coeffs = [_random_raw(F, rng) for _ in range(f.degree)]
        a = UPoly(F, coeffs)
        if a.degree < 1:
            continue
        b = powmod(a, e, f) - UPoly.const(F, F.one)
        g = gcd(f, b)
        if 1 <= g.degree < f.degree:
            return equal_degree(g, d, rng.randrange(1 << 30)) + equal_degree(
                f.exact_div(g).monic(), d, rng.randrange(1 << 30))


def _random_raw(F: Field, rng: random.Random):
    if F.kind == "prime":
        return rng.randrange(F.p)
    return F.from_index(rng.randrange(F.order))


def roots_in_field(f: UPoly) -> list:
    """Distinct roots of f lying in its own (finite) coefficient field, sorted canonically."""
    F = f.field
    if not F.is_finite:
        raise FieldError("root finding over infinite fields is unsupported here")
    if f.degree < 1:
        return []
    f = f.monic()
    x = UPoly.x(F)
    g = gcd(f, powmod(x, F.order, f) - x)
    if g.degree < 1:
        return []
    roots = [F.neg(h.monic().c[0]) for h in equal_degree(g, 1)]
    return sorted(roots, key=F.sort_key)


def factor_finite(f: UPoly) -> list[tuple[UPoly, int]]:
    """Full factorization into monic irreducibles over a finite field."""
    out = []
    for g, m in squarefree_decomposition(f):
        parts, _ = distinct_degree(g)
        for d, h in parts:
            for irr in equal_degree(h, d):
                out.append((irr, m))
    out.sort(key=lambda t: (t[0].degree, [t[0].field.sort_key(a) for a in t[0].c], t[1]))
    return out


@lru_cache(maxsize=None)
def embedding(small: Field, big: Field):
    """A field homomorphism small -> big as a raw-value function.

    For an extension ``small`` the generator goes to the canonically smallest
    root of its modulus in ``big``.
    """
    if small == big:
        return lambda a: a
    if big.kind == "quadratic-extension" and big.base == small:
        return lambda a: (a, small.zero)
    if small.characteristic != big.characteristic or big.degree % small.degree:
        raise FieldError(f"{small.spec} does not embed in {big.spec}")
    if small.kind == "prime":
        return big.from_int
    mod = UPoly(big, [big.from_int(c) for c in small.modulus])
    gamma = roots_in_field(mod)[0]
    powers = [big.one]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], gamma))

    def emb(a):
        acc = big.zero
        for c, pw in zip(a, powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), pw))
        return acc

    return emb


def descend(big: Field, a, small: Field):
    """Inverse of :func:`embedding` on its image; ``None`` if ``a`` is not in the image."""
    if small == big:
        return a
    if small.kind == "prime":
        return a[0] if big.in_prime_field(a) else None
    emb = embedding(small, big)
    # F_p-linear solve: columns are images of small's basis vectors
    P = make_prime(big)
    cols = [emb(tuple(1 if i == j else 0 for i in range(small.k))) for j in range(small.k)]
    rows = [[cols[j][i] for j in range(small.k)] for i in range(big.k)]
    sol = solve(rows, list(a), P)
    return None if sol is None else tuple(sol)


def make_prime(F: Field) -> Field:
    return F.prime_field


def field_of_degree(base: Field, d: int) -> Field:
    return base if d == 1 else extension_of(base, d)


def frobenius(F: Field, a, times: int = 1):
    """a -> a^(p^times) in a finite field."""
    return F.pow(a, F.characteristic**times)


def factor_rational(f: UPoly) -> list[tuple[UPoly, int]]:
    """Monic irreducible factorization over Q (delegated to sympy)."""
    import sympy

    from fractions import Fraction

    F = f.field
    if F.kind != "rational":
        raise FieldError("factor_rational expects Q coefficients")
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(a.numerator, a.denominator) * x**i for i, a in enumerate(f.c))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for fac, m in factors:
        coeffs = fac.all_coeffs()[::-1]
        g = UPoly(F, [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in coeffs]).monic()
        out.append((g, m))
    out.sort(key=lambda t: (t[0].degree, t[0].c, t[1]))
    return out
