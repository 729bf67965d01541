"""Exact coefficient fields: F_p, F_{p^k}, Q and quadratic extensions k(sqrt a).

Every field works on *raw* values (``int`` residues, ``Fraction``, tuples)
through methods such as :meth:`Field.add` and :meth:`Field.mul`; polynomial
code stores raw values for speed.  :class:`FieldElement` wraps a raw value
with operator overloading for interactive use.

Characteristic 2 is rejected everywhere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import FieldError, ParseError
from .expr import parse_expression

PRIME_CAP = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """Common interface.  Subclasses are frozen dataclasses, so equal specs compare equal."""

    kind: str
    characteristic: int
    order: int | None
    generator_name: str | None = None

    # -- raw arithmetic, overridden ---------------------------------------
    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def from_fraction(self, x: Fraction):
        x = Fraction(x)
        den = self.from_int(x.denominator)
        if self.is_zero(den):
            raise FieldError(f"denominator {x.denominator} is not a unit in {self.spec}")
        return self.div(self.from_int(x.numerator), den)

    def sort_key(self, a):
        return a

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def prime_field(self) -> "Field":
        return self if self.kind in ("prime", "rational") else make_field(
            kind="prime", p=self.characteristic)

    # -- wrappers ---------------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        if isinstance(value, Fraction):
            return FieldElement(self, self.from_fraction(value))
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        raise TypeError(f"cannot coerce {value!r} into {self.spec}")

    def element(self, raw) -> "FieldElement":
        return FieldElement(self, raw)

    def elements(self) -> list:
        raise FieldError(f"{self.spec} is infinite; enumeration unsupported")

    def is_square(self, a) -> bool:
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        """Parse an element written in the polynomial grammar (generator name allowed)."""
        gen = self.generator_name

        def name(ident, offset):
            if gen is not None and ident == gen:
                return FieldElement(self, self.generator)
            raise ParseError(f"unknown symbol {ident!r}", offset)

        def literal(frac, offset):
            try:
                return FieldElement(self, self.from_fraction(frac))
            except FieldError:
                raise ParseError("division by a non-unit", offset) from None

        return self(parse_expression(text, name, literal)).raw

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec


@dataclass(frozen=True, eq=True)
class PrimeField(Field):
    p: int
    kind: str = field(default="prime", init=False)

    def __post_init__(self):
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not (2 < self.p < PRIME_CAP) or not is_prime(self.p):
            raise FieldError(f"{self.p} is not an odd prime below 2^31")

    characteristic = property(lambda self: self.p)
    order = property(lambda self: self.p)
    degree = property(lambda self: 1)
    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def from_int(self, n):
        return n % self.p

    def is_zero(self, a):
        return a == 0

    def is_square(self, a):
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def elements(self):
        return list(range(self.p))

    def to_str(self, a):
        return str(a)

    def parse(self, text):
        text = text.strip()
        if re.fullmatch(r"\d+", text):
            return int(text) % self.p
        return super().parse(text)

    @property
    def spec(self):
        return f"F{self.p}"


@dataclass(frozen=True, eq=True)
class ExtensionField(Field):
    """F_{p^k} = F_p[g]/(modulus); raw values are length-k tuples, low degree first."""

    p: int
    k: int
    modulus: tuple  # monic, low degree first, length k+1
    kind: str = field(default="prime-power", init=False)
    generator_name: str = field(default="g", init=False)

    def __post_init__(self):
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not (2 < self.p < PRIME_CAP) or not is_prime(self.p):
            raise FieldError(f"{self.p} is not an odd prime below 2^31")
        if self.k < 2 or len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k >= 2")
        if not _is_irreducible_mod_p(list(self.modulus), self.p):
            raise FieldError("modulus is not irreducible")

    characteristic = property(lambda self: self.p)
    order = property(lambda self: self.p**self.k)
    degree = property(lambda self: self.k)

    @property
    def zero(self):
        return (0,) * self.k

    @property
    def one(self):
        return (1,) + (0,) * (self.k - 1)

    @property
    def generator(self):
        return (0, 1) + (0,) * (self.k - 2)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                base = i - k
                for j in range(k):
                    prod[base + j] -= c * mod[j]
        return tuple(c % p for c in prod[:k])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def is_zero(self, a):
        return not any(a)

    def frobenius(self, a, times: int = 1):
        return self.pow(a, self.p**times)

    def is_square(self, a):
        return not any(a) or self.pow(a, (self.order - 1) // 2) == self.one

    def sort_key(self, a):
        return sum(c * self.p**i for i, c in enumerate(a))

    def from_index(self, n: int):
        out = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            out.append(r)
        return tuple(out)

    def elements(self):
        return [self.from_index(n) for n in range(self.order)]

    def in_prime_field(self, a) -> bool:
        return not any(a[1:])

    def to_str(self, a):
        terms = []
        for i in range(self.k - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    @property
    def spec(self):
        return f"F{self.p}^{self.k}"


@dataclass(frozen=True, eq=True)
class RationalField(Field):
    kind: str = field(default="rational", init=False)

    characteristic = 0
    order = None
    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, x):
        return Fraction(x)

    def is_zero(self, a):
        return a == 0

    def is_square(self, a):
        if a < 0:
            return False
        n, d = a.numerator, a.denominator
        return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d

    def sqrt(self, a):
        if not self.is_square(a):
            raise FieldError(f"{a} is not a square in Q")
        return Fraction(math.isqrt(a.numerator), math.isqrt(a.denominator))

    def to_str(self, a):
        return str(a)

    @property
    def spec(self):
        return "Q"


@dataclass(frozen=True, eq=True)
class QuadraticExtension(Field):
    """base(r) with r^2 = radicand; raw values are pairs (u, v) meaning u + v*r."""

    base: Field
    radicand: object  # raw element of base
    kind: str = field(default="quadratic-extension", init=False)
    generator_name: str = field(default="r", init=False)

    def __post_init__(self):
        if self.base.kind not in ("prime", "rational"):
            raise FieldError("quadratic extensions are built over Q or F_p only")
        if self.base.is_square(self.radicand):
            raise FieldError(
                f"radicand {self.base.to_str(self.radicand)} is a square in {self.base.spec}")

    characteristic = property(lambda self: self.base.characteristic)
    order = property(lambda self: None if self.base.order is None else self.base.order**2)
    degree = property(lambda self: 2)

    @property
    def zero(self):
        return (self.base.zero, self.base.zero)

    @property
    def one(self):
        return (self.base.one, self.base.zero)

    @property
    def generator(self):
        return (self.base.zero, self.base.one)

    def add(self, a, b):
        B = self.base
        return (B.add(a[0], b[0]), B.add(a[1], b[1]))

    def sub(self, a, b):
        B = self.base
        return (B.sub(a[0], b[0]), B.sub(a[1], b[1]))

    def neg(self, a):
        B = self.base
        return (B.neg(a[0]), B.neg(a[1]))

    def mul(self, a, b):
        B = self.base
        u = B.add(B.mul(a[0], b[0]), B.mul(self.radicand, B.mul(a[1], b[1])))
        v = B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0]))
        return (u, v)

    def norm(self, a):
        B = self.base
        return B.sub(B.mul(a[0], a[0]), B.mul(self.radicand, B.mul(a[1], a[1])))

    def inv(self, a):
        B = self.base
        n = self.norm(a)
        if B.is_zero(n):
            raise ZeroDivisionError("inverse of zero")
        ni = B.inv(n)
        return (B.mul(a[0], ni), B.neg(B.mul(a[1], ni)))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def from_fraction(self, x):
        return (self.base.from_fraction(x), self.base.zero)

    def is_zero(self, a):
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def is_square(self, a):
        B = self.base
        if self.is_zero(a):
            return True
        if B.order is not None:
            return self.pow(a, (self.order - 1) // 2) == self.one
        # over Q: a = (c + d r)^2  <=>  c^2 + A d^2 = u, 2cd = v
        u, v = a
        if v == 0:
            return B.is_square(u) or B.is_square(u / self.radicand)
        n2 = self.norm(a)
        if not B.is_square(n2):
            return False
        n = B.sqrt(n2)
        return any(B.is_square((u + s) / 2) and (u + s) != 0 for s in (n, -n))

    def sort_key(self, a):
        return (self.base.sort_key(a[1]), self.base.sort_key(a[0]))

    def elements(self):
        if self.base.order is None:
            return super().elements()
        els = self.base.elements()
        return [(u, v) for v in els for u in els]

    def to_str(self, a):
        B = self.base
        u, v = a
        parts = []
        if not B.is_zero(u):
            parts.append(B.to_str(u))
        if not B.is_zero(v):
            parts.append("r" if v == B.one else "-r" if v == B.neg(B.one) else f"{B.to_str(v)}*r")
        if not parts:
            return "0"
        return " + ".join(parts)

    @property
    def spec(self):
        a = self.base.to_str(self.radicand)
        return f"{self.base.spec}(sqrt {a})"


@dataclass(frozen=True)
class FieldElement:
    field: Field
    raw: object

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed-field arithmetic")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.field(other).raw
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.raw, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.raw))

    def is_square(self) -> bool:
        return self.field.is_square(self.raw)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            try:
                return self.raw == self.field(other).raw
            except FieldError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __str__(self):
        return self.field.to_str(self.raw)

    def __repr__(self):
        return f"{self.field.spec}({self.field.to_str(self.raw)})"


# -- univariate helpers over F_p on plain lists (low degree first) ---------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod(prod, m, p)


def _ppowmod(a, n, m, p):
    result, a = [1], _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, a, m, p)
        a = _pmulmod(a, a, m, p)
        n >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible_mod_p(f, p):
    """Rabin's test for a monic f over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p**k, f, p) != _pmod(x, f, p):
        return False
    for r in _prime_factors(k):
        h = _ppowmod(x, p ** (k // r), f, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(f, _trim(h), p)) > 1:
            return False
    return True


def _monic_by_lex(p, k) -> Iterator[tuple]:
    """Monic degree-k polynomials in lex order of (a_{k-1}, ..., a_0)."""
    for n in range(p**k):
        digits = []
        for _ in range(k):
            n, r = divmod(n, p)
            digits.append(r)
        # digits[-1] is the most significant = a_{k-1}
        yield tuple(digits) + (1,)


@lru_cache(maxsize=None)
def conway_free_modulus(p: int, k: int) -> tuple:
    """Lex-smallest monic irreducible of degree k over F_p (low degree first)."""
    for cand in _monic_by_lex(p, k):
        if _is_irreducible_mod_p(list(cand), p):
            return cand
    raise FieldError(f"no irreducible of degree {k} over F{p}")  # unreachable


# -- construction -------------------------------------------------------------

_SPEC_RE = re.compile(
    r"^\s*(?:(Q)|F(\d+)(?:\^(\d+))?)\s*(?:\(\s*sqrt\s+(-?\d+(?:/\d+)?)\s*\))?\s*$")


@lru_cache(maxsize=None)
def _make(kind, p, k, modulus, radicand, base_spec):
    if kind == "rational":
        return RationalField()
    if kind == "prime":
        return PrimeField(p)
    if kind == "prime-power":
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not is_prime(p) or p >= PRIME_CAP:
            raise FieldError(f"{p} is not an odd prime below 2^31")
        if k == 1:
            return PrimeField(p)
        if modulus is None:
            modulus = conway_free_modulus(p, k)
        return ExtensionField(p, k, tuple(modulus))
    if kind == "quadratic-extension":
        base = make_field(base_spec)
        return QuadraticExtension(base, base.from_fraction(Fraction(radicand)))
    raise FieldError(f"unknown field kind {kind!r}")


def make_field(spec: str | Field | None = None, *, kind: str | None = None, p: int | None = None,
               k: int = 1, modulus=None, radicand=None, base: str | Field = "Q") -> Field:
    """Build a validated field from a spec string (``F13``, ``F5^2``, ``Q(sqrt -108)``) or keywords."""
    if isinstance(spec, Field):
        return spec
    if spec is not None:
        m = _SPEC_RE.match(spec)
        if not m:
            raise FieldError(f"bad field specification {spec!r}")
        q, pp, kk, rad = m.groups()
        if q:
            fld = make_field(kind="rational")
        elif kk:
            fld = make_field(kind="prime-power", p=int(pp), k=int(kk))
        else:
            fld = make_field(kind="prime", p=int(pp))
        if rad is not None:
            if fld.kind == "prime-power":
                raise FieldError("quadratic extensions are built over Q or F_p only")
            return make_field(kind="quadratic-extension", radicand=Fraction(rad), base=fld)
        return fld
    if kind == "quadratic-extension":
        base_spec = base.spec if isinstance(base, Field) else base
        return _make(kind, None, 1, None, Fraction(radicand), base_spec)
    if kind in ("prime", "prime-power"):
        if p is None:
            raise FieldError("characteristic p required")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
    return _make(kind, p, k, None if modulus is None else tuple(modulus), None, None)


def is_square(x: FieldElement) -> bool:
    return x.field.is_square(x.raw)


def field_elements(F: Field) -> list[FieldElement]:
    return [FieldElement(F, a) for a in F.elements()]


@lru_cache(maxsize=None)
def extension_of(base: Field, d: int) -> Field:
    """The degree-d extension of a finite field, as an absolute F_{p^{kd}}."""
    if not base.is_finite or base.kind == "quadratic-extension":
        raise FieldError("extensions are supported over F_p and F_{p^k} only")
    total = base.degree * d
    return make_field(kind="prime-power", p=base.characteristic, k=total)
