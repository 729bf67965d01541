"""Sparse multivariate polynomials over an exact field.

A :class:`MultiPoly` is a map from exponent vectors to nonzero raw
coefficients over an ordered variable list.  Binary operations between
polynomials with different variable lists work over the union of the
lists.  Printing uses graded lexicographic order, so the text form is
canonical and parses back to the same polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import AlgebraError, FieldError, ParseError
from .expr import parse_expression
from .fields import Field, FieldElement, make_field
from .linalg import bareiss_det, det
from .points import ProjPoint
from .upoly import (UPoly, distinct_degree, embedding, factor_finite, factor_rational, field_of_degree,
                    gcd, roots_in_field, squarefree_decomposition)


def _union(a: Sequence[str], b: Sequence[str]) -> tuple:
    if tuple(a) == tuple(b):
        return tuple(a)
    out = list(a)
    out.extend(v for v in b if v not in a)
    return tuple(out)


class MultiPoly:
    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Field, vars: Sequence[str], terms: Mapping | None = None,
                 trusted: bool = False):
        self.field = field
        self.vars = tuple(vars)
        if trusted:
            self.terms = dict(terms) if terms else {}
            return
        n = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise AlgebraError("exponent length does not match variable list")
                if not field.is_zero(c):
                    clean[e] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def var(cls, field: Field, vars: Sequence[str], name: str) -> "MultiPoly":
        vars = tuple(vars)
        e = tuple(int(v == name) for v in vars)
        if name not in vars:
            raise AlgebraError(f"unknown variable {name!r}")
        return cls(field, vars, {e: field.one}, trusted=True)

    @classmethod
    def const(cls, field: Field, vars: Sequence[str], value) -> "MultiPoly":
        raw = _to_raw(field, value)
        return cls(field, vars, {(0,) * len(tuple(vars)): raw})

    @classmethod
    def gens(cls, field: Field, vars: Sequence[str]) -> list["MultiPoly"]:
        return [cls.var(field, vars, v) for v in vars]

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def used_vars(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def coefficient(self, monomial: Mapping[str, int]):
        e = tuple(monomial.get(v, 0) for v in self.vars)
        return self.terms.get(e, self.field.zero)

    def __len__(self):
        return len(self.terms)

    # -- alignment ---------------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in vars:
            idx.append(self.vars.index(v) if v in self.vars else None)
        for i, v in enumerate(self.vars):
            if v not in vars and any(e[i] for e in self.terms):
                raise AlgebraError(f"variable {v!r} is used and cannot be dropped")
        terms = {tuple(e[j] if j is not None else 0 for j in idx): c for e, c in self.terms.items()}
        return MultiPoly(self.field, vars, terms, trusted=True)

    def drop_unused(self) -> "MultiPoly":
        return self.with_vars(self.used_vars())

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.field != self.field:
                raise FieldError("mixed-field polynomial arithmetic")
            vars = _union(self.vars, other.vars)
            return self.with_vars(vars), other.with_vars(vars)
        try:
            raw = _to_raw(self.field, other)
        except TypeError:
            return None
        return self, MultiPoly.const(self.field, self.vars, raw)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        F = a.field
        terms = dict(a.terms)
        for e, c in b.terms.items():
            if e in terms:
                s = F.add(terms[e], c)
                if F.is_zero(s):
                    del terms[e]
                else:
                    terms[e] = s
            else:
                terms[e] = c
        return MultiPoly(F, a.vars, terms, trusted=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.vars, {e: F.neg(c) for e, c in self.terms.items()}, trusted=True)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        F = a.field
        if not a.terms or not b.terms:
            return MultiPoly(F, a.vars)
        if len(b.terms) == 1:
            (eb, cb), = b.terms.items()
            if not any(eb):
                return MultiPoly(F, a.vars, {e: F.mul(c, cb) for e, c in a.terms.items()})
        terms: dict = {}
        prime = F.kind == "prime"
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if prime:
                    terms[e] = terms.get(e, 0) + ca * cb
                else:
                    prod = F.mul(ca, cb)
                    terms[e] = F.add(terms[e], prod) if e in terms else prod
        if prime:
            p = F.p
            terms = {e: c % p for e, c in terms.items()}
        return MultiPoly(F, a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative powers of polynomials are not supported")
        result = MultiPoly.const(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, raw) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.vars, {e: F.mul(raw, c) for e, c in self.terms.items()})

    def monic(self) -> "MultiPoly":
        """Scale so the leading coefficient (graded lex) is 1."""
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.terms[self.leading_exponent()]))

    def leading_exponent(self):
        return max(self.terms, key=lambda e: (sum(e), e))

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact division; raises ``ArithmeticError`` when ``other`` does not divide ``self``."""
        a, b = self._coerce(other)
        F = a.field
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lb = b.leading_exponent()
        inv = F.inv(b.terms[lb])
        q_terms = {}
        r = a
        while r.terms:
            lr = r.leading_exponent()
            diff = tuple(x - y for x, y in zip(lr, lb))
            if min(diff) < 0:
                raise ArithmeticError("inexact multivariate division")
            c = F.mul(r.terms[lr], inv)
            q_terms[diff] = c
            mono = MultiPoly(F, a.vars, {diff: c}, trusted=True)
            r = r - mono * b
        return MultiPoly(F, a.vars, q_terms, trusted=True)

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.field != other.field:
                return False
            vars = _union(self.vars, other.vars)
            return self.with_vars(vars).terms == other.with_vars(vars).terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == MultiPoly.const(self.field, self.vars, other)
        return NotImplemented

    def __hash__(self):
        p = self.drop_unused()
        return hash((p.vars, frozenset(p.terms.items())))

    # -- calculus and substitution ----------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        F = self.field
        if var not in self.vars:
            return MultiPoly(F, self.vars)
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[ne] = F.mul(F.from_int(e[i]), c)
        return MultiPoly(F, self.vars, terms)

    def gradient(self) -> list["MultiPoly"]:
        return [self.diff(v) for v in self.vars]

    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Simultaneous substitution; values are polynomials or field scalars."""
        F = self.field
        mapping = {k: v for k, v in mapping.items() if k in self.vars}
        if not mapping:
            return self
        keep = [v for v in self.vars if v not in mapping]
        new_vars = tuple(keep)
        for val in mapping.values():
            if isinstance(val, MultiPoly):
                new_vars = _union(new_vars, val.vars)
        vals = {}
        for k, val in mapping.items():
            if isinstance(val, MultiPoly):
                vals[k] = val.with_vars(new_vars)
            else:
                vals[k] = MultiPoly.const(F, new_vars, val)
        keep_idx = [(self.vars.index(v), new_vars.index(v)) for v in keep]
        sub_idx = [(self.vars.index(k), k) for k in mapping]
        power_cache: dict = {}

        def power(k, n):
            key = (k, n)
            if key not in power_cache:
                power_cache[key] = vals[k] ** n
            return power_cache[key]

        result = MultiPoly(F, new_vars)
        for e, c in self.terms.items():
            base = [0] * len(new_vars)
            for i, j in keep_idx:
                base[j] = e[i]
            term = MultiPoly(F, new_vars, {tuple(base): c}, trusted=True)
            for i, k in sub_idx:
                if e[i]:
                    term = term * power(k, e[i])
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object] | Sequence):
        """Evaluate at raw values (sequence in variable order, or a name->raw map)."""
        F = self.field
        if isinstance(values, Mapping):
            vals = [values[v] for v in self.vars]
        else:
            vals = list(values)
        acc = F.zero
        powers = [dict() for _ in vals]
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = F.pow(vals[i], k)
                        powers[i][k] = pw
                    t = F.mul(t, pw)
            acc = F.add(acc, t)
        return acc

    def map_coefficients(self, func, target: Field) -> "MultiPoly":
        return MultiPoly(target, self.vars, {e: func(c) for e, c in self.terms.items()})

    def base_change(self, target: Field) -> "MultiPoly":
        return self.map_coefficients(embedding(self.field, target), target)

    def reduce_mod(self, p: int) -> "MultiPoly":
        """Reduce rational coefficients modulo p (denominators must be units)."""
        Fp = make_field(kind="prime", p=p)
        if self.field.kind != "rational":
            raise FieldError("reduction mod p needs rational coefficients")
        return self.map_coefficients(Fp.from_fraction, Fp)

    def coeffs_in(self, var: str) -> list["MultiPoly"]:
        """Coefficients of var^0, var^1, ... as polynomials in the other variables."""
        F = self.field
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        d = self.degree_in(var)
        buckets = [dict() for _ in range(max(d, 0) + 1)]
        for e, c in self.terms.items():
            buckets[e[i]][e[:i] + e[i + 1:]] = c
        return [MultiPoly(F, rest, b, trusted=True) for b in buckets] if d >= 0 else []

    def to_upoly(self, var: str | None = None) -> UPoly:
        used = self.used_vars()
        if var is None:
            if len(used) > 1:
                raise AlgebraError("polynomial is not univariate")
            var = used[0] if used else self.vars[0]
        elif any(v != var for v in used):
            raise AlgebraError("polynomial involves other variables")
        i = self.vars.index(var)
        d = self.degree_in(var)
        coeffs = [self.field.zero] * (d + 1)
        for e, c in self.terms.items():
            coeffs[e[i]] = c
        return UPoly(self.field, coeffs)

    @classmethod
    def from_upoly(cls, u: UPoly, vars: Sequence[str], var: str) -> "MultiPoly":
        vars = tuple(vars)
        i = vars.index(var)
        terms = {}
        for k, c in enumerate(u.c):
            e = [0] * len(vars)
            e[i] = k
            terms[tuple(e)] = c
        return cls(u.field, vars, terms)

    def homogenize(self, var: str, degree: int | None = None) -> "MultiPoly":
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise AlgebraError("target degree below polynomial degree")
        vars = self.vars if var in self.vars else self.vars + (var,)
        p = self.with_vars(vars)
        i = vars.index(var)
        terms = {}
        for e, c in p.terms.items():
            if e[i]:
                raise AlgebraError(f"{var} already occurs")
            terms[e[:i] + (d - sum(e),) + e[i + 1:]] = c
        return MultiPoly(self.field, vars, terms, trusted=True)

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly(self.field, self.vars,
                         {e: c for e, c in self.terms.items() if sum(e) == degree}, trusted=True)

    # -- printing ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            neg = False
            if F.kind == "rational" and c < 0:
                neg, c = True, -c
            cs = F.to_str(c)
            if F.kind not in ("prime", "rational") and " " in cs:
                cs = f"({cs})"
            if not mono:
                body = cs
            elif c == F.one:
                body = mono
            else:
                body = f"{cs}*{mono}"
            out.append((neg, body))
        text = ("-" if out[0][0] else "") + out[0][1]
        for neg, body in out[1:]:
            text += (" - " if neg else " + ") + body
        return text

    def __repr__(self):
        return f"MultiPoly({self.field.spec}, {list(self.vars)}, {self})"


def _to_raw(field: Field, value):
    if isinstance(value, FieldElement):
        if value.field != field:
            raise FieldError("mixed-field arithmetic")
        return value.raw
    if isinstance(value, bool):
        raise TypeError("bool is not a field value")
    if isinstance(value, int):
        return field.from_int(value)
    if isinstance(value, Fraction):
        return field.from_fraction(value)
    raise TypeError(f"cannot use {value!r} as a coefficient")


def parse_poly(text: str, vars: Sequence[str], F: Field) -> MultiPoly:
    """Parse ``text`` in the expression grammar over the variable list ``vars``."""
    vars = tuple(vars)
    gen = F.generator_name

    def name(ident, offset):
        if ident in vars:
            return MultiPoly.var(F, vars, ident)
        if gen is not None and ident == gen:
            return MultiPoly.const(F, vars, FieldElement(F, F.generator))
        raise ParseError(f"unknown variable {ident!r}", offset)

    def literal(frac, offset):
        try:
            return MultiPoly.const(F, vars, F.from_fraction(frac))
        except (FieldError, ZeroDivisionError):
            raise ParseError("division by a non-unit", offset) from None

    result = parse_expression(text, name, literal)
    return result.with_vars(vars)


def sylvester_rows(f_coeffs: list, g_coeffs: list, zero) -> list[list]:
    """Sylvester matrix for coefficient lists given highest degree first."""
    m, n = len(f_coeffs) - 1, len(g_coeffs) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f_coeffs) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g_coeffs) + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: MultiPoly, g: MultiPoly, eliminated: str) -> MultiPoly:
    """Sylvester resultant Res_var(f, g) as a polynomial in the remaining variables."""
    a, b = f._coerce(g)
    F = a.field
    if a.is_zero() or b.is_zero():
        raise AlgebraError("resultant of the zero polynomial")
    m, n = a.degree_in(eliminated), b.degree_in(eliminated)
    if m <= 0 and n <= 0:
        raise AlgebraError(f"{eliminated} occurs in neither polynomial")
    fc = a.coeffs_in(eliminated)[::-1]
    gc = b.coeffs_in(eliminated)[::-1]
    rest = fc[0].vars
    others = [v for v in rest if any(p.degree_in(v) > 0 for p in fc + gc)]
    if len(others) <= 1:
        var = others[0] if others else None
        if var is None:
            M = sylvester_rows([p.constant_term() for p in fc], [p.constant_term() for p in gc],
                               F.zero)
            return MultiPoly.const(F, rest, FieldElement(F, det(M, F)))
        fu = [p.to_upoly(var) for p in fc]
        gu = [p.to_upoly(var) for p in gc]
        M = sylvester_rows(fu, gu, UPoly(F))
        r = bareiss_det(M, UPoly(F), UPoly.const(F, F.one))
        return MultiPoly.from_upoly(r, rest, var)
    zero = MultiPoly(F, rest)
    M = sylvester_rows(fc, gc, zero)
    return bareiss_det(M, zero, MultiPoly.const(F, rest, 1))


def resultant_binary(A: MultiPoly, B: MultiPoly, elim: str, keep: Sequence[str]) -> tuple[UPoly, int]:
    """Res_elim(A, B) for forms in three variables, as ``(r(x), D)``.

    ``keep = (x, y)``; the result is the binary form y^D r(x/y) of degree
    D = deg A * deg B.  Requires the coefficients of elim^deg in A and B to
    be nonzero constants, so setting y = 1 commutes with the resultant.
    """
    x, y = keep
    F = A.field
    dA, dB = A.degree, B.degree
    if A.degree_in(elim) != dA or B.degree_in(elim) != dB:
        raise AlgebraError("eliminated variable must appear to full degree")
    A1 = A.subs({y: 1})
    B1 = B.subs({y: 1})
    fu = [p.to_upoly(x) if p.used_vars() else UPoly.const(F, p.constant_term())
          for p in A1.coeffs_in(elim)[::-1]]
    gu = [p.to_upoly(x) if p.used_vars() else UPoly.const(F, p.constant_term())
          for p in B1.coeffs_in(elim)[::-1]]
    M = sylvester_rows(fu, gu, UPoly(F))
    return bareiss_det(M, UPoly(F), UPoly.const(F, F.one)), dA * dB


class BinaryForm:
    """Homogeneous polynomial of a given degree in two variables.

    Stored as ``u(t) = b(t, 1)`` plus the degree, which records the
    multiplicity of the root (1:0).
    """

    __slots__ = ("u", "degree")

    def __init__(self, u: UPoly, degree: int):
        if u.degree > degree:
            raise AlgebraError("dehomogenized degree exceeds form degree")
        self.u = u
        self.degree = degree

    @classmethod
    def from_poly(cls, b: MultiPoly, vars: Sequence[str] | None = None) -> "BinaryForm":
        vars = tuple(vars) if vars is not None else b.vars
        if len(vars) != 2:
            raise AlgebraError("binary form needs exactly two variables")
        b = b.with_vars(vars)
        if b.is_zero():
            raise AlgebraError("zero binary form")
        if not b.is_homogeneous():
            raise AlgebraError("binary form must be homogeneous")
        return cls(b.subs({vars[1]: 1}).to_upoly(vars[0]) if b.used_vars() != ()
                   else UPoly.const(b.field, b.constant_term()), b.degree)

    @property
    def field(self):
        return self.u.field

    def to_poly(self, vars=("x", "w")) -> MultiPoly:
        F = self.field
        terms = {}
        for k, c in enumerate(self.u.c):
            terms[(k, self.degree - k)] = c
        return MultiPoly(F, vars, terms)

    @property
    def infinity_multiplicity(self) -> int:
        return self.degree - self.u.degree

    def is_zero(self):
        return self.u.is_zero()

    def __repr__(self):
        return f"BinaryForm({self.to_poly()})"


def gcd_forms(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    g = gcd(a.u, b.u) if (a.u or b.u) else a.u
    m = min(a.infinity_multiplicity, b.infinity_multiplicity)
    return BinaryForm(g, g.degree + m)


def form_multiplicity_pattern(b: BinaryForm) -> list[int]:
    """Multiplicities of the distinct roots over the algebraic closure, descending."""
    pattern = []
    for g, m in squarefree_decomposition(b.u):
        pattern.extend([m] * g.degree)
    if b.infinity_multiplicity:
        pattern.append(b.infinity_multiplicity)
    return sorted(pattern, reverse=True)


class RootResult(list):
    """List of ``(ProjPoint, multiplicity)`` with the unresolved remainder form attached."""

    remainder: BinaryForm | None = None

    @property
    def extension_degrees(self):
        return sorted({pt.field.degree // self.base_degree for pt, _ in self}) if self else []

    base_degree = 1


def roots_over_extensions(b: BinaryForm | MultiPoly, max_degree: int = 6) -> RootResult:
    """All projective roots of a binary form over F_q and its extensions of degree <= max_degree.

    Multiplicities come from squarefree decomposition; irreducible factors
    of higher degree are collected in ``result.remainder``.
    """
    if isinstance(b, MultiPoly):
        b = BinaryForm.from_poly(b)
    F = b.field
    if not F.is_finite:
        raise FieldError("root finding needs a finite base field")
    out = RootResult()
    out.base_degree = F.degree
    rest = UPoly.const(F, F.one)
    for g, m in squarefree_decomposition(b.u):
        parts, high = distinct_degree(g, max_degree)
        for d, h in parts:
            E = field_of_degree(F, d)
            emb = embedding(F, E)
            for r in roots_in_field(h.map(emb, E)):
                out.append((ProjPoint(E, (r, E.one), normalized=True), m))
        if high.degree >= 1:
            rest = rest * high**m
    if b.infinity_multiplicity:
        out.append((ProjPoint(F, (F.one, F.zero), normalized=True), b.infinity_multiplicity))
    out.sort(key=lambda t: t[0].sort_key())
    out.remainder = BinaryForm(rest, rest.degree) if rest.degree >= 1 else None
    return out


def rational_roots(b: BinaryForm | MultiPoly) -> RootResult:
    """Roots of a binary form over Q; non-linear irreducible factors go to the remainder."""
    if isinstance(b, MultiPoly):
        b = BinaryForm.from_poly(b)
    F = b.field
    out = RootResult()
    rest = UPoly.const(F, F.one)
    if b.u.degree >= 1:
        for g, m in factor_rational(b.u):
            if g.degree == 1:
                out.append((ProjPoint(F, (-g.c[0], F.one), normalized=True), m))
            else:
                rest = rest * g**m
    if b.infinity_multiplicity:
        out.append((ProjPoint(F, (F.one, F.zero), normalized=True), b.infinity_multiplicity))
    out.sort(key=lambda t: t[0].sort_key())
    out.remainder = BinaryForm(rest, rest.degree) if rest.degree >= 1 else None
    return out


def remainder_degrees(rem: BinaryForm | None) -> list[int]:
    """Degrees of the irreducible factors left in a remainder form."""
    if rem is None:
        return []
    F = rem.field
    if F.kind == "rational":
        return sorted(g.degree for g, m in factor_rational(rem.u) for _ in range(m))
    return sorted(g.degree for g, m in factor_finite(rem.u) for _ in range(m))


# -- identity checking -------------------------------------------------------

def cancel_inverses(p: MultiPoly, inverses: Iterable[tuple[str, str]]) -> MultiPoly:
    """Rewrite every monomial u^a * iu^b as u^(a-b) or iu^(b-a) for each pair (u, iu)."""
    pairs = [(p.vars.index(u), p.vars.index(iu)) for u, iu in inverses
             if u in p.vars and iu in p.vars]
    if not pairs:
        return p
    F = p.field
    terms: dict = {}
    for e, c in p.terms.items():
        e = list(e)
        for i, j in pairs:
            k = min(e[i], e[j])
            e[i] -= k
            e[j] -= k
        e = tuple(e)
        terms[e] = F.add(terms[e], c) if e in terms else c
    return MultiPoly(F, p.vars, terms)


def _apply_relations(p: MultiPoly, relations, declared: set) -> MultiPoly:
    for var, value in relations:
        if isinstance(value, MultiPoly):
            extra = set(value.used_vars()) - declared
            if extra:
                raise AlgebraError(f"substitution introduces undeclared variables {sorted(extra)}")
        p = p.subs({var: value})
    return p


def identity_residual(lhs: MultiPoly, rhs: MultiPoly, relations=(), clearing: MultiPoly | None = None,
                      inverses: Iterable[tuple[str, str]] = ()) -> MultiPoly:
    """``clearing*lhs - clearing*rhs`` after substitutions and inverse cancellation."""
    inverses = list(inverses)
    relations = list(relations.items()) if isinstance(relations, Mapping) else list(relations)
    declared = set(lhs.vars) | set(rhs.vars)
    if clearing is not None:
        declared |= set(clearing.vars)
    for u, iu in inverses:
        declared |= {u, iu}
    left = _apply_relations(lhs, relations, declared)
    right = _apply_relations(rhs, relations, declared)
    if clearing is not None:
        left, right = left * clearing, right * clearing
    left = cancel_inverses(left, inverses)
    right = cancel_inverses(right, inverses)
    return (left - right).drop_unused()


def identity_check(lhs: MultiPoly, rhs: MultiPoly, relations=(), clearing: MultiPoly | None = None,
                   inverses: Iterable[tuple[str, str]] = ()) -> bool:
    """True iff clearing*lhs and clearing*rhs agree after the substitutions.

    ``relations`` are ``(var, value)`` pairs applied in order.  Each pair
    ``(u, iu)`` in ``inverses`` declares ``iu = 1/u``; after multiplying by
    the clearing monomial no inverse symbol may survive on either side,
    otherwise the check fails.
    """
    inverses = list(inverses)
    relations = list(relations.items()) if isinstance(relations, Mapping) else list(relations)
    declared = set(lhs.vars) | set(rhs.vars)
    if clearing is not None:
        declared |= set(clearing.vars)
    for u, iu in inverses:
        declared |= {u, iu}
    left = _apply_relations(lhs, relations, declared)
    right = _apply_relations(rhs, relations, declared)
    if clearing is not None:
        left, right = left * clearing, right * clearing
    left = cancel_inverses(left, inverses)
    right = cancel_inverses(right, inverses)
    inv_syms = {iu for _, iu in inverses}
    if inv_syms & (set(left.used_vars()) | set(right.used_vars())):
        return False
    return left == right
