"""Seeded randomized property batches over small prime fields."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import GeometryError
from .fields import is_prime, make_field
from .linalg import det
from .plane import PlaneCurve, random_element, random_point
from .points import ProjPoint
from .poly import MultiPoly
from .singularities import INFINITE, intersection_multiplicity, local_quotient_dimension
from .trisection import (_random_cubic, cubics_through, embed_degeneracy, odd_intersection_check,
                         sample_pair, satellite_center_check, satellite_polar_tangency, trisection,
                         trisection_invariants)

PRIMES = tuple(p for p in range(5, 98) if is_prime(p))
SKIPPED_HYPOTHESES = ("smooth cubic", "simple branching", "rationality", "p in C")


@dataclass
class BatchResult:
    name: str
    seed: int
    successes: int = 0
    draws: int = 0
    counterexamples: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def skip(self, reason: str):
        self.skipped[reason] = self.skipped.get(reason, 0) + 1

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "successes": self.successes,
            "draws": self.draws,
            "counterexamples": self.counterexamples,
            "skipped": dict(sorted(self.skipped.items())),
            **self.notes,
        }


def _conic_gram_det(P: PlaneCurve):
    F = P.field
    half = F.inv(F.from_int(2))
    G = [[F.zero] * 3 for _ in range(3)]
    for e, c in P.poly.terms.items():
        ij = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = ij
        if i == j:
            G[i][i] = F.add(G[i][i], c)
        else:
            h = F.mul(c, half)
            G[i][j] = F.add(G[i][j], h)
            G[j][i] = F.add(G[j][i], h)
    return det(G, F)


def satellite_batch(count: int = 200, seed: int = 0, primes=PRIMES,
                    max_draws: int = 100000) -> BatchResult:
    """Random smooth cubics and external points with simple branching.

    Checks that the satellite conic misses the center, and, when the polar
    conic is nondegenerate, that the satellite meets it in two points of
    multiplicity two.  A degenerate polar conic makes the tangency shape a
    single point of multiplicity four; those cases are counted, not checked.
    """
    out = BatchResult("satellite", seed)
    rng = random.Random(f"satellite:{seed}")
    shapes = {}
    degenerate = 0
    while out.successes < count and out.draws < max_draws:
        out.draws += 1
        p = rng.choice(primes)
        F = make_field(kind="prime", p=p)
        C = _random_cubic(F, rng)
        center = random_point(F, rng)
        if C is None:
            out.skip("zero cubic")
            continue
        try:
            T = trisection(C, center, allow_extensions=True)
        except GeometryError as exc:
            if exc.hypothesis in SKIPPED_HYPOTHESES:
                out.skip(exc.hypothesis)
                continue
            raise
        out.successes += 1
        label = {"p": p, "cubic": str(C), "center": str(center)}
        if not satellite_center_check(T):
            out.counterexamples.append({**label, "failure": "satellite vanishes at the center"})
            continue
        inv = trisection_invariants(T)
        if not all(inv.values()):
            bad = sorted(k for k, v in inv.items() if not v)
            out.counterexamples.append({**label, "failure": f"invariants {bad}"})
            continue
        shape = tuple(sorted((m for _, m in satellite_polar_tangency(T)), reverse=True))
        if F.is_zero(_conic_gram_det(T.polar)):
            degenerate += 1
            shapes[f"degenerate polar {shape}"] = shapes.get(f"degenerate polar {shape}", 0) + 1
            continue
        shapes[str(shape)] = shapes.get(str(shape), 0) + 1
        if shape != (2, 2):
            out.counterexamples.append({**label, "failure": f"tangency shape {shape}"})
    out.notes = {"degenerate_polar": degenerate, "shapes": dict(sorted(shapes.items()))}
    return out


def collinearity_batch(count: int = 50, seed: int = 0, primes=PRIMES,
                       max_draws: int = 2000000) -> BatchResult:
    """Random pairs with all ramification rational; the residual triple must be collinear."""
    out = BatchResult("collinearity", seed)
    rng = random.Random(f"collinearity:{seed}")
    per_prime = {}
    while out.successes < count and out.draws < max_draws:
        out.draws += 1
        p = rng.choice(primes)
        F = make_field(kind="prime", p=p)
        pair = sample_pair(F, rng)
        if pair is None:
            continue
        C, center = pair
        try:
            emb = embed_degeneracy(C, center)
        except GeometryError as exc:
            if exc.hypothesis == "collinearity":
                out.counterexamples.append({"p": p, "cubic": str(C), "center": str(center)})
            else:
                out.skip(exc.hypothesis)
            continue
        if not emb.collinear:
            out.counterexamples.append({"p": p, "cubic": str(C), "center": str(center)})
            continue
        out.successes += 1
        per_prime[p] = per_prime.get(p, 0) + 1
    out.notes = {"per_prime": {str(k): v for k, v in sorted(per_prime.items())}}
    return out


ODD_BASE_POINTS = ("1:0:0", "0:1:0", "0:0:1", "1:1:1")


def odd_intersection_batch(trials: int = 10, seed: int = 0, p: int = 11,
                           max_draws: int = 1000) -> BatchResult:
    """Pairs of random cubics through four fixed points meet residually in 5 points."""
    F = make_field(kind="prime", p=p)
    base = [ProjPoint.parse(F, s) for s in ODD_BASE_POINTS]
    basis = cubics_through(base, F=F)
    out = BatchResult("odd-intersection", seed)
    rng = random.Random(f"odd:{seed}")
    counts = {}

    def draw():
        acc = MultiPoly(F, basis[0].poly.vars)
        for b in basis:
            acc = acc + b.poly.scale(random_element(F, rng))
        return None if acc.is_zero() else PlaneCurve(acc)

    while out.successes < trials and out.draws < max_draws:
        out.draws += 1
        A, B = draw(), draw()
        if A is None or B is None:
            out.skip("zero cubic")
            continue
        try:
            n, odd = odd_intersection_check(A, B, base)
        except GeometryError as exc:
            out.skip(exc.hypothesis)
            continue
        out.successes += 1
        counts[n] = counts.get(n, 0) + 1
        if n != 5 or not odd:
            out.counterexamples.append({"A": str(A), "B": str(B), "residual": n})
    out.notes = {"residual_counts": {str(k): v for k, v in sorted(counts.items())}}
    return out


def _random_local_poly(F, rng: random.Random, max_degree: int) -> MultiPoly:
    """Product of one or two random polynomials vanishing at the origin."""
    vs = ("x", "y")

    def factor(d):
        terms = {}
        for a in range(d + 1):
            for b in range(d + 1 - a):
                if 0 < a + b and rng.random() < 0.5:
                    terms[(a, b)] = random_element(F, rng)
        return MultiPoly(F, vs, terms)

    d1 = rng.randint(1, max_degree)
    f = factor(d1)
    if d1 < max_degree and rng.random() < 0.5:
        f = f * factor(rng.randint(1, max_degree - d1))
    return f


def multiplicity_batch(count: int = 20, seed: int = 0, max_degree: int = 5,
                       max_draws: int = 10000) -> BatchResult:
    """The recursion against the local-quotient oracle on random pairs through the origin."""
    out = BatchResult("multiplicity", seed)
    rng = random.Random(f"multiplicity:{seed}")
    values = {}
    while out.successes < count and out.draws < max_draws:
        out.draws += 1
        F = make_field(kind="prime", p=rng.choice((5, 7, 101))) if rng.random() < 0.7 else make_field("Q")
        f, g = _random_local_poly(F, rng, max_degree), _random_local_poly(F, rng, max_degree)
        if f.is_zero() or g.is_zero():
            out.skip("zero polynomial")
            continue
        a = intersection_multiplicity(f, g)
        if a == INFINITE:
            out.skip("common component")
            continue
        b = local_quotient_dimension(f, g)
        out.successes += 1
        values[a] = values.get(a, 0) + 1
        if a != b:
            out.counterexamples.append({"field": F.spec, "f": str(f), "g": str(g),
                                        "recursion": a, "oracle": b})
    out.notes = {"values": {str(k): v for k, v in sorted(values.items())}}
    return out
