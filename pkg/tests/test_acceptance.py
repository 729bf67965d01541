"""The ten acceptance criteria, each timed and reported on one line."""

import json
import subprocess
import sys
import time

from conicbundle.batches import (collinearity_batch, multiplicity_batch, odd_intersection_batch,
                                 satellite_batch)
from conicbundle.chatelet import build_chatelet, parse_cubic
from conicbundle.cohomology import h1, h1_cyclic
from conicbundle.errors import GeometryError
from conicbundle.fields import make_field
from conicbundle.identities import (BLOWUP_DISCRIMINANT, CHART_1, CHART_2, EXAMPLE_CONIC,
                                    TRANSFORMED_DISCRIMINANT, TRANSITION, verify_rep_decomposition)
from conicbundle.plane import PlaneCurve, determinant3
from conicbundle.points import ProjPoint
from conicbundle.reference import (CENSUS_PRIMES, E6_POINT, E6_SEXTIC, F13_CENTER, F13_CUBIC,
                                   F13_NODAL_CUBIC, F13_RESIDUAL)
from conicbundle.report import strip_timing
from conicbundle.singularities import local_certificate, singular_census, total_tjurina
from conicbundle.trisection import embed_degeneracy
from conicbundle.weyl import NSLattice, rho_image, subgroups, weyl_group

F13 = make_field("F13")
Q = make_field("Q")


def _f13():
    return PlaneCurve.parse(F13_CUBIC, F13), ProjPoint.parse(F13, F13_CENTER)


def test_criterion_01_f13_reproduction(acceptance_line):
    t0 = time.perf_counter()
    C, s4 = _f13()
    L = PlaneCurve.parse(F13_NODAL_CUBIC, F13)
    emb = embed_degeneracy(C, s4, c_sing=L)
    got = {str(q) for q in emb.trisection.residual_points}
    node = local_certificate(L, s4)
    through = all(L.contains(ProjPoint.parse(F13, s)) for s in F13_RESIDUAL)
    elapsed = time.perf_counter() - t0
    ok = got == set(F13_RESIDUAL) and node.label == "A1" and through and elapsed < 1
    acceptance_line(1, ok, f"residual points {sorted(got)}; L {node.label} at {s4}, "
                           f"through all six: {through}; {elapsed:.2f}s < 1s")
    assert ok


def test_criterion_02_collinearity(acceptance_line):
    t0 = time.perf_counter()
    C, s4 = _f13()
    emb = embed_degeneracy(C, s4, c_sing=PlaneCurve.parse(F13_NODAL_CUBIC, F13))
    E, d = determinant3(emb.s_points)
    batch = collinearity_batch(50, seed=0)
    elapsed = time.perf_counter() - t0
    ok = E.is_zero(d) and batch.successes >= 50 and batch.ok and elapsed < 30
    acceptance_line(2, ok, f"F13 determinant {E.to_str(d)}; {batch.successes} random instances, "
                           f"{len(batch.counterexamples)} non-collinear; {elapsed:.1f}s < 30s")
    assert ok


def test_criterion_03_satellite_lemma(acceptance_line):
    t0 = time.perf_counter()
    batch = satellite_batch(200, seed=0)
    elapsed = time.perf_counter() - t0
    notes = batch.notes
    ok = batch.successes >= 200 and batch.ok and elapsed < 60
    acceptance_line(3, ok, f"{batch.successes} instances, {len(batch.counterexamples)} counterexamples, "
                           f"shapes {notes['shapes']}; {elapsed:.1f}s < 60s")
    assert ok


def test_criterion_04_e6(acceptance_line):
    t0 = time.perf_counter()
    S = PlaneCurve.parse(E6_SEXTIC, Q)
    c = local_certificate(S, ProjPoint.parse(Q, E6_POINT))
    e6_ok = (c.multiplicity, c.milnor, c.tangent_cone, c.label) == (3, 6, (3,), "E6")
    tau0 = total_tjurina(S)
    good, bad = [], []
    for p in CENSUS_PRIMES:
        Sp = PlaneCurve.parse(E6_SEXTIC, make_field(f"F{p}"))
        census = singular_census(Sp)
        others = [x.label for x in census if str(x.point) != E6_POINT]
        if total_tjurina(Sp) != tau0:
            bad.append(f"F{p} ({', '.join(others)})")
            continue
        if others == ["A1"] * 4 and not census.unresolved:
            good.append(f"F{p}")
    elapsed = time.perf_counter() - t0
    ok = e6_ok and len(good) >= 2 and elapsed < 10
    acceptance_line(4, ok, f"(m, mu, cone, label) = ({c.multiplicity}, {c.milnor}, "
                           f"{c.tangent_cone}, {c.label}); E6 + 4 A1 at {good}; "
                           f"bad reduction {bad}; {elapsed:.1f}s < 10s")
    assert ok


def test_criterion_05_weyl_cohomology(acceptance_line):
    t0 = time.perf_counter()
    order = weyl_group(4).order
    H = rho_image()
    lat = NSLattice(4)
    subs = subgroups(H)
    vanish = all(h1(K.elements, lat).vanishes for K in subs)
    oracle = True
    for K in subs:
        gens = [K.elements[i] for i in range(K.order) if K.element_order(i) == K.order]
        if gens:
            oracle = oracle and h1_cyclic(gens[0]).divisors == h1(K.elements, lat).divisors
    sign = h1([((1,),), ((-1,),)]).divisors
    elapsed = time.perf_counter() - t0
    ok = (order == 192 and H.order == 6 and not H.is_abelian() and len(subs) == 6 and vanish
          and oracle and sign == (2,) and elapsed < 10)
    acceptance_line(5, ok, f"|W(D4)| = {order}; image order {H.order}, nonabelian; H^1 = 0 on "
                           f"{len(subs)} subgroups: {vanish}; cyclic oracle agrees: {oracle}; "
                           f"sign module {sign}; {elapsed:.1f}s < 10s")
    assert ok


def test_criterion_06_identities(acceptance_line):
    t0 = time.perf_counter()
    fixtures = (EXAMPLE_CONIC, CHART_1, CHART_2, TRANSITION)
    idents = {f.name: f.check() for f in fixtures}
    dets = {f.name: f.check() for f in (BLOWUP_DISCRIMINANT, TRANSFORMED_DISCRIMINANT)}
    rep = verify_rep_decomposition()
    elapsed = time.perf_counter() - t0
    ok = all(idents.values()) and all(dets.values()) and rep.ok and elapsed < 5
    acceptance_line(6, ok, f"identities {sum(idents.values())}/{len(idents)}, determinants "
                           f"{sum(dets.values())}/{len(dets)}, constant T block-diagonalizes: "
                           f"{rep.conjugates}; {elapsed:.2f}s < 5s")
    assert ok


def _rejected(text):
    try:
        build_chatelet(parse_cubic(text, Q))
    except GeometryError as exc:
        return exc.hypothesis
    return None


def test_criterion_07_chatelet(acceptance_line):
    t0 = time.perf_counter()
    data = build_chatelet(parse_cubic("x^3 - 2", Q))
    cyclic = _rejected("x^3 - 3*x + 1")
    rooted = _rejected("x^3 - x")
    elapsed = time.perf_counter() - t0
    ok = (data.a == -108 and len(data.singular_points) == 2
          and data.extension.spec == "Q(sqrt -108)"
          and cyclic == "Galois group S3: non-square discriminant"
          and rooted == "Galois group S3: no root in k" and elapsed < 1)
    acceptance_line(7, ok, f"a = {data.a}, 2 singular points over {data.extension.spec}; "
                           f"x^3 - 3x + 1: {cyclic}; x^3 - x: {rooted}; {elapsed:.2f}s < 1s")
    assert ok


def test_criterion_08_multiplicity_oracle(acceptance_line):
    t0 = time.perf_counter()
    batch = multiplicity_batch(20, seed=0)
    elapsed = time.perf_counter() - t0
    ok = batch.successes >= 20 and batch.ok and elapsed < 30
    acceptance_line(8, ok, f"{batch.successes} pairs, {len(batch.counterexamples)} disagreements, "
                           f"values {batch.notes['values']}; {elapsed:.1f}s < 30s")
    assert ok


def test_criterion_09_odd_intersection(acceptance_line):
    t0 = time.perf_counter()
    batch = odd_intersection_batch(10, seed=0)
    elapsed = time.perf_counter() - t0
    ok = batch.successes >= 10 and batch.ok and elapsed < 10
    acceptance_line(9, ok, f"{batch.successes} pairs over F11, residual counts "
                           f"{batch.notes['residual_counts']}, {batch.draws - batch.successes} "
                           f"degenerate draws excluded; {elapsed:.1f}s < 10s")
    assert ok


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "conicbundle", "--json", *argv],
                          capture_output=True, text=True, check=False)
    json.loads(proc.stdout)
    return proc.returncode, proc.stdout


def test_criterion_10_determinism(acceptance_line):
    t0 = time.perf_counter()
    code_a, serial = _cli("verify", "paper")
    code_b, parallel = _cli("verify", "paper", "--workers", "4")
    suite_time = time.perf_counter() - t0
    search = ["search", "--p", "13", "--budget", "10000", "--seed", "1"]
    s1, s2 = _cli(*search)[1], _cli(*search)[1]
    s3 = _cli(*search, "--workers", "4")[1]
    same_suite = strip_timing(serial) == strip_timing(parallel)
    same_search = strip_timing(s1) == strip_timing(s2) == strip_timing(s3)
    n_certs = len(json.loads(s1)["checks"][0]["detail"]["certificates"])
    ok = code_a == code_b == 0 and same_suite and same_search and suite_time < 300
    acceptance_line(10, ok, f"verify paper serial vs parallel identical: {same_suite}; "
                            f"search ({n_certs} certificates) identical across 3 runs: "
                            f"{same_search}; two suite runs {suite_time:.0f}s < 300s")
    assert ok
