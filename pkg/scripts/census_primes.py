"""Singularity census of the E6 sextic modulo each prime, with the Tjurina test for bad reduction."""

import argparse

from conicbundle.fields import is_prime, make_field
from conicbundle.plane import PlaneCurve
from conicbundle.reference import E6_POINT, E6_SEXTIC
from conicbundle.singularities import singular_census, total_tjurina


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-prime", type=int, default=31)
    ap.add_argument("--max-ext", type=int, default=6)
    args = ap.parse_args()
    tau0 = total_tjurina(PlaneCurve.parse(E6_SEXTIC, make_field("Q")))
    print(f"Q: total Tjurina number {tau0}")
    for p in range(5, args.max_prime + 1):
        if not is_prime(p):
            continue
        S = PlaneCurve.parse(E6_SEXTIC, make_field(f"F{p}"))
        if S.degree % p == 0:
            continue
        tau = total_tjurina(S)
        census = singular_census(S, args.max_ext)
        labels = [f"{c.label}@{c.point}" if str(c.point) == E6_POINT else c.label for c in census]
        verdict = "good" if tau == tau0 else "bad"
        print(f"F{p}: tau {tau} ({verdict}); {', '.join(labels)}"
              + (f"; unresolved degrees {census.unresolved}" if census.unresolved else ""))


if __name__ == "__main__":
    main()
