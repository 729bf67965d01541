"""Seeded search for rational nodal embeddings over F_p; prints the certificates."""

import argparse
import json

from conicbundle.trisection import search_example


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=13)
    ap.add_argument("--budget", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    certs = search_example(args.p, args.budget, args.seed, args.workers)
    print(json.dumps(certs, indent=2))
    print(f"{len(certs)} certificates from {args.budget} candidates")


if __name__ == "__main__":
    main()
