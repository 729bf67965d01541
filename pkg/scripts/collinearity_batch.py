"""Run the residual-collinearity batch and print per-prime counts."""

import argparse
import json
import time

from conicbundle.batches import collinearity_batch


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    t0 = time.perf_counter()
    result = collinearity_batch(args.count, args.seed)
    out = result.to_dict()
    out["seconds"] = round(time.perf_counter() - t0, 2)
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
