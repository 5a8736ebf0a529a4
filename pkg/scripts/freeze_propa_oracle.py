"""Solve the property-A profile LP exactly on every graph with at most 5 vertices.

The output table is the frozen reference for the floating-point optimizer:

    python scripts/freeze_propa_oracle.py tests/data/propa_oracle.json
"""

import argparse
import json
import time

from cheegerlab.graphs import all_graphs
from cheegerlab.oracles import exact_propa


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    rows = []
    t0 = time.time()
    for n in range(1, args.max_n + 1):
        for g in all_graphs(n):
            dist = [[int(d) if d < 10**6 else 10**6 for d in row] for row in g.dist.tolist()]
            for R in (1, 2):
                for S in (0, 1, 2):
                    for sym in (False, True):
                        v = exact_propa(dist, R, S, sym)
                        rows.append({
                            "name": g.name,
                            "n": g.n,
                            "edges": [list(e) for e in g.undirected_edges],
                            "R": R,
                            "S": S,
                            "symmetric": sym,
                            "value": f"{v.numerator}/{v.denominator}",
                        })
            print(f"{g.name}: done ({time.time() - t0:.1f}s)", flush=True)
    with open(args.out, "w") as fh:
        json.dump(rows, fh, indent=1)
    print(f"{len(rows)} instances in {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
