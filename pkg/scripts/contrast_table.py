"""Expander family against cycle family: lower bound vs achieved variation.

    python3 scripts/contrast_table.py --out contrast.csv
"""

import argparse

from cheegerlab.family import make_family
from cheegerlab.obstruction import family_incompatibility


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--margulis", nargs=2, type=int, default=[2, 6], metavar=("FIRST", "LAST"))
    ap.add_argument("--cycles", nargs=2, type=int, default=[8, 64], metavar=("FIRST", "LAST"))
    ap.add_argument("--dev", type=float, default=0.01)
    ap.add_argument("--out", help="also write both tables as CSV")
    args = ap.parse_args()

    reports = {
        "margulis S=1": family_incompatibility(make_family("margulis", args.margulis), 1, rowsum_budget=args.dev),
        "cycle S=n//8": family_incompatibility(
            make_family("cycle", args.cycles), lambda g: max(1, g.n // 8), rowsum_budget=args.dev
        ),
    }
    print(f"{'family':<14}{'n':>4}{'S':>4}{'h':>10}{'k':>3}{'N_S':>5}{'LB':>12}{'V':>12}")
    for name, rep in reports.items():
        for r in rep.rows:
            print(f"{name:<14}{r.n:>4}{r.S:>4}{r.h:>10.4f}{r.k:>3}{r.N_S:>5}{r.LB:>12.6f}{r.V_achieved:>12.6f}")
        print(f"  -> {rep.verdict}; inf LB = {rep.inf_LB:.3g}; LB slope in log n = {rep.decay_exponent}")
    if args.out:
        with open(args.out, "w") as fh:
            for name, rep in reports.items():
                fh.write(f"# {name}\n{rep.to_csv()}")


if __name__ == "__main__":
    main()
