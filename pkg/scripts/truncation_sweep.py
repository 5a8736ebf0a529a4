"""Effect of the truncation radius on a symmetrised kernel.

For each S_cut, symmetrise a kernel and record truncation error, unital
defect and l2 variation before and after.

    python3 scripts/truncation_sweep.py --graph margulis:4 --recipe lazy_walk --S 3
"""

import argparse

from cheegerlab.cli import parse_graph
from cheegerlab.kernels import build_kernel
from cheegerlab.symmetrisation import symmetrise


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default="cycle:16")
    ap.add_argument("--recipe", default="lazy_walk", choices=["ball_average", "lazy_walk"])
    ap.add_argument("--S", type=int, default=3)
    ap.add_argument("--max-cut", type=int)
    args = ap.parse_args()

    g = parse_graph(args.graph, seed=0)
    phi = build_kernel(g, args.recipe, args.S)
    top = args.max_cut if args.max_cut is not None else g.diameter()
    print(f"{g.name}, {args.recipe} S={args.S}")
    print(f"{'S_cut':>5}{'trunc_err':>12}{'unital':>12}{'V2_before':>12}{'V2_after':>12}  checks")
    for S_cut in range(0, top + 1):
        res = symmetrise(phi, S_cut)
        ok = "ok" if all(res.bound_checks().values()) else res.bound_checks()
        print(
            f"{S_cut:>5}{res.truncation_error:>12.3e}{res.unital_defect:>12.3e}"
            f"{res.variation_before:>12.5f}{res.variation_after:>12.5f}  {ok}"
        )


if __name__ == "__main__":
    main()
