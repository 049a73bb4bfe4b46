"""Rooted quadrangulation counts three ways: brute force, disk formula, closed form.

    python3 scripts/quadrangulations.py --n-max 3
"""

import argparse
import time

from hyperslice.algebra import VarSet
from hyperslice.gf import disk
from hyperslice.oracle import quadrangulation_closed_form, quadrangulation_counts
from hyperslice.slices import DegreeBounds, solve_slice_system


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=3)
    args = ap.parse_args()
    n_max = args.n_max

    t0 = time.perf_counter()
    brute = quadrangulation_counts(n_max)
    t1 = time.perf_counter()
    # quadrangulations are hypermaps with white 4-gons and black 2-gons (the edges)
    vs = VarSet(("t", "tw4", "tb2"), 4 * n_max + 1)
    F4 = disk(solve_slice_system(DegreeBounds(4, 2), vs.order, vs), "white", 4)
    formula = [F4.coeff({"t": n + 2, "tw4": n - 1, "tb2": 2 * n}) for n in range(1, n_max + 1)]
    t2 = time.perf_counter()

    print(f"{'n':>3} {'brute':>8} {'formula':>8} {'closed':>8}")
    for n in range(1, n_max + 1):
        print(f"{n:>3} {brute[n - 1]:>8} {str(formula[n - 1]):>8} {quadrangulation_closed_form(n):>8}")
    print(f"brute force {t1 - t0:.2f}s, formula {t2 - t1:.2f}s")


if __name__ == "__main__":
    main()
