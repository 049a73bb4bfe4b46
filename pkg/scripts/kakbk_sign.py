"""Print sum_k k a_k b_k next to t for a range of bounds.

The sum comes out as -t throughout; the script makes that easy to eyeball.
"""

import argparse

from hyperslice.slices import DegreeBounds, solve_slice_system, weighted_increment_sum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--order", type=int, default=5)
    args = ap.parse_args()
    for dw in range(1, args.max_degree + 1):
        for db in range(1, args.max_degree + 1):
            sol = solve_slice_system(DegreeBounds(dw, db), args.order)
            S = weighted_increment_sum(sol)
            sign = "-t" if S == -sol.t else ("+t" if S == sol.t else "other")
            print(f"dw={dw} db={db} N={args.order}: sum k a_k b_k = {sign}")


if __name__ == "__main__":
    main()
