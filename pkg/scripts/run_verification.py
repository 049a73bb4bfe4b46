"""Run every verification suite over a grid of bounds and write one JSON report per run.

    python3 scripts/run_verification.py --max-degree 3 --order 4 --outdir runs/
"""

import argparse
import json
import time
from pathlib import Path

from hyperslice.suites import run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=2)
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--tail", type=int, default=6)
    ap.add_argument("--emax", type=int, default=4)
    ap.add_argument("--outdir", default="runs")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for dw in range(1, args.max_degree + 1):
        for db in range(1, args.max_degree + 1):
            start = time.perf_counter()
            rep = run_suite("all", dw, db, args.order, args.tail, args.emax)
            path = out / f"verify_dw{dw}_db{db}_N{args.order}.json"
            path.write_text(json.dumps(rep.to_json(), sort_keys=True, indent=2) + "\n")
            data = rep.to_json()
            failures += data["failed"]
            status = "ok" if rep.ok else f"FAILED ({rep.first_failure.name})"
            print(f"dw={dw} db={db}: {data['checked']} checks, {status}, {time.perf_counter() - start:.1f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
