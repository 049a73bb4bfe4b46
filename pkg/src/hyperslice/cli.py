"""Command-line driver.

    hyperslice solve --dw 2 --db 2 --order 3
    hyperslice disks --color w --p-max 5
    hyperslice cylinders --kind ww --p-max 4 --q-max 4
    hyperslice dobrushin --p-max 3 --q-max 3
    hyperslice walks verify-appendix-a --d 2 --s-order 6
    hyperslice verify --suite all --dw 2 --db 2 --order 4 --tail 6
    hyperslice oracle --spec '{"kind": "disk", "colors": ["white"], "degrees": [1]}' --emax 3

Exit status: 0 on success, 1 when an identity fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from typing import Dict, List, Optional, Sequence

from .gf import BoundarySpec, RouteMismatch, table
from .oracle import enumerate_spec
from .slices import DegreeBounds, solve_slice_system
from .suites import SUITES, SuiteReport, run_suite
from .walks import appendixA_suite

VERBS = ("solve", "disks", "cylinders", "dobrushin", "walks", "verify", "oracle")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    verb: str = ""
    dw: int = 2
    db: int = 2
    order: int = 4
    tail: int = 6
    p_max: int = 3
    q_max: int = 3
    emax: int = 4
    color: str = "w"
    kind: str = "ww"
    suite: str = "all"
    d: int = 2
    s_order: int = 6
    spec: str = ""
    action: str = ""
    out: str = "-"
    format: str = "json"

    def validate(self) -> None:
        if self.verb not in VERBS:
            raise UsageError(f"unknown verb {self.verb!r}")
        if self.dw < 1 or self.db < 1:
            raise UsageError("--dw and --db must be at least 1")
        for name in ("order", "tail", "p_max", "q_max", "emax", "s_order"):
            if getattr(self, name) < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be nonnegative")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if self.verb == "verify" and self.suite not in SUITES:
            raise UsageError(f"--suite must be one of {', '.join(SUITES)}")
        if self.verb == "walks" and self.action != "verify-appendix-a":
            raise UsageError("walks supports only the verify-appendix-a action")
        if self.verb == "walks" and self.d < 1:
            raise UsageError("--d must be at least 1")
        if self.color.lower() not in ("w", "white", "b", "black"):
            raise UsageError("--color must be w or b")
        if self.verb == "cylinders" and self.kind not in ("ww", "bb", "wb", "one_way", "two_way_bw"):
            raise UsageError(f"unknown cylinder kind {self.kind!r}")
        if self.verb == "oracle" and not self.spec:
            raise UsageError("oracle needs --spec")


def read_config_file(path: str) -> Dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperslice", description="Hypermap generating functions via slices.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("action", nargs="?", default=None)
    for flag, typ in (("--dw", int), ("--db", int), ("--order", int), ("--tail", int), ("--p-max", int),
                      ("--q-max", int), ("--emax", int), ("--d", int), ("--s-order", int),
                      ("--color", str), ("--kind", str), ("--suite", str), ("--spec", str),
                      ("--out", str), ("--format", str), ("--config", str)):
        ap.add_argument(flag, type=typ, default=None)
    return ap


def build_config(argv: Sequence[str]) -> RunConfig:
    args = vars(_parser().parse_args(argv))
    values: Dict[str, object] = {}
    if args.get("config"):
        try:
            values.update(read_config_file(args["config"]))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
    values.update({k: v for k, v in args.items() if v is not None and k != "config"})
    cfg = RunConfig()
    types = {f.name: f.type for f in fields(RunConfig)}
    for k, v in values.items():
        if k not in types:
            raise UsageError(f"unknown configuration key {k!r}")
        if types[k] in (int, "int"):
            try:
                v = int(v)
            except (TypeError, ValueError):
                raise UsageError(f"{k} must be an integer") from None
        setattr(cfg, k, v)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# emission


def _series_rows(prefix: List[str], value_json: dict) -> List[List[str]]:
    rows = []
    for term in value_json["terms"]:
        rows.append(prefix + [" ".join(map(str, term["exponents"])), str(term["numerator"]),
                              str(term["denominator"])])
    return rows


def _to_csv(header: List[str], rows: List[List[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _table_payload(cfg: RunConfig, results, fmt: str) -> str:
    if fmt == "json":
        return _dump({"config": _public(cfg), "variables": list(results[0].value.varset.names) if results else [],
                      "results": [r.to_json() for r in results]})
    rows = []
    for r in results:
        s = r.spec
        rows += _series_rows([s.kind, "/".join(s.colors), "/".join(map(str, s.degrees)), r.route],
                             r.value.to_json())
    names = " ".join(results[0].value.varset.names) if results else ""
    return _to_csv(["kind", "colors", "degrees", "route", f"exponents ({names})", "numerator", "denominator"], rows)


def _report_payload(rep: SuiteReport, fmt: str) -> str:
    if fmt == "json":
        return _dump(rep.to_json())
    rows = [[r.name, "pass" if r.ok else ("note" if r.informational else "FAIL"), r.detail] for r in rep.results]
    return _to_csv(["identity", "status", "detail"], rows)


def _public(cfg: RunConfig) -> dict:
    keep = {
        "solve": ("dw", "db", "order"),
        "disks": ("dw", "db", "order", "color", "p_max"),
        "cylinders": ("dw", "db", "order", "kind", "p_max", "q_max"),
        "dobrushin": ("dw", "db", "order", "p_max", "q_max"),
        "oracle": ("dw", "db", "emax", "spec"),
    }[cfg.verb]
    d = asdict(cfg)
    return {k: d[k] for k in keep}


# ---------------------------------------------------------------------------


def run(cfg: RunConfig) -> tuple:
    """Execute ``cfg``; returns ``(exit status, text)``."""
    bounds = DegreeBounds(cfg.dw, cfg.db)
    if cfg.verb == "solve":
        sol = solve_slice_system(bounds, cfg.order)
        if cfg.format == "csv":
            rows = []
            for name, arr in (("a", sol.a), ("b", sol.b)):
                for k in sorted(arr):
                    rows += _series_rows([f"{name}{k}"], arr[k].to_json())
            return 0, _to_csv(["series", f"exponents ({' '.join(sol.varset.names)})", "numerator",
                               "denominator"], rows)
        return 0, _dump(sol.to_json())
    if cfg.verb in ("disks", "cylinders", "dobrushin"):
        sol = solve_slice_system(bounds, cfg.order)
        try:
            if cfg.verb == "disks":
                res = table(sol, "disk", color=cfg.color, p_max=cfg.p_max)
            elif cfg.verb == "cylinders":
                if cfg.p_max < 1 or cfg.q_max < 1:
                    raise UsageError("cylinder perimeters start at 1")
                res = table(sol, "cylinder", kind=cfg.kind, p_max=cfg.p_max, q_max=cfg.q_max)
            else:
                res = table(sol, "dobrushin", p_max=cfg.p_max, q_max=cfg.q_max)
        except RouteMismatch as exc:
            return 1, _dump({"error": "route mismatch", "detail": str(exc)})
        return 0, _table_payload(cfg, res, cfg.format)
    if cfg.verb == "walks":
        rep = SuiteReport("appendix-a", {"d": cfg.d, "s_order": cfg.s_order},
                          appendixA_suite(cfg.d, cfg.s_order))
        return (0 if rep.ok else 1), _report_payload(rep, cfg.format)
    if cfg.verb == "verify":
        rep = run_suite(cfg.suite, cfg.dw, cfg.db, cfg.order, cfg.tail, cfg.emax)
        return (0 if rep.ok else 1), _report_payload(rep, cfg.format)
    if cfg.verb == "oracle":
        try:
            spec = BoundarySpec.from_json(json.loads(cfg.spec))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad --spec: {exc}") from None
        wc = enumerate_spec(spec, cfg.emax, bounds)
        if cfg.format == "csv":
            rows = _series_rows([spec.kind, "/".join(spec.colors), "/".join(map(str, spec.degrees))],
                                wc.count.to_json())
            return 0, _to_csv(["kind", "colors", "degrees", f"exponents ({' '.join(wc.count.varset.names)})",
                               "numerator", "denominator"], rows)
        return 0, _dump({"config": _public(cfg), "variables": list(wc.count.varset.names), **wc.to_json()})
    raise UsageError(f"unknown verb {cfg.verb!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = build_config(argv)
        status, text = run(cfg)
    except UsageError as exc:
        print(f"hyperslice: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    if cfg.out in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    if status == 1:
        print("hyperslice: identity check failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
