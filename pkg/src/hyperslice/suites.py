"""Verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from .algebra import MSeries, ms_sum
from .gf import (
    BoundarySpec, RouteMismatch, cylinder, cylinder_terms, disk, disk_checked, dobrushin_table,
    blob_log_check, pointed_disk,
)
from .grand import run_grand_suite
from .oracle import (
    WeightedCount, compare, enumerate_spec, planar_maps, quadrangulation_closed_form,
    quadrangulation_counts, rooted_counts,
)
from .slices import (
    DegreeBounds, SliceSolution, check_alternative, pointed_rooted, solve_slice_system,
    system_residual, weighted_increment_sum,
)
from .walks import IdentityResult, appendixA_suite

SUITES = ("slices", "walks", "gf", "grand", "oracle", "all")


@dataclass
class SuiteReport:
    suite: str
    config: dict
    results: List[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.results)

    def first_failure(self) -> Optional[IdentityResult]:
        return next((r for r in self.results if r.failed), None)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "pass": self.ok,
            "checked": len(self.results),
            "failed": sum(r.failed for r in self.results),
            "results": [r.to_json() for r in self.results],
        }


def _eq(name: str, lhs, rhs, detail: str = "") -> IdentityResult:
    if lhs == rhs:
        return IdentityResult(name, True, detail)
    msg = f"{lhs} != {rhs}"
    return IdentityResult(name, False, f"{msg}; {detail}" if detail else msg)


def _cut(s: MSeries, degree: int) -> MSeries:
    return s.restrict(lambda e: sum(e) <= degree)


def _tag(sol: SliceSolution) -> str:
    return f"dw={sol.bounds.delta_white}, db={sol.bounds.delta_black}, N={sol.varset.order}"


# ---------------------------------------------------------------------------


def slices_suite(sol: SliceSolution) -> List[IdentityResult]:
    tag = _tag(sol)
    vs = sol.varset
    res = system_residual(sol)
    out = [
        IdentityResult(f"slice system fixed point [{tag}]", res is None,
                       "" if res is None else f"{res[0]}_{res[1]} moves: {res[2]} -> {res[3]}"),
        _eq(f"b_-1 = 1 [{tag}]", sol.b_(-1), vs.one()),
        IdentityResult(f"alternative a_-1 relation [{tag}]", check_alternative(sol)),
        _eq(f"sum k a_k b_k = -t [{tag}]", weighted_increment_sum(sol), -sol.t),
    ]
    if sol.t:
        lit = _eq(f"sum k a_k b_k = +t, as displayed [{tag}]", weighted_increment_sum(sol), sol.t)
        lit.informational = True
        out.append(lit)
    out.append(_eq(f"F_0 = t by the compact disk formula [{tag}]", disk(sol, "white", 0), sol.t))
    if (sol.bounds.delta_white, sol.bounds.delta_black) == (2, 2):
        out += closed_forms_delta2(sol)
    return out


def closed_forms_delta2(sol: SliceSolution) -> List[IdentityResult]:
    t, vs = sol.t, sol.varset
    tw1, tw2, tb1, tb2 = sol.tw(1), sol.tw(2), sol.tb(1), sol.tb(2)
    k = vs.one() - tw2 * tb2
    return [
        _eq("closed form a_1 = tb2", sol.a_(1), tb2),
        _eq("closed form b_1 = tw2 a_-1", sol.b_(1), tw2 * sol.a_(-1)),
        _eq("closed form a_-1 (1 - tw2 tb2) = t", sol.a_(-1) * k, t),
        _eq("closed form a_0 (1 - tw2 tb2) = tb1 + tw1 tb2", sol.a_(0) * k, tb1 + tw1 * tb2),
        _eq("closed form b_0 = tw1 + tw2 a_0", sol.b_(0), tw1 + tw2 * sol.a_(0)),
    ]


def walks_suite(ds: Iterable[int] = (1, 2, 3), s_order: int = 6) -> List[IdentityResult]:
    out = []
    for d in ds:
        for r in appendixA_suite(d, s_order):
            out.append(IdentityResult(f"{r.name} [d={d}, s^{s_order}]", r.ok, r.detail, r.informational))
    return out


def _integral(s: MSeries) -> bool:
    return all(getattr(c, "denominator", 1) == 1 for _, c in s.items())


def gf_suite(sol: SliceSolution, p_max: int = 5, c_max: int = 4, d_max: int = 2) -> List[IdentityResult]:
    tag = _tag(sol)
    vs = sol.varset
    N = vs.order
    dw, db = sol.bounds.delta_white, sol.bounds.delta_black
    out: List[IdentityResult] = []

    # disks: three routes, integrality, pointing
    for color in ("white", "black"):
        for p in range(p_max + 1):
            try:
                F = disk_checked(sol, color, p)
                out.append(IdentityResult(f"disk routes agree ({color}, p={p}) [{tag}]", True))
            except RouteMismatch as exc:
                out.append(IdentityResult(f"disk routes agree ({color}, p={p}) [{tag}]", False, str(exc)))
                continue
            out.append(IdentityResult(f"disk coefficients integral ({color}, p={p}) [{tag}]", _integral(F)))
            out.append(_eq(f"pointing d/dt F = pointed disk ({color}, p={p}) [{tag}]",
                           _cut(F.derivative("t"), N - 1), _cut(pointed_disk(sol, color, p), N - 1)))
        out.append(_eq(f"F_0 = t ({color}) [{tag}]", disk(sol, color, 0), sol.t))

    # cylinders
    for kind in ("ww", "bb"):
        bad = [(p, q) for p in range(1, c_max + 1) for q in range(1, c_max + 1)
               if cylinder(sol, kind, p, q) != cylinder(sol, kind, q, p)]
        out.append(IdentityResult(f"cylinder symmetry ({kind}) [{tag}]", not bad,
                                  f"asymmetric at {bad[0]}" if bad else ""))
    rel = []
    for p in range(1, c_max + 1):
        for q in range(1, c_max + 1):
            # (family, disk color of p, weight of q, boundary count q, disk color of q, weight of p)
            for kind, cp, wq, cq, wp in (("ww", "white", "tw", "white", "tw"),
                                         ("bb", "black", "tb", "black", "tb"),
                                         ("wb", "white", "tb", "black", "tw")):
                C = _cut(cylinder(sol, kind, p, q), N - 1)
                bound_q = dw if wq == "tw" else db
                bound_p = dw if wp == "tw" else db
                if q <= bound_q:
                    rel.append((f"F^{kind}_{{{p},{q}}} = q dF_p/d{wq}{q}", C,
                                _cut(disk(sol, cp, p).derivative(f"{wq}{q}") * q, N - 1)))
                if p <= bound_p:
                    rel.append((f"F^{kind}_{{{p},{q}}} = p dF_q/d{wp}{p}", C,
                                _cut(disk(sol, cq, q).derivative(f"{wp}{p}") * p, N - 1)))
    bad = [r for r in rel if r[1] != r[2]]
    out.append(IdentityResult(f"cylinder derivative relations ({len(rel)} cases) [{tag}]", not bad,
                              f"{bad[0][0]}: {bad[0][1]} != {bad[0][2]}" if bad else ""))

    for p in range(0, 5):
        lhs = disk(sol, "white", p) * (p + 1)
        hat = cylinder(sol, "one_way", p + 1, 1)
        out.append(_eq(f"(p+1) F_p = one-way F_{{p+1,1}} (p={p}) [{tag}]", lhs, hat))
        out.append(_eq(f"one-way = wb - two-way (p={p}) [{tag}]", hat,
                       cylinder(sol, "wb", p + 1, 1) - cylinder(sol, "two_way_bw", 1, p + 1)))
    for p in range(0, 4):
        rhs = ms_sum((sol.tw(d) * cylinder(sol, "ww", p + 1, d - 1) for d in range(2, dw + 1)), vs)
        out.append(_eq(f"two-way F_{{1,p+1}} = sum_d tw_d F^ww_{{p+1,d-1}} (p={p}) [{tag}]",
                       cylinder(sol, "two_way_bw", 1, p + 1), rhs))

    pr = pointed_rooted(sol)
    out.append(_eq(f"pointed rooted = sum tw_p pointed white disks [{tag}]", pr,
                   ms_sum((sol.tw(p) * pointed_disk(sol, "white", p) for p in range(1, dw + 1)), vs)))
    out.append(_eq(f"pointed rooted = sum tb_p pointed black disks [{tag}]", pr,
                   ms_sum((sol.tb(p) * pointed_disk(sol, "black", p) for p in range(1, db + 1)), vs)))

    # Dobrushin
    exp_t = dobrushin_table(sol, d_max, d_max, "exp")
    blob_t = dobrushin_table(sol, d_max, d_max, "blob")
    bad = [k for k in exp_t.values if exp_t[k] != blob_t[k]]
    out.append(IdentityResult(f"Dobrushin exp route = blob route [{tag}]", not bad,
                              f"differ at {bad[0]}" if bad else ""))
    out.append(_eq(f"Dobrushin F_{{0,0}} = t [{tag}]", exp_t[0, 0], sol.t))
    for p in range(1, d_max + 1):
        out.append(_eq(f"Dobrushin F_{{{p},0}} = white disk [{tag}]", exp_t[p, 0], disk(sol, "white", p)))
        out.append(_eq(f"Dobrushin F_{{0,{p}}} = black disk [{tag}]", exp_t[0, p], disk(sol, "black", p)))
    bl = blob_log_check(sol, d_max + 1, d_max + 1)
    out.append(IdentityResult(f"blob log relation [{tag}]", bl is None, f"fails at {bl}" if bl else ""))
    neg = [k for k, v in blob_t.blobs.items() if any(c < 0 or getattr(c, "denominator", 1) != 1
                                                      for _, c in v.items())]
    out.append(IdentityResult(f"blob coefficients are nonnegative integers [{tag}]", not neg,
                              f"bad blob {neg[0]}" if neg else ""))
    return out


def grand_suite(sol: SliceSolution, M: int, P_max: int = 3, Q_max: int = 3,
                with_resultant: bool = True) -> List[IdentityResult]:
    tag = _tag(sol) + f", M={M}"
    return [IdentityResult(f"{r.name} [{tag}]", r.ok, r.detail, r.informational)
            for r in run_grand_suite(sol, M, P_max, Q_max, with_resultant)]


# ---------------------------------------------------------------------------
# oracle compare matrix


def oracle_suite(bounds: DegreeBounds, E_max: int = 4, p_max: int = 3, c_max: int = 2,
                 d_max: int = 2, girth: bool = True) -> List[IdentityResult]:
    sol = solve_slice_system(bounds, E_max + 1)
    tag = f"dw={bounds.delta_white}, db={bounds.delta_black}, emax={E_max}"
    out: List[IdentityResult] = []

    def check(spec: BoundarySpec, value: MSeries, label: str, g: Optional[int] = None):
        wc = enumerate_spec(spec, E_max, bounds, girth=g)
        out.append(compare(spec, E_max, value, wc, f"oracle {label} [{tag}]"))

    for color in ("white", "black"):
        for p in range(p_max + 1):
            check(BoundarySpec("disk", (color,), (p,)), disk(sol, color, p), f"disk {color} p={p}")
            check(BoundarySpec("pointed_disk", (color,), (p,)), pointed_disk(sol, color, p),
                  f"pointed disk {color} p={p}")
    cols = {"ww": ("white", "white"), "bb": ("black", "black"), "wb": ("white", "black")}
    for p in range(1, c_max + 1):
        for q in range(1, c_max + 1):
            for kind, cc in cols.items():
                spec = BoundarySpec("cylinder", cc, (p, q))
                check(spec, cylinder(sol, kind, p, q), f"cylinder {kind} ({p},{q})")
                if girth:
                    terms = cylinder_terms(sol, kind, p, q)
                    for h in range(1, E_max + 1):
                        check(spec, terms.get(h, sol.varset.zero()),
                              f"cylinder {kind} ({p},{q}) ccw-girth {h}", g=h)
            check(BoundarySpec("one_way_cylinder", ("white", "black"), (p, q)),
                  cylinder(sol, "one_way", p, q), f"one-way cylinder ({p},{q})")
            spec = BoundarySpec("cylinder", ("black", "white"), (p, q))
            finite = sum((enumerate_spec(spec, E_max, bounds, girth=h).count for h in range(1, E_max + 1)),
                         sol.varset.zero())
            out.append(compare(spec, E_max, cylinder(sol, "two_way_bw", p, q),
                               WeightedCount(spec, finite, E_max),
                               f"oracle two-way cylinder ({p},{q}) [{tag}]"))
    table = dobrushin_table(sol, d_max, d_max)
    for p in range(d_max + 1):
        for q in range(d_max + 1):
            check(BoundarySpec("dobrushin", ("white", "black"), (p, q)), table[p, q], f"Dobrushin ({p},{q})")
    return out


def oracle_structure_suite(E_max: int = 4) -> List[IdentityResult]:
    out = []
    a, b = rooted_counts(E_max, "canonical"), rooted_counts(E_max, "labeled")
    out.append(_eq(f"rooted counts agree across generation routes (emax={E_max})", a, b, f"counts={a}"))
    bad = [(E, m) for E in range(E_max + 1) for m in planar_maps(E) if m.invariant_violations()]
    out.append(IdentityResult(f"every enumerated map passes its invariant checks (emax={E_max})", not bad,
                              f"{bad[0][1]}: {bad[0][1].invariant_violations()}" if bad else ""))
    return out


def quadrangulation_suite(n_max: int = 3) -> List[IdentityResult]:
    from .algebra import VarSet
    expected = [quadrangulation_closed_form(n) for n in range(1, n_max + 1)]
    oracle = quadrangulation_counts(n_max)
    vs = VarSet(("t", "tw4", "tb2"), 4 * n_max + 1)
    sol = solve_slice_system(DegreeBounds(4, 2), vs.order, vs)
    F4 = disk(sol, "white", 4)
    formula = [F4.coeff({"t": n + 2, "tw4": n - 1, "tb2": 2 * n}) for n in range(1, n_max + 1)]
    return [
        _eq("quadrangulations: oracle = closed form", oracle, expected, f"counts={oracle}"),
        _eq("quadrangulations: disk formula = closed form", formula, expected, f"counts={formula}"),
    ]


# ---------------------------------------------------------------------------


def run_suite(name: str, dw: int, db: int, order: int, tail: int, emax: int = 4) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    bounds = DegreeBounds(dw, db)
    config = {"dw": dw, "db": db, "order": order, "tail": tail}
    if name in ("oracle", "all"):
        config["emax"] = emax
    rep = SuiteReport(name, config)
    parts = SUITES[:-1] if name == "all" else (name,)
    sol = solve_slice_system(bounds, order) if set(parts) & {"slices", "gf", "grand"} else None
    for part in parts:
        if part == "slices":
            rep.results += slices_suite(sol)
        elif part == "walks":
            rep.results += walks_suite(s_order=max(tail, 1))
        elif part == "gf":
            rep.results += gf_suite(sol)
        elif part == "grand":
            rep.results += grand_suite(sol, max(tail, 1))
        elif part == "oracle":
            rep.results += oracle_structure_suite(min(emax, 4))
            rep.results += oracle_suite(bounds, emax)
    return rep
