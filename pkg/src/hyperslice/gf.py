"""Fixed-perimeter generating functions read off the slice solution."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import BiTail, MSeries, ms_sum, tail_exp, tail_geometric, tail_log1p
from .slices import SliceSolution
from .walks import black_steps, walk_count_dp, white_steps

KINDS = ("disk", "pointed_disk", "trumpet", "cornet", "cylinder", "one_way_cylinder", "dobrushin")
CYLINDER_KINDS = ("ww", "bb", "wb", "one_way", "two_way_bw")
DISK_ROUTES = ("compact", "expanded", "appendixB")


class RouteMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class BoundarySpec:
    kind: str
    colors: Tuple[str, ...] = ("white",)
    degrees: Tuple[int, ...] = (0,)
    girth: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be nonnegative")
        if self.girth is not None and self.girth < 1:
            raise ValueError("girth must be positive")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "colors": list(self.colors), "degrees": list(self.degrees)}
        if self.girth is not None:
            out["girth"] = self.girth
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BoundarySpec":
        return cls(data["kind"], tuple(data.get("colors", ("white",))),
                   tuple(data.get("degrees", (0,))), data.get("girth"))


@dataclass
class GFResult:
    spec: BoundarySpec
    value: MSeries
    route: str

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "route": self.route, "value": self.value.to_json()["terms"]}


def _color(c: str) -> str:
    c = c.lower()
    if c in ("w", "white", "o"):
        return "white"
    if c in ("b", "black"):
        return "black"
    raise ValueError(f"unknown color {c!r}")


def _span(*polys) -> range:
    lo = min(p.min_exp for p in polys)
    hi = max(p.max_exp for p in polys)
    return range(min(lo, -hi), max(hi, -lo) + 1)


def pointed_disk(sol: SliceSolution, color: str, p: int) -> MSeries:
    """Derivative of the disk series in ``t``: ``[z^0]`` of ``x^p`` or ``y^p``."""
    if _color(color) == "white":
        return sol.P_white(p, 0)
    return sol.P_black(p, 0)


def trumpet_cornet(sol: SliceSolution, kind: str, color: str, p: int, h: int) -> MSeries:
    if p < 1 or h < 1:
        raise ValueError("perimeter and girth must be positive")
    poly = sol.xpow(p) if _color(color) == "white" else sol.ypow(p)
    e = h if kind == "trumpet" else -h
    if kind not in ("trumpet", "cornet"):
        raise ValueError(f"unknown kind {kind!r}")
    return poly.coeffs.get(e, sol.varset.zero())


def cylinder_terms(sol: SliceSolution, kind: str, p: int, q: int) -> Dict[int, MSeries]:
    """Summands ``h -> h [z^h]A^p [z^-h]B^q`` of a cylinder series."""
    if p < 1 or q < 1:
        raise ValueError("cylinder degrees must be positive")
    pair = {
        "ww": (sol.xpow(p), sol.xpow(q)),
        "bb": (sol.ypow(p), sol.ypow(q)),
        "wb": (sol.xpow(p), sol.ypow(q)),
        "one_way": (sol.xpow(p), sol.ypow(q)),
        "two_way_bw": (sol.ypow(p), sol.xpow(q)),
    }
    if kind not in pair:
        raise ValueError(f"unknown cylinder kind {kind!r}")
    A, B = pair[kind]
    out = {}
    for h in _span(A, B):
        if h == 0 or (h < 0 and kind != "one_way"):
            continue
        if h in A.coeffs and -h in B.coeffs:
            out[h] = A.coeffs[h] * B.coeffs[-h] * h
    return out


def cylinder(sol: SliceSolution, kind: str, p: int, q: int) -> MSeries:
    return ms_sum(cylinder_terms(sol, kind, p, q).values(), sol.varset)


def _disk_compact(sol: SliceSolution, color: str, p: int) -> MSeries:
    vs = sol.varset
    if color == "white":
        poly, w = sol.xpow(p + 1), sol.b_
        terms = (w(-h) * poly.coeffs[h] * h for h in poly.coeffs if h)
    else:
        poly, w = sol.ypow(p + 1), sol.a_
        terms = (w(-h) * poly.coeffs[-h] * h for h in (-e for e in poly.coeffs) if h)
    return ms_sum(terms, vs) / (p + 1)


def _disk_expanded(sol: SliceSolution, color: str, p: int) -> MSeries:
    vs = sol.varset
    acc = []
    if color == "white":
        big = sol.xpow(p + 1)
        acc.append(big.coeffs.get(1, vs.zero()))
        for d in range(2, sol.bounds.delta_white + 1):
            small = sol.xpow(d - 1)
            inner = ms_sum((big.coeffs[h] * small.coeffs[-h] * h
                            for h in big.coeffs if h >= 1 and -h in small.coeffs), vs)
            acc.append(-(sol.tw(d) * inner))
    else:
        big = sol.ypow(p + 1)
        acc.append(sol.a_(-1) * big.coeffs.get(-1, vs.zero()))
        for d in range(2, sol.bounds.delta_black + 1):
            small = sol.ypow(d - 1)
            inner = ms_sum((big.coeffs[-h] * small.coeffs[h] * h
                            for h in small.coeffs if h >= 1 and -h in big.coeffs), vs)
            acc.append(-(sol.tb(d) * inner))
    return ms_sum(acc, vs) / (p + 1)


def _disk_appendix(sol: SliceSolution, color: str, p: int) -> MSeries:
    vs = sol.varset
    if color == "white":
        steps, dmax, weight = white_steps(sol), sol.bounds.delta_white, sol.tw
        down = lambda d, h: sol.P_white(d - 1, h + 1)
        lead = sol.a_(-1)
    else:
        steps, dmax, weight = black_steps(sol), sol.bounds.delta_black, sol.tb
        down = lambda d, h: sol.P_black(d - 1, h + 1)
        lead = vs.one()
    ge = {h: walk_count_dp(steps, p, -h, floor=-h) for h in range(0, p + 1)}
    acc = [sol.t * ge[0]]
    for d in range(2, dmax + 1):
        inner = ms_sum((down(d, h) * ge[h] for h in range(1, p + 1)), vs)
        acc.append(-(lead * weight(d) * inner))
    return ms_sum(acc, vs)


_ROUTES = {"compact": _disk_compact, "expanded": _disk_expanded, "appendixB": _disk_appendix}


def disk(sol: SliceSolution, color: str, p: int, route: str = "compact") -> MSeries:
    if p < 0:
        raise ValueError("disk degree must be nonnegative")
    if route not in _ROUTES:
        raise ValueError(f"unknown disk route {route!r}")
    return _ROUTES[route](sol, _color(color), p)


def disk_checked(sol: SliceSolution, color: str, p: int) -> MSeries:
    """Disk series computed by all three routes; raises on any disagreement."""
    values = {r: disk(sol, color, p, r) for r in DISK_ROUTES}
    ref = values["compact"]
    for r, v in values.items():
        if v != ref:
            diff = v - ref
            exps, c = next(diff.items())
            raise RouteMismatch(f"disk {color} p={p}: route {r} differs at {exps} by {c}")
    return ref


# ---------------------------------------------------------------------------
# Dobrushin boundaries


def one_way_log(sol: SliceSolution, P: int, Q: int) -> BiTail:
    """``sum hatF_{p,q} / (p q) x^-p y^-q`` for ``p <= P``, ``q <= Q``."""
    coeffs = {}
    for p in range(1, P + 1):
        for q in range(1, Q + 1):
            coeffs[(p, q)] = cylinder(sol, "one_way", p, q) * Fraction(1, p * q)
    return BiTail(sol.varset, ("x", "y"), (P, Q), coeffs)


@dataclass
class DobrushinTable:
    P: int
    Q: int
    values: Dict[Tuple[int, int], MSeries]
    blobs: Dict[Tuple[int, int], MSeries] = field(default_factory=dict)

    def __getitem__(self, pq: Tuple[int, int]) -> MSeries:
        if pq not in self.values:
            raise KeyError(f"Dobrushin entry {pq} beyond built orders ({self.P}, {self.Q})")
        return self.values[pq]


def dobrushin_table(sol: SliceSolution, P: int, Q: int, route: str = "exp") -> DobrushinTable:
    """Coefficients ``F_{p,q}`` for ``p <= P``, ``q <= Q`` by the exp or blob route."""
    L = one_way_log(sol, P + 1, Q + 1)
    if route == "exp":
        W = tail_exp(L) - sol.varset.one()
        blobs = {}
    elif route == "blob":
        B = sol.varset.one() - tail_exp(-L)
        # W = B (1 + W), iterated; each pass fixes one more total x,y-degree
        W = BiTail(sol.varset, ("x", "y"), L.orders, {})
        for _ in range(P + Q + 3):
            W = B * (W + sol.varset.one())
        blobs = {(p, q): B.coeff(p + 1, q + 1) for p in range(P + 1) for q in range(Q + 1)}
    else:
        raise ValueError(f"unknown Dobrushin route {route!r}")
    values = {(p, q): W.coeff(p + 1, q + 1) for p in range(P + 1) for q in range(Q + 1)}
    return DobrushinTable(P, Q, values, blobs)


def dobrushin(sol: SliceSolution, p: int, q: int, P_max: Optional[int] = None,
              Q_max: Optional[int] = None) -> MSeries:
    P_max = p if P_max is None else P_max
    Q_max = q if Q_max is None else Q_max
    if p > P_max or q > Q_max:
        raise KeyError(f"Dobrushin entry {(p, q)} beyond built orders ({P_max}, {Q_max})")
    exp_route = dobrushin_table(sol, P_max, Q_max, "exp")
    blob_route = dobrushin_table(sol, P_max, Q_max, "blob")
    if exp_route.values != blob_route.values:
        bad = next(k for k in exp_route.values if exp_route.values[k] != blob_route.values[k])
        raise RouteMismatch(f"Dobrushin exp and blob routes differ at {bad}")
    return exp_route[p, q]


def blob_log_check(sol: SliceSolution, P: int, Q: int) -> Optional[Tuple[int, int]]:
    """``p q [x^-p y^-q] log(1/(1-B)) == hatF_{p,q}``; returns the first failing pair."""
    L = one_way_log(sol, P, Q)
    B = sol.varset.one() - tail_exp(-L)
    G = -tail_log1p(-B)
    for p in range(1, P + 1):
        for q in range(1, Q + 1):
            if G.coeff(p, q) * (p * q) != cylinder(sol, "one_way", p, q):
                return (p, q)
    return None


def table(sol: SliceSolution, spec_kind: str, **kw) -> List[GFResult]:
    """Tables used by the command line."""
    out: List[GFResult] = []
    if spec_kind == "disk":
        color = _color(kw.get("color", "w"))
        for p in range(kw.get("p_max", 3) + 1):
            out.append(GFResult(BoundarySpec("disk", (color,), (p,)), disk_checked(sol, color, p),
                                "compact=expanded=appendixB"))
    elif spec_kind == "cylinder":
        kind = kw.get("kind", "ww")
        for p in range(1, kw.get("p_max", 3) + 1):
            for q in range(1, kw.get("q_max", 3) + 1):
                out.append(GFResult(BoundarySpec("one_way_cylinder" if kind == "one_way" else "cylinder",
                                                 _cyl_colors(kind), (p, q)),
                                    cylinder(sol, kind, p, q), kind))
    elif spec_kind == "dobrushin":
        P, Q = kw.get("p_max", 2), kw.get("q_max", 2)
        exp_route = dobrushin_table(sol, P, Q, "exp")
        blob_route = dobrushin_table(sol, P, Q, "blob")
        for p in range(P + 1):
            for q in range(Q + 1):
                if exp_route[p, q] != blob_route[p, q]:
                    raise RouteMismatch(f"Dobrushin exp and blob routes differ at {(p, q)}")
                out.append(GFResult(BoundarySpec("dobrushin", ("white", "black"), (p, q)),
                                    exp_route[p, q], "exp=blob"))
    else:
        raise ValueError(f"unknown table kind {spec_kind!r}")
    return out


def _cyl_colors(kind: str) -> Tuple[str, str]:
    return {
        "ww": ("white", "white"), "bb": ("black", "black"), "wb": ("white", "black"),
        "one_way": ("white", "black"), "two_way_bw": ("black", "white"),
    }[kind]
