"""Elementary slice generating functions for bounded face degrees.

The unknowns ``a_k`` (-1 <= k < db) and ``b_k`` (-1 <= k < dw) enter through
the Laurent polynomials

    x(z) = sum_k a_k z^(-k),        y(z) = z^(-1) + sum_{k>=0} b_k z^k

and the system

    b_k = sum_d tw_d [z^k] x(z)^(d-1)              (0 <= k < dw)
    a_k = t [k = -1] + sum_d tb_d [z^(-k)] y(z)^(d-1)   (-1 <= k < db)

Every right-hand side carries a weight factor, so Jacobi iteration from the
trivial solution fixes one more total degree per pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .algebra import LaurentPoly, MSeries, VarSet, lp_coeff, ms_sum


@dataclass(frozen=True)
class DegreeBounds:
    delta_white: int
    delta_black: int

    def __post_init__(self):
        if self.delta_white < 1 or self.delta_black < 1:
            raise ValueError("degree bounds must be at least 1")


def slice_varset(bounds: DegreeBounds, order: int) -> VarSet:
    names = ["t"]
    names += [f"tw{d}" for d in range(1, bounds.delta_white + 1)]
    names += [f"tb{d}" for d in range(1, bounds.delta_black + 1)]
    return VarSet(tuple(names), order)


def _weight(vs: VarSet, name: str) -> MSeries:
    # variables absent from a specialized varset carry weight zero
    return vs.var(name) if name in vs else vs.zero()


class SliceSolution:
    """Solved slice arrays with cached Laurent powers."""

    def __init__(self, bounds: DegreeBounds, varset: VarSet,
                 a: Dict[int, MSeries], b: Dict[int, MSeries], iterations: int = 0):
        self.bounds = bounds
        self.varset = varset
        self.a = dict(a)
        self.b = dict(b)
        self.iterations = iterations
        self.x = LaurentPoly(varset, {-k: c for k, c in self.a.items()})
        self.y = LaurentPoly(varset, {k: c for k, c in self.b.items()})
        self._xp = {0: LaurentPoly(varset, {0: varset.one()}), 1: self.x}
        self._yp = {0: LaurentPoly(varset, {0: varset.one()}), 1: self.y}

    @property
    def t(self) -> MSeries:
        return _weight(self.varset, "t")

    def tw(self, d: int) -> MSeries:
        return _weight(self.varset, f"tw{d}")

    def tb(self, d: int) -> MSeries:
        return _weight(self.varset, f"tb{d}")

    def a_(self, k: int) -> MSeries:
        return self.a.get(k, self.varset.zero())

    def b_(self, k: int) -> MSeries:
        return self.b.get(k, self.varset.zero())

    def xpow(self, p: int) -> LaurentPoly:
        if p not in self._xp:
            self._xp[p] = self.xpow(p - 1) * self.x
        return self._xp[p]

    def ypow(self, p: int) -> LaurentPoly:
        if p not in self._yp:
            self._yp[p] = self.ypow(p - 1) * self.y
        return self._yp[p]

    def P_white(self, p: int, h: int) -> MSeries:
        """Walks with ``a``-weighted steps from 0 to ``h``: ``[z^-h] x^p``."""
        return lp_coeff(self.xpow(p), -h)

    def P_black(self, p: int, h: int) -> MSeries:
        """Walks with ``b``-weighted steps from 0 to ``h``: ``[z^h] y^p``."""
        return lp_coeff(self.ypow(p), h)

    def to_json(self) -> dict:
        return {
            "delta_white": self.bounds.delta_white,
            "delta_black": self.bounds.delta_black,
            "order": self.varset.order,
            "variables": list(self.varset.names),
            "a": {str(k): self.a_(k).to_json()["terms"] for k in sorted(self.a)},
            "b": {str(k): self.b_(k).to_json()["terms"] for k in sorted(self.b)},
        }


def _step(bounds: DegreeBounds, vs: VarSet, a: Dict[int, MSeries], b: Dict[int, MSeries]):
    x = LaurentPoly(vs, {-k: c for k, c in a.items()})
    y = LaurentPoly(vs, {k: c for k, c in b.items()})
    one = LaurentPoly(vs, {0: vs.one()})
    xp, yp = [one], [one]
    for _ in range(1, bounds.delta_white):
        xp.append(xp[-1] * x)
    for _ in range(1, bounds.delta_black):
        yp.append(yp[-1] * y)
    new_b = {-1: vs.one()}
    for k in range(0, bounds.delta_white):
        new_b[k] = ms_sum((_weight(vs, f"tw{d}") * lp_coeff(xp[d - 1], k)
                           for d in range(1, bounds.delta_white + 1)), vs)
    new_a = {}
    for k in range(-1, bounds.delta_black):
        acc = ms_sum((_weight(vs, f"tb{d}") * lp_coeff(yp[d - 1], -k)
                      for d in range(1, bounds.delta_black + 1)), vs)
        new_a[k] = acc + _weight(vs, "t") if k == -1 else acc
    return new_a, new_b


def solve_slice_system(bounds: DegreeBounds, order: int,
                       varset: Optional[VarSet] = None) -> SliceSolution:
    """Solve the slice system up to total degree ``order``.

    ``varset`` may be a specialization of the full slice variable set: any
    face weight missing from it is set to zero.
    """
    vs = varset if varset is not None else slice_varset(bounds, order)
    if varset is not None and varset.order != order:
        vs = varset.with_order(order)
    a = {k: vs.zero() for k in range(-1, bounds.delta_black)}
    b = {k: vs.zero() for k in range(0, bounds.delta_white)}
    b[-1] = vs.one()
    done = 0
    for _ in range(order):
        new_a, new_b = _step(bounds, vs, a, b)
        done += 1
        if new_a == a and new_b == b:
            break
        a, b = new_a, new_b
    return SliceSolution(bounds, vs, a, b, iterations=done)


@lru_cache(maxsize=64)
def cached_solution(dw: int, db: int, order: int) -> SliceSolution:
    return solve_slice_system(DegreeBounds(dw, db), order)


def system_residual(sol: SliceSolution) -> Optional[Tuple[str, int, MSeries, MSeries]]:
    """One more Jacobi pass; returns the first entry that moves, or None."""
    new_a, new_b = _step(sol.bounds, sol.varset, sol.a, sol.b)
    for k in sorted(new_b):
        if new_b[k] != sol.b_(k):
            return ("b", k, sol.b_(k), new_b[k])
    for k in sorted(new_a):
        if new_a[k] != sol.a_(k):
            return ("a", k, sol.a_(k), new_a[k])
    return None


def check_alternative(sol: SliceSolution) -> bool:
    """``a_{-1} (1 - sum_d tw_d [z^-1] x^(d-1)) == t`` up to truncation."""
    inner = ms_sum((sol.tw(d) * sol.P_white(d - 1, 1)
                    for d in range(1, sol.bounds.delta_white + 1)), sol.varset)
    return sol.a_(-1) * (1 - inner) == sol.t


def weighted_increment_sum(sol: SliceSolution) -> MSeries:
    """``sum_k k a_k b_k``; equals ``-t``."""
    top = min(sol.bounds.delta_white, sol.bounds.delta_black)
    return ms_sum((sol.a_(k) * sol.b_(k) * k for k in range(-1, top)), sol.varset)


def pointed_rooted(sol: SliceSolution) -> MSeries:
    """``sum_k a_k b_k - t``: pointed rooted hypermaps, pointed vertex unweighted."""
    top = min(sol.bounds.delta_white, sol.bounds.delta_black)
    return ms_sum((sol.a_(k) * sol.b_(k) for k in range(-1, top)), sol.varset) - sol.t
