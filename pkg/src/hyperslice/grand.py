"""All-perimeter generating functions and their closed-form identities.

Series in ``x`` and ``y`` are stored as tails in the inverse variables.  The
white excursion series is handled through ``zt = 1/z_white(x)``, whose
leading coefficient ``a_{-1}`` is not invertible, so every identity is
checked in a form that never divides by it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .algebra import (
    BiTail, InvTail, LaurentPoly, MSeries, ms_sum, tail_geometric, tail_log1p,
)
from .gf import cylinder, disk, dobrushin_table
from .slices import SliceSolution
from .walks import ExcursionTail, IdentityResult, black_steps, excursion_tail, white_steps

INF = math.inf


@dataclass
class ResolventBundle:
    sol: SliceSolution
    M: int
    Wdisk_white: InvTail
    Wdisk_black: InvTail
    Wpt_white: InvTail
    Wpt_black: InvTail
    z_exc_white: ExcursionTail
    z_exc_black: ExcursionTail
    arch_white: InvTail
    arch_black: InvTail
    Ypoly: Dict[int, MSeries]
    Xpoly: Dict[int, MSeries]

    @property
    def Y(self) -> InvTail:
        """``Y(x) = W_white(x) + sum_d tw_d x^(d-1)`` (keys: powers of ``1/x``)."""
        return self.Wdisk_white + InvTail(self.sol.varset, "x", INF, {-e: c for e, c in self.Ypoly.items()})

    @property
    def X(self) -> InvTail:
        return self.Wdisk_black + InvTail(self.sol.varset, "y", INF, {-e: c for e, c in self.Xpoly.items()})


def _arch_factor(exc: ExcursionTail, M: int) -> InvTail:
    """``A = 1/(1 - w sum_{j>=0} c_j T^j)``, so that ``T = w c_{-1} A``."""
    T = exc.tail
    steps = exc.steps
    vs = steps.varset
    aux = T.aux_name
    acc = InvTail(vs, aux, M, {0: steps.weight(steps.d)})
    for j in range(steps.d - 1, -1, -1):
        acc = acc * T + InvTail(vs, aux, M, {0: steps.weight(j)})
    strict0 = acc.shift((1,)).truncate((M,))
    return tail_geometric(strict0)


def build_resolvents(sol: SliceSolution, M: int) -> ResolventBundle:
    if M < 1:
        raise ValueError("tail order must be at least 1")
    vs = sol.varset
    # excursions and arch factors are needed one order beyond M for the cylinder identities
    zw = excursion_tail(white_steps(sol), "x", 2 * M + 2, "white (inverse)")
    zb = excursion_tail(black_steps(sol), "y", 2 * M + 2, "black")
    Wd = {c: {p + 1: disk(sol, c, p) for p in range(M)} for c in ("white", "black")}
    Ww = InvTail(vs, "x", M, Wd["white"])
    Wb = InvTail(vs, "y", M, Wd["black"])
    return ResolventBundle(
        sol=sol, M=M,
        Wdisk_white=Ww, Wdisk_black=Wb,
        Wpt_white=Ww.map_coeffs(lambda s: s.derivative("t")),
        Wpt_black=Wb.map_coeffs(lambda s: s.derivative("t")),
        z_exc_white=zw, z_exc_black=zb,
        arch_white=_arch_factor(zw, 2 * M + 2),
        arch_black=_arch_factor(zb, 2 * M + 2),
        Ypoly={d - 1: sol.tw(d) for d in range(1, sol.bounds.delta_white + 1) if sol.tw(d)},
        Xpoly={d - 1: sol.tb(d) for d in range(1, sol.bounds.delta_black + 1) if sol.tb(d)},
    )


def _cut(tail, degree: int):
    """Drop series terms above total degree ``degree`` in every coefficient."""
    return tail.map_coeffs(lambda s: s.restrict(lambda e: sum(e) <= degree))


def _result(name: str, lhs, rhs, **extra) -> IdentityResult:
    bad = lhs.agrees_with(rhs)
    detail = ", ".join(f"{k}={v}" for k, v in extra.items())
    if bad is None:
        return IdentityResult(name, True, detail)
    key, a, b = bad
    msg = f"first mismatch at {key}: {a} != {b}"
    return IdentityResult(name, False, f"{msg}; {detail}" if detail else msg)


# ---------------------------------------------------------------------------
# pointed disks


def check_pointed_grand(bundle: ResolventBundle) -> List[IdentityResult]:
    """``d/dt W = 1/x - d/dx log A`` for both colors (log of the leading factor drops out)."""
    out = []
    sol, M = bundle.sol, bundle.M
    N = sol.varset.order
    vs = sol.varset
    for color, W, A, aux in (("white", bundle.Wpt_white, bundle.arch_white, "x"),
                             ("black", bundle.Wpt_black, bundle.arch_black, "y")):
        logA = tail_log1p(A.truncate((M - 1,)) - vs.one())
        rhs = InvTail(vs, aux, INF, {1: vs.one()}) - logA.d_aux()
        out.append(_result(f"pointed grand ({color})", _cut(W, N - 1), _cut(rhs, N - 1).truncate((M,))))
        # the excursion itself is w c_{-1} A
        lead = sol.a_(-1) if color == "white" else vs.one()
        exc = (bundle.z_exc_white if color == "white" else bundle.z_exc_black).tail
        out.append(_result(f"excursion factorization ({color})", exc, A.shift((1,)).scale(lead)))
    return out


# ---------------------------------------------------------------------------
# disks


def check_disk_grand(bundle: ResolventBundle) -> List[IdentityResult]:
    sol, M = bundle.sol, bundle.M
    vs = sol.varset
    zt = bundle.z_exc_white.tail.truncate((M,))
    zb = bundle.z_exc_black.tail.truncate((M,))

    def powers(T, n):
        out = [InvTail(vs, T.aux_name, INF, {0: vs.one()})]
        for _ in range(n):
            out.append(out[-1] * T)
        return out

    hmax = max(sol.bounds.delta_white, sol.bounds.delta_black) ** 2 + 1
    ztp, zbp = powers(zt, hmax), powers(zb, hmax)

    rhs_w = zt
    for d in range(2, sol.bounds.delta_white + 1):
        poly = sol.xpow(d - 1)
        for h in range(1, hmax + 1):
            c = poly.coeffs.get(-h)
            if c:
                rhs_w = rhs_w - ztp[h].scale(sol.tw(d) * c)
    rhs_b = zb.scale(sol.a_(-1))
    for d in range(2, sol.bounds.delta_black + 1):
        poly = sol.ypow(d - 1)
        for h in range(1, hmax + 1):
            c = poly.coeffs.get(h)
            if c:
                rhs_b = rhs_b - zbp[h].scale(sol.tb(d) * c)
    return [
        _result("disk grand (white)", bundle.Wdisk_white, rhs_w.truncate((M,))),
        _result("disk grand (black)", bundle.Wdisk_black, rhs_b.truncate((M,))),
    ]


# ---------------------------------------------------------------------------
# cylinders


@dataclass
class FactoredBiLog:
    """``c * m * (1 + u)`` with ``c`` a series, ``m`` a monomial in the inverse variables."""

    c: MSeries
    monomial: Tuple[int, int]
    u: BiTail

    def mixed_log_derivative(self) -> BiTail:
        # only the unit part survives the mixed second derivative
        return tail_log1p(self.u).d_aux(0).d_aux(1)


def divided_difference_factor(A: InvTail, lead: MSeries, M1: int, M2: int,
                              aux: Tuple[str, str]) -> FactoredBiLog:
    """``(T(x2) - T(x1)) / (x1 - x2)`` for ``T = lead * x^-1 * A(x^-1)``."""
    vs = A.varset
    coeffs: Dict[Tuple[int, int], List[MSeries]] = {}
    for m in range(0, M1 + M2 + 1):
        Am = A.coeff(m)
        if not Am:
            continue
        for i in range(0, m + 1):
            j = m - i
            if i <= M1 and j <= M2:
                coeffs.setdefault((i, j), []).append(Am)
    grid = {k: ms_sum(v, vs) for k, v in coeffs.items()}
    grid[(0, 0)] = grid.get((0, 0), vs.zero()) - vs.one()
    return FactoredBiLog(lead, (1, 1), BiTail(vs, aux, (M1, M2), grid))


def _cylinder_grid(sol: SliceSolution, kind: str, M: int, aux: Tuple[str, str]) -> BiTail:
    coeffs = {(p + 1, q + 1): cylinder(sol, kind, p, q) for p in range(1, M + 1) for q in range(1, M + 1)}
    return BiTail(sol.varset, aux, (M + 1, M + 1), coeffs)


def check_cylinder_grand(bundle: ResolventBundle) -> List[IdentityResult]:
    sol, M = bundle.sol, bundle.M
    vs = sol.varset
    out = []
    # white-white and black-black through the factored divided difference
    for kind, A, lead, aux in (("ww", bundle.arch_white, sol.a_(-1), ("x1", "x2")),
                               ("bb", bundle.arch_black, vs.one(), ("y1", "y2"))):
        fac = divided_difference_factor(A, lead, M, M, aux)
        rhs = fac.mixed_log_derivative()
        lhs = _cylinder_grid(sol, kind, M, aux)
        out.append(_result(f"cylinder grand ({kind})", lhs, rhs))
        swapped = BiTail(vs, aux, rhs.orders[::-1], {(j, i): c for (i, j), c in rhs.coeffs.items()})
        out.append(_result(f"cylinder grand symmetry ({kind})", rhs, swapped))
    # white-black: -d2 log(1 - zt(x) zb(y))
    zt = bundle.z_exc_white.tail.truncate((M,))
    zb = bundle.z_exc_black.tail.truncate((M,))
    zx = BiTail(vs, ("x", "y"), (M, INF), {(j, 0): zt.coeff(j) for j in zt.offsets()})
    zy = BiTail(vs, ("x", "y"), (INF, M), {(0, j): zb.coeff(j) for j in zb.offsets()})
    rhs = (-tail_log1p(-(zx * zy))).d_aux(0).d_aux(1)
    lhs = _cylinder_grid(sol, "wb", M, ("x", "y"))
    out.append(_result("cylinder grand (wb)", lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# rational parametrization


def _omega_x(sol: SliceSolution) -> LaurentPoly:
    """``x(z)`` in the variable ``omega = 1/(a_{-1} z)``: all coefficients stay in the ring."""
    vs = sol.varset
    coeffs = {-1: vs.one(), 0: sol.a_(0)}
    for k in range(1, sol.bounds.delta_black):
        coeffs[k] = sol.a_(k) * sol.a_(-1) ** k
    return LaurentPoly(vs, coeffs, "omega")


def check_parametrization(bundle: ResolventBundle) -> List[IdentityResult]:
    sol, M = bundle.sol, bundle.M
    vs = sol.varset
    out = []

    # Y(x(z)) = y(z), expanded in omega (keys are plain powers of omega)
    xo = _omega_x(sol)
    rest = InvTail(vs, "omega", M, {k + 1: c for k, c in xo.coeffs.items() if k >= 0})
    inv_x = tail_geometric(-rest).shift((1,)).truncate((M,))  # 1/x(z) = omega / (1 + ...)
    total = InvTail(vs, "omega", M, {})
    power = InvTail(vs, "omega", INF, {0: vs.one()})
    for n in range(1, M + 1):
        power = (power * inv_x).truncate((M,))
        total = total + power.scale(bundle.Wdisk_white.coeff(n))
    xpow = LaurentPoly(vs, {0: vs.one()}, "omega")
    for e in range(0, sol.bounds.delta_white):
        if e:
            xpow = xpow * xo
        c = bundle.Ypoly.get(e)
        if c:
            total = total + InvTail(vs, "omega", INF, {k: v * c for k, v in xpow.coeffs.items()})
    total = total.truncate((M,))
    # omega^n = a^-n z^-n: compare a^0 L_n with a^n [z^-n] y(z), the smallest clearing for each n
    bad = None
    eps_max = 0
    a = sol.a_(-1)
    for n in range(min(total.offsets() + [-(sol.bounds.delta_white - 1)]), M + 1):
        L = total.coeff(n)
        if n >= 0:
            eps_max = max(eps_max, n)
            lhs, rhs = L, a ** n * sol.b_(-n)
        else:
            lhs, rhs = L * a ** (-n), sol.b_(-n)
        if lhs != rhs and bad is None:
            bad = f"z^{-n}: {lhs} != {rhs}"
    out.append(IdentityResult("parametrization Y(x(z)) = y(z)", bad is None,
                              (bad + "; " if bad else "") + f"clearing exponent={eps_max}, window z^{-M}..z^{sol.bounds.delta_white - 1}"))

    # X(y(z)) = x(z), expanded in z (plain powers; 1/y(z) = z / (1 + b_0 z + ...))
    rest = InvTail(vs, "z", M, {k + 1: sol.b_(k) for k in range(0, sol.bounds.delta_white)})
    inv_y = tail_geometric(-rest).shift((1,)).truncate((M,))
    total = InvTail(vs, "z", M, {})
    power = InvTail(vs, "z", INF, {0: vs.one()})
    for n in range(1, M + 1):
        power = (power * inv_y).truncate((M,))
        total = total + power.scale(bundle.Wdisk_black.coeff(n))
    ypow = LaurentPoly(vs, {0: vs.one()}, "z")
    yz = LaurentPoly(vs, dict(sol.y.coeffs), "z")
    for e in range(0, sol.bounds.delta_black):
        if e:
            ypow = ypow * yz
        c = bundle.Xpoly.get(e)
        if c:
            total = total + InvTail(vs, "z", INF, {k: v * c for k, v in ypow.coeffs.items()})
    # x(z) already stores a_k on the plain power z^-k
    target = InvTail(vs, "z", INF, {e: c for e, c in sol.x.coeffs.items()})
    out.append(_result("parametrization X(y(z)) = x(z)", total.truncate((M,)), target.truncate((M,)),
                       clearing_exponent=0))
    return out


# ---------------------------------------------------------------------------
# resultant


def _det(matrix: List[List[BiTail]], zero: BiTail) -> BiTail:
    """Division-free Laplace expansion along rows, memoized on the remaining columns."""
    n = len(matrix)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: Tuple[int, ...]) -> BiTail:
        if row == n:
            return zero + zero.varset.one()
        acc = zero
        for idx, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry.coeffs:
                continue
            sub = minor(row + 1, cols[:idx] + cols[idx + 1:])
            term = entry * sub
            acc = acc + term if idx % 2 == 0 else acc - term
        return acc

    return minor(0, tuple(range(n)))


def resultant_matrix(sol: SliceSolution) -> List[List[BiTail]]:
    vs = sol.varset
    dw, db = sol.bounds.delta_white, sol.bounds.delta_black
    size = dw + db
    aux = ("x", "y")

    def const(c: MSeries) -> BiTail:
        return BiTail(vs, aux, (INF, INF), {(0, 0): c})

    zero = BiTail(vs, aux, (INF, INF), {})
    x = BiTail(vs, aux, (INF, INF), {(-1, 0): vs.one()})
    y = BiTail(vs, aux, (INF, INF), {(0, -1): vs.one()})
    arow = [const(sol.a_(-1)), const(sol.a_(0)) - x] + [const(sol.a_(k)) for k in range(1, db)]
    brow = [const(sol.b_(k)) for k in range(dw - 1, 0, -1)] + [const(sol.b_(0)) - y, const(vs.one())]
    rows = []
    for i in range(dw):
        rows.append([zero] * i + arow + [zero] * (size - i - len(arow)))
    for i in range(db):
        rows.append([zero] * i + brow + [zero] * (size - i - len(brow)))
    return rows


def resultant(sol: SliceSolution) -> BiTail:
    size = sol.bounds.delta_white + sol.bounds.delta_black
    if size > 8:
        raise ValueError(f"resultant matrix of size {size} exceeds the supported bound 8")
    zero = BiTail(sol.varset, ("x", "y"), (INF, INF), {})
    return _det(resultant_matrix(sol), zero)


def resultant_check(sol: SliceSolution, P_max: int, Q_max: int,
                    bundle: Optional[ResolventBundle] = None, pad: bool = True) -> List[IdentityResult]:
    """``r(x,y) = sign * a^(dw-1) (x - X(y)) (y - Y(x)) (1 + sum F/(x^(p+1) y^(q+1)))``.

    The convention-consistent sign is ``-1``; the literal ``+1`` is reported too.
    Multiplying by ``y - Y(x)`` costs ``dw - 1`` orders in ``1/x`` (and likewise
    in ``1/y``); with ``pad`` the Dobrushin table is built that much deeper so
    the compared window reaches ``x^-P_max y^-Q_max``.
    """
    vs = sol.varset
    dw, db = sol.bounds.delta_white, sol.bounds.delta_black
    if pad:
        P_max, Q_max = P_max + dw - 1, Q_max + db - 1
    M = max(P_max, Q_max) + 2
    if bundle is None or bundle.M < M:
        bundle = build_resolvents(sol, M)
    aux = ("x", "y")
    table = dobrushin_table(sol, P_max, Q_max, "exp")
    G = BiTail(vs, aux, (P_max + 1, Q_max + 1),
               {(p + 1, q + 1): v for (p, q), v in table.values.items()})
    G = G + vs.one()
    Xy = bundle.X
    Yx = bundle.Y
    x_minus_X = BiTail(vs, aux, (INF, Xy.order), {(0, j): -c for j, c in
                                                  ((k[0], v) for k, v in Xy.coeffs.items())})
    x_minus_X = x_minus_X + BiTail(vs, aux, (INF, INF), {(-1, 0): vs.one()})
    y_minus_Y = BiTail(vs, aux, (Yx.order, INF), {(j, 0): -c for j, c in
                                                  ((k[0], v) for k, v in Yx.coeffs.items())})
    y_minus_Y = y_minus_Y + BiTail(vs, aux, (INF, INF), {(0, -1): vs.one()})
    lhs = (G * x_minus_X * y_minus_Y).scale(sol.a_(-1) ** (dw - 1))
    r = resultant(sol)
    window = f"x^-{lhs.orders[0]} y^-{lhs.orders[1]}"
    consistent = _result("resultant identity (sign -1)", r, -lhs, window=window)
    literal = _result("resultant identity (sign +1, as displayed)", r, lhs, window=window)
    literal.informational = True
    return [consistent, literal]


def run_grand_suite(sol: SliceSolution, M: int, P_max: int = 3, Q_max: int = 3,
                    with_resultant: bool = True) -> List[IdentityResult]:
    bundle = build_resolvents(sol, max(M, max(P_max, Q_max) + 2))
    small = build_resolvents(sol, M) if bundle.M != M else bundle
    results = []
    results += check_pointed_grand(small)
    results += check_disk_grand(small)
    results += check_cylinder_grand(small)
    results += check_parametrization(small)
    if with_resultant:
        results += resultant_check(sol, P_max, Q_max, bundle)
    return results
