"""Exact arithmetic kernel.

Truncated multivariate power series over the rationals (``MSeries``), Laurent
polynomials in one auxiliary variable with series coefficients
(``LaurentPoly``), and truncated series in one or two inverse variables
(``InvTail`` / ``BiTail``).

Series exponents are packed into a single integer: with base ``B = N + 1`` and
``n`` variables the monomial ``prod v_i**e_i`` of total degree ``d`` is stored
under ``d * B**n + sum(e_i * B**i)``.  Because every digit stays below ``B`` in
any product that survives truncation, multiplying monomials is integer
addition and truncation is a single comparison.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]


class StructuralError(ValueError):
    """Objects from incompatible variable sets or shapes were combined."""


class DomainError(ValueError):
    """An operation was applied outside its formal domain."""


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class VarSet:
    names: Tuple[str, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise StructuralError(f"duplicate variable names in {self.names}")
        if self.order < 0:
            raise StructuralError("truncation order must be nonnegative")

    @property
    def base(self) -> int:
        return self.order + 1

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def limit(self) -> int:
        # smallest packed key whose degree exceeds the order
        return (self.order + 1) * self.base ** self.nvars

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def with_order(self, order: int) -> "VarSet":
        return VarSet(self.names, order)

    def pack(self, exps: Sequence[int]) -> Optional[int]:
        if len(exps) != self.nvars:
            raise StructuralError("exponent vector has wrong length")
        deg = sum(exps)
        if any(e < 0 for e in exps):
            raise StructuralError("negative exponent")
        if deg > self.order:
            return None
        B = self.base
        key = deg * B ** self.nvars
        for i, e in enumerate(exps):
            key += e * B ** i
        return key

    def unpack(self, key: int) -> Tuple[int, ...]:
        B = self.base
        out = []
        for _ in range(self.nvars):
            key, r = divmod(key, B)
            out.append(r)
        return tuple(out)

    def degree(self, key: int) -> int:
        return key // self.base ** self.nvars

    def zero(self) -> "MSeries":
        return MSeries(self, {})

    def one(self) -> "MSeries":
        return self.const(1)

    def const(self, c: Number) -> "MSeries":
        c = _norm(c)
        return MSeries(self, {0: c} if c else {})

    def var(self, name: str) -> "MSeries":
        i = self.index(name)
        if self.order < 1:
            return self.zero()
        B = self.base
        return MSeries(self, {B ** self.nvars + B ** i: 1})

    def monomial(self, exps: Mapping[str, int], coeff: Number = 1) -> "MSeries":
        vec = [0] * self.nvars
        for name, e in exps.items():
            vec[self.index(name)] = e
        key = self.pack(vec)
        coeff = _norm(coeff)
        if key is None or not coeff:
            return self.zero()
        return MSeries(self, {key: coeff})


class MSeries:
    """Truncated multivariate power series with exact rational coefficients."""

    __slots__ = ("varset", "terms", "_sorted")

    def __init__(self, varset: VarSet, terms: Dict[int, Number]):
        self.varset = varset
        self.terms = terms
        self._sorted = None

    @classmethod
    def from_dict(cls, varset: VarSet, data: Mapping[Tuple[int, ...], Number]) -> "MSeries":
        terms: Dict[int, Number] = {}
        for exps, c in data.items():
            key = varset.pack(exps)
            if key is None:
                continue
            c = _norm(terms.get(key, 0) + c)
            if c:
                terms[key] = c
            else:
                terms.pop(key, None)
        return cls(varset, terms)

    # -- inspection
    def _check(self, other: "MSeries") -> None:
        if other.varset != self.varset:
            raise StructuralError(f"varset mismatch: {self.varset} vs {other.varset}")

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Number]]:
        unpack = self.varset.unpack
        for key in sorted(self.terms, key=unpack):
            yield unpack(key), self.terms[key]

    def to_dict(self) -> Dict[Tuple[int, ...], Number]:
        return dict(self.items())

    def coeff(self, exps: Union[Sequence[int], Mapping[str, int]]) -> Number:
        if isinstance(exps, Mapping):
            vec = [0] * self.varset.nvars
            for name, e in exps.items():
                vec[self.varset.index(name)] = e
            exps = vec
        key = self.varset.pack(exps)
        return 0 if key is None else self.terms.get(key, 0)

    def constant_term(self) -> Number:
        return self.terms.get(0, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self) -> float:
        if not self.terms:
            return math.inf
        return self.varset.degree(min(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MSeries):
            return self.varset == other.varset and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.varset, frozenset(self.terms.items())))

    # -- arithmetic
    def _coerce(self, other) -> "MSeries":
        if isinstance(other, MSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.varset.const(other)
        raise TypeError(f"cannot combine MSeries with {type(other).__name__}")

    def __add__(self, other) -> "MSeries":
        if not isinstance(other, (MSeries, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = _norm(v)
                else:
                    del out[k]
        return MSeries(self.varset, out)

    __radd__ = __add__

    def __neg__(self) -> "MSeries":
        return MSeries(self.varset, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "MSeries":
        if not isinstance(other, (MSeries, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MSeries":
        return self._coerce(other) - self

    def scale(self, c: Number) -> "MSeries":
        c = _norm(c)
        if not c:
            return self.varset.zero()
        if c == 1:
            return self
        return MSeries(self.varset, {k: _norm(v * c) for k, v in self.terms.items()})

    def __truediv__(self, c) -> "MSeries":
        if not isinstance(c, (int, Fraction)):
            raise DomainError("series division is only defined by nonzero rationals")
        if not c:
            raise ZeroDivisionError("division of a series by zero")
        return self.scale(Fraction(1) / c)

    def _sorted_items(self) -> List[Tuple[int, Number]]:
        if self._sorted is None:
            self._sorted = sorted(self.terms.items())
        return self._sorted

    def __mul__(self, other) -> "MSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MSeries):
            return NotImplemented
        return ms_mul(self, other)

    def __rmul__(self, other) -> "MSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "MSeries":
        if n < 0:
            raise DomainError("negative powers of series are not supported")
        result = self.varset.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self, name: str) -> "MSeries":
        return ms_derivative(self, name)

    def truncate(self, order: int) -> "MSeries":
        """Re-express in the same variables with a smaller truncation order."""
        if order > self.varset.order:
            raise StructuralError("cannot raise the truncation order of a series")
        vs = self.varset.with_order(order)
        return MSeries.from_dict(vs, {e: c for e, c in self.items() if sum(e) <= order})

    def restrict(self, keep) -> "MSeries":
        """Keep the terms whose exponent vector satisfies ``keep``."""
        unpack = self.varset.unpack
        return MSeries(self.varset, {k: c for k, c in self.terms.items() if keep(unpack(k))})

    def substitute(self, values: Mapping[str, "MSeries"]) -> "MSeries":
        """Plug series (with zero constant term) in for some variables."""
        vs = self.varset
        out = vs.zero()
        idx = {vs.index(n): v for n, v in values.items()}
        for exps, c in self.items():
            term = vs.const(c)
            rest = list(exps)
            for i, v in idx.items():
                if rest[i]:
                    term = term * v ** rest[i]
                    rest[i] = 0
            key = vs.pack(rest)
            out = out + ms_mul(term, MSeries(vs, {key: 1}))
        return out

    def map_to(self, target: VarSet, rename: Optional[Mapping[str, str]] = None) -> "MSeries":
        """Re-express in another variable set; variables missing there must not occur."""
        rename = rename or {}
        pos = []
        for name in self.varset.names:
            new = rename.get(name, name)
            pos.append(target.names.index(new) if new in target.names else None)
        data = {}
        for exps, c in self.items():
            vec = [0] * target.nvars
            for i, e in enumerate(exps):
                if e:
                    if pos[i] is None:
                        raise StructuralError(f"variable {self.varset.names[i]!r} absent from target")
                    vec[pos[i]] += e
            data[tuple(vec)] = c
        return MSeries.from_dict(target, data)

    # -- display and serialization
    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.varset.names
        parts = []
        for exps, c in sorted(self.items(), key=lambda it: (sum(it[0]), it[0])):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        terms = []
        for exps, c in self.items():
            c = Fraction(c)
            terms.append({
                "exponents": list(exps),
                "numerator": str(c.numerator),
                "denominator": str(c.denominator),
            })
        return {"variables": list(self.varset.names), "order": self.varset.order, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "MSeries":
        vs = VarSet(tuple(data["variables"]), int(data["order"]))
        return cls.from_dict(vs, {
            tuple(t["exponents"]): Fraction(int(t["numerator"]), int(t["denominator"]))
            for t in data["terms"]
        })


def ms_mul(a: MSeries, b: MSeries) -> MSeries:
    """Truncated product of two series in the same variable set."""
    a._check(b)
    if not a.terms or not b.terms:
        return a.varset.zero()
    if len(a.terms) > len(b.terms):
        a, b = b, a
    limit = a.varset.limit
    bi = b._sorted_items()
    bkeys = [k for k, _ in bi]
    out: Dict[int, Number] = {}
    get = out.get
    for ka, ca in a.terms.items():
        stop = bisect_left(bkeys, limit - ka)
        for kb, cb in bi[:stop]:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return MSeries(a.varset, {k: _norm(c) for k, c in out.items() if c})


def ms_derivative(a: MSeries, name: str) -> MSeries:
    """Formal partial derivative; exact up to degree N-1."""
    vs = a.varset
    i = vs.index(name)
    B = vs.base
    step = B ** vs.nvars + B ** i
    out = {}
    for key, c in a.terms.items():
        e = (key // B ** i) % B
        if e:
            out[key - step] = c * e
    return MSeries(vs, out)


def ms_sum(items: Iterable[MSeries], varset: VarSet) -> MSeries:
    acc: Dict[int, Number] = {}
    for s in items:
        if s.varset != varset:
            raise StructuralError("varset mismatch in sum")
        for k, c in s.terms.items():
            acc[k] = acc.get(k, 0) + c
    return MSeries(varset, {k: _norm(c) for k, c in acc.items() if c})


# ---------------------------------------------------------------------------
# Laurent polynomials in an auxiliary variable


class LaurentPoly:
    """Finite Laurent polynomial ``sum coeffs[e] * aux**e`` with series coefficients."""

    __slots__ = ("varset", "aux_name", "coeffs")

    def __init__(self, varset: VarSet, coeffs: Mapping[int, MSeries], aux_name: str = "z"):
        self.varset = varset
        self.aux_name = aux_name
        self.coeffs = {e: c for e, c in coeffs.items() if c.terms}
        for c in self.coeffs.values():
            if c.varset != varset:
                raise StructuralError("coefficient varset mismatch")

    @property
    def min_exp(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_exp(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.aux_name == other.aux_name and self.coeffs == other.coeffs

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(self.varset, out, self.aux_name)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.varset, {e: -c for e, c in self.coeffs.items()}, self.aux_name)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, MSeries):
            return LaurentPoly(self.varset, {e: c * other for e, c in self.coeffs.items()}, self.aux_name)
        if other.aux_name != self.aux_name:
            raise StructuralError("auxiliary variable mismatch")
        acc: Dict[int, List[MSeries]] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                acc.setdefault(e1 + e2, []).append(c1 * c2)
        return LaurentPoly(self.varset, {e: ms_sum(v, self.varset) for e, v in acc.items()}, self.aux_name)

    def __repr__(self) -> str:
        return " + ".join(f"({c})*{self.aux_name}^{e}" for e, c in sorted(self.coeffs.items())) or "0"


def lp_pow(P: LaurentPoly, p: int) -> LaurentPoly:
    if p < 0:
        raise DomainError("negative power of a Laurent polynomial")
    result = LaurentPoly(P.varset, {0: P.varset.one()}, P.aux_name)
    for _ in range(p):
        result = result * P
    return result


def lp_coeff(P: LaurentPoly, e: int) -> MSeries:
    c = P.coeffs.get(e)
    return c if c is not None else P.varset.zero()


# ---------------------------------------------------------------------------
# Truncated series in inverse variables

Order = Union[int, float]


class GridTail:
    """Series in ``k`` inverse variables; key ``(j1, .., jk)`` means ``prod w_i**(-j_i)``.

    Coefficients are known exactly for keys with ``j_i <= orders[i]`` in
    every coordinate.  Negative offsets (a finite polynomial part) are allowed.
    """

    __slots__ = ("varset", "aux", "orders", "coeffs")

    def __init__(self, varset: VarSet, aux: Tuple[str, ...], orders: Tuple[Order, ...],
                 coeffs: Mapping[Tuple[int, ...], MSeries]):
        if len(aux) != len(orders):
            raise StructuralError("one order per inverse variable")
        self.varset = varset
        self.aux = tuple(aux)
        self.orders = tuple(orders)
        self.coeffs = {
            k: c for k, c in coeffs.items()
            if c.terms and all(j <= m for j, m in zip(k, self.orders))
        }

    def _make(self, orders, coeffs):
        return type(self)._from_grid(self.varset, self.aux, orders, coeffs)

    @classmethod
    def _from_grid(cls, varset, aux, orders, coeffs):
        obj = GridTail.__new__(cls)
        GridTail.__init__(obj, varset, aux, orders, coeffs)
        return obj

    def _compat(self, other: "GridTail") -> None:
        if self.aux != other.aux or self.varset != other.varset:
            raise StructuralError(f"tail mismatch: {self.aux} vs {other.aux}")

    def get(self, key: Tuple[int, ...]) -> MSeries:
        if any(j > m for j, m in zip(key, self.orders)):
            raise DomainError(f"coefficient {key} beyond tail order {self.orders}")
        return self.coeffs.get(key, self.varset.zero())

    def valuations(self) -> Tuple[Order, ...]:
        out = []
        for i, m in enumerate(self.orders):
            if self.coeffs:
                out.append(min(k[i] for k in self.coeffs))
            else:
                out.append(m + 1)
        return tuple(out)

    def truncate(self, orders: Tuple[Order, ...]) -> "GridTail":
        return self._make(tuple(min(a, b) for a, b in zip(self.orders, orders)), self.coeffs)

    def __add__(self, other):
        if isinstance(other, MSeries):
            other = self._make(tuple(math.inf for _ in self.aux), {(0,) * len(self.aux): other})
        self._compat(other)
        orders = tuple(min(a, b) for a, b in zip(self.orders, other.orders))
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return self._make(orders, out)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.orders, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GridTail":
        return self._make(self.orders, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (MSeries, int, Fraction)):
            return self.scale(other)
        self._compat(other)
        va, vb = self.valuations(), other.valuations()
        orders = tuple(
            min(ma + v2, mb + v1)
            for ma, mb, v1, v2 in zip(self.orders, other.orders, va, vb)
        )
        acc: Dict[Tuple[int, ...], List[MSeries]] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if all(j <= m for j, m in zip(k, orders)):
                    acc.setdefault(k, []).append(c1 * c2)
        return self._make(orders, {k: ms_sum(v, self.varset) for k, v in acc.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridTail):
            return NotImplemented
        return (self.aux, self.orders, self.coeffs) == (other.aux, other.orders, other.coeffs)

    def agrees_with(self, other: "GridTail") -> Optional[Tuple[Tuple[int, ...], MSeries, MSeries]]:
        """First key (within the common window) where the two tails differ, or None."""
        self._compat(other)
        orders = tuple(min(a, b) for a, b in zip(self.orders, other.orders))
        keys = sorted(set(self.coeffs) | set(other.coeffs))
        zero = self.varset.zero()
        for k in keys:
            if all(j <= m for j, m in zip(k, orders)):
                a, b = self.coeffs.get(k, zero), other.coeffs.get(k, zero)
                if a != b:
                    return k, a, b
        return None

    def map_coeffs(self, f) -> "GridTail":
        return self._make(self.orders, {k: f(c) for k, c in self.coeffs.items()})

    def d_aux(self, dim: int = 0) -> "GridTail":
        """Derivative with respect to the original (non-inverted) variable ``dim``."""
        out = {}
        for k, c in self.coeffs.items():
            j = k[dim]
            if j:
                nk = list(k)
                nk[dim] = j + 1
                out[tuple(nk)] = c * (-j)
        orders = list(self.orders)
        orders[dim] = orders[dim] + 1
        return self._make(tuple(orders), out)

    def d_power(self, dim: int = 0) -> "GridTail":
        """Derivative when keys are read as plain powers (``w**j``) instead of inverse ones."""
        out = {}
        for k, c in self.coeffs.items():
            j = k[dim]
            if j:
                nk = list(k)
                nk[dim] = j - 1
                out[tuple(nk)] = c * j
        orders = list(self.orders)
        orders[dim] = orders[dim] - 1
        return self._make(tuple(orders), out)

    def shift(self, offsets: Tuple[int, ...]) -> "GridTail":
        """Multiply by ``prod w_i**(-offsets[i])``."""
        out = {tuple(a + b for a, b in zip(k, offsets)): c for k, c in self.coeffs.items()}
        return self._make(tuple(m + o for m, o in zip(self.orders, offsets)), out)

    def _require_small(self, what: str) -> None:
        zero_key = (0,) * len(self.aux)
        if zero_key in self.coeffs:
            raise DomainError(f"{what} needs a zero constant term")
        if any(any(j < 0 for j in k) for k in self.coeffs):
            raise DomainError(f"{what} needs an argument without positive powers")
        if any(math.isinf(m) for m in self.orders) and self.coeffs:
            # exact arguments: still fine as long as the series terminates, but
            # the number of terms is unbounded; force the caller to truncate
            raise DomainError(f"{what} needs finite tail orders")

    def _power_sum(self, weights) -> "GridTail":
        """``sum_k weights(k) * self**k`` for ``k >= 0``, truncated."""
        self._require_small("series composition")
        one = self._make(self.orders, {(0,) * len(self.aux): self.varset.one()})
        total = one.scale(weights(0))
        power = one
        kmax = int(sum(m for m in self.orders if not math.isinf(m))) + 1
        for k in range(1, kmax + 1):
            power = power * self
            if not power.coeffs:
                break
            w = weights(k)
            if w:
                total = total + power.scale(w)
        return total.truncate(self.orders)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.aux}, orders={self.orders}, {len(self.coeffs)} coeffs)"


class InvTail(GridTail):
    """Series in one inverse variable; ``coeff(j)`` is the coefficient of ``aux**(-j)``."""

    def __init__(self, varset: VarSet, aux_name: str, order: Order, coeffs: Mapping[int, MSeries]):
        super().__init__(varset, (aux_name,), (order,), {(j,): c for j, c in coeffs.items()})

    @property
    def aux_name(self) -> str:
        return self.aux[0]

    @property
    def order(self) -> Order:
        return self.orders[0]

    def coeff(self, j: int) -> MSeries:
        return self.get((j,))

    def offsets(self) -> List[int]:
        return sorted(k[0] for k in self.coeffs)


class BiTail(GridTail):
    """Series in two inverse variables with independent tail orders."""

    def __init__(self, varset: VarSet, aux: Tuple[str, str], orders: Tuple[Order, Order],
                 coeffs: Mapping[Tuple[int, int], MSeries]):
        super().__init__(varset, aux, orders, coeffs)

    def coeff(self, i: int, j: int) -> MSeries:
        return self.get((i, j))


def tail_log1p(u: GridTail) -> GridTail:
    """``log(1 + u)`` for ``u`` with zero constant term."""
    return u._power_sum(lambda k: Fraction((-1) ** (k + 1), k) if k else 0)


def tail_exp(u: GridTail) -> GridTail:
    """``exp(u)`` for ``u`` with zero constant term."""
    return u._power_sum(lambda k: Fraction(1, math.factorial(k)))


def tail_geometric(u: GridTail) -> GridTail:
    """``1 / (1 - u)`` for ``u`` with zero constant term."""
    return u._power_sum(lambda k: 1)


def tail_pow(u: GridTail, n: int) -> GridTail:
    if n < 0:
        raise DomainError("negative tail power")
    result = u._make(tuple(math.inf for _ in u.aux), {(0,) * len(u.aux): u.varset.one()})
    for _ in range(n):
        result = result * u
    return result
