"""Brute-force enumeration of small rooted planar hypermaps.

A hypermap with E edges is stored as two permutations of the edge labels.
Every edge is oriented with its white face on the right, and

    w[e] = next edge along the white face of e (clockwise around that face)
    b[e] = next edge along the black face of e (counterclockwise)

Both successors leave the head of ``e``.  Vertices are the cycles of
``e -> w[b^-1[e]]`` acting on outgoing edges, and the map is planar iff
``V + F_white + F_black = E + 2``.  The root is edge 0.

Counts come from the combinatorics alone; the only things shared with the
formula side are the variable naming and the boundary description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .algebra import MSeries, VarSet
from .walks import IdentityResult

Face = Tuple[str, int]  # ("w", index) or ("b", index)


def _cycles(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = []
        k = s
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = perm[k]
        out.append(tuple(cyc))
    return out


def _inverse(perm: Sequence[int]) -> List[int]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


def _label(cycles: List[Tuple[int, ...]], n: int) -> List[int]:
    lab = [0] * n
    for idx, cyc in enumerate(cycles):
        for e in cyc:
            lab[e] = idx
    return lab


@dataclass(frozen=True)
class Hypermap:
    w: Tuple[int, ...]
    b: Tuple[int, ...]

    @property
    def n_edges(self) -> int:
        return len(self.w)

    @cached_property
    def white_faces(self) -> List[Tuple[int, ...]]:
        return _cycles(self.w)

    @cached_property
    def black_faces(self) -> List[Tuple[int, ...]]:
        return _cycles(self.b)

    @cached_property
    def vertices(self) -> List[Tuple[int, ...]]:
        binv = _inverse(self.b)
        return _cycles([self.w[binv[e]] for e in range(self.n_edges)])

    @cached_property
    def wface(self) -> List[int]:
        return _label(self.white_faces, self.n_edges)

    @cached_property
    def bface(self) -> List[int]:
        return _label(self.black_faces, self.n_edges)

    @cached_property
    def tail(self) -> List[int]:
        return _label(self.vertices, self.n_edges)

    def head(self, e: int) -> int:
        return self.tail[self.w[e]]

    def face_of(self, e: int, color: str) -> Face:
        return ("w", self.wface[e]) if color == "white" else ("b", self.bface[e])

    def face_degree(self, face: Face) -> int:
        kind, i = face
        return len(self.white_faces[i] if kind == "w" else self.black_faces[i])

    def faces(self, color: str) -> List[Face]:
        if color == "white":
            return [("w", i) for i in range(len(self.white_faces))]
        return [("b", i) for i in range(len(self.black_faces))]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices) if self.n_edges else 1

    def is_planar(self) -> bool:
        if not self.n_edges:
            return True
        return len(self.vertices) + len(self.white_faces) + len(self.black_faces) == self.n_edges + 2

    def rotation_system(self) -> Tuple[List[int], List[int]]:
        """``(sigma, alpha)`` on darts ``2e`` (tail end) and ``2e+1`` (head end)."""
        E = self.n_edges
        binv = _inverse(self.b)
        sigma = [0] * (2 * E)
        alpha = [0] * (2 * E)
        for e in range(E):
            sigma[2 * e] = 2 * binv[e] + 1
            sigma[2 * e + 1] = 2 * self.w[e]
            alpha[2 * e], alpha[2 * e + 1] = 2 * e + 1, 2 * e
        return sigma, alpha

    def invariant_violations(self) -> List[str]:
        """Recompute connectivity, Euler and the face coloring from the rotation system."""
        E = self.n_edges
        if E == 0:
            return []
        out = []
        sigma, alpha = self.rotation_system()
        D = 2 * E
        if sorted(sigma) != list(range(D)):
            out.append("sigma is not a permutation")
        if any(alpha[alpha[d]] != d or alpha[d] == d for d in range(D)):
            out.append("alpha is not a fixed-point-free involution")
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for nd in (sigma[d], alpha[d]):
                if nd not in seen:
                    seen.add(nd)
                    stack.append(nd)
        if len(seen) != D:
            out.append("not connected")
        V = len(_cycles(sigma))
        phi = [sigma[alpha[d]] for d in range(D)]
        faces = _cycles(phi)
        if V - E + len(faces) != 2:
            out.append(f"Euler characteristic {V - E + len(faces)} != 2")
        # proper coloring: each face is made of darts of one parity (even = white)
        nw = nb = 0
        for f in faces:
            parities = {d % 2 for d in f}
            if len(parities) != 1:
                out.append("face mixes colors")
            elif 0 in parities:
                nw += 1
            else:
                nb += 1
        if (nw, nb) != (len(self.white_faces), len(self.black_faces)):
            out.append("face colors disagree with the permutations")
        if V != len(self.vertices):
            out.append("vertex count disagrees with the permutations")
        return out


# ---------------------------------------------------------------------------
# generation

LengthRule = Callable[[int, bool], bool]


def _canonical(E: int, white_ok: Optional[LengthRule] = None, black_ok: Optional[LengthRule] = None,
               white_max: Optional[Callable[[bool], int]] = None,
               black_max: Optional[Callable[[bool], int]] = None) -> Iterator[Hypermap]:
    """Rooted connected maps in breadth-first canonical labeling, planar ones only.

    Edge ``i`` is processed in label order; its white then black successor is
    either an already discovered label or the next fresh one.  Each rooted
    class therefore appears exactly once.  The optional rules prune on face
    lengths: ``ok(length, contains_root)`` for closed faces and
    ``max(contains_root)`` for partial ones.
    """
    if E == 0:
        yield Hypermap((), ())
        return
    perms = {"w": [-1] * E, "b": [-1] * E}
    invs = {"w": [-1] * E, "b": [-1] * E}
    rules = {"w": (white_ok, white_max), "b": (black_ok, black_max)}

    def admissible(key: str, i: int, j: int) -> bool:
        ok, mx = rules[key]
        if ok is None and mx is None:
            return True
        p, pinv = perms[key], invs[key]
        length, root, k = 1, i == 0, j
        closed = True
        while k != i:
            length += 1
            root = root or k == 0
            if p[k] == -1:
                closed = False
                break
            k = p[k]
        if closed:
            return ok is None or ok(length, root)
        k = i
        while pinv[k] != -1:
            k = pinv[k]
            length += 1
            root = root or k == 0
        return mx is None or length <= mx(root)

    def choices(key: str, n: int) -> List[int]:
        inv = invs[key]
        out = [j for j in range(n) if inv[j] == -1]
        if n < E:
            out.append(n)
        return out

    def assign(key: str, i: int, j: int) -> None:
        perms[key][i] = j
        invs[key][j] = i

    def clear(key: str, i: int) -> None:
        invs[key][perms[key][i]] = -1
        perms[key][i] = -1

    def rec(i: int, n: int) -> Iterator[Hypermap]:
        if i == E:
            m = Hypermap(tuple(perms["w"]), tuple(perms["b"]))
            if m.is_planar():
                yield m
            return
        if i >= n:
            return
        for j in choices("w", n):
            assign("w", i, j)
            if admissible("w", i, j):
                n1 = n + 1 if j == n else n
                for k in choices("b", n1):
                    assign("b", i, k)
                    if admissible("b", i, k):
                        yield from rec(i + 1, n1 + 1 if k == n1 else n1)
                    clear("b", i)
            clear("w", i)

    yield from rec(0, 1)


def _labeled(E: int) -> Iterator[Hypermap]:
    """Every labeled planar connected pair; each rooted class appears (E-1)! times."""
    if E == 0:
        yield Hypermap((), ())
        return
    for w, b in product(permutations(range(E)), repeat=2):
        m = Hypermap(w, b)
        if m.is_planar() and _transitive(w, b):
            yield m


def _transitive(w, b) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        e = stack.pop()
        for f in (w[e], b[e]):
            if f not in seen:
                seen.add(f)
                stack.append(f)
    return len(seen) == len(w)


@lru_cache(maxsize=None)
def planar_maps(E: int) -> Tuple[Hypermap, ...]:
    return tuple(_canonical(E))


def rooted_counts(E_max: int, route: str = "canonical") -> List[int]:
    out = []
    for E in range(E_max + 1):
        if route == "canonical":
            out.append(len(planar_maps(E)))
        elif route == "labeled":
            n = sum(1 for _ in _labeled(E))
            out.append(n // math.factorial(E - 1) if E else n)
        else:
            raise ValueError(f"unknown generation route {route!r}")
    return out


# ---------------------------------------------------------------------------
# girth


class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, a: int) -> int:
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a: int, b: int) -> None:
        self.p[self.find(a)] = self.find(b)


def _simple_cycles(m: Hypermap) -> Iterator[Tuple[int, ...]]:
    """Simple directed cycles as edge tuples, each once (started at its smallest vertex)."""
    out_edges: Dict[int, List[int]] = {}
    for e in range(m.n_edges):
        out_edges.setdefault(m.tail[e], []).append(e)
    for s in sorted(out_edges):
        path: List[int] = []
        on_path = {s}

        def dfs(v: int) -> Iterator[Tuple[int, ...]]:
            for e in out_edges.get(v, ()):
                u = m.head(e)
                if u == s:
                    yield tuple(path + [e])
                elif u > s and u not in on_path:
                    path.append(e)
                    on_path.add(u)
                    yield from dfs(u)
                    path.pop()
                    on_path.discard(u)

        yield from dfs(s)


def _face_node(m: Hypermap, f: Face) -> int:
    return f[1] if f[0] == "w" else len(m.white_faces) + f[1]


def separating_cycles(m: Hypermap, outer: Face, central: Face) -> Iterator[Tuple[Tuple[int, ...], bool]]:
    """Directed cycles separating the two faces, with a flag for counterclockwise.

    A cycle is counterclockwise when the central face lies on its left, the
    left of every edge being its black side.
    """
    nf = len(m.white_faces) + len(m.black_faces)
    for cyc in _simple_cycles(m):
        on = set(cyc)
        uf = _UF(nf)
        for e in range(m.n_edges):
            if e not in on:
                uf.union(m.wface[e], len(m.white_faces) + m.bface[e])
        a, c = uf.find(_face_node(m, outer)), uf.find(_face_node(m, central))
        if a == c:
            continue
        left = {uf.find(len(m.white_faces) + m.bface[e]) for e in cyc}
        right = {uf.find(m.wface[e]) for e in cyc}
        if len(left) != 1 or len(right) != 1 or left == right:
            raise AssertionError("a simple cycle must have two consistent sides")
        yield cyc, c in left


def oracle_ccw_girth(m: Hypermap, outer: Face, central: Face) -> float:
    best = math.inf
    for cyc, ccw in separating_cycles(m, outer, central):
        if ccw and len(cyc) < best:
            best = len(cyc)
    return best


def adjacent(m: Hypermap, f1: Face, f2: Face) -> bool:
    """Whether the two faces share an edge."""
    for e in range(m.n_edges):
        sides = {("w", m.wface[e]), ("b", m.bface[e])}
        if f1 in sides and f2 in sides:
            return True
    return False


# ---------------------------------------------------------------------------
# weighted counts


@dataclass
class WeightedCount:
    spec: "object"
    count: MSeries
    E_max: int
    maps_seen: int = 0

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "emax": self.E_max, "maps": self.maps_seen,
                "count": self.count.to_json()["terms"]}


def _name(color: str, d: int) -> str:
    return f"tw{d}" if color == "white" else f"tb{d}"


def _inner_weight(m: Hypermap, excluded: Sequence[Face], vs: VarSet) -> Optional[Dict[str, int]]:
    """Exponents of the face weights, or None if some inner face has no weight variable."""
    exps: Dict[str, int] = {}
    for color in ("white", "black"):
        for f in m.faces(color):
            if f in excluded:
                continue
            n = _name(color, m.face_degree(f))
            if n not in vs:
                return None
            exps[n] = exps.get(n, 0) + 1
    return exps


def _contributions(m: Hypermap, spec, vs: VarSet,
                   girth: Optional[int] = None) -> Iterator[Tuple[Dict[str, int], int]]:
    """(face exponents, multiplicity) for each way ``m`` realizes ``spec``; vertex weight separate."""
    kind = spec.kind
    if kind in ("disk", "pointed_disk"):
        (color,), (p,) = spec.colors, spec.degrees
        if m.n_edges == 0:
            if p == 0:
                yield {}, 1
            return
        if p == 0:
            return
        root = m.face_of(0, color)
        if m.face_degree(root) != p:
            return
        exps = _inner_weight(m, [root], vs)
        if exps is not None:
            yield exps, 1
    elif kind in ("cylinder", "one_way_cylinder"):
        (c1, c2), (p, q) = spec.colors, spec.degrees
        if m.n_edges == 0:
            return
        outer = m.face_of(0, c1)
        if m.face_degree(outer) != p:
            return
        for central in m.faces(c2):
            if central == outer or m.face_degree(central) != q:
                continue
            if kind == "one_way_cylinder" and not adjacent(m, outer, central):
                continue
            if girth is not None and oracle_ccw_girth(m, outer, central) != girth:
                continue
            exps = _inner_weight(m, [outer, central], vs)
            if exps is not None:
                yield exps, q
    elif kind == "dobrushin":
        p, q = spec.degrees
        if m.n_edges == 0:
            return
        wf, bf = m.face_of(0, "white"), m.face_of(0, "black")
        if m.face_degree(wf) != p + 1 or m.face_degree(bf) != q + 1:
            return
        exps = _inner_weight(m, [wf, bf], vs)
        if exps is not None:
            yield exps, 1
    else:
        raise ValueError(f"the oracle does not enumerate {kind!r} boundaries")


def _boundary_edges(spec) -> int:
    """Edges contributed by boundary faces with a white side (every edge has exactly one)."""
    if spec.kind == "dobrushin":
        return spec.degrees[0] + 1
    return sum(d for c, d in zip(spec.colors, spec.degrees) if c == "white")


def edge_count(spec, exps: Sequence[int], vs: VarSet) -> int:
    """Number of edges of any map with this monomial: white boundary plus inner white degrees."""
    total = _boundary_edges(spec)
    for name, e in zip(vs.names, exps):
        if name.startswith("tw"):
            total += int(name[2:]) * e
    return total


def enumerate_maps(spec, E_max: int, vs: VarSet, route: str = "canonical",
                   girth: Optional[int] = None,
                   source: Optional[Callable[[int], Sequence[Hypermap]]] = None) -> WeightedCount:
    """Weighted count of rooted planar hypermaps with at most ``E_max`` edges.

    Inner faces whose weight variable is absent from ``vs`` are forbidden,
    so a specialized variable set restricts the face degrees.
    """
    pointed = spec.kind == "pointed_disk"
    acc: Dict[Tuple[int, ...], Fraction] = {}
    seen = 0
    ti = vs.index("t") if "t" in vs else None
    for E in range(E_max + 1):
        if source is not None:
            maps = source(E)
            scale = 1
        elif route == "canonical":
            maps = planar_maps(E)
            scale = 1
        elif route == "labeled":
            maps = list(_labeled(E))
            scale = math.factorial(E - 1) if E else 1
        else:
            raise ValueError(f"unknown generation route {route!r}")
        for m in maps:
            seen += 1
            V = m.n_vertices
            for exps, mult in _contributions(m, spec, vs, girth):
                vec = [0] * vs.nvars
                for n, e in exps.items():
                    vec[vs.index(n)] += e
                if pointed:
                    mult *= V
                    tv = V - 1
                else:
                    tv = V
                if tv:
                    if ti is None:
                        continue
                    vec[ti] += tv
                key = tuple(vec)
                acc[key] = acc.get(key, 0) + Fraction(mult, scale)
    if any(c.denominator != 1 for c in acc.values()):
        raise AssertionError("labeled counts are not divisible by the relabeling factor")
    count = MSeries.from_dict(vs, {k: int(c) for k, c in acc.items() if c})
    return WeightedCount(spec, count, E_max, seen)


def enumerate_spec(spec, E_max: int, bounds, order: Optional[int] = None, **kw) -> WeightedCount:
    """Oracle count with the full weight set of ``bounds`` (order defaults to ``E_max + 1``)."""
    from .slices import slice_varset
    vs = slice_varset(bounds, E_max + 1 if order is None else order)
    return enumerate_maps(spec, E_max, vs, **kw)


def compare(spec, E_max: int, formula_value: MSeries, oracle: WeightedCount,
            name: Optional[str] = None) -> IdentityResult:
    """Equality on every monomial whose maps have at most ``E_max`` edges."""
    vs = formula_value.varset
    count = oracle.count if oracle.count.varset == vs else oracle.count.map_to(vs)
    keep = lambda e: edge_count(spec, e, vs) <= E_max  # noqa: E731
    f = formula_value.restrict(keep)
    o = count.restrict(keep)
    label = name or f"{spec.kind} {spec.colors} {spec.degrees}"
    if f == o:
        return IdentityResult(label, True, f"emax={E_max}, monomials={len(f)}")
    exps, _ = next((f - o).items())
    return IdentityResult(label, False, f"monomial {dict(zip(vs.names, exps))}: "
                                        f"formula {f.coeff(exps)} != oracle {o.coeff(exps)}")


# ---------------------------------------------------------------------------
# quadrangulations


def quadrangulation_closed_form(n: int) -> int:
    return 2 * 3 ** n * math.factorial(2 * n) // (math.factorial(n) * math.factorial(n + 2))


def quadrangulation_maps(n: int) -> Iterator[Hypermap]:
    """Hypermaps with white quadrangles and black digons only (black digons are the edges)."""
    return _canonical(
        4 * n,
        white_ok=lambda length, root: length == 4,
        black_ok=lambda length, root: length == 2,
        white_max=lambda root: 4,
        black_max=lambda root: 2,
    )


def quadrangulation_counts(n_max: int) -> List[int]:
    """Rooted quadrangulations with ``n`` faces, from the white-quadrangle hypermaps."""
    from .gf import BoundarySpec
    vs = VarSet(("t", "tw4", "tb2"), 4 * n_max + 1)
    spec = BoundarySpec("disk", ("white",), (4,))
    out = []
    for n in range(1, n_max + 1):
        maps = tuple(quadrangulation_maps(n))
        wc = enumerate_maps(spec, 4 * n, vs,
                            source=lambda E, maps=maps, n=n: maps if E == 4 * n else ())
        out.append(wc.count.coeff({"t": n + 2, "tw4": n - 1, "tb2": 2 * n}))
    return out
