from math import factorial

import pytest

from hyperslice.algebra import VarSet
from hyperslice.gf import BoundarySpec, cylinder, cylinder_terms, disk, dobrushin_table, pointed_disk
from hyperslice.oracle import (
    Hypermap, WeightedCount, adjacent, compare, edge_count, enumerate_maps, enumerate_spec,
    oracle_ccw_girth, planar_maps, quadrangulation_closed_form, quadrangulation_counts, rooted_counts,
    separating_cycles,
)
from hyperslice.slices import DegreeBounds, slice_varset, solve_slice_system
from hyperslice.suites import oracle_structure_suite, oracle_suite

B22 = DegreeBounds(2, 2)


def _count(spec, emax, girth=None):
    return enumerate_spec(spec, emax, B22, girth=girth).count.to_dict()


# brute-force outputs frozen from the enumerator (variables t, tw1, tw2, tb1, tb2)
FROZEN = [
    (BoundarySpec("disk", ("white",), (1,)), 3, None,
     {(1, 0, 0, 1, 0): 1, (1, 0, 1, 1, 1): 1, (1, 1, 0, 0, 1): 1}),
    (BoundarySpec("disk", ("black",), (2,)), 3, None,
     {(1, 1, 1, 1, 0): 2, (1, 2, 0, 0, 0): 1, (2, 0, 1, 0, 0): 1}),
    (BoundarySpec("pointed_disk", ("white",), (1,)), 3, None,
     {(0, 0, 0, 1, 0): 1, (0, 0, 1, 1, 1): 1, (0, 1, 0, 0, 1): 1}),
    (BoundarySpec("dobrushin", ("white", "black"), (1, 1)), 4, None,
     {(1, 0, 1, 2, 0): 1, (1, 1, 0, 1, 0): 1, (1, 2, 0, 0, 1): 1, (2, 0, 0, 0, 0): 1, (2, 0, 1, 0, 1): 1}),
    (BoundarySpec("cylinder", ("white", "white"), (1, 1)), 4, None,
     {(1, 0, 0, 0, 1): 1, (1, 0, 1, 0, 2): 1}),
    (BoundarySpec("cylinder", ("white", "black"), (1, 1)), 3, None,
     {(1, 0, 0, 0, 0): 1, (1, 0, 1, 0, 1): 1}),
    (BoundarySpec("cylinder", ("white", "white"), (1, 2)), 4, 1,
     {(1, 0, 0, 1, 1): 2, (1, 1, 0, 0, 2): 2}),
    (BoundarySpec("cylinder", ("white", "white"), (1, 2)), 4, 2, {}),
]


@pytest.mark.parametrize("spec,emax,girth,expected", FROZEN)
def test_frozen_counts(spec, emax, girth, expected):
    assert _count(spec, emax, girth) == expected


def test_frozen_counts_match_formulas():
    sol = solve_slice_system(B22, 5)
    vs = sol.varset
    for spec, emax, girth, expected in FROZEN:
        k, c, d = spec.kind, spec.colors, spec.degrees
        if k == "disk":
            val = disk(sol, c[0], d[0])
        elif k == "pointed_disk":
            val = pointed_disk(sol, c[0], d[0])
        elif k == "dobrushin":
            val = dobrushin_table(sol, *d)[d]
        else:
            kind = {("white", "white"): "ww", ("white", "black"): "wb"}[c]
            val = cylinder(sol, kind, *d) if girth is None else \
                cylinder_terms(sol, kind, *d).get(girth, vs.zero())
        got = val.restrict(lambda e, s=spec: edge_count(s, e, vs) <= emax).to_dict()
        assert got == expected, spec


def test_single_edge_examples():
    vs = slice_varset(DegreeBounds(1, 1), 2)
    assert enumerate_maps(BoundarySpec("disk", ("white",), (1,)), 1, vs).count.to_dict() == {(1, 0, 1): 1}
    assert enumerate_maps(BoundarySpec("disk", ("white",), (0,)), 1, vs).count.to_dict() == {(1, 0, 0): 1}
    assert enumerate_maps(BoundarySpec("dobrushin", ("white", "black"), (0, 0)), 1, vs).count.to_dict() \
        == {(1, 0, 0): 1}


def test_hypermap_structure():
    loop = Hypermap((0,), (0,))
    assert loop.is_planar() and loop.n_vertices == 1
    two = Hypermap((1, 0), (1, 0))
    assert two.n_vertices == 2 and two.face_degree(two.face_of(0, "white")) == 2
    assert Hypermap((1, 2, 0), (1, 2, 0)).n_vertices == 3
    torus = Hypermap((1, 2, 0), (2, 0, 1))  # one vertex, one face of each color
    assert torus.n_vertices == 1 and not torus.is_planar()


def test_rooted_counts_routes_and_classical_values():
    # rooted bipartite maps with E edges: 3 * 2^(E-1) * (2E)! / (E! (E+2)!)
    classical = [1] + [3 * 2 ** (E - 1) * factorial(2 * E) // (factorial(E) * factorial(E + 2))
                       for E in range(1, 5)]
    assert rooted_counts(4) == classical
    assert rooted_counts(3, "labeled") == classical[:4]


def test_every_map_passes_invariants():
    for E in range(5):
        for m in planar_maps(E):
            assert m.invariant_violations() == []
            sigma, alpha = m.rotation_system()
            assert sorted(sigma) == list(range(2 * E))


def test_girth_examples():
    two = Hypermap((1, 0), (1, 0))
    w, b = two.face_of(0, "white"), two.face_of(0, "black")
    assert oracle_ccw_girth(two, w, b) == 2
    assert adjacent(two, w, b)
    loops = Hypermap((0, 1), (1, 0))
    outer, central = loops.face_of(0, "white"), loops.face_of(1, "white")
    assert oracle_ccw_girth(loops, outer, central) == 1
    assert sorted(separating_cycles(loops, outer, central)) == [((0,), True), ((1,), False)]


def test_adjacent_boundaries_have_only_ccw_cycles():
    for E in range(1, 5):
        for m in planar_maps(E):
            for fw in m.faces("white"):
                for fb in m.faces("black"):
                    if adjacent(m, fw, fb):
                        assert all(ccw for _, ccw in separating_cycles(m, fw, fb))


def test_compare_reports_first_monomial():
    spec = BoundarySpec("disk", ("white",), (1,))
    sol = solve_slice_system(B22, 4)
    wc = enumerate_spec(spec, 3, B22)
    assert compare(spec, 3, disk(sol, "w", 1), wc, "ok").ok
    bad = compare(spec, 3, disk(sol, "w", 1) + sol.t, wc, "bad")
    assert not bad.ok and "formula 1 != oracle 0" in bad.detail
    assert WeightedCount(spec, wc.count, 3).to_json()["emax"] == 3


def test_quadrangulations():
    assert [quadrangulation_closed_form(n) for n in (1, 2, 3)] == [2, 9, 54]
    assert quadrangulation_counts(3) == [2, 9, 54]


def test_quadrangulations_from_disk_formula():
    vs = VarSet(("t", "tw4", "tb2"), 13)
    sol = solve_slice_system(DegreeBounds(4, 2), 13, vs)
    F4 = disk(sol, "white", 4)
    assert [F4.coeff({"t": n + 2, "tw4": n - 1, "tb2": 2 * n}) for n in (1, 2, 3)] == [2, 9, 54]


def test_structure_suite():
    assert all(r.ok for r in oracle_structure_suite(3))


@pytest.mark.parametrize("dw,db", [(1, 2), (2, 1), (2, 2)])
def test_oracle_suite_small(dw, db):
    bad = [r for r in oracle_suite(DegreeBounds(dw, db), E_max=3) if r.failed]
    assert not bad, bad[0]
