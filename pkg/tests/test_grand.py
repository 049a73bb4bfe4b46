import pytest

from hyperslice.algebra import BiTail, InvTail
from hyperslice.grand import (
    FactoredBiLog, build_resolvents, check_cylinder_grand, check_disk_grand, check_parametrization,
    check_pointed_grand, divided_difference_factor, resultant, resultant_check, resultant_matrix,
    run_grand_suite,
)
from hyperslice.slices import DegreeBounds, solve_slice_system

SOL = solve_slice_system(DegreeBounds(2, 2), 4)
BUNDLE = build_resolvents(SOL, 6)


def _ok(results):
    bad = [r for r in results if r.failed]
    assert results and not bad, bad[0]


def test_bundle_basics():
    assert BUNDLE.Wdisk_white.coeff(1) == SOL.t
    assert BUNDLE.z_exc_black.tail.coeff(1) == 1
    vs = SOL.varset
    assert BUNDLE.Ypoly == {0: vs.var("tw1"), 1: vs.var("tw2")}
    with pytest.raises(ValueError):
        build_resolvents(SOL, 0)


@pytest.mark.parametrize("check", [check_pointed_grand, check_disk_grand, check_cylinder_grand,
                                   check_parametrization])
def test_grand_identities_delta2(check):
    _ok(check(BUNDLE))


@pytest.mark.parametrize("dw,db", [(1, 1), (1, 2), (2, 1)])
def test_grand_identities_small_bounds(dw, db):
    sol = solve_slice_system(DegreeBounds(dw, db), 4)
    _ok(run_grand_suite(sol, 6))


def test_grand_at_order_zero():
    sol = solve_slice_system(DegreeBounds(2, 2), 0)
    _ok(run_grand_suite(sol, 3, with_resultant=False))


def test_parametrization_reports_clearing_exponent():
    res = check_parametrization(BUNDLE)
    assert any("clearing" in r.detail for r in res)


def test_divided_difference_is_symmetric():
    fac = divided_difference_factor(BUNDLE.arch_white, SOL.a_(-1), 4, 4, ("x1", "x2"))
    assert isinstance(fac, FactoredBiLog)
    for (i, j), c in fac.u.coeffs.items():
        assert fac.u.coeff(j, i) == c


def test_mixed_log_derivative_of_product_vanishes():
    # log(1+f(x1)) + log(1+g(x2)) has no mixed term
    vs = SOL.varset
    t = vs.var("t")
    u = BiTail(vs, ("x1", "x2"), (4, 4), {(1, 0): t, (0, 2): t, (1, 2): t * t})
    D = FactoredBiLog(vs.one(), (0, 0), u).mixed_log_derivative()
    assert all(not c for c in D.coeffs.values())


def test_resultant_sign():
    consistent, literal = resultant_check(SOL, 3, 3, BUNDLE)
    assert consistent.ok
    assert literal.informational and not literal.ok and not literal.failed


def test_resultant_smallest_case():
    sol = solve_slice_system(DegreeBounds(1, 1), 4)
    assert len(resultant_matrix(sol)) == 2
    assert resultant_check(sol, 2, 2)[0].ok


def test_resultant_guard():
    sol = solve_slice_system(DegreeBounds(5, 4), 0)
    with pytest.raises(ValueError):
        resultant(sol)
