from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperslice.algebra import (
    BiTail, DomainError, InvTail, LaurentPoly, MSeries, StructuralError, VarSet,
    lp_coeff, lp_pow, ms_derivative, ms_mul, tail_exp, tail_geometric, tail_log1p,
)

VS = VarSet(("t", "u", "v"), 5)


def series(vs=VS, max_terms=5, const=True):
    exps = st.tuples(*[st.integers(0, 3)] * vs.nvars).filter(
        lambda e: sum(e) <= vs.order and (const or sum(e) > 0))
    coeffs = st.one_of(st.integers(-4, 4), st.builds(Fraction, st.integers(-4, 4), st.integers(1, 4)))
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: MSeries.from_dict(vs, d))


def test_varset_rejects_duplicates_and_negative_order():
    with pytest.raises(StructuralError):
        VarSet(("t", "t"), 2)
    with pytest.raises(StructuralError):
        VarSet(("t",), -1)


def test_pack_roundtrip_and_degree():
    vs = VarSet(("a", "b", "c"), 4)
    key = vs.pack((1, 0, 2))
    assert vs.unpack(key) == (1, 0, 2)
    assert vs.degree(key) == 3
    assert vs.pack((3, 1, 1)) is None


def test_mul_examples():
    for N, expected in ((2, {(2,): 1}), (1, {})):
        vs = VarSet(("t",), N)
        t = vs.var("t")
        assert ms_mul(t, t).to_dict() == expected
    vs = VarSet(("t",), 3)
    t = vs.var("t")
    assert (1 + t) * (1 - t) == 1 - t * t


def test_mul_varset_mismatch():
    with pytest.raises(StructuralError):
        ms_mul(VarSet(("t",), 2).var("t"), VarSet(("s",), 2).var("s"))


def test_derivative_examples():
    vs = VarSet(("t", "tw1", "tw2", "tb2"), 4)
    t, tw1, tw2, tb2 = (vs.var(n) for n in vs.names)
    assert ms_derivative(t * t, "t") == t * 2
    assert ms_derivative(tw1, "t").is_zero()
    assert ms_derivative(t * tw2 * tb2, "tw2") == t * tb2
    with pytest.raises(StructuralError):
        ms_derivative(t, "nope")


def test_truncation_invariants():
    vs = VarSet(("t",), 2)
    s = MSeries.from_dict(vs, {(1,): 3, (2,): 0, (3,): 7})
    assert s.to_dict() == {(1,): 3}
    assert s.truncate(1).varset.order == 1
    with pytest.raises(StructuralError):
        s.truncate(3)


def test_division_only_by_rationals():
    t = VS.var("t")
    assert (t * 3) / 3 == t
    with pytest.raises(DomainError):
        t / t
    with pytest.raises(ZeroDivisionError):
        t / 0


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(series(), series())
def test_leibniz(a, b):
    N = VS.order
    lhs = ms_derivative(a * b, "u").restrict(lambda e: sum(e) <= N - 1)
    rhs = (ms_derivative(a, "u") * b + a * ms_derivative(b, "u")).restrict(lambda e: sum(e) <= N - 1)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(series())
def test_json_roundtrip(a):
    assert MSeries.from_json(a.to_json()) == a
    terms = a.to_json()["terms"]
    assert [t["exponents"] for t in terms] == sorted(t["exponents"] for t in terms)


def _brute_pow_coeff(P: dict, p: int, e: int, vs: VarSet):
    # all p-tuples of exponents from the support
    from itertools import product
    acc = vs.zero()
    for combo in product(sorted(P), repeat=p):
        if sum(combo) == e:
            term = vs.one()
            for k in combo:
                term = term * P[k]
            acc = acc + term
    return acc


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(-2, 2), series(max_terms=3, const=False), min_size=1, max_size=3),
       st.integers(0, 4), st.integers(-6, 6))
def test_lp_pow_against_convolution(coeffs, p, e):
    P = LaurentPoly(VS, coeffs)
    coeffs = {k: v for k, v in coeffs.items() if v}
    expected = (VS.one() if e == 0 else VS.zero()) if p == 0 else _brute_pow_coeff(coeffs, p, e, VS)
    assert lp_coeff(lp_pow(P, p), e) == expected


def test_lp_pow_examples():
    vs = VarSet(("a-1", "a0", "a1"), 4)
    am, a0, a1 = (vs.var(n) for n in vs.names)
    x = LaurentPoly(vs, {1: am, 0: a0, -1: a1})
    assert lp_pow(x, 0) == LaurentPoly(vs, {0: vs.one()})
    assert lp_pow(x, 1) == x
    assert lp_coeff(lp_pow(x, 2), 1) == am * a0 * 2
    assert lp_coeff(x, 1) == am
    assert lp_coeff(x, 5).is_zero()


def _tail(coeffs, M, aux="x"):
    return InvTail(VS, aux, M, coeffs)


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(1, 4), series(max_terms=3), max_size=3), st.integers(1, 6))
def test_exp_log_roundtrip(coeffs, M):
    u = _tail(coeffs, M)
    assert tail_exp(tail_log1p(u)).agrees_with(u + VS.one()) is None
    assert tail_log1p(tail_exp(u) - VS.one()).agrees_with(u) is None


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(1, 4), series(max_terms=3), max_size=3), st.integers(1, 6))
def test_geometric_inverts(coeffs, M):
    u = _tail(coeffs, M)
    one = _tail({0: VS.one()}, M)
    assert (tail_geometric(u) * (one - u)).agrees_with(one) is None


@settings(max_examples=30, deadline=None)
@given(*[st.dictionaries(st.integers(0, 4), series(max_terms=2), max_size=3)] * 3, st.integers(1, 6))
def test_tail_mul_associative(a, b, c, M):
    A, B, C = _tail(a, M), _tail(b, M), _tail(c, M)
    assert ((A * B) * C).agrees_with(A * (B * C)) is None


def test_log_exp_of_zero():
    z = _tail({}, 4)
    assert tail_log1p(z).coeffs == {}
    assert tail_exp(z).coeff(0) == 1


def test_log_needs_zero_constant():
    with pytest.raises(DomainError):
        tail_log1p(_tail({0: VS.one()}, 3))
    with pytest.raises(DomainError):
        tail_exp(_tail({-1: VS.one()}, 3))


def test_tail_get_beyond_order():
    with pytest.raises(DomainError):
        _tail({1: VS.one()}, 2).coeff(3)


def test_product_precision_rule():
    # (x^-1 + O(x^-4)) * (1 + O(x^-2)) is known up to x^-3
    a = _tail({1: VS.one()}, 3)
    b = _tail({0: VS.one()}, 2)
    assert (a * b).order == 3
    c = _tail({0: VS.one(), 1: VS.one()}, 2)
    assert (a * c).order == 3
    d = _tail({2: VS.one()}, 5)
    assert (b * d).order == 4


def test_d_aux_matches_power_rule():
    # d/dx x^-2 = -2 x^-3
    u = _tail({2: VS.one()}, 5)
    assert u.d_aux().coeff(3) == -2


def test_bitail_independent_orders():
    b = BiTail(VS, ("x", "y"), (2, 5), {(1, 4): VS.one(), (3, 1): VS.one()})
    assert (3, 1) not in b.coeffs
    assert b.coeff(1, 4) == 1
    with pytest.raises(DomainError):
        b.coeff(3, 0)


def test_bitail_log_exp_roundtrip():
    t = VS.var("t")
    u = BiTail(VS, ("x", "y"), (3, 3), {(1, 1): t, (2, 0): VS.var("u"), (0, 3): Fraction(1, 2) * t})
    assert tail_exp(tail_log1p(u)).agrees_with(u + VS.one()) is None
