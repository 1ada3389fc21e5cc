"""Sparse polynomials and explicit-order jets."""

from fractions import Fraction
import random

import pytest
import sympy as sp

from nilcenter import Coef, Jet, OrderError, Poly, divide_single, \
    implicit_solve, jet_exp, monomials
from nilcenter.series import VARS1, VARS2, VARS3
from helpers import poly_to_sympy, rand_poly, sympy_zero


def test_monomials_graded_lex_descending():
    got = list(monomials(3, 2))
    assert got == [(2, 0, 0), (1, 1, 0), (1, 0, 1),
                   (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    for n in range(1, 9):
        assert len(list(monomials(3, n))) == (n + 1) * (n + 2) // 2


def test_sorted_terms_contract():
    p = Poly(VARS2, {(0, 2): 1, (4, 0): 1, (3, 1): 1, (1, 0): 1})
    assert [e for e, _ in p.sorted_terms()] == [(4, 0), (3, 1), (0, 2), (1, 0)]
    assert p.leading()[0] == (4, 0)


def test_zero_terms_dropped_on_construction():
    p = Poly(VARS2, {(1, 0): 0, (0, 1): Fraction(1, 2)})
    assert (1, 0) not in p.terms
    assert p.coeff((1, 0)).is_zero()
    assert not p.is_zero()


def test_degree_valuation():
    p = Poly(VARS3, {(2, 0, 0): 1, (0, 0, 5): 3})
    assert p.degree() == 5
    assert p.valuation() == 2
    assert Poly.zero(VARS3).degree() == -1
    assert Poly.zero(VARS3).valuation() > 10 ** 6


def test_variable_mismatch_rejected():
    with pytest.raises(ValueError):
        Poly.var(VARS2, "x") + Poly.var(VARS3, "x")


def test_arithmetic_matches_sympy():
    rng = random.Random(7)
    X, Y, Z = sp.symbols("x y z")
    syms = {"x": X, "y": Y, "z": Z}
    for _ in range(30):
        p = rand_poly(rng, VARS3, deg=3, val=0, density=0.4)
        q = rand_poly(rng, VARS3, deg=3, val=0, density=0.4)
        assert sympy_zero(poly_to_sympy(p + q, syms)
                          - (poly_to_sympy(p, syms) + poly_to_sympy(q, syms)))
        assert sympy_zero(poly_to_sympy(p * q, syms)
                          - sp.expand(poly_to_sympy(p, syms) * poly_to_sympy(q, syms)))
        assert sympy_zero(poly_to_sympy(p.partial("y"), syms)
                          - sp.diff(poly_to_sympy(p, syms), Y))
        assert sympy_zero(poly_to_sympy(p ** 2, syms)
                          - sp.expand(poly_to_sympy(p, syms) ** 2))


def test_compose_matches_sympy():
    rng = random.Random(19)
    X, Y = sp.symbols("x y")
    for _ in range(15):
        p = rand_poly(rng, VARS2, deg=3, val=0, density=0.6)
        u = rand_poly(rng, VARS2, deg=2, val=1, density=0.8)
        got = p.compose({"x": u}, VARS2)
        want = poly_to_sympy(p).subs(X, poly_to_sympy(u), simultaneous=True)
        assert sympy_zero(poly_to_sympy(got) - sp.expand(want))


def test_compose_reinterprets_unmapped_vars():
    p = Poly(VARS2, {(1, 1): 1})
    q = p.compose({}, VARS3)  # same names, wider tuple
    assert q.vars == VARS3
    assert q.coeff((1, 1, 0)).as_fraction() == 1


def test_truncate_and_homogeneous_parts():
    rng = random.Random(3)
    p = rand_poly(rng, VARS3, deg=6, val=0, density=0.5)
    acc = Poly.zero(VARS3)
    for d in range(0, 5):
        acc = acc + p.homogeneous_part(d)
    assert acc == p.truncate(4)
    assert p.homogeneous_part(2).valuation() in (2, 10 ** 9)


def test_mul_trunc_equals_truncated_product():
    rng = random.Random(5)
    for _ in range(10):
        p = rand_poly(rng, VARS2, deg=5, val=1)
        q = rand_poly(rng, VARS2, deg=5, val=1)
        assert p.mul_trunc(q, 6) == (p * q).truncate(6)
        assert p.mul_trunc(q, None) == p * q


def test_scale_and_subs_params():
    a = Coef.param("a")
    p = Poly(VARS2, {(1, 0): a, (0, 1): 2})
    assert p.scale(a).coeff((1, 0)) == a * a
    q = p.subs_params({"a": Fraction(1, 2)})
    assert q.coeff((1, 0)).as_fraction() == Fraction(1, 2)


# ---------------------------------------------------------------------------
# jets


def test_jet_order_is_min_under_arithmetic():
    a = Jet(Poly.var(VARS2, "x"), 5)
    b = Jet(Poly.var(VARS2, "y"), 3)
    assert (a + b).order == 3
    assert (a * b).order == 3
    assert a.truncate(2).order == 2


def test_jet_of_truncates():
    p = Poly(VARS1, {(1,): 1, (7,): 1})
    j = Jet.of(p, 4)
    assert j.order == 4
    assert j.poly.coeff((7,)).is_zero()
    assert not j.poly.coeff((1,)).is_zero()


def test_jet_compose_requires_positive_valuation():
    f = Jet(Poly.var(VARS2, "x") + Poly.const(VARS2, 0), 5)
    bad = Jet(Poly.const(VARS2, 1), 5)
    with pytest.raises(OrderError):
        f.compose({"x": bad})


def test_jet_compose_matches_sympy():
    X, Y = sp.symbols("x y")
    p = Jet(Poly(VARS2, {(2, 0): 1, (1, 1): 2, (0, 3): -1}), 6)
    u = Jet(Poly(VARS2, {(1, 0): 1, (2, 0): Fraction(1, 2)}), 6)
    got = p.compose({"x": u})
    want = sp.expand(poly_to_sympy(p.poly).subs(X, poly_to_sympy(u.poly)))
    want = want + sp.O(X ** 7, X, Y).removeO()  # no-op, keep exact
    diff = sp.expand(poly_to_sympy(got.poly) - want)
    # compare only through the jet order
    for mono in sp.Poly(diff, X, Y).terms() if diff != 0 else []:
        assert sum(mono[0]) > got.order


def test_jet_exp_matches_sympy_series():
    X = sp.Symbol("x")
    j = Jet(Poly(VARS1, {(1,): 1, (2,): -2}), 8)
    got = jet_exp(j)
    want = sp.series(sp.exp(X - 2 * X ** 2), X, 0, 9).removeO()
    assert sympy_zero(poly_to_sympy(got.poly) - sp.expand(want))
    with pytest.raises(OrderError):
        jet_exp(Jet(Poly.const(VARS1, 1), 4))


# ---------------------------------------------------------------------------
# implicit solve and single-divisor division


def test_implicit_solve_back_substitution():
    rng = random.Random(13)
    y = Poly.var(VARS2, "y")
    for _ in range(12):
        X2 = rand_poly(rng, VARS2, deg=4, val=2, density=0.7)
        G = Jet(y + X2, 8)
        F = implicit_solve(G, "y")
        assert F.valuation() >= 2 or F.is_zero()
        # G(x, F(x)) must vanish through the jet order
        res = G.compose({"y": Jet(F.poly.compose({}, VARS2), F.order)})
        assert res.is_zero()


def test_implicit_solve_known_case():
    y = Poly.var(VARS2, "y")
    x2 = Poly.monomial(VARS2, (2, 0), 1)
    F = implicit_solve(Jet(y + x2, 6), "y")
    assert F.poly.vars == VARS1
    assert F.poly == Poly.monomial(VARS1, (2,), -1)


def test_divide_single_certificate():
    rng = random.Random(29)
    for _ in range(15):
        f = rand_poly(rng, VARS3, deg=5, val=0, density=0.4)
        v = rand_poly(rng, VARS3, deg=2, val=1, density=0.8)
        if v.is_zero():
            continue
        q, r = divide_single(f, v)
        assert q * v + r == f
        lead = v.leading()[0]
        for e in r.terms:
            assert not all(e[i] >= lead[i] for i in range(3))


def test_divide_single_exact_multiple():
    v = Poly.var(VARS3, "z") - Poly.monomial(VARS3, (2, 0, 0), 1)
    f = v * Poly(VARS3, {(1, 0, 0): 2, (0, 0, 1): 1})
    q, r = divide_single(f, v)
    assert r.is_zero()
    assert q * v == f
