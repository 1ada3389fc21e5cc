"""Homogeneous transport operators: kernels, complements, exact inversion.

The structural claims (corank one, kernel direction) are checked against an
independent linear-algebra oracle built with sympy: the operator matrix is
assembled from symbolic differentiation, never from the package's own code,
and rank/nullspace come from exact rational elimination.
"""

from fractions import Fraction
import random

import pytest
import sympy as sp

from nilcenter import Coef, Poly
from nilcenter.operators import LinearPartOperator, TransportSolution, \
    solve_shifted, solve_transport, transport, transport_shifted
from nilcenter.series import VARS3, monomials
from helpers import poly_to_sympy


X, Y, Z = sp.symbols("x y z")


def _oracle_matrix(n, lam, shifted=False):
    """Matrix of p -> y p_x - lam z p_z (+ lam p) on degree-n monomials."""
    basis = list(monomials(3, n))
    index = {e: i for i, e in enumerate(basis)}
    M = sp.zeros(len(basis), len(basis))
    for col, (j, k, l) in enumerate(basis):
        mono = X ** j * Y ** k * Z ** l
        img = sp.expand(Y * sp.diff(mono, X) - lam * Z * sp.diff(mono, Z))
        if shifted:
            img = sp.expand(img + lam * mono)
        if img == 0:
            continue
        poly = sp.Poly(img, X, Y, Z)
        for exps, c in poly.terms():
            M[index[exps], col] += c
    return basis, M


@pytest.mark.parametrize("lam", [Fraction(3, 7), Fraction(1)])
@pytest.mark.parametrize("n", range(2, 9))
def test_transport_corank_one_kernel_is_y_power(n, lam):
    basis, M = _oracle_matrix(n, sp.Rational(lam))
    dim = (n + 1) * (n + 2) // 2
    assert len(basis) == dim
    assert M.rank() == dim - 1
    null = M.nullspace()
    assert len(null) == 1
    vec = null[0]
    ker = basis[list(vec).index(next(v for v in vec if v != 0))]
    nonzero = [i for i, v in enumerate(vec) if v != 0]
    assert len(nonzero) == 1
    assert basis[nonzero[0]] == (0, n, 0)
    assert ker == (0, n, 0)
    # x^n is outside the image: appending it as a column raises the rank
    ext = M.row_join(sp.Matrix([1 if e == (n, 0, 0) else 0 for e in basis]))
    assert ext.rank() == dim


@pytest.mark.parametrize("lam", [Fraction(3, 7), Fraction(1)])
@pytest.mark.parametrize("n", range(2, 9))
def test_shifted_corank_one_kernel_and_complement(n, lam):
    basis, M = _oracle_matrix(n, sp.Rational(lam), shifted=True)
    dim = (n + 1) * (n + 2) // 2
    assert M.rank() == dim - 1
    null = M.nullspace()
    assert len(null) == 1
    nonzero = [i for i, v in enumerate(null[0]) if v != 0]
    assert len(nonzero) == 1
    assert basis[nonzero[0]] == (0, n - 1, 1)
    ext = M.row_join(sp.Matrix([1 if e == (n - 1, 0, 1) else 0 for e in basis]))
    assert ext.rank() == dim


@pytest.mark.parametrize("n", range(2, 7))
def test_apply_matches_symbolic_derivation(n):
    lam = Fraction(3, 7)
    op = LinearPartOperator(n, Coef.of(lam))
    ops = LinearPartOperator(n, Coef.of(lam), shifted=True)
    for exps in op.basis():
        mono = Poly.monomial(VARS3, exps, 1)
        want = sp.expand(Y * sp.diff(X ** exps[0] * Y ** exps[1] * Z ** exps[2], X)
                         - sp.Rational(lam) * Z * sp.diff(X ** exps[0] * Y ** exps[1] * Z ** exps[2], Z))
        assert sp.expand(poly_to_sympy(op.apply(mono)) - want) == 0
        assert sp.expand(poly_to_sympy(ops.apply(mono)) - want
                         - sp.Rational(lam) * X ** exps[0] * Y ** exps[1] * Z ** exps[2]) == 0


def test_swapped_exchanges_x_and_y():
    lam = Coef.of(Fraction(2))
    p = Poly.monomial(VARS3, (2, 1, 0), 1)
    plain = LinearPartOperator(3, lam).apply(p)
    swapped = LinearPartOperator(3, lam, swapped=True).apply(p)
    assert plain == Poly.monomial(VARS3, (1, 2, 0), 2)
    assert swapped == Poly.monomial(VARS3, (3, 0, 0), 1)


def _rand_homogeneous(rng, n):
    terms = {}
    for exps in monomials(3, n):
        if rng.random() < 0.6:
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if c:
                terms[exps] = c
    return Poly(VARS3, terms)


def test_solve_transport_certificates_randomized():
    rng = random.Random(101)
    checked = 0
    while checked < 100:
        n = rng.randint(2, 6)
        lam = Fraction(rng.randint(1, 8), rng.randint(1, 5)) * rng.choice([1, -1])
        q = _rand_homogeneous(rng, n)
        sol = solve_transport(q, n, lam)
        assert isinstance(sol, TransportSolution)
        residual = transport(sol.p, lam) + q \
            - Poly.monomial(VARS3, sol.complement, 1).scale(sol.obstruction)
        assert residual.is_zero()
        assert sol.complement == (n, 0, 0)
        assert sol.p.coeff((0, n, 0)).is_zero()  # kernel pin
        checked += 1


def test_solve_shifted_certificates_randomized():
    rng = random.Random(202)
    for _ in range(60):
        n = rng.randint(2, 6)
        lam = Fraction(rng.randint(1, 8), rng.randint(1, 5)) * rng.choice([1, -1])
        q = _rand_homogeneous(rng, n)
        sol = solve_shifted(q, n, lam)
        residual = transport_shifted(sol.p, lam) + q \
            - Poly.monomial(VARS3, sol.complement, 1).scale(sol.obstruction)
        assert residual.is_zero()
        assert sol.complement == (n - 1, 0, 1)
        assert sol.p.coeff((0, n - 1, 1)).is_zero()


def test_solve_transport_symbolic_lambda():
    rng = random.Random(303)
    lam = Coef.param("lam")
    for _ in range(8):
        n = rng.randint(2, 5)
        q = _rand_homogeneous(rng, n)
        sol = solve_transport(q, n, lam)
        residual = transport(sol.p, lam) + q \
            - Poly.monomial(VARS3, sol.complement, 1).scale(sol.obstruction)
        assert residual.is_zero()
        # only lam may appear in the answer
        for c in sol.p.terms.values():
            assert c.params() <= {"lam"}


def test_solve_errors():
    q = Poly(VARS3, {(2, 0, 0): 1, (1, 0, 0): 1})
    with pytest.raises(ValueError):
        solve_transport(q, 2, Fraction(1))
    with pytest.raises(ZeroDivisionError):
        solve_transport(Poly.monomial(VARS3, (2, 0, 0), 1), 2, 0)
    with pytest.raises(ZeroDivisionError):
        solve_shifted(Poly.monomial(VARS3, (2, 0, 0), 1), 2, 0)
    with pytest.raises(ValueError):
        LinearPartOperator(2, Coef.of(1)).apply(Poly.monomial(("x", "y"), (2, 0), 1))
    with pytest.raises(ValueError):
        LinearPartOperator(2, Coef.of(1)).apply(Poly.monomial(VARS3, (3, 0, 0), 1))
