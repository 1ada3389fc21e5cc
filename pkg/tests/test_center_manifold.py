"""Center manifold jets, exact invariant graphs, planar restrictions.

The closed-form quadratic coefficients asserted here were derived by hand
from the invariance equation (match coefficients of x^2, xy, y^2 in
h_x * y = -lam h + R2) and are frozen as an independent check on cm_jet.
"""

from fractions import Fraction
import random

import pytest

from nilcenter import Coef, Jet, Poly, ValidationError, cm_jet, \
    exact_cm_candidate, hamiltonian_reconstruct, invariance_defect, \
    invariant_surface_check, parse_system, restrict, restrict_exact, \
    reversibility_check, substitute_params
from nilcenter.series import VARS2, VARS3
from helpers import load, rand_system


def c(name):
    return Coef.param(name)


def test_quadratic_jet_closed_form():
    S = load("generic_quadratic")
    h = cm_jet(S, 2)
    lam = c("lam")
    assert h.poly.coeff((2, 0)) == c("c200") / lam
    assert h.poly.coeff((1, 1)) == (lam * c("c110") - c("c200") * 2) / (lam * lam)
    assert h.poly.coeff((0, 2)) == \
        (c("c200") * 2 - lam * c("c110") + c("c020") * lam * lam) / (lam * lam * lam)


def test_cm_jet_trivial_when_no_z_forcing():
    S = load("nonintegrable_center")
    h = cm_jet(S, 8)
    assert h.poly.is_zero()


def test_invariance_defect_random_systems():
    rng = random.Random(41)
    for _ in range(15):
        S = rand_system(rng, deg=3, order=8)
        h = cm_jet(S, 8)
        assert invariance_defect(S, h.poly, 8).is_zero()
        # truncating h one degree down must surface a defect at top order
        # whenever the top-degree slice is nonzero
        top = h.poly.homogeneous_part(8)
        if not top.is_zero():
            d = invariance_defect(S, h.poly.truncate(7), 8)
            assert not d.is_zero()


def test_exact_graph_for_decoupled_family():
    text = ("params b101, b020, b002;\norder 8;\n"
            "dx = y;\n"
            "dy = b101*x*z + b020*y^2 + b002*z^2;\n"
            "dz = -z + x^2 + 2*x*y;\n")
    S = parse_system(text)
    V = exact_cm_candidate(S)
    want = Poly.var(VARS3, "z") - Poly.monomial(VARS3, (2, 0, 0), 1)
    assert V == want
    res = invariant_surface_check(S, want)
    assert res.invariant
    assert res.remainder.is_zero()
    # cofactor certificate: XV = q * V with q = -1 here
    assert res.cofactor == Poly.const(VARS3, -1)


def test_no_exact_graph_for_generic_family():
    S = load("quadratic_family")
    assert exact_cm_candidate(S, 6) is None


def test_invariant_surface_lorenz_algebraic():
    S = substitute_params(load("lorenz_center"), {"a": Fraction(2)})
    x, y, z = (Poly.var(VARS3, v) for v in VARS3)
    V = x * x - (x * y).scale(Fraction(1, 1)) + (y * y).scale(Fraction(1, 4)) \
        - z.scale(4)
    res = invariant_surface_check(S, V)
    assert res.invariant
    fx, fy, fz = S.field_polys()
    XV = V.partial("x") * fx + V.partial("y") * fy + V.partial("z") * fz
    assert res.cofactor * V == XV
    # perturbing the surface breaks invariance
    res2 = invariant_surface_check(S, V + x * x * x)
    assert not res2.invariant
    assert not res2.remainder.is_zero()


def test_invariant_surface_input_validation():
    S = load("trivial_center")
    with pytest.raises(ValidationError):
        invariant_surface_check(S, Poly.zero(VARS3))
    with pytest.raises(ValidationError):
        invariant_surface_check(S, Poly.const(VARS3, 1) + Poly.var(VARS3, "z"))
    with pytest.raises(ValidationError):
        invariant_surface_check(S, Poly.var(VARS2, "x"))


def test_restrict_and_exact_flag():
    S = load("trivial_center")
    h = cm_jet(S, 8)
    Pl = restrict(S, h)
    assert not getattr(Pl, "exact", False)
    Pe = restrict_exact(S, Poly.zero(VARS2))
    assert Pe.exact
    assert Pe.X2.poly.is_zero()
    assert Pe.Y2.poly == Poly.monomial(VARS2, (3, 0), -1)


def test_reversibility_check():
    S = load("nonintegrable_center")
    Pl = restrict(S, cm_jet(S, 8))
    assert reversibility_check(Pl) == ("x",)

    # family restriction with only x^3, y^2, x^4 in dy and dx = y
    sub = substitute_params(load("quadratic_family"),
                            {"b101": Fraction(-1), "b020": Fraction(2),
                             "b011": Fraction(0), "b002": Fraction(1),
                             "c020": Fraction(0)})
    V = exact_cm_candidate(sub)
    assert V is not None
    hz = Poly.monomial(VARS2, (2, 0), 1)
    Pe = restrict_exact(sub, hz)
    assert "y" in reversibility_check(Pe)

    both = PlSys = restrict_exact(load("trivial_center"), Poly.zero(VARS2))
    assert reversibility_check(both) == ("x", "y")

    none = parse_system("order 8;\ndx = y + x^2 + y^2;\n"
                        "dy = -x^3 + x^2*y^2;\ndz = -z;")
    assert reversibility_check(restrict_exact(none, Poly.zero(VARS2))) == ()


def test_hamiltonian_trivial_center():
    Pe = restrict_exact(load("trivial_center"), Poly.zero(VARS2))
    res = hamiltonian_reconstruct(Pe)
    assert res is not None
    want = Poly(VARS2, {(0, 2): Fraction(1, 2), (4, 0): Fraction(1, 4)})
    assert res.H.poly == want
    assert res.H_unit.poly == want.scale(2)
    assert res.factor == Fraction(2)
    assert res.exact


def test_hamiltonian_none_when_divergence_nonzero():
    S = load("nonintegrable_center")
    Pl = restrict(S, cm_jet(S, 8))
    assert hamiltonian_reconstruct(Pl) is None


def test_hamiltonian_lorenz_center():
    S = substitute_params(load("lorenz_center"), {"a": Fraction(1)})
    V = exact_cm_candidate(S)
    assert V is not None
    hz = Poly.var(VARS3, "z") - V  # z = hz(x, y)
    h2 = Poly(VARS2, {e[:2]: c for e, c in hz.terms.items() if e[2] == 0})
    assert h2 == Poly(VARS2, {(2, 0): Fraction(1, 2), (1, 1): -1,
                              (0, 2): Fraction(1, 2)})
    Pe = restrict_exact(S, h2)
    res = hamiltonian_reconstruct(Pe)
    assert res is not None
    want_unit = Poly(VARS2, {
        (0, 2): 1, (4, 0): Fraction(1, 4), (3, 1): -1,
        (2, 2): Fraction(3, 2), (1, 3): -1, (0, 4): Fraction(1, 4)})
    assert res.H_unit.poly == want_unit


def test_hamiltonian_jet_identities_random():
    # any divergence-free planar jet must reconstruct, and the primitive's
    # gradient must reproduce the field through the jet order
    rng = random.Random(97)
    found = 0
    while found < 8:
        q2 = Poly(VARS2, {(k, 0): rng.randint(-4, 4) for k in range(2, 7)})
        Pe = restrict_exact(
            parse_system("order 8;\ndx = y;\ndy = -x^3;\ndz = -z;"),
            Poly.zero(VARS2))
        Pe.Y2 = Jet(q2, 8)
        res = hamiltonian_reconstruct(Pe)
        if q2.is_zero():
            continue
        assert res is not None
        H = res.H.poly
        assert H.partial("y") == Poly.var(VARS2, "y")
        assert H.partial("x") == -q2
        found += 1
