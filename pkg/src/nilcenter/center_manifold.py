"""Center-manifold jets, restrictions, and exactness/symmetry certificates.

The local center manifold of x' = y + P, y' = Q, z' = -lambda z + R is a
graph z = h(x, y) with h vanishing to second order, determined order by
order from the invariance identity

    h_x (y + P(x,y,h)) + h_y Q(x,y,h) + lambda h - R(x,y,h) = 0.

At degree k the unknown part satisfies y p_x + lambda p = rhs, which is
triangular in the y-exponent, so each order costs one sweep and divides by
lambda only.  The defect of the computed jet is rechecked after
construction, always.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rational import Coef
from .series import Jet, OrderError, Poly, VARS2, VARS3, divide_single
from .sysio import PlanarSystem, SideConditionSet, SystemModel, ValidationError

__all__ = [
    "cm_jet", "restrict", "restrict_exact",
    "invariant_surface_check", "InvariantSurfaceResult", "exact_cm_candidate",
    "reversibility_check", "hamiltonian_reconstruct", "HamiltonianResult",
]


def _subst_z(p: Poly, h: Poly, order: int) -> Poly:
    """p(x, y, h(x,y)) truncated at `order`.

    Exact through `order` provided every discarded term of h has degree
    > order and h has valuation >= 1: errors enter multiplied by dp/dz,
    which has valuation >= 1 here (p has valuation >= 2).
    """
    return p.truncate(order).compose({"z": h}, VARS2, order=order).truncate(order)


def _solve_degree(rhs: Poly, k: int, lam: Coef) -> Poly:
    """Solve y p_x + lambda p = rhs on homogeneous degree-k 2-var polys."""
    p: dict = {}
    for i in range(0, k + 1):  # y-exponent ascending
        j = k - i
        v = rhs.coeff((j, i))
        if i > 0:
            prev = p.get((j + 1, i - 1))
            if prev is not None:
                v = v - prev * (j + 1)
        v = v / lam
        if not v.is_zero():
            p[(j, i)] = v
    return Poly(VARS2, p)


def invariance_defect(S: SystemModel, h: Poly, order: int) -> Poly:
    """Left side of the invariance identity, truncated at `order`."""
    Pc = _subst_z(S.P, h, order)
    Qc = _subst_z(S.Q, h, order)
    Rc = _subst_z(S.R, h, order)
    y = Poly.var(VARS2, "y")
    E = h.partial("x").mul_trunc(y + Pc, order) \
        + h.partial("y").mul_trunc(Qc, order) \
        + h.scale(S.lam) - Rc
    return E.truncate(order)


def cm_jet(S: SystemModel, order: int | None = None) -> Jet:
    """Jet of the center-manifold graph z = h(x, y) to the given order."""
    m = order if order is not None else S.order
    if m < 2:
        raise OrderError("center-manifold jet order must be >= 2")
    h = Poly.zero(VARS2)
    for k in range(2, m + 1):
        G = invariance_defect(S, h, k).homogeneous_part(k)
        h = h + _solve_degree(-G, k, S.lam)
    defect = invariance_defect(S, h, m)
    if not defect.is_zero():
        raise AssertionError(f"center-manifold defect is nonzero: {defect}")
    return Jet(h, m)


def restrict(S: SystemModel, h: Jet) -> PlanarSystem:
    """Planar restriction x' = y + X2, y' = Y2 on z = h(x, y)."""
    if h.vars != VARS2:
        raise ValidationError("h must be a jet in x, y")
    m = h.order
    X2 = Jet(_subst_z(S.P, h.poly, m), m)
    Y2 = Jet(_subst_z(S.Q, h.poly, m), m)
    return PlanarSystem(X2, Y2, S.conditions.copy(), S.assumptions.copy())


def restrict_exact(S: SystemModel, h: Poly) -> PlanarSystem:
    """Restriction to an exact polynomial invariant graph, no truncation.

    Only meaningful when z = h(x,y) has been certified invariant; the
    result is an exact polynomial planar system, marked `exact`.
    """
    X2 = S.P.compose({"z": h}, VARS2)
    Y2 = S.Q.compose({"z": h}, VARS2)
    m = max(X2.degree(), Y2.degree(), 2)
    out = PlanarSystem(Jet(X2, m), Jet(Y2, m), S.conditions.copy(),
                       S.assumptions.copy())
    out.exact = True
    return out


@dataclass
class InvariantSurfaceResult:
    invariant: bool
    cofactor: Poly | None   # q with XV = q V when invariant
    remainder: Poly         # division witness; zero iff invariant


def invariant_surface_check(S: SystemModel, V: Poly) -> InvariantSurfaceResult:
    """Decide whether V = 0 is invariant for the full polynomial field.

    Computes the derivative of V along the field exactly, reduces by V
    (graded lex, single divisor), and re-multiplies the quotient as a
    certificate.  Sound because a single-divisor remainder vanishes iff V
    divides the derivative.
    """
    if V.vars != VARS3:
        raise ValidationError("V must be a polynomial in x, y, z")
    if V.is_zero():
        raise ValidationError("V must be nonzero")
    if not V.coeff((0, 0, 0)).is_zero():
        raise ValidationError("V must vanish at the origin")
    fx, fy, fz = S.field_polys()
    XV = V.partial("x") * fx + V.partial("y") * fy + V.partial("z") * fz
    q, r = divide_single(XV, V)
    if r.is_zero():
        if not (q * V == XV):
            raise AssertionError("division certificate failed to re-multiply")
        return InvariantSurfaceResult(True, q, r)
    return InvariantSurfaceResult(False, None, r)


def exact_cm_candidate(S: SystemModel, order: int | None = None) -> Poly | None:
    """z - h with h the cm jet, if that polynomial surface is exactly invariant."""
    h = cm_jet(S, order)
    hz = h.poly.compose({}, VARS3)  # reinterpret h(x, y) in x, y, z
    V = Poly.var(VARS3, "z") - hz
    res = invariant_surface_check(S, V)
    return V if res.invariant else None


def _parity_ok(p: Poly, var: str, want_even: bool) -> bool:
    i = p.vars.index(var)
    for e, c in p.terms.items():
        if (e[i] % 2 == 0) != want_even and not c.is_zero():
            return False
    return True


def reversibility_check(Pl: PlanarSystem) -> tuple:
    """Time-reversal symmetries of the planar jet among x- and y-reflection.

    "x" means (x, t) -> (-x, -t) is a symmetry: X2 even in x, Y2 odd in x.
    "y" means (y, t) -> (-y, -t):              X2 odd in y,  Y2 even in y.
    Decided on all stored coefficients (exact for exact restrictions).
    """
    out = []
    if _parity_ok(Pl.X2.poly, "x", True) and _parity_ok(Pl.Y2.poly, "x", False):
        out.append("x")
    if _parity_ok(Pl.X2.poly, "y", False) and _parity_ok(Pl.Y2.poly, "y", True):
        out.append("y")
    return tuple(out)


@dataclass
class HamiltonianResult:
    H: Jet            # primitive with H_y = y + X2, H_x = -Y2 (j2 = y^2/2)
    H_unit: Jet       # rescaled representative with j2 = y^2
    factor: Fraction  # H_unit = factor * H


def hamiltonian_reconstruct(Pl: PlanarSystem) -> HamiltonianResult | None:
    """Reconstruct H with x' = H_y, y' = -H_x when the divergence vanishes.

    Uses the homogeneous primitive H_{d+1} = (x A_d + y B_d)/(d + 1) of the
    closed form A dx + B dy, A = -Y2, B = y + X2; both defining identities
    are re-checked exactly on the jet before returning.
    """
    div = Pl.divergence()
    if not div.is_zero():
        return None
    m = Pl.order
    A = -Pl.Y2.poly
    B = Poly.var(VARS2, "y") + Pl.X2.poly
    H = Poly.zero(VARS2)
    x = Poly.var(VARS2, "x")
    y = Poly.var(VARS2, "y")
    for d, Ad in A.by_degree().items():
        H = H + (x * Ad).scale(Fraction(1, d + 1))
    for d, Bd in B.by_degree().items():
        H = H + (y * Bd).scale(Fraction(1, d + 1))
    exact = getattr(Pl, "exact", False)
    if exact:
        HJ = Jet(H, max(H.degree(), 2))
        okx = H.partial("x") == -Pl.Y2.poly
        oky = H.partial("y") == Pl.X2.poly + y
    else:
        HJ = Jet(H.truncate(m + 1), m + 1)
        okx = (H.partial("x") - (-Pl.Y2.poly)).truncate(m) .is_zero()
        oky = (H.partial("y") - (Pl.X2.poly + y)).truncate(m).is_zero()
    if not (okx and oky):
        raise AssertionError("Hamiltonian reconstruction failed its defining identities")
    unit = Jet(HJ.poly.scale(2), HJ.order)
    res = HamiltonianResult(HJ, unit, Fraction(2))
    res.exact = exact
    return res
