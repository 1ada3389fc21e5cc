"""Orbital-style normal form under the nilpotent-plus-hyperbolic frame.

Degree by degree, a near-identity change u -> u + phi(u) removes everything
from the field except the resonant directions

    x-dot: a x^k        y-dot: a x^{k-1} y + b x^k        z-dot: c x^{k-1} z,

so the end state is

    x' = y + x P1(x),   y' = Q2(x) + y P1(x),   z' = -lambda z + z R1(x).

The homological operator of the linear part acts as
(phi1, phi2, phi3) -> (T phi1 - phi2, T phi2, L phi3) with T the transport
derivation and L its shift; the coupled first two components reduce to
T^2 phi1 = G where G has no x^k or x^{k-1}y component.  Each degree's
removal is certified by re-applying the operator exactly, and the final
conjugacy identity dT(u) N(u) = V(T(u)) is rechecked through the working
order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .operators import solve_shifted, solve_transport, transport, transport_shifted
from .rational import Coef
from .series import Jet, Poly, VARS1, VARS3
from .sysio import SideConditionSet, SystemModel, ValidationError

__all__ = ["NormalFormResult", "normal_form", "conjugacy_residual",
           "integrability_pattern", "PatternReport"]


def _jacobian(comps: list) -> list:
    return [[c.partial(v) for v in VARS3] for c in comps]


def _mat_vec_trunc(M: list, vec: list, order: int) -> list:
    out = []
    for row in M:
        acc = Poly.zero(VARS3)
        for m, v in zip(row, vec):
            acc = acc + m.mul_trunc(v, order)
        out.append(acc)
    return out


def _neumann_inverse(M: list, order: int) -> list:
    """(I + M)^{-1} as a truncated series; M entries need valuation >= 1."""
    ident = [[Poly.const(VARS3, 1 if i == j else 0) for j in range(3)] for i in range(3)]
    acc = [row[:] for row in ident]
    power = [row[:] for row in ident]
    val = min(min(e.valuation() for e in row) for row in M)
    if val < 1:
        raise ValidationError("Neumann inverse needs valuation >= 1 entries")
    step = 0
    while (step + 1) * val <= order:
        step += 1
        power = [[sum((power[i][t].mul_trunc(M[t][j], order) for t in range(3)),
                      Poly.zero(VARS3)) for j in range(3)] for i in range(3)]
        sign = -1 if step % 2 else 1
        acc = [[acc[i][j] + (power[i][j] if sign > 0 else -power[i][j])
                for j in range(3)] for i in range(3)]
    return acc


@dataclass
class NormalFormResult:
    P1: Jet                 # in x alone; x' = y + x P1(x)
    Q2: Jet                 # y' = Q2(x) + y P1(x)
    R1: Jet                 # z' = -lambda z + z R1(x)
    transform: tuple        # (Tx, Ty, Tz) polys: old coords = T(new)
    order: int
    lam: Coef
    conditions: SideConditionSet = field(default_factory=SideConditionSet)

    def field_polys(self) -> tuple:
        """The normal-form field as exact polynomials in x, y, z."""
        x = Poly.var(VARS3, "x")
        y = Poly.var(VARS3, "y")
        z = Poly.var(VARS3, "z")
        p1 = self.P1.poly.compose({}, VARS3)
        q2 = self.Q2.poly.compose({}, VARS3)
        r1 = self.R1.poly.compose({}, VARS3)
        return (y + x * p1, q2 + y * p1, z.scale(-self.lam) + z * r1)

    def planar_part(self) -> tuple:
        return self.P1, self.Q2

    def as_system(self) -> SystemModel:
        fx, fy, fz = self.field_polys()
        x = Poly.var(VARS3, "x")
        y = Poly.var(VARS3, "y")
        P = fx - y
        Q = fy
        R = fz + Poly.var(VARS3, "z").scale(self.lam)
        params = sorted(set().union(*(c.params() for p in (P, Q, R)
                                      for c in p.terms.values())) | self.lam.params())
        return SystemModel(params, self.lam, P, Q, R, self.order,
                           self.conditions.copy())


def normal_form(S: SystemModel, order: int | None = None) -> NormalFormResult:
    """Normalize through the given order with per-degree exact certificates."""
    m = order if order is not None else S.order
    if m < 2:
        raise ValidationError("normal form order must be >= 2")
    lam = S.lam
    fx, fy, fz = (p.truncate(m) for p in S.field_polys())
    V = [fx, fy, fz]
    trans = [Poly.var(VARS3, v) for v in VARS3]
    xk = lambda k, c=1: Poly.monomial(VARS3, (k, 0, 0), c)

    for k in range(2, m + 1):
        g1 = V[0].homogeneous_part(k)
        g2 = V[1].homogeneous_part(k)
        g3 = V[2].homogeneous_part(k)
        W = g2 + transport(g1, lam)
        b = W.coeff((k, 0, 0))
        a = W.coeff((k - 1, 1, 0)) / (k + 1)
        c = g3.coeff((k - 1, 0, 1))
        G = W - Poly.monomial(VARS3, (k - 1, 1, 0), a * (k + 1)) - xk(k, b)

        p1 = solve_transport(-G, k, lam).p
        s2 = solve_transport(-p1, k, lam)
        if not s2.obstruction.is_zero():
            raise AssertionError("resonant split failed: T^2 image test")
        phi1 = s2.p
        phi2 = p1 - g1 + xk(k, a)
        g3p = g3 - Poly.monomial(VARS3, (k - 1, 0, 1), c)
        s3 = solve_shifted(-g3p, k, lam)
        if not s3.obstruction.is_zero():
            raise AssertionError("resonant split failed: shifted image test")
        phi3 = s3.p

        # certify the homological step exactly
        r1 = xk(k, a)
        r2 = Poly.monomial(VARS3, (k - 1, 1, 0), a) + xk(k, b)
        r3 = Poly.monomial(VARS3, (k - 1, 0, 1), c)
        ok1 = transport(phi1, lam) - phi2 == g1 - r1
        ok2 = transport(phi2, lam) == g2 - r2
        ok3 = transport_shifted(phi3, lam) == g3 - r3
        if not (ok1 and ok2 and ok3):
            raise AssertionError(f"homological certificate failed at degree {k}")

        phi = [phi1, phi2, phi3]
        shift = {v: Jet(Poly.var(VARS3, v) + phi[i], m) for i, v in enumerate(VARS3)}
        composed = [Jet(p, m).compose(shift).poly for p in V]
        Ninv = _neumann_inverse(_jacobian(phi), m)
        V = [p.truncate(m) for p in _mat_vec_trunc(Ninv, composed, m)]
        trans = [Jet(t, m).compose(shift).poly for t in trans]

    # read off the resonant data, asserting the advertised shape
    P1t: dict = {}
    Q2t: dict = {}
    R1t: dict = {}
    y = Poly.var(VARS3, "y")
    for e, cf in (V[0] - y).terms.items():
        if e[1] or e[2] or e[0] < 2:
            raise AssertionError(f"normal form shape violated in x': term {e}")
        P1t[(e[0] - 1,)] = cf
    P1 = Poly(VARS1, P1t)
    for e, cf in V[1].terms.items():
        if e[2] or e[1] > 1:
            raise AssertionError(f"normal form shape violated in y': term {e}")
        if e[1] == 1:
            if not cf == P1.coeff((e[0],)):
                raise AssertionError("y-coefficient of y' disagrees with P1")
        else:
            Q2t[(e[0],)] = cf
    Q2 = Poly(VARS1, Q2t)
    zlin = Poly.var(VARS3, "z").scale(-S.lam)
    for e, cf in (V[2] - zlin).terms.items():
        if e[1] or e[2] != 1 or e[0] < 1:
            raise AssertionError(f"normal form shape violated in z': term {e}")
        R1t[(e[0],)] = cf
    R1 = Poly(VARS1, R1t)

    res = NormalFormResult(
        Jet(P1, m - 1), Jet(Q2, m), Jet(R1, m - 1),
        tuple(trans), m, S.lam, S.conditions.copy())
    bad = conjugacy_residual(S, res)
    if any(not p.is_zero() for p in bad):
        raise AssertionError("conjugacy identity failed through the working order")
    return res


def conjugacy_residual(S: SystemModel, nf: NormalFormResult) -> list:
    """dT(u) N(u) - V(T(u)) truncated at the working order, per component.

    T is the accumulated change (old = T(new)), N the normal-form field and
    V the original field; all three residual components vanish through the
    order exactly when the conjugacy holds.
    """
    m = nf.order
    T = list(nf.transform)
    N = [p.truncate(m) for p in nf.field_polys()]
    dT = _jacobian(T)
    lhs = _mat_vec_trunc(dT, N, m)
    shift = {v: Jet(T[i], m) for i, v in enumerate(VARS3)}
    rhs = [Jet(p.truncate(m), m).compose(shift).poly for p in S.field_polys()]
    return [(a - b).truncate(m) for a, b in zip(lhs, rhs)]


@dataclass
class PatternReport:
    p1_zero: bool
    lead_index: int | None       # first nonzero index of P1 (the classical m)
    andreev_n: int | None
    pattern_consistent: bool | None   # lead_index == 2 s n - 1 for some s >= 1
    s: int | None

    def __str__(self) -> str:
        if self.p1_zero:
            return "P1 vanishes to the computed order: integrable-to-order planar part"
        msg = f"P1 leads at index m = {self.lead_index}"
        if self.andreev_n:
            if self.pattern_consistent:
                msg += (f"; matches m = 2sn - 1 with s = {self.s}, "
                        f"n = {self.andreev_n} (the only shape compatible "
                        "with formal integrability)")
            else:
                msg += (f"; misses the 2sn - 1 ladder for n = {self.andreev_n}, "
                        "so the system is not formally integrable")
        return msg


def integrability_pattern(nf: NormalFormResult, andreev_n: int | None = None) -> PatternReport:
    """Relate the leading index of P1 to the expected 2sn - 1 pattern."""
    lead = None
    for (d,), cf in sorted(nf.P1.poly.terms.items()):
        if not cf.is_zero():
            lead = d
            break
    if lead is None:
        return PatternReport(True, None, andreev_n, None, None)
    if andreev_n:
        num = lead + 1
        ok = num % (2 * andreev_n) == 0 and num >= 2 * andreev_n
        s = num // (2 * andreev_n) if ok else None
        return PatternReport(False, lead, andreev_n, ok, s)
    return PatternReport(False, lead, None, None, None)
