"""Obstruction quantities against formal integrability, and the verdict.

Starting from H = y^2, each degree n contributes the known forcing

    F_n = degree-n part of (P H_x + Q H_y + R H_z),  H built below n,

and the transport solve absorbs everything except the x^n direction:
X H = sum_n omega_n x^n.  Each solve leaves one coefficient of H free (the
kernel direction y^n); the construction keeps those choices open and
spends them later: an x^n obstruction that still depends on an earlier
free coefficient is removed by fixing that coefficient.  A recorded
nonzero omega_n is therefore one that no choice of H can remove, which is
what makes it an obstruction: the omega_n vanish through the computed
order precisely when some H = y^2 + ... satisfies X H = 0 to that order.
Leftover free coefficients are set to zero at the end, so the result is
deterministic.

The defining identity X H - sum omega_n x^n = 0 is rechecked through the
computed order after every construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .center_manifold import (exact_cm_candidate, hamiltonian_reconstruct,
                              restrict_exact, reversibility_check, cm_jet)
from .monodromy import AndreevData, MonodromyVerdict
from .operators import solve_transport
from .rational import Coef, PPoly
from .series import Jet, Poly, VARS2, VARS3
from .sysio import SideConditionSet, SystemModel, ValidationError

__all__ = [
    "ObstructionSeries", "omega_series", "check_first_integral",
    "beta_shortcut", "CenterVerdict", "center_verdict",
]


def _lie_derivative(S: SystemModel, H: Poly, order: int) -> Poly:
    """X H truncated at `order`; exact through `order` for an order-`order`
    jet H because every field component has valuation >= 1."""
    fx, fy, fz = S.field_polys()
    out = H.partial("x").mul_trunc(fx, order) \
        + H.partial("y").mul_trunc(fy, order) \
        + H.partial("z").mul_trunc(fz, order)
    return out.truncate(order)


@dataclass
class ObstructionSeries:
    H: Jet                      # candidate integral, j2 = y^2
    omegas: dict                # n -> Coef, n = 3..order
    order: int
    conditions: SideConditionSet = field(default_factory=SideConditionSet)

    def first_nonzero(self):
        """(index, value) of the first unremovable omega, or None.

        A symbolic value records its nonvanishing side condition on the
        series' condition set.
        """
        for n in sorted(self.omegas):
            v = self.omegas[n]
            if not v.is_zero():
                if v.as_fraction() is None:
                    self.conditions.require(v, "!=0", f"omega_{n}")
                return n, v
        return None

    def all_vanish(self) -> bool:
        return all(v.is_zero() for v in self.omegas.values())


def _absorb(w: Coef, free: list):
    """Zero the obstruction w with a free kernel coefficient if possible.

    w is affine-linear in the kernel symbols.  Returns (name, value, guard)
    for the symbol to fix, or None when w involves none of them.  guard is
    the symbolic coefficient whose nonvanishing makes the choice well
    defined; None when that coefficient is an explicit rational.
    """
    names = [k for k in free if k in w.params()]
    if not names:
        return None
    zero = {k: Coef.of(0) for k in names}
    base = w.subs(zero)
    pick = None
    for k in names:
        probe = dict(zero)
        probe[k] = Coef.of(1)
        c = w.subs(probe) - base
        if c.is_zero():
            continue
        if c.as_fraction() is not None:
            pick = (k, c, None)
            break
        if pick is None:
            pick = (k, c, c)
    if pick is None:
        return None
    k, c, guard = pick
    rest = w.subs({k: Coef.of(0)})
    return k, rest * c.inv() * Coef.of(-1), guard


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name = "k" + name
    return name


def _require_nonzero(conds, c: Coef, source: str) -> None:
    """Record c != 0, splitting off monomial factors where that is exact."""
    items = list(c.num.terms.items())
    shared = dict(items[0][0])
    for m, _ in items[1:]:
        d = dict(m)
        shared = {k: min(e, d[k]) for k, e in shared.items() if k in d}
    for name in sorted(shared):
        conds.require(Coef.param(name), "!=0", source)
    if shared:
        prim = {}
        for m, cf in items:
            reduced = tuple((k, e - shared.get(k, 0)) for k, e in m
                            if e - shared.get(k, 0) > 0)
            prim[reduced] = cf
        rest = PPoly(prim)
    else:
        rest = c.num
    if not rest.is_const():
        conds.require(Coef.of(rest), "!=0", source)


def omega_series(S: SystemModel, order: int | None = None) -> ObstructionSeries:
    """Compute H and the obstruction quantities through the given order."""
    N = order if order is not None else S.order
    if N < 3:
        raise ValidationError("obstruction order must be at least 3")
    H = Poly.monomial(VARS3, (0, 2, 0), 1)
    omegas: dict = {}
    conds = S.conditions.copy()
    taken = set(S.params) | S.lam.params()
    free: list = []
    for n in range(3, N + 1):
        F = S.P.mul_trunc(H.partial("x"), n) \
            + S.Q.mul_trunc(H.partial("y"), n) \
            + S.R.mul_trunc(H.partial("z"), n)
        Fn = F.homogeneous_part(n)
        sol = solve_transport(Fn, n, S.lam)
        H = H + sol.p
        w = sol.obstruction
        fix = _absorb(w, free)
        if fix is not None:
            name, value, guard = fix
            H = H.subs_params({name: value})
            free.remove(name)
            if guard is not None:
                _require_nonzero(conds, guard, f"omega_{n} kernel choice")
            w = Coef.of(0)
        omegas[n] = w
        kn = _fresh(f"u{n}", taken)
        taken.add(kn)
        free.append(kn)
        H = H + Poly.monomial(VARS3, (0, n, 0), Coef.param(kn))
    if not omegas[3].is_zero():
        raise AssertionError("omega_3 must vanish structurally")
    H = H.subs_params({k: Coef.of(0) for k in free})
    # defining identity, rechecked always
    resid = _lie_derivative(S, H, N)
    for n, w in omegas.items():
        resid = resid - Poly.monomial(VARS3, (n, 0, 0), w)
    if not resid.is_zero():
        raise AssertionError(f"obstruction residual is nonzero: {resid}")
    return ObstructionSeries(Jet(H, N), omegas, N, conds)


def check_first_integral(S: SystemModel, H: Jet) -> Jet:
    """Residual jet X H of a candidate integral; zero iff H is a first
    integral through its order.  Constant offsets in H are immaterial."""
    if H.vars != VARS3:
        raise ValidationError("candidate integral must be a jet in x, y, z")
    if H.poly.truncate(0) == H.poly:
        raise ValidationError("candidate integral must be nonconstant")
    return Jet(_lie_derivative(S, H.poly, H.order), H.order)


def beta_shortcut(D: AndreevData) -> Coef:
    """First potentially nonzero obstruction, omega_{3n-1} = -2 a~ b~ / n,
    read off the Andreev data of the restriction (meaningful on the
    balanced stratum beta = n - 1; returns 0 consistently off it)."""
    if D.n is None:
        raise ValidationError("Andreev number undefined (leading index of f not odd)")
    return D.a_lead * D.b_lead * Coef.of(-2) / D.n


@dataclass
class CenterVerdict:
    status: str        # focus | not-a-center | not-formally-integrable |
                       # center-confirmed | undecided
    rule: str          # machine-readable justification slug
    detail: str = ""
    first_index: int | None = None
    first_value: Coef | None = None
    order_checked: int | None = None
    conditions: SideConditionSet = field(default_factory=SideConditionSet)
    surface: Poly | None = None      # exact invariant graph for sufficiency
    symmetries: tuple = ()
    hamiltonian: object = None


def center_verdict(S: SystemModel, M: MonodromyVerdict, O: ObstructionSeries,
                   try_certificates: bool = True) -> CenterVerdict:
    """Decide the center problem as far as the computed data allow.

    Requires a monodromic singular point.  Order of the rules:
      1. odd Andreev number on the balanced stratum: focus;
      2. first nonzero obstruction at even index: not a center;
      3. first nonzero obstruction at odd index: not formally integrable
         (a center is still possible; never a focus claim);
      4. obstructions all vanish and an exact manifold plus a reversibility
         or Hamiltonian certificate on it: center confirmed;
      5. otherwise undecided at the computed order.
    """
    if not M.is_monodromic():
        raise ValidationError("center verdict requires a monodromic point")
    conds = M.conditions.copy().merged(O.conditions)
    n = M.n
    if M.condition_case == "balanced" and n % 2 == 1:
        return CenterVerdict(
            "focus", "odd-andreev-balanced-divergence",
            f"Andreev number n = {n} is odd and the divergence trace is "
            "balanced (beta = n - 1), which forces a stable or unstable focus",
            None, None, O.order, conds)
    fz = O.first_nonzero()
    conds = conds.merged(O.conditions)
    if fz is not None:
        k, v = fz
        if k % 2 == 0:
            return CenterVerdict(
                "not-a-center", "even-index-obstruction",
                f"first nonzero obstruction omega_{k} = {v} has even index",
                k, v, O.order, conds)
        return CenterVerdict(
            "not-formally-integrable", "odd-index-obstruction",
            f"first nonzero obstruction omega_{k} = {v} has odd index; "
            "formal integrability fails but a center remains possible",
            k, v, O.order, conds)
    if try_certificates:
        V = exact_cm_candidate(S, O.order)
        if V is not None:
            h = Poly.var(VARS3, "z") - V  # graph polynomial h(x, y) in 3 vars
            if any(e[2] for e in h.terms):
                raise AssertionError("invariant graph candidate is not a graph in z")
            h2 = Poly(VARS2, {(e[0], e[1]): c for e, c in h.terms.items()})
            Pl = restrict_exact(S, h2)
            sym = reversibility_check(Pl)
            if sym:
                return CenterVerdict(
                    "center-confirmed", "reversible-restriction",
                    f"exact invariant graph z = h(x,y) with {'/'.join(sym)}-"
                    "reversible restriction; monodromy plus reversibility "
                    "gives a center",
                    None, None, O.order, conds, V, sym)
            ham = hamiltonian_reconstruct(Pl)
            if ham is not None:
                return CenterVerdict(
                    "center-confirmed", "hamiltonian-restriction",
                    "exact invariant graph z = h(x,y) with Hamiltonian "
                    "restriction; monodromy plus a first integral gives a center",
                    None, None, O.order, conds, V, (), ham)
    return CenterVerdict(
        "undecided", "obstructions-vanish-to-order",
        f"all obstructions vanish through order {O.order} but no exactness "
        "certificate was found; raise the order or supply a surface",
        None, None, O.order, conds)
