"""Monodromy of the nilpotent origin on the center manifold.

From the planar restriction x' = y + X2, y' = Y2 the classical data are

    F(x)   root of y + X2(x, y) = 0 near 0,
    f(x)   = Y2(x, F(x)),
    Phi(x) = divergence of the field evaluated on (x, F(x)),

with alpha/a the leading index/coefficient of f and beta/b those of Phi.
The origin is monodromic exactly when alpha = 2n - 1 is odd and the
discriminant b~^2 + 4 a~ n of the leading quasihomogeneous part is
negative, where a~ is the x^{2n-1} coefficient of f and b~ the x^{n-1}
coefficient of Phi (b~ = 0 covers both a flat divergence trace and a
dominated one).  Numeric data decide signs outright; symbolic data return
the verdict together with the sign conditions they would need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rational import Coef
from .series import Jet, Poly, VARS1, VARS2, implicit_solve
from .sysio import (JetBoundError, PlanarSystem, SideCondition, SideConditionSet,
                    SystemModel, ValidationError)

__all__ = [
    "AndreevData", "andreev_data", "FLAT",
    "MonodromyVerdict", "classify_monodromy",
    "SignedCondition", "quadratic_frame_condition",
]

#: marker for "vanishes identically to the jet order"
FLAT = "flat"


def _leading(j: Jet, conditions: SideConditionSet, what: str):
    """(index, coeff) of the first coefficient that is not identically zero.

    A symbolic leading coefficient records a "!= 0" side condition (the
    caller re-runs under a substitution to explore the vanishing branch).
    Returns (FLAT, None) when all stored coefficients vanish.
    """
    for (d,), c in sorted(j.poly.terms.items()):
        if not c.is_zero():
            if c.as_fraction() is None:
                conditions.require(c, "!=0", what)
            return d, c
    return FLAT, None


@dataclass
class AndreevData:
    """Leading data of the restricted field at a nilpotent singular point."""
    F: Jet
    f: Jet
    Phi: Jet
    alpha: object            # int or FLAT
    a: Coef | None
    beta: object             # int or FLAT
    b: Coef | None
    n: int | None            # Andreev number (alpha + 1) / 2 when alpha is odd
    a_lead: Coef | None      # x^{2n-1} coefficient of f (equals a when defined)
    b_lead: Coef | None      # x^{n-1} coefficient of Phi (0 when beta > n-1)
    delta: Coef | None       # b_lead^2 + 4 n a_lead
    mu_sign: int | None      # sign of b_lead when decidable
    conditions: SideConditionSet = field(default_factory=SideConditionSet)
    order: int = 0


def andreev_data(Pl: PlanarSystem) -> AndreevData:
    """Compute F, f, Phi and the leading/discriminant data from a restriction."""
    m = Pl.order
    conds = Pl.conditions.copy()
    y = Poly.var(VARS2, "y")
    G = Jet(y + Pl.X2.poly, m)
    F = implicit_solve(G, "y")

    F2 = Jet(F.poly.compose({}, VARS2), F.order)
    fj = Pl.Y2.compose({"y": F2}, VARS2)
    f = Jet(Poly(VARS1, {(e[0],): c for e, c in fj.poly.terms.items()}), fj.order)

    div = Pl.divergence()
    phij = div.compose({"y": F2}, VARS2) if not div.is_zero() else Jet(Poly.zero(VARS2), m - 1)
    Phi = Jet(Poly(VARS1, {(e[0],): c for e, c in phij.poly.terms.items()}), phij.order)

    alpha, a = _leading(f, conds, "leading coefficient of f")
    beta, b = _leading(Phi, conds, "leading coefficient of Phi")

    n = a_lead = b_lead = delta = None
    mu_sign = None
    if alpha is not FLAT and alpha % 2 == 1:
        n = (alpha + 1) // 2
        if Phi.order < n - 1:
            raise JetBoundError(
                f"restriction order {m} too low to see the x^{n-1} divergence "
                "coefficient; raise the order")
        a_lead = f.coeff((2 * n - 1,))
        b_lead = Phi.coeff((n - 1,))
        delta = b_lead * b_lead + a_lead * Coef.of(4 * n)
        mu_sign = 0 if b_lead.is_zero() else b_lead.sign()
    return AndreevData(F, f, Phi, alpha, a, beta, b, n, a_lead, b_lead,
                       delta, mu_sign, conds, m)


@dataclass
class MonodromyVerdict:
    status: str              # "monodromic" | "not-monodromic" | "inconclusive"
    n: int | None = None
    reason: str = ""
    condition_case: str | None = None   # "divergence-dominated" (i) / "balanced" (ii)
    conditions: SideConditionSet = field(default_factory=SideConditionSet)

    def is_monodromic(self) -> bool:
        return self.status == "monodromic"


def classify_monodromy(D: AndreevData) -> MonodromyVerdict:
    """Decide monodromy from Andreev data.

    Numeric leading data give an outright verdict.  Symbolic data yield
    "monodromic" with the discriminant-negativity side condition recorded,
    since that is the generic stratum the caller asked about; vanishing
    branches are explored by substitution.
    """
    conds = D.conditions.copy()
    if D.alpha is FLAT:
        return MonodromyVerdict(
            "inconclusive", None,
            f"f vanishes identically to the computed order {D.order}; "
            "raise the order or supply a sharper model", None, conds)
    if D.alpha % 2 == 0:
        return MonodromyVerdict(
            "not-monodromic", None,
            f"leading index of f is even (alpha = {D.alpha})", None, conds)
    n = D.n
    if D.beta is not FLAT and D.beta < n - 1:
        return MonodromyVerdict(
            "not-monodromic", None,
            f"divergence trace dominates: beta = {D.beta} < n - 1 = {n - 1}",
            None, conds)
    case = "balanced" if (D.beta is not FLAT and D.beta == n - 1) else "divergence-dominated"
    s = D.delta.sign()
    if s is None:
        conds.require(D.delta, "<0", "monodromy discriminant")
        return MonodromyVerdict(
            "monodromic", n,
            "discriminant of the leading part is negative on the recorded stratum",
            case, conds)
    if s < 0:
        return MonodromyVerdict(
            "monodromic", n, "discriminant of the leading part is negative",
            case, conds)
    return MonodromyVerdict(
        "not-monodromic", None,
        f"discriminant b~^2 + 4 a~ n = {D.delta} is nonnegative (characteristic orbits)",
        None, conds)


@dataclass
class SignedCondition:
    """An inequality `expr < 0` plus the balanced-case indicator flag."""
    expr: Coef              # monodromy holds iff expr < 0 (n = 2 data)
    balanced_flag: Coef     # nonzero iff beta = n - 1 (condition case ii)

    def holds(self) -> int | None:
        s = self.expr.sign()
        return None if s is None else (1 if s < 0 else 0)


def quadratic_frame_condition(S: SystemModel) -> SignedCondition:
    """Closed-form monodromy inequality for the quadratic-frame case n = 2.

    Requires the x^2 coefficient of Q to vanish (otherwise the Andreev
    number cannot be 2).  Returns the inequality

        b101 c200 / lambda < -(2 a200 - b110)^2 / 8 - b300

    as `expr < 0` with expr = lhs - rhs, plus 2 a200 + b110, whose
    nonvanishing marks the balanced case beta = n - 1.
    """
    b200 = S.Q.coeff((2, 0, 0))
    if not b200.is_zero():
        raise ValidationError(
            f"quadratic frame condition needs a vanishing x^2 term in Q (found {b200})")
    a200 = S.P.coeff((2, 0, 0))
    b110 = S.Q.coeff((1, 1, 0))
    b101 = S.Q.coeff((1, 0, 1))
    b300 = S.Q.coeff((3, 0, 0))
    c200 = S.R.coeff((2, 0, 0))
    two_a_plus_b = a200 * 2 + b110
    lhs = b101 * c200 / S.lam
    rhs = -(a200 * 2 - b110) ** 2 / 8 - b300
    return SignedCondition(lhs - rhs, two_a_plus_b)
