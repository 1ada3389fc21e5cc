"""Floating-point corroboration: generalized trig, displacement map, v1.

Everything here is validation-grade numerics for systems with numeric
coefficients.  It never overrides a symbolic verdict; it produces evidence
(displacement signs, focal parity, multiplier estimates) that either
corroborates the exact computation or flags a discrepancy.

The generalized trigonometric pair (Cs, Sn) solves

    Cs' = -Sn,   Sn' = Cs^(2n-1),   Cs(0) = 1,  Sn(0) = 0,

is T-periodic with T = 2 sqrt(pi/n) Gamma(1/(2n)) / Gamma((n+1)/(2n)), and
satisfies Cs^(2n) + n Sn^2 = 1.  The weighted polar substitution
x = rho Cs(theta), y = rho^n Sn(theta) turns a monodromic planar system
x' = F1, y' = F2 into

    drho/dtheta = rho (rho^(n-1) Cs^(2n-1) F1 + Sn F2)
                  / (Cs F2 - n rho^(n-1) Sn F1),

where F1, F2 are evaluated along the substitution.  One sweep of theta from
0 to T is one return to the section, and d(rho0) = rho(T) - rho0 is the
displacement whose leading sign distinguishes focus sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import gamma as _gamma

from .series import Jet, Poly
from .sysio import PlanarSystem, ValidationError

__all__ = ["NumericsError", "ToleranceError", "DomainError", "GenTrig",
           "gen_trig", "period", "moment_closed_form", "DisplacementResult",
           "displacement", "MultiplierEstimate", "v1_check"]

INTEGRATOR_RTOL = 1e-12
INTEGRATOR_ATOL = 1e-12
IDENTITY_TOL = 1e-8
SIGN_FLOOR_FACTOR = 10.0


class NumericsError(RuntimeError):
    pass


class ToleranceError(NumericsError):
    """An accuracy requirement could not be met (integrator trouble)."""


class DomainError(NumericsError):
    """The computation left its validated domain (section denominator)."""


def period(n: int) -> float:
    """Full period of the generalized trigonometric pair."""
    if n < 1:
        raise ValidationError("n must be a positive integer")
    return 2.0 * math.sqrt(math.pi / n) * _gamma(1.0 / (2 * n)) / _gamma((n + 1.0) / (2 * n))


def moment_closed_form(n: int, p: int, q: int) -> float:
    """Full-period integral of Sn^p Cs^q: zero on odd exponents, else a
    Gamma ratio."""
    if p < 0 or q < 0:
        raise ValidationError("moment exponents must be nonnegative")
    if p % 2 or q % 2:
        return 0.0
    return (2.0 / math.sqrt(float(n) ** (p + 1))
            * _gamma((p + 1) / 2.0) * _gamma((q + 1) / (2.0 * n))
            / _gamma((p + 1) / 2.0 + (q + 1) / (2.0 * n)))


class GenTrig:
    """Dense solution of the generalized trigonometric Cauchy problem.

    Cs and Sn accept any real theta; evaluation reduces modulo the period.
    `noise` is the measured identity residual, used as the relative noise
    model for displacement sign floors.
    """

    def __init__(self, n: int, sol, T: float, tol: float):
        self.n = n
        self.T = T
        self.tol = tol
        self._sol = sol
        self.noise = max(self.identity_residual(), 1e-13)

    def _eval(self, theta):
        th = np.mod(np.asarray(theta, dtype=float), self.T)
        return self._sol(th)

    def Cs(self, theta):
        out = self._eval(theta)[0]
        return float(out) if np.ndim(theta) == 0 else out

    def Sn(self, theta):
        out = self._eval(theta)[1]
        return float(out) if np.ndim(theta) == 0 else out

    def identity_residual(self, samples: int = 2000) -> float:
        """max over a grid of |Cs^(2n) + n Sn^2 - 1|."""
        th = np.linspace(0.0, self.T, samples)
        u, v = self._eval(th)
        return float(np.max(np.abs(u ** (2 * self.n) + self.n * v ** 2 - 1.0)))

    def moment(self, p: int, q: int) -> float:
        """Full-period integral of Sn^p Cs^q by adaptive quadrature."""
        val, err = quad(lambda th: self.Sn(th) ** p * self.Cs(th) ** q,
                        0.0, self.T, limit=200, epsabs=1e-12, epsrel=1e-12)
        if err > 1e-8:
            raise ToleranceError(f"moment quadrature error {err:.2e} too large")
        return val


_GEN_TRIG_CACHE: dict = {}


def gen_trig(n: int, tol: float = IDENTITY_TOL) -> GenTrig:
    """Integrate the Cauchy problem over one period computed independently
    from the Gamma-function expression, and verify endpoint closure."""
    if n < 1 or int(n) != n:
        raise ValidationError("n must be a positive integer")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    cached = _GEN_TRIG_CACHE.get(n)
    if cached is not None and cached.tol <= tol:
        return cached
    T = period(n)
    m = 2 * n - 1

    def rhs(_, w):
        return [-w[1], w[0] ** m]

    # the step cap keeps the dense interpolant at roundoff accuracy; the
    # interpolation error is frozen into every later field evaluation, so
    # it has to be far below the displacement error budget
    sol = solve_ivp(rhs, (0.0, T), [1.0, 0.0], method="DOP853",
                    rtol=INTEGRATOR_RTOL, atol=INTEGRATOR_ATOL,
                    dense_output=True, max_step=T / 1000.0)
    if not sol.success:
        raise ToleranceError(f"trig integration failed: {sol.message}")
    uT, vT = sol.sol(T)
    closure = abs(uT - 1.0) + abs(vT)
    if closure >= tol:
        raise ToleranceError(
            f"period closure failed for n={n}: |Cs(T)-1|+|Sn(T)| = {closure:.3e}")
    g = GenTrig(n, sol.sol, T, tol)
    _GEN_TRIG_CACHE[n] = g
    return g


# ---------------------------------------------------------------------------
# displacement map
# ---------------------------------------------------------------------------


def _float_table(j: Jet) -> list:
    """[(i, k, float coefficient)] for a numeric planar jet."""
    out = []
    for e, c in j.poly.terms.items():
        if not c.is_const():
            raise ValidationError("numeric routines need numeric coefficients")
        out.append((e[0], e[1], float(c.as_fraction())))
    return out


@dataclass
class DisplacementResult:
    n: int
    T: float
    rho0: list
    d: list
    err: list                      # per-sample halving estimates
    lead_exponent: float | None    # log-log slope over sign-valid samples
    lead_sign: int                 # 0 when every |d| is under the floor
    floor: list = field(default_factory=list)

    def sign_calls(self) -> list:
        """Per-sample sign with the error floor applied (0 = too small to call)."""
        return [0 if abs(dv) <= flo else (1 if dv > 0 else -1)
                for dv, flo in zip(self.d, self.floor)]


def _rho_rhs(table1, table2, g: GenTrig, n: int):
    """Right-hand side of drho/dtheta, tracking the section denominator."""
    state = {"min_ratio": math.inf}

    def rhs(theta, w):
        rho = w[0]
        cs = g.Cs(theta)
        sn = g.Sn(theta)
        x = rho * cs
        y = rho ** n * sn
        f1 = sum(c * x ** i * y ** k for i, k, c in table1)
        f2 = sum(c * x ** i * y ** k for i, k, c in table2)
        rn1 = rho ** (n - 1)
        num = rho * (rn1 * cs ** (2 * n - 1) * f1 + sn * f2)
        den = cs * f2 - n * rn1 * sn * f1
        scale = abs(cs * f2) + abs(n * rn1 * sn * f1)
        if scale > 0:
            state["min_ratio"] = min(state["min_ratio"], abs(den) / scale)
        if den == 0.0:
            raise DomainError("section denominator vanished: orbit is not "
                              "transverse (non-monodromic leak)")
        return [num / den]

    return rhs, state


def _one_return(table1, table2, g: GenTrig, n: int, rho0: float,
                max_step: float) -> float:
    rhs, state = _rho_rhs(table1, table2, g, n)
    sol = solve_ivp(rhs, (0.0, g.T), [rho0], method="DOP853",
                    rtol=INTEGRATOR_RTOL, atol=INTEGRATOR_ATOL,
                    max_step=max_step)
    if not sol.success:
        raise ToleranceError(f"displacement integration failed: {sol.message}")
    if state["min_ratio"] < 1e-6:
        raise DomainError(
            "section denominator nearly vanished along the orbit "
            f"(min ratio {state['min_ratio']:.2e}): non-monodromic leak")
    return float(sol.y[0, -1])


def displacement(Pl: PlanarSystem, n: int, rho_grid, tol: float = IDENTITY_TOL) -> DisplacementResult:
    """One-return displacement d(rho0) = rho(T) - rho0 over a grid.

    Each sample is integrated twice, with the cap on the step size halved
    the second time; the difference is the recorded error estimate.  Sign
    calls require the displacement to clear ten times that estimate.  The
    leading exponent is a log-log least-squares slope over the samples with
    valid sign calls.
    """
    from .monodromy import andreev_data, classify_monodromy
    from .sysio import JetBoundError
    M = classify_monodromy(andreev_data(Pl))
    if M.status == "inconclusive":
        raise JetBoundError(f"monodromy undecided: {M.reason}")
    if not M.is_monodromic():
        raise ValidationError(f"displacement needs a monodromic origin: {M.reason}")
    if M.n != n:
        raise ValidationError(f"Andreev number is {M.n}, not the requested {n}")
    g = gen_trig(n, tol)
    t1 = _float_table(Pl.X2 + Jet(Poly.var(Pl.X2.poly.vars, "y"), Pl.X2.order))
    t2 = _float_table(Pl.Y2)
    rho0s = [float(r) for r in rho_grid]
    if not rho0s or any(r <= 0 for r in rho0s):
        raise ValidationError("rho grid must be positive")
    ds, errs = [], []
    for r0 in rho0s:
        coarse = _one_return(t1, t2, g, n, r0, g.T / 200.0)
        fine = _one_return(t1, t2, g, n, r0, g.T / 400.0)
        ds.append(fine - r0)
        errs.append(abs(fine - coarse))
    signs = []
    floors = []
    for r0, dv, ev in zip(rho0s, ds, errs):
        # halving misses error sources shared by both runs (the frozen trig
        # table), so the floor also carries a relative noise model
        flo = SIGN_FLOOR_FACTOR * max(ev, g.noise * r0, 1e-15)
        floors.append(flo)
        signs.append(0 if abs(dv) <= flo else (1 if dv > 0 else -1))
    called = [s for s in signs if s != 0]
    lead_sign = 0
    lead_exp = None
    if called:
        if len(set(called)) > 1:
            raise ToleranceError("displacement sign flips across the grid; "
                                 "refine the grid or shrink rho")
        lead_sign = called[0]
        pts = [(math.log(r), math.log(abs(dv)))
               for r, dv, s in zip(rho0s, ds, signs) if s != 0]
        if len(pts) >= 2:
            xs = np.array([p[0] for p in pts])
            ys = np.array([p[1] for p in pts])
            lead_exp = float(np.polyfit(xs, ys, 1)[0])
    return DisplacementResult(n, g.T, rho0s, ds, errs, lead_exp, lead_sign, floors)


# ---------------------------------------------------------------------------
# first multiplier
# ---------------------------------------------------------------------------


@dataclass
class MultiplierEstimate:
    v1: float            # limit of rho(T)/rho0 as rho0 -> 0
    v1_quadrature: float  # exp(-mu * A2) from the closed-form integrand
    A2: float            # integral of Cs^(n-1) / (n (1 - (n-1) Sn^2))
    mu: float
    n: int
    consistent: bool


def _check_canonical(Pl: PlanarSystem, mu: float, n: int, tol: float) -> None:
    """The expected shape: x' = y + mu x^n + {weight > n}, and
    y' = -n x^(2n-1) + n mu x^(n-1) y + {weight > 2n-1} in the (1, n)
    weighting."""
    for e, c in Pl.X2.poly.terms.items():
        if not c.is_const():
            raise ValidationError("numeric routines need numeric coefficients")
        w = e[0] + n * e[1]
        cf = float(c.as_fraction())
        if e == (n, 0):
            if abs(cf - mu) > tol:
                raise ValidationError(f"x^{n} coefficient {cf} does not match mu={mu}")
        elif w <= n:
            raise ValidationError(f"term x^{e[0]} y^{e[1]} in x' breaks canonical shape")
    for e, c in Pl.Y2.poly.terms.items():
        if not c.is_const():
            raise ValidationError("numeric routines need numeric coefficients")
        w = e[0] + n * e[1]
        cf = float(c.as_fraction())
        if e == (2 * n - 1, 0):
            if abs(cf + n) > tol:
                raise ValidationError(f"x^{2*n-1} coefficient must be {-n}, found {cf}")
        elif e == (n - 1, 1):
            if abs(cf - n * mu) > tol:
                raise ValidationError(f"x^{n-1} y coefficient must be n*mu, found {cf}")
        elif w < 2 * n:
            raise ValidationError(f"term x^{e[0]} y^{e[1]} in y' breaks canonical shape")
    lead = Pl.Y2.poly.coeff((2 * n - 1, 0))
    if lead.is_zero():
        raise ValidationError(f"canonical form requires the x^{2*n-1} term in y'")


def v1_check(Pl: PlanarSystem, mu: float, n: int, tol: float = IDENTITY_TOL) -> MultiplierEstimate:
    """Estimate the first return multiplier two independent ways.

    Route one extrapolates rho(T)/rho0 to rho0 -> 0 from two small radii.
    Route two evaluates exp(-mu A2) with A2 the quadrature of
    Cs^(n-1) / (n (1 - (n-1) Sn^2)) over a period; that value is 1 exactly
    when n is even (odd integrand) and exp(-mu A2) with A2 > 0 when n is
    odd.  Both routes must agree, and the even/odd assertions are enforced.
    """
    _check_canonical(Pl, mu, n, tol)
    g = gen_trig(n, tol)
    A2, qerr = quad(lambda th: g.Cs(th) ** (n - 1)
                    / (n * (1.0 - (n - 1) * g.Sn(th) ** 2)),
                    0.0, g.T, limit=200, epsabs=1e-12, epsrel=1e-12)
    if qerr > 1e-8:
        raise ToleranceError(f"multiplier quadrature error {qerr:.2e} too large")
    v1_quad = math.exp(-mu * A2)

    t1 = _float_table(Pl.X2 + Jet(Poly.var(Pl.X2.poly.vars, "y"), Pl.X2.order))
    t2 = _float_table(Pl.Y2)
    r_a, r_b = 1e-3, 5e-4
    va = _one_return(t1, t2, g, n, r_a, g.T / 200.0) / r_a
    vb = _one_return(t1, t2, g, n, r_b, g.T / 200.0) / r_b
    # v(rho0) = v1 + O(rho0): eliminate the linear error term
    v1_lim = vb + (vb - va) * r_b / (r_a - r_b)
    if abs(v1_lim - v1_quad) > 1e-5 * max(1.0, abs(v1_quad)):
        raise ToleranceError(
            f"multiplier routes disagree: limit {v1_lim!r} vs quadrature {v1_quad!r}")

    consistent = True
    if n % 2 == 0:
        if abs(A2) > 1e-9 or abs(v1_quad - 1.0) > tol:
            raise ToleranceError(
                f"even n must give multiplier 1, got {v1_quad!r} (A2={A2!r})")
    else:
        if A2 <= 0:
            raise ToleranceError(f"odd n needs a positive quadrature, got {A2!r}")
        if mu != 0.0 and (v1_quad - 1.0) * (-mu) <= 0:
            consistent = False
        if mu == 0.0 and abs(v1_quad - 1.0) > tol:
            consistent = False
    return MultiplierEstimate(v1_lim, v1_quad, A2, mu, n, consistent)
