"""Derivations induced by the linear part on homogeneous polynomials.

The linear vector field (y, 0, -lambda z) acts on homogeneous degree-n
polynomials in x, y, z by the transport derivation

    D(p) = y dp/dx - lambda z dp/dz,

whose kernel is spanned by y^n and whose image misses exactly the x^n
direction.  The shifted operator D + lambda (the homological operator seen
by the z-component of a vector field) has kernel y^{n-1} z and image
complement x^{n-1} z.  Swapped variants exchange the roles of x and y.

solve routines invert these operators up to the pinned complement: given
homogeneous q they return p and the single obstruction coefficient, with
the kernel component of p pinned to zero so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .rational import Coef, CoefLike
from .series import Poly, VARS3, monomials

__all__ = [
    "LinearPartOperator", "transport", "transport_shifted",
    "solve_transport", "solve_shifted", "TransportSolution",
]


@dataclass(frozen=True)
class LinearPartOperator:
    """One of the four homogeneous operators, applied coefficientwise.

    shifted=False, swapped=False:  y dp/dx - lam z dp/dz
    shifted=True,  swapped=False:  same + lam p
    swapped=True exchanges x and y in the derivation term.
    """
    degree: int
    lam: Coef
    shifted: bool = False
    swapped: bool = False

    def apply(self, p: Poly) -> Poly:
        if p.vars != VARS3:
            raise ValueError("operator expects polynomials in x, y, z")
        if not p.is_zero() and (p.degree() != self.degree or p.valuation() != self.degree):
            raise ValueError(f"operand not homogeneous of degree {self.degree}")
        a, b = ("y", "x") if not self.swapped else ("x", "y")
        out = Poly.var(VARS3, a) * p.partial(b)
        out = out - Poly.var(VARS3, "z").scale(self.lam) * p.partial("z")
        if self.shifted:
            out = out + p.scale(self.lam)
        return out

    def basis(self) -> Iterable[tuple]:
        return monomials(3, self.degree)


def transport(p: Poly, lam: CoefLike, swapped: bool = False) -> Poly:
    d = max(p.degree(), 0)
    return LinearPartOperator(d, Coef.of(lam), False, swapped).apply(p)


def transport_shifted(p: Poly, lam: CoefLike, swapped: bool = False) -> Poly:
    d = max(p.degree(), 0)
    return LinearPartOperator(d, Coef.of(lam), True, swapped).apply(p)


@dataclass
class TransportSolution:
    """p and obstruction c from D(p) + q = c * (complement monomial)."""
    p: Poly
    obstruction: Coef
    complement: tuple  # exponent tuple of the complement monomial


def _check_homogeneous(q: Poly, n: int) -> None:
    if q.vars != VARS3:
        raise ValueError("expected a polynomial in x, y, z")
    if not q.is_zero() and (q.degree() != n or q.valuation() != n):
        raise ValueError(f"right-hand side not homogeneous of degree {n}")


def solve_transport(q: Poly, n: int, lam: CoefLike) -> TransportSolution:
    """Solve D(p) + q = c x^n with the y^n component of p pinned to zero.

    Coefficient of x^j y^k z^l in D(p) is (j+1) p[j+1,k-1,l] - lam*l*p[j,k,l];
    sweeping l-levels (k ascending for l >= 1, a direct formula for l = 0)
    makes the system triangular.  Divisions are by lam*l and by integers
    only, so symbolic lam lands in denominators and nothing else does.
    """
    lam = Coef.of(lam)
    if lam.is_zero():
        raise ZeroDivisionError("lambda must be nonzero")
    _check_homogeneous(q, n)
    p: dict = {}

    def qc(j: int, k: int, l: int) -> Coef:
        return q.coeff((j, k, l))

    def pc(j: int, k: int, l: int) -> Coef:
        return p.get((j, k, l), Coef.zero())

    for l in range(1, n + 1):
        for k in range(0, n - l + 1):
            j = n - l - k
            rhs = qc(j, k, l)
            if k > 0:
                rhs = rhs + pc(j + 1, k - 1, l) * (j + 1)
            v = rhs / (lam * l)
            if not v.is_zero():
                p[(j, k, l)] = v
    # l = 0: equation at (j,k,0), k >= 1, gives (j+1) p[j+1,k-1,0] = -q[j,k,0]
    for jp in range(1, n + 1):
        kp = n - jp
        v = -qc(jp - 1, kp + 1, 0) / jp
        if not v.is_zero():
            p[(jp, kp, 0)] = v
    # kernel direction y^n pinned: p[(0, n, 0)] stays absent
    sol = Poly(VARS3, p)
    return TransportSolution(sol, qc(n, 0, 0), (n, 0, 0))


def solve_shifted(q: Poly, n: int, lam: CoefLike) -> TransportSolution:
    """Solve (D + lam)(p) + q = c x^{n-1} z, pinning the y^{n-1} z component.

    Coefficient of x^j y^k z^l in (D + lam)(p) is
    (j+1) p[j+1,k-1,l] - lam*(l-1)*p[j,k,l]; the l = 1 level is where the
    kernel and complement live, every other level divides by lam*(l-1).
    """
    lam = Coef.of(lam)
    if lam.is_zero():
        raise ZeroDivisionError("lambda must be nonzero")
    _check_homogeneous(q, n)
    if n < 1:
        raise ValueError("degree must be at least 1")
    p: dict = {}

    def qc(j: int, k: int, l: int) -> Coef:
        return q.coeff((j, k, l))

    def pc(j: int, k: int, l: int) -> Coef:
        return p.get((j, k, l), Coef.zero())

    for l in [0] + list(range(2, n + 1)):
        for k in range(0, n - l + 1):
            j = n - l - k
            rhs = qc(j, k, l)
            if k > 0:
                rhs = rhs + pc(j + 1, k - 1, l) * (j + 1)
            v = rhs / (lam * (l - 1))
            if not v.is_zero():
                p[(j, k, l)] = v
    # l = 1: equation at (j,k,1), k >= 1, gives (j+1) p[j+1,k-1,1] = -q[j,k,1]
    for jp in range(1, n):
        kp = n - 1 - jp
        v = -qc(jp - 1, kp + 1, 1) / jp
        if not v.is_zero():
            p[(jp, kp, 1)] = v
    # kernel direction y^{n-1} z pinned: p[(0, n-1, 1)] stays absent
    sol = Poly(VARS3, p)
    return TransportSolution(sol, qc(n - 1, 0, 1), (n - 1, 0, 1))
