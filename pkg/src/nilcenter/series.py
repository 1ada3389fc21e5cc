"""Sparse polynomials and truncated power series (jets) in x, y, z.

Terms are kept in a dict keyed by exponent tuples, with coefficients in the
exact field Q(params) (`rational.Coef`).  All iteration, printing, and
division use graded lexicographic order with x > y > z.  A Jet is a
polynomial together with an explicit truncation order; any operation that
cannot guarantee its stated order raises OrderError instead of silently
degrading.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .rational import Coef, CoefLike

__all__ = [
    "OrderError", "Poly", "Jet", "VARS3", "VARS2", "VARS1",
    "monomials", "jet_exp", "implicit_solve", "divide_single",
]

VARS3 = ("x", "y", "z")
VARS2 = ("x", "y")
VARS1 = ("x",)


class OrderError(ValueError):
    """A jet operation could not guarantee the requested truncation order."""


def _key(exps: tuple) -> tuple:
    # graded lex, x > y > z: compare total degree, then exponents left-to-right
    return (sum(exps), exps)


def monomials(nvars: int, degree: int) -> Iterable[tuple]:
    """All exponent tuples of the given total degree, graded-lex descending."""
    if nvars == 1:
        yield (degree,)
        return
    for e in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e):
            yield (e,) + rest


class Poly:
    """Sparse polynomial over Q(params) in an ordered variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple, terms: Mapping[tuple, CoefLike] | None = None):
        self.vars = tuple(vars)
        self.terms: dict = {}
        if terms:
            for e, c in terms.items():
                c = Coef.of(c)
                if not c.is_zero():
                    self.terms[tuple(e)] = c

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(vars: tuple) -> "Poly":
        return Poly(vars)

    @staticmethod
    def const(vars: tuple, c: CoefLike) -> "Poly":
        return Poly(vars, {(0,) * len(vars): Coef.of(c)})

    @staticmethod
    def var(vars: tuple, name: str) -> "Poly":
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return Poly(vars, {tuple(e): Coef.one()})

    @staticmethod
    def monomial(vars: tuple, exps: tuple, c: CoefLike = 1) -> "Poly":
        return Poly(vars, {tuple(exps): Coef.of(c)})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps: tuple) -> Coef:
        return self.terms.get(tuple(exps), Coef.zero())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def valuation(self) -> int:
        """Lowest total degree among terms; large sentinel for zero."""
        if not self.terms:
            return 10 ** 9
        return min(sum(e) for e in self.terms)

    def leading(self) -> tuple:
        """(exps, coeff) of the graded-lex leading term."""
        e = max(self.terms, key=_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: _key(kv[0]), reverse=True)

    def by_degree(self) -> dict:
        out: dict = {}
        for e, c in self.terms.items():
            d = sum(e)
            out.setdefault(d, {})[e] = c
        return {d: Poly(self.vars, t) for d, t in sorted(out.items())}

    def homogeneous_part(self, n: int) -> "Poly":
        return Poly(self.vars, {e: c for e, c in self.terms.items() if sum(e) == n})

    def truncate(self, order: int) -> "Poly":
        return Poly(self.vars, {e: c for e, c in self.terms.items() if sum(e) <= order})

    # -- arithmetic -------------------------------------------------------

    def _check_vars(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_vars(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        r = Poly(self.vars)
        r.terms = out
        return r

    def __neg__(self) -> "Poly":
        r = Poly(self.vars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        return self.mul_trunc(other, None)

    def mul_trunc(self, other: "Poly", order: int | None) -> "Poly":
        self._check_vars(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if order is not None and d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                s = out.get(e)
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        r = Poly(self.vars)
        r.terms = out
        return r

    def scale(self, c: CoefLike) -> "Poly":
        c = Coef.of(c)
        if c.is_zero():
            return Poly(self.vars)
        r = Poly(self.vars)
        r.terms = {e: k * c for e, k in self.terms.items()}
        return r

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.const(self.vars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # -- calculus ----------------------------------------------------------

    def partial(self, name: str) -> "Poly":
        i = self.vars.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        r = Poly(self.vars)
        r.terms = out
        return r

    # -- composition ---------------------------------------------------------

    def compose(self, mapping: Mapping[str, "Poly"], target_vars: tuple | None = None,
                order: int | None = None) -> "Poly":
        """Substitute polynomials for variables; exact unless order is given.

        Variables absent from the mapping are sent to themselves, which
        requires them to exist in the target variable tuple.  With `order`,
        products are truncated at that degree throughout (the caller owns
        the justification that discarded terms cannot feed back down).
        """
        if target_vars is None:
            some = next(iter(mapping.values()), None)
            target_vars = some.vars if some is not None else self.vars
        target_vars = tuple(target_vars)
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if tuple(img.vars) != target_vars:
                    raise ValueError("substituend variable tuple mismatch")
            else:
                img = Poly.var(target_vars, v)  # raises if absent
            images.append(img)
        # power tables per variable, built lazily
        pows: list = [{0: Poly.const(target_vars, 1)} for _ in self.vars]

        def power(i: int, n: int) -> Poly:
            tab = pows[i]
            if n not in tab:
                m = max(tab)
                p = tab[m]
                while m < n:
                    p = p.mul_trunc(images[i], order)
                    m += 1
                    tab[m] = p
            return tab[n]

        acc = Poly.zero(target_vars)
        for e, c in self.terms.items():
            term = Poly.const(target_vars, c)
            for i, n in enumerate(e):
                if n:
                    term = term.mul_trunc(power(i, n), order)
            acc = acc + term
        return acc

    # -- evaluation ------------------------------------------------------------

    def eval_coef(self, point: Mapping[str, CoefLike]) -> Coef:
        out = Coef.zero()
        for e, c in self.terms.items():
            t = c
            for v, n in zip(self.vars, e):
                if n:
                    t = t * (Coef.of(point[v]) ** n)
            out = out + t
        return out

    def float_terms(self, param_values: Mapping[str, Fraction] | None = None) -> list:
        """[(exps, float coeff)] for numeric work; params must be bound."""
        out = []
        for e, c in self.sorted_terms():
            f = c.as_fraction() if not param_values else c.eval(param_values)
            if f is None:
                raise ValueError("polynomial has unbound parameters")
            out.append((e, float(f)))
        return out

    def subs_params(self, mapping: Mapping[str, CoefLike]) -> "Poly":
        return Poly(self.vars, {e: c.subs(mapping) for e, c in self.terms.items()})

    def max_param_degree(self) -> int:
        d = 0
        for c in self.terms.values():
            d = max(d, c.num.degree(), c.den.degree())
        return d

    # -- printing ----------------------------------------------------------------

    def _term_str(self, e: tuple, c: Coef) -> str:
        mono = "*".join(
            v if n == 1 else f"{v}^{n}"
            for v, n in zip(self.vars, e) if n
        )
        cs = str(c)
        # a bare sum binds looser than '*': parenthesize so output re-parses
        if len(c.num.terms) > 1 and c.den.is_const() and c.den.const_value() == 1:
            cs = f"({cs})"
        if not mono:
            return cs
        if cs == "1":
            return mono
        if cs == "-1":
            return "-" + mono
        return f"{cs}*{mono}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            s = self._term_str(e, c)
            if not parts:
                parts.append(s)
            elif s.startswith("-"):
                parts.append("- " + self._term_str(e, -c))
            else:
                parts.append("+ " + s)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly[{','.join(self.vars)}]({self})"


class Jet:
    """Polynomial known to be exact through total degree `order`."""

    __slots__ = ("poly", "order")

    def __init__(self, poly: Poly, order: int):
        if order < 0:
            raise OrderError("jet order must be nonnegative")
        if poly.degree() > order:
            raise OrderError(
                f"polynomial of degree {poly.degree()} exceeds jet order {order}")
        self.poly = poly
        self.order = order

    @staticmethod
    def of(poly: Poly, order: int) -> "Jet":
        return Jet(poly.truncate(order), order)

    @property
    def vars(self) -> tuple:
        return self.poly.vars

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def coeff(self, exps: tuple) -> Coef:
        return self.poly.coeff(exps)

    def valuation(self) -> int:
        return self.poly.valuation()

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.poly.truncate(order), order)

    def require_order(self, order: int) -> "Jet":
        if self.order < order:
            raise OrderError(f"jet of order {self.order} where {order} is required")
        return self

    def __add__(self, other: "Jet") -> "Jet":
        n = min(self.order, other.order)
        return Jet((self.poly + other.poly).truncate(n), n)

    def __sub__(self, other: "Jet") -> "Jet":
        n = min(self.order, other.order)
        return Jet((self.poly - other.poly).truncate(n), n)

    def __neg__(self) -> "Jet":
        return Jet(-self.poly, self.order)

    def __mul__(self, other: "Jet") -> "Jet":
        n = min(self.order, other.order)
        return Jet(self.poly.mul_trunc(other.poly, n), n)

    def scale(self, c: CoefLike) -> "Jet":
        return Jet(self.poly.scale(c), self.order)

    def partial(self, name: str) -> "Jet":
        if self.order == 0:
            raise OrderError("cannot differentiate an order-0 jet")
        return Jet(self.poly.partial(name), self.order - 1)

    def compose(self, mapping: Mapping[str, "Jet"], target_vars: tuple | None = None) -> "Jet":
        """Substitute jets with valuation >= 1 for variables.

        Result order is min(self.order, orders of the substituends): an
        unknown term of degree d in any input can only produce terms of
        degree >= d because every image has no constant term.
        """
        n = self.order
        pmap = {}
        for v, j in mapping.items():
            if j.valuation() < 1:
                raise OrderError(
                    f"substituend for {v} has a constant term; order cannot be guaranteed")
            n = min(n, j.order)
            pmap[v] = j.poly
        res = self.poly.truncate(n).compose(pmap, target_vars, order=n)
        return Jet(res.truncate(n), n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and self.poly == other.poly

    __hash__ = None

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, {self.poly})"


def jet_exp(j: Jet) -> Jet:
    """exp of a jet with zero constant term, truncated at j.order."""
    if j.valuation() < 1:
        raise OrderError("jet_exp needs zero constant term")
    acc = Poly.const(j.vars, 1)
    term = Poly.const(j.vars, 1)
    for k in range(1, j.order + 1):
        term = term.mul_trunc(j.poly, j.order).scale(Fraction(1, k))
        if term.is_zero():
            break
        acc = acc + term
    return Jet(acc.truncate(j.order), j.order)


def implicit_solve(G: Jet, var: str = "y") -> Jet:
    """Solve G(x, F(x)) = 0 for F with F(0) = 0, G in (x, y), unknown y.

    Requires G(0,0) = 0 and a nonzero (hence invertible) coefficient on the
    linear `var` term; raises OrderError/ValueError otherwise.  The result
    is a jet in x alone of the same order, found degree by degree: with
    G = u*y + ..., adding c_d x^d to F changes the x^d coefficient of
    G(x, F) by u*c_d plus higher-order terms only.
    """
    if G.vars != VARS2:
        raise ValueError("implicit_solve expects a jet in x, y")
    if var != "y":
        raise ValueError("only the y unknown is supported")
    if not G.coeff((0, 0)).is_zero():
        raise ValueError("G must vanish at the origin")
    u = G.coeff((0, 1))
    if u.is_zero():
        raise ValueError("singular implicit equation: zero linear coefficient on y")
    n = G.order
    F = Poly.zero(VARS1)
    for d in range(1, n + 1):
        FJ = Jet(F.compose({}, VARS2), n)
        resid = G.compose({"y": FJ}, VARS2)
        c = resid.coeff((d, 0))
        if not c.is_zero():
            F = F - Poly.monomial(VARS1, (d,), c / u)
    FJ = Jet(F.compose({}, VARS2), n)
    resid = G.compose({"y": FJ}, VARS2)
    if not resid.poly.is_zero():
        raise AssertionError(f"implicit solve left a residual: {resid}")
    return Jet(F, n)


def divide_single(f: Poly, v: Poly) -> tuple:
    """Multivariate division of f by the single divisor v (graded lex).

    Returns (q, r) with f = q*v + r and no term of r divisible by the
    leading monomial of v.
    """
    if v.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f._check_vars(v)
    lead_e, lead_c = v.leading()
    q = Poly.zero(f.vars)
    r = Poly.zero(f.vars)
    work = f
    while not work.is_zero():
        e, c = work.leading()
        if all(a >= b for a, b in zip(e, lead_e)):
            m = tuple(a - b for a, b in zip(e, lead_e))
            t = Poly.monomial(f.vars, m, c / lead_c)
            q = q + t
            work = work - t * v
        else:
            t = Poly.monomial(f.vars, e, c)
            r = r + t
            work = work - t
    return q, r
