"""Exact scalar arithmetic: rational functions of parameters over Q.

Coefficients of every series in this package live in the field Q(p1,...,pk)
of rational functions in the declared parameter symbols.  A value is kept as
an unreduced fraction ``num/den`` of sparse integer-content-normalized
polynomials; equality is decided by cross-multiplication, which is exact and
needs no multivariate gcd.  Only cheap normalizations are applied after each
operation: rational content, a common monomial factor, and the sign of the
denominator's leading term.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

__all__ = ["PPoly", "Coef", "coef", "RESERVED_NAMES"]

RESERVED_NAMES = ("x", "y", "z")

# A monomial in the parameters: name -> positive exponent, stored as a tuple
# of (name, exp) pairs sorted by name so it can key a dict.
Mono = tuple


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


def _mono_gcd(a: Mono, b: Mono) -> Mono:
    if not a or not b:
        return ()
    db = dict(b)
    out = []
    for name, e in a:
        if name in db:
            out.append((name, min(e, db[name])))
    return tuple(out)


def _mono_div(a: Mono, b: Mono) -> Mono:
    """a / b, assuming b divides a."""
    if not b:
        return a
    db = dict(b)
    out = []
    for name, e in a:
        r = e - db.get(name, 0)
        if r < 0:
            raise ValueError("monomial does not divide")
        if r:
            out.append((name, r))
    return tuple(out)


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Mono, names: tuple) -> tuple:
    # graded lex over the sorted name universe
    d = dict(m)
    return (_mono_degree(m),) + tuple(d.get(n, 0) for n in names)


def _mono_str(m: Mono) -> str:
    parts = []
    for name, e in m:
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class PPoly:
    """Sparse polynomial in parameter symbols with Fraction coefficients.

    Internal building block for Coef; not part of the public API surface.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        self.terms: dict = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c) -> "PPoly":
        c = Fraction(c)
        return PPoly({(): c} if c else {})

    @staticmethod
    def var(name: str) -> "PPoly":
        if not name.isidentifier() or name in RESERVED_NAMES:
            raise ValueError(f"invalid parameter name {name!r}")
        return PPoly({((name, 1),): Fraction(1)})

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if self.is_const():
            return self.terms[()]
        raise ValueError("not a constant polynomial")

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def names(self) -> set:
        out = set()
        for m in self.terms:
            for name, _ in m:
                out.add(name)
        return out

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "PPoly") -> "PPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        r = PPoly()
        r.terms = out
        return r

    def __neg__(self) -> "PPoly":
        r = PPoly()
        r.terms = {m: -c for m, c in self.terms.items()}
        return r

    def __sub__(self, other: "PPoly") -> "PPoly":
        return self + (-other)

    def __mul__(self, other: "PPoly") -> "PPoly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        r = PPoly()
        r.terms = out
        return r

    def scale(self, c) -> "PPoly":
        c = Fraction(c)
        r = PPoly()
        if c:
            r.terms = {m: k * c for m, k in self.terms.items()}
        return r

    def __pow__(self, n: int) -> "PPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = PPoly.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other) -> bool:
        return isinstance(other, PPoly) and self.terms == other.terms

    __hash__ = None  # mutable dict inside

    # -- normal form helpers -------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-coefficient primitive."""
        if not self.terms:
            return Fraction(1)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def mono_content(self) -> Mono:
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return ()
        for m in it:
            if not g:
                return ()
            g = _mono_gcd(g, m)
        return g

    def div_mono(self, m: Mono) -> "PPoly":
        r = PPoly()
        r.terms = {_mono_div(k, m): c for k, c in self.terms.items()}
        return r

    def leading(self) -> tuple:
        """(mono, coeff) of the graded-lex leading term."""
        names = tuple(sorted(self.names()))
        m = max(self.terms, key=lambda k: _mono_key(k, names))
        return m, self.terms[m]

    # -- evaluation ----------------------------------------------------

    def subs(self, mapping: Mapping[str, "Coef"]) -> "Coef":
        out = Coef.zero()
        for m, c in self.terms.items():
            term = Coef.from_fraction(c)
            for name, e in m:
                if name in mapping:
                    term = term * (mapping[name] ** e)
                else:
                    term = term * (Coef.param(name) ** e)
            out = out + term
        return out

    # -- printing -------------------------------------------------------

    def sorted_terms(self) -> list:
        names = tuple(sorted(self.names()))
        return sorted(self.terms.items(),
                      key=lambda kv: _mono_key(kv[0], names), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            ms = _mono_str(m)
            if not ms:
                piece = str(c)
            elif c == 1:
                piece = ms
            elif c == -1:
                piece = "-" + ms
            else:
                piece = f"{c}*{ms}"
            if parts and not piece.startswith("-"):
                parts.append("+ " + piece)
            elif parts:
                parts.append("- " + piece[1:])
            else:
                parts.append(piece)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"PPoly({self})"


CoefLike = Union["Coef", PPoly, Fraction, int, str]


class Coef:
    """Element of the coefficient field Q(params), as an unreduced pair.

    Stored as num/den with den nonzero.  Equality cross-multiplies; no gcd
    reduction beyond rational content and a shared monomial factor, so the
    pair representing a value is not unique but zero testing is exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PPoly, den: PPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in coefficient")
        self.num = num
        self.den = den
        self._normalize()

    def _normalize(self) -> None:
        if self.num.is_zero():
            self.den = PPoly.const(1)
            return
        if self.den.is_const():
            c = self.den.const_value()
            if c != 1:
                self.num = self.num.scale(1 / c)
                self.den = PPoly.const(1)
            return
        cn = self.num.content()
        cd = self.den.content()
        c = cn / cd  # value = c * prim(num)/prim(den)
        num = self.num.scale(1 / cn)
        den = self.den.scale(1 / cd)
        g = _mono_gcd(num.mono_content(), den.mono_content())
        if g:
            num = num.div_mono(g)
            den = den.div_mono(g)
        if den.is_const():  # the monomial cancel may trivialize the denominator
            num = num.scale(c / den.const_value())
            den = PPoly.const(1)
        else:
            num = num.scale(Fraction(c.numerator))
            den = den.scale(Fraction(c.denominator))
            _, lead = den.leading()
            if lead < 0:
                num = -num
                den = -den
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "Coef":
        return Coef(PPoly(), PPoly.const(1))

    @staticmethod
    def one() -> "Coef":
        return Coef(PPoly.const(1), PPoly.const(1))

    @staticmethod
    def from_fraction(c) -> "Coef":
        return Coef(PPoly.const(Fraction(c)), PPoly.const(1))

    @staticmethod
    def param(name: str) -> "Coef":
        return Coef(PPoly.var(name), PPoly.const(1))

    @staticmethod
    def of(v: CoefLike) -> "Coef":
        if isinstance(v, Coef):
            return v
        if isinstance(v, PPoly):
            return Coef(v, PPoly.const(1))
        if isinstance(v, str):
            return Coef.param(v)
        return Coef.from_fraction(v)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def as_fraction(self):
        """The value as a Fraction if parameter-free, else None."""
        if self.is_const():
            return self.num.const_value() / self.den.const_value()
        return None

    def sign(self):
        """+1/-1/0 for parameter-free values, None when undecidable."""
        f = self.as_fraction()
        if f is None:
            return None
        return (f > 0) - (f < 0)

    def params(self) -> set:
        return self.num.names() | self.den.names()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Coef":
        other = Coef.of(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return Coef(self.num + other.num, self.den)
        if self.den.is_monomial() and other.den.is_monomial():
            (m1, c1), = self.den.terms.items()
            (m2, c2), = other.den.terms.items()
            lcm_m = _mono_div(_mono_mul(m1, m2), _mono_gcd(m1, m2))
            f1 = PPoly({_mono_div(lcm_m, m1): 1 / c1})
            f2 = PPoly({_mono_div(lcm_m, m2): 1 / c2})
            return Coef(self.num * f1 + other.num * f2, PPoly({lcm_m: Fraction(1)}))
        return Coef(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Coef":
        r = Coef.__new__(Coef)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other) -> "Coef":
        return self + (-Coef.of(other))

    def __rsub__(self, other) -> "Coef":
        return Coef.of(other) + (-self)

    def __mul__(self, other) -> "Coef":
        other = Coef.of(other)
        if self.is_zero() or other.is_zero():
            return Coef.zero()
        return Coef(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "Coef":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero coefficient")
        return Coef(self.den, self.num)

    def __truediv__(self, other) -> "Coef":
        return self * Coef.of(other).inv()

    def __rtruediv__(self, other) -> "Coef":
        return Coef.of(other) * self.inv()

    def __pow__(self, n: int) -> "Coef":
        if n < 0:
            return self.inv() ** (-n)
        return Coef(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        if other is None or other is NotImplemented:
            return NotImplemented
        try:
            other = Coef.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None  # cross-multiplied equality is incompatible with hashing

    # -- substitution -----------------------------------------------------

    def subs(self, mapping: Mapping[str, CoefLike]) -> "Coef":
        """Substitute parameter values/expressions; exact."""
        mp = {k: Coef.of(v) for k, v in mapping.items()}
        n = self.num.subs(mp)
        d = self.den.subs(mp)
        if d.is_zero():
            raise ZeroDivisionError("substitution makes a denominator vanish")
        return n / d

    def eval(self, mapping: Mapping[str, Fraction]) -> Fraction:
        v = self.subs(mapping).as_fraction()
        if v is None:
            missing = sorted(self.params() - set(mapping))
            raise ValueError(f"unbound parameters in evaluation: {missing}")
        return v

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        ns = str(self.num)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        ds = str(self.den)
        if len(self.den.terms) > 1 or (self.den.is_monomial() and not self.den.is_const()
                                       and self.den.leading()[1] != 1):
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self) -> str:
        return f"Coef({self})"


def coef(v: CoefLike) -> Coef:
    """Convenience coercion: int/Fraction/param-name/Coef -> Coef."""
    return Coef.of(v)
