"""System input/output: the model types, the .sys grammar, frame changes.

A system file declares parameters, an optional working order, and the three
equations of an analytic system with a nilpotent-on-the-center-part linear
frame:

    params a, d;
    order 12;
    dx = y - x*z + (1/a)*y*z;
    dy = -a*x*z + y*z;
    dz = -2*a*z + x^2 - (1/a)*x*y;

The right-hand sides are polynomials in x, y, z over rational literals and
the declared parameters ("/" is allowed when the divisor is free of x, y, z;
a symbolic divisor records a nonvanishing side condition).  The linear part
must be exactly (y, 0, -lambda z) with lambda nonzero; anything else is
rejected with a pointed diagnostic rather than repaired.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .rational import Coef, CoefLike, PPoly, RESERVED_NAMES
from .series import Jet, OrderError, Poly, VARS2, VARS3

__all__ = [
    "ParseError", "ValidationError", "FrameError",
    "SideCondition", "SideConditionSet",
    "SystemModel", "PlanarSystem",
    "parse_system", "print_system", "parse_expression",
    "parse_numeric_bindings", "parse_assumption",
    "substitute_params", "bring_to_nilpotent_frame", "translate_equilibrium",
    "mat_inv", "mat_vec",
]

DEFAULT_ORDER = 12


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line else ""
        super().__init__(f"{msg}{where}")


class ValidationError(ValueError):
    pass


class JetBoundError(ValidationError):
    """The requested conclusion needs a higher working order."""


class FrameError(ValueError):
    pass


# ---------------------------------------------------------------------------
# side conditions


def _condition_poly(expr: Coef, keep_sign: bool) -> PPoly:
    """Canonical polynomial carrying the condition on a field element.

    For n/d the relations "== 0"/"!= 0" depend only on n, and the sign
    equals the sign of n*d; positive rational content never matters.
    """
    p = expr.num if not keep_sign else expr.num * expr.den
    c = p.content()
    if c not in (0, 1):
        p = p.scale(1 / c)
    if not keep_sign and not p.is_zero():
        _, lead = p.leading()
        if lead < 0:
            p = -p
    return p


@dataclass(frozen=True)
class SideCondition:
    """A genericity requirement `poly rel 0` attached to a result."""
    poly: PPoly
    rel: str  # "!=0", "<0", ">0"
    source: str = ""

    @staticmethod
    def make(expr: CoefLike, rel: str, source: str = "") -> "SideCondition":
        if rel not in ("!=0", "<0", ">0"):
            raise ValueError(f"bad relation {rel!r}")
        expr = Coef.of(expr)
        return SideCondition(_condition_poly(expr, rel != "!=0"), rel, source)

    def is_trivial(self) -> bool:
        """Constant conditions that hold are trivial; None if violated."""
        if not self.poly.is_const():
            return False
        v = self.poly.const_value()
        ok = v != 0 if self.rel == "!=0" else (v < 0 if self.rel == "<0" else v > 0)
        return ok

    def evaluate(self, values: Mapping[str, Fraction]):
        """True/False under a full numeric binding, None if params remain."""
        c = self.poly.subs({k: Coef.from_fraction(v) for k, v in values.items()})
        f = c.as_fraction()
        if f is None:
            return None
        return f != 0 if self.rel == "!=0" else (f < 0 if self.rel == "<0" else f > 0)

    def __str__(self) -> str:
        rel = {"!=0": "!= 0", "<0": "< 0", ">0": "> 0"}[self.rel]
        return f"{self.poly} {rel}"


class SideConditionSet:
    """Deduplicated list of side conditions, in first-seen order."""

    def __init__(self, items: Iterable[SideCondition] = ()):
        self.items: list = []
        for it in items:
            self.add(it)

    def add(self, cond: SideCondition) -> None:
        if cond.poly.is_const():
            if cond.is_trivial():
                return
            raise ValidationError(f"side condition is violated: {cond}")
        for it in self.items:
            if it.rel == cond.rel and it.poly == cond.poly:
                return
        self.items.append(cond)

    def require(self, expr: CoefLike, rel: str, source: str = "") -> None:
        self.add(SideCondition.make(expr, rel, source))

    def merged(self, other: "SideConditionSet") -> "SideConditionSet":
        out = SideConditionSet(self.items)
        for it in other.items:
            out.add(it)
        return out

    def substituted(self, mapping: Mapping[str, CoefLike]) -> "SideConditionSet":
        """Push a parameter substitution through; violated constants raise."""
        out = SideConditionSet()
        mp = {k: Coef.of(v) for k, v in mapping.items()}
        for it in self.items:
            expr = it.poly.subs(mp)
            out.add(SideCondition.make(expr, it.rel, it.source))
        return out

    def copy(self) -> "SideConditionSet":
        return SideConditionSet(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "; ".join(str(it) for it in self.items) if self.items else "(none)"

    def decide_sign(self, expr: Coef, assumptions: "SideConditionSet | None" = None):
        """Sign of expr: exact for constants, via assumptions otherwise.

        Returns +1, -1, 0, or None.  Symbolic matching is deliberately
        structural: the signed condition polynomial of expr must equal an
        assumed one up to negation.
        """
        s = expr.sign()
        if s is not None:
            return s
        pool = list(self.items) + (list(assumptions.items) if assumptions else [])
        target = _condition_poly(expr, keep_sign=True)
        for it in pool:
            if it.rel not in ("<0", ">0"):
                continue
            want = 1 if it.rel == ">0" else -1
            if it.poly == target:
                return want
            if it.poly == -target:
                return -want
        return None


# ---------------------------------------------------------------------------
# model types


class SystemModel:
    """x' = y + P, y' = Q, z' = -lambda z + R with exact polynomial data.

    P, Q, R are stored as exact polynomials (the input grammar only admits
    polynomials), `order` is the declared default working order for jets
    derived from them.
    """

    def __init__(self, params: Sequence[str], lam: CoefLike,
                 P: Poly, Q: Poly, R: Poly, order: int = DEFAULT_ORDER,
                 conditions: SideConditionSet | None = None,
                 assumptions: SideConditionSet | None = None):
        self.params = tuple(params)
        self.lam = Coef.of(lam)
        self.P, self.Q, self.R = P, Q, R
        self.order = int(order)
        self.conditions = conditions if conditions is not None else SideConditionSet()
        self.assumptions = assumptions if assumptions is not None else SideConditionSet()
        if self.order < 2:
            raise ValidationError("working order must be at least 2")
        for nm, f in (("P", P), ("Q", Q), ("R", R)):
            if f.vars != VARS3:
                raise ValidationError(f"{nm} must be a polynomial in x, y, z")
            if not f.is_zero() and f.valuation() < 2:
                raise ValidationError(f"{nm} must have valuation >= 2 (nonlinear part only)")
            if f.degree() > self.order:
                raise ValidationError(
                    f"{nm} has a degree-{f.degree()} monomial beyond the declared order {self.order}")
        if self.lam.is_zero():
            raise ValidationError("lambda must be nonzero")
        if self.lam.as_fraction() is None:
            self.conditions.require(self.lam, "!=0", "lambda")

    def is_numeric(self) -> bool:
        return not self.params

    def field_polys(self) -> tuple:
        """(dx, dy, dz) as exact polynomials, linear part included."""
        y = Poly.var(VARS3, "y")
        z = Poly.var(VARS3, "z")
        return (y + self.P, self.Q, z.scale(-self.lam) + self.R)

    def PJ(self, order: int | None = None) -> Jet:
        return Jet.of(self.P, order or self.order)

    def QJ(self, order: int | None = None) -> Jet:
        return Jet.of(self.Q, order or self.order)

    def RJ(self, order: int | None = None) -> Jet:
        return Jet.of(self.R, order or self.order)

    def __repr__(self) -> str:
        return f"SystemModel(params={self.params}, lam={self.lam}, order={self.order})"


class PlanarSystem:
    """x' = y + X2, y' = Y2 on the center manifold, as jets."""

    def __init__(self, X2: Jet, Y2: Jet, conditions: SideConditionSet | None = None,
                 assumptions: SideConditionSet | None = None):
        if X2.vars != VARS2 or Y2.vars != VARS2:
            raise ValidationError("planar system expects jets in x, y")
        for nm, j in (("X2", X2), ("Y2", Y2)):
            if not j.is_zero() and j.valuation() < 2:
                raise ValidationError(f"{nm} must have valuation >= 2")
        self.X2, self.Y2 = X2, Y2
        self.order = min(X2.order, Y2.order)
        self.conditions = conditions if conditions is not None else SideConditionSet()
        self.assumptions = assumptions if assumptions is not None else SideConditionSet()

    def divergence(self) -> Jet:
        return self.X2.partial("x") + self.Y2.partial("y")

    def __repr__(self) -> str:
        return f"PlanarSystem(order={self.order})"


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^();=,])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        i = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _ExprParser:
    """Recursive-descent parser producing Poly values over VARS3.

    Division requires a divisor free of x, y, z; symbolic divisors add a
    "!= 0" side condition.  Powers take literal nonnegative integers.
    """

    def __init__(self, toks: list, params: Sequence[str],
                 conditions: SideConditionSet, allow_vars: bool = True):
        self.toks = toks
        self.i = 0
        self.params = set(params)
        self.conditions = conditions
        self.allow_vars = allow_vars

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Tok:
        t = self.next()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}, found {t.text!r}", t.line, t.col)
        return t

    def parse_expr(self) -> Poly:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            v = self.parse_term()
            if t.text == "-":
                v = -v
        else:
            v = self.parse_term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                rhs = self.parse_term()
                v = v + rhs if t.text == "+" else v - rhs
            else:
                return v

    def parse_term(self) -> Poly:
        v = self.parse_factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.next()
                rhs = self.parse_factor()
                if t.text == "*":
                    v = v * rhs
                else:
                    if any(any(e) for e in rhs.terms):
                        raise ParseError(
                            "division by an expression involving x, y, or z",
                            t.line, t.col)
                    c = rhs.coeff((0,) * len(rhs.vars))
                    if c.is_zero():
                        raise ParseError("division by zero", t.line, t.col)
                    if c.as_fraction() is None:
                        self.conditions.require(c, "!=0", "divisor")
                    v = v.scale(c.inv())
            else:
                return v

    def parse_factor(self) -> Poly:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            v = self.parse_factor()
            return -v if t.text == "-" else v
        v = self.parse_base()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.next()
            if e.kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal",
                                 e.line, e.col)
            v = v ** int(e.text)
        return v

    def parse_base(self) -> Poly:
        t = self.next()
        if t.kind == "num":
            return Poly.const(VARS3, Fraction(int(t.text)))
        if t.kind == "ident":
            if t.text in VARS3:
                if not self.allow_vars:
                    raise ParseError(f"{t.text!r} not allowed here", t.line, t.col)
                return Poly.var(VARS3, t.text)
            if t.text in self.params:
                return Poly.const(VARS3, Coef.param(t.text))
            raise ParseError(f"undeclared identifier {t.text!r}", t.line, t.col)
        if t.kind == "op" and t.text == "(":
            v = self.parse_expr()
            self.expect_op(")")
            return v
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)


def parse_expression(text: str, params: Sequence[str],
                     conditions: SideConditionSet | None = None,
                     allow_vars: bool = True) -> Poly:
    """Parse a single expression (used by --bind/--assume and tests)."""
    conditions = conditions if conditions is not None else SideConditionSet()
    toks = _tokenize(text)
    p = _ExprParser(toks, params, conditions, allow_vars)
    v = p.parse_expr()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return v


def parse_system(text: str, default_order: int = DEFAULT_ORDER) -> SystemModel:
    toks = _tokenize(text)
    i = 0

    def peek() -> _Tok:
        return toks[i]

    params: list = []
    order = default_order
    if peek().kind == "ident" and peek().text == "params":
        i += 1
        while True:
            t = toks[i]; i += 1
            if t.kind != "ident":
                raise ParseError("expected parameter name", t.line, t.col)
            if t.text in RESERVED_NAMES:
                raise ParseError(f"{t.text!r} is a phase variable, not a parameter",
                                 t.line, t.col)
            if t.text in params:
                raise ParseError(f"duplicate parameter {t.text!r}", t.line, t.col)
            params.append(t.text)
            t = toks[i]; i += 1
            if t.kind == "op" and t.text == ",":
                continue
            if t.kind == "op" and t.text == ";":
                break
            raise ParseError("expected ',' or ';' in params header", t.line, t.col)
    if peek().kind == "ident" and peek().text == "order":
        i += 1
        t = toks[i]; i += 1
        if t.kind != "num":
            raise ParseError("expected integer after 'order'", t.line, t.col)
        order = int(t.text)
        t = toks[i]; i += 1
        if not (t.kind == "op" and t.text == ";"):
            raise ParseError("expected ';' after order", t.line, t.col)

    conditions = SideConditionSet()
    eqns: dict = {}
    while peek().kind != "eof":
        t = toks[i]; i += 1
        if t.kind != "ident" or t.text not in ("dx", "dy", "dz"):
            raise ParseError(f"expected dx/dy/dz, found {t.text!r}", t.line, t.col)
        name = t.text
        if name in eqns:
            raise ParseError(f"duplicate equation for {name}", t.line, t.col)
        t = toks[i]; i += 1
        if not (t.kind == "op" and t.text == "="):
            raise ParseError("expected '='", t.line, t.col)
        ep = _ExprParser(toks, params, conditions)
        ep.i = i
        rhs = ep.parse_expr()
        i = ep.i
        t = toks[i]; i += 1
        if not (t.kind == "op" and t.text == ";"):
            raise ParseError("expected ';' after equation", t.line, t.col)
        eqns[name] = rhs
    for name in ("dx", "dy", "dz"):
        if name not in eqns:
            raise ParseError(f"missing equation for {name}")

    return _model_from_fields(eqns["dx"], eqns["dy"], eqns["dz"],
                              params, order, conditions)


def _model_from_fields(fx: Poly, fy: Poly, fz: Poly, params: Sequence[str],
                       order: int, conditions: SideConditionSet) -> SystemModel:
    """Validate the linear frame and split off nonlinearities."""
    zero3 = (0, 0, 0)
    lin = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}

    def check_zero(p: Poly, exps: tuple, what: str) -> None:
        if not p.coeff(exps).is_zero():
            raise ValidationError(
                f"linear frame violation: {what} must vanish "
                f"(found {p.coeff(exps)})")

    for nm, p in (("dx", fx), ("dy", fy), ("dz", fz)):
        if not p.coeff(zero3).is_zero():
            raise ValidationError(f"{nm} has a constant term; origin must be an equilibrium")
    check_zero(fx, lin["x"], "the x coefficient of dx")
    check_zero(fx, lin["z"], "the z coefficient of dx")
    cy = fx.coeff(lin["y"])
    if not (cy == Coef.one()):
        raise ValidationError(
            f"linear frame violation: dx must have linear part exactly y (found {cy}*y)")
    for v in ("x", "y", "z"):
        check_zero(fy, lin[v], f"the {v} coefficient of dy")
    check_zero(fz, lin["x"], "the x coefficient of dz")
    check_zero(fz, lin["y"], "the y coefficient of dz")
    lamc = -fz.coeff(lin["z"])
    if lamc.is_zero():
        raise ValidationError("dz must carry a nonzero linear term in z (lambda = 0)")

    y = Poly.var(VARS3, "y")
    z = Poly.var(VARS3, "z")
    P = fx - y
    Q = fy
    R = fz + z.scale(lamc)
    return SystemModel(params, lamc, P, Q, R, order, conditions)


# ---------------------------------------------------------------------------
# printing

def print_system(S: SystemModel) -> str:
    lines = []
    if S.params:
        lines.append("params " + ", ".join(S.params) + ";")
    lines.append(f"order {S.order};")
    fx, fy, fz = S.field_polys()
    lines.append(f"dx = {fx};")
    lines.append(f"dy = {fy};")
    lines.append(f"dz = {fz};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parameter substitution

def substitute_params(S: SystemModel, mapping: Mapping[str, CoefLike]) -> SystemModel:
    """Exact parameter substitution (rational values or expressions).

    Conditions recorded so far are pushed through; a substitution that
    violates one (e.g. lambda = 0) raises ValidationError.
    """
    mp = {k: Coef.of(v) for k, v in mapping.items()}
    unknown = set(mp) - set(S.params)
    if unknown:
        raise ValidationError(f"not parameters of the system: {sorted(unknown)}")
    # conditions first, so a violated genericity requirement gives a clear
    # diagnostic instead of a division error inside the coefficients
    conds = S.conditions.substituted(mp)
    assume = S.assumptions.substituted(mp)
    try:
        lam = S.lam.subs(mp)
        P = S.P.subs_params(mp)
        Q = S.Q.subs_params(mp)
        R = S.R.subs_params(mp)
    except ZeroDivisionError as e:
        raise ValidationError(str(e))
    new_params = set()
    for p in (P, Q, R):
        for c in p.terms.values():
            new_params |= c.params()
    new_params |= lam.params()
    kept = [p for p in S.params if p not in mp]
    extra = sorted(new_params - set(kept))
    return SystemModel(kept + extra, lam, P, Q, R, S.order, conds, assume)


def parse_numeric_bindings(spec: str) -> dict:
    """"a=1,d=-2/3" -> {"a": Fraction(1), "d": Fraction(-2,3)}."""
    out: dict = {}
    if not spec.strip():
        return out
    for chunk in spec.split(","):
        if "=" not in chunk:
            raise ParseError(f"bad binding {chunk!r} (expected name=value)")
        name, val = chunk.split("=", 1)
        name = name.strip()
        val = val.strip()
        m = re.fullmatch(r"([+-]?\d+)\s*(?:/\s*(\d+))?", val)
        if not name.isidentifier() or not m:
            raise ParseError(f"bad binding {chunk!r} (expected name=p or name=p/q)")
        out[name] = Fraction(int(m.group(1)), int(m.group(2) or 1))
    return out


def parse_assumption(text: str, params: Sequence[str]) -> SideCondition:
    """Parse "expr<0", "expr>0", or "expr!=0" over the parameters."""
    for rel in ("!=", "<", ">"):
        k = text.find(rel)
        if k >= 0:
            lhs, rhs = text[:k], text[k + len(rel):]
            if rhs.strip() != "0":
                raise ParseError("assumptions must compare against 0")
            p = parse_expression(lhs, params, allow_vars=False)
            c = p.coeff((0, 0, 0))
            return SideCondition.make(c, rel + "0" if rel != "!=" else "!=0",
                                      source="assume")
    raise ParseError(f"no relation in assumption {text!r}")


# ---------------------------------------------------------------------------
# linear frame changes

Mat3 = tuple  # 3x3 tuple of tuples of Coef


def _mat_of(m) -> Mat3:
    return tuple(tuple(Coef.of(v) for v in row) for row in m)


def mat_vec(m: Mat3, vec: Sequence[Poly]) -> list:
    out = []
    for row in m:
        acc = Poly.zero(vec[0].vars)
        for c, p in zip(row, vec):
            acc = acc + p.scale(c)
        out.append(acc)
    return out


def mat_inv(m: Mat3, conditions: SideConditionSet | None = None) -> Mat3:
    """Adjugate inverse; symbolic determinants record a != 0 condition."""
    m = _mat_of(m)
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, k = m[2]
    det = a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)
    if det.is_zero():
        raise FrameError("linear change is singular")
    if det.as_fraction() is None and conditions is not None:
        conditions.require(det, "!=0", "change determinant")
    adj = (
        (e * k - f * h, c * h - b * k, b * f - c * e),
        (f * g - d * k, a * k - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )
    return tuple(tuple(v / det for v in row) for row in adj)


def translate_equilibrium(fields: Sequence[Poly], point: Mapping[str, CoefLike]) -> list:
    """Move an equilibrium at `point` to the origin (exact Taylor shift)."""
    shift = {v: Poly.var(VARS3, v) + Poly.const(VARS3, Coef.of(point[v]))
             for v in point}
    moved = [f.compose(shift, VARS3) for f in fields]
    for nm, f in zip(("dx", "dy", "dz"), moved):
        if not f.coeff((0, 0, 0)).is_zero():
            raise FrameError(
                f"given point is not an equilibrium: {nm}(point) = {f.coeff((0,0,0))}")
    return moved


def bring_to_nilpotent_frame(fields: Sequence[Poly], change,
                             direction: str = "new_from_old",
                             params: Sequence[str] = (),
                             order: int = DEFAULT_ORDER) -> SystemModel:
    """Apply a user-supplied linear change and verify the resulting frame.

    `fields` are the exact field components (linear part included) in the
    original variables; `change` is a 3x3 matrix over Q(params).  With
    direction="new_from_old" the rows of `change` express the new
    coordinates in terms of the old ones; "old_from_new" supplies the
    substitution matrix directly.  The change is verified, never searched
    for: a wrong matrix fails with a frame diagnostic.
    """
    if direction not in ("new_from_old", "old_from_new"):
        raise ValueError("direction must be 'new_from_old' or 'old_from_new'")
    conditions = SideConditionSet()
    M = _mat_of(change)
    if direction == "new_from_old":
        C = M
        B = mat_inv(M, conditions)
    else:
        B = M
        C = mat_inv(M, conditions)

    fields = list(fields)
    if len(fields) != 3 or any(f.vars != VARS3 for f in fields):
        raise FrameError("expected three field components in x, y, z")

    # precondition: the linear part must have characteristic polynomial
    # t^2 (t + lambda): both the determinant and the second elementary
    # symmetric function of the Jacobian vanish
    J = [[fields[r].coeff(tuple(1 if q == c else 0 for q in range(3)))
          for c in range(3)] for r in range(3)]
    tr = J[0][0] + J[1][1] + J[2][2]
    m2 = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) \
        + (J[0][0] * J[2][2] - J[0][2] * J[2][0]) \
        + (J[1][1] * J[2][2] - J[1][2] * J[2][1])
    det = (J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
           - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
           + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]))
    if not det.is_zero() or not m2.is_zero():
        raise FrameError(
            "linear part is not of nilpotent-center type: characteristic "
            f"polynomial is not t^2(t + lambda) (sum of 2-minors {m2}, det {det})")

    old_in_new = mat_vec(B, [Poly.var(VARS3, v) for v in VARS3])
    sub = dict(zip(VARS3, old_in_new))
    composed = [f.compose(sub, VARS3) for f in fields]
    new_fields = mat_vec(C, composed)

    model = _model_from_fields(new_fields[0], new_fields[1], new_fields[2],
                               params, order, conditions)
    return model
