"""Shared helpers for the test suite: data loading, random model
generation, and a sympy bridge used as an independent oracle."""

from fractions import Fraction
from pathlib import Path
import random

import sympy as sp

from nilcenter import Coef, Jet, Poly, SystemModel, parse_system
from nilcenter.series import VARS1, VARS2, VARS3

DATA = Path(__file__).parent / "data"


def load(name: str) -> SystemModel:
    return parse_system(source(name))


def source(name: str) -> str:
    if not name.endswith(".sys"):
        name += ".sys"
    return (DATA / name).read_text()


# ---------------------------------------------------------------------------
# random generation (plain `random`, seeded per test for reproducibility)


def rand_fraction(rng: random.Random, span: int = 6) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def rand_poly(rng: random.Random, vars: tuple, deg: int, val: int = 2,
              density: float = 0.5) -> Poly:
    terms = {}
    from nilcenter.series import monomials
    for d in range(val, deg + 1):
        for e in monomials(len(vars), d):
            if rng.random() < density:
                c = rand_fraction(rng)
                if c:
                    terms[e] = Coef.from_fraction(c)
    return Poly(vars, terms)


def rand_system(rng: random.Random, deg: int = 4, order: int = 10,
                lam: Fraction | None = None) -> SystemModel:
    """Random fully numeric model in the nilpotent frame."""
    if lam is None:
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    P = rand_poly(rng, VARS3, deg)
    Q = rand_poly(rng, VARS3, deg)
    R = rand_poly(rng, VARS3, deg)
    return SystemModel((), lam, P, Q, R, order)


def rand_resonant_system(rng: random.Random, deg: int = 6,
                         order: int = 10) -> SystemModel:
    """Random system already in the resonant target shape."""
    x = Poly.var(VARS3, "x")
    y = Poly.var(VARS3, "y")
    z = Poly.var(VARS3, "z")

    def one_var(val: int) -> Poly:
        t = {}
        for d in range(val, deg):
            c = rand_fraction(rng, 3)
            if c and rng.random() < 0.6:
                t[(d, 0, 0)] = Coef.from_fraction(c)
        return Poly(VARS3, t)

    p1 = one_var(1)
    q2 = one_var(2)
    r1 = one_var(1)
    lam = Fraction(rng.randint(1, 4))
    return SystemModel((), lam, x * p1, q2 + y * p1, z * r1, order)


# ---------------------------------------------------------------------------
# sympy bridge


def coef_to_sympy(c: Coef):
    def side(pp):
        acc = sp.Integer(0)
        for mono, q in pp.terms.items():
            t = sp.Rational(q)
            for name, e in mono:
                t *= sp.Symbol(name) ** e
            acc += t
        return acc
    return side(c.num) / side(c.den)


def poly_to_sympy(p: Poly, syms: dict | None = None):
    if syms is None:
        syms = {v: sp.Symbol(v) for v in p.vars}
    acc = sp.Integer(0)
    for e, c in p.terms.items():
        t = coef_to_sympy(c)
        for v, k in zip(p.vars, e):
            t *= syms[v] ** k
        acc += t
    return sp.expand(acc)


def jet_to_sympy(j: Jet, syms: dict | None = None):
    return poly_to_sympy(j.poly, syms)


def sympy_zero(expr) -> bool:
    return sp.simplify(sp.together(expr)) == 0
