"""Catalogue of canonical representatives for the nine cases, with the
expected classification of each, and seeded random point transforms that
keep the representatives inside the normal-form fragment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .expr.ratfunc import RatFunc
from .fields import Equation
from .transform import PointTransform

F = Fraction

# x^(1/4) must stay a monomial root, so radical forms only see these scalings
_FOURTH_POWERS = (F(1, 16), F(16), F(81), F(1, 81), F(625, 16))


@dataclass(frozen=True)
class CanonicalForm:
    name: str
    case_id: str
    dimension: int
    P: str = "0"
    Q: str = "0"
    R: str = "0"
    S: str = "0"
    functions: tuple = ()
    subcase: str | None = None
    structure: str = ""
    primary: bool = False  # the representative of its case
    radical: bool = False  # coefficients contain x^(1/4)

    def equation(self) -> Equation:
        return Equation.from_strings(P=self.P, Q=self.Q, R=self.R, S=self.S,
                                     functions=self.functions)


_CASE2_S = "sigma(y)*x^(5/4) - 4*s(y)*x + (4/3)*x^2 - 12*r(y)*x^(3/4) - 4*x^(1/2)"
_CASE3_S = "sigma(y)*x^(5/4) - 4*s(y)*x + (4/3)*x^2"
_CASE4_S = "sigma(y)*x^(5/4) + (4/3)*x^2"
_Q45 = "-5/(12*x)"


def _constant(text: str, values: dict) -> str:
    for name, v in values.items():
        text = text.replace(f"{name}(y)", f"({v})")
    return text


CATALOGUE = (
    CanonicalForm("trivial", "maximal_degeneration", 8, primary=True,
                  structure="sl(3,R), point-equivalent to y''=0"),
    CanonicalForm("general_dim0", "general_position", 0,
                  P="x*y", Q="x^2", R="y", S="1+x", subcase="independent"),
    CanonicalForm("general_dim1", "general_position", 1, P="x", S="x^2",
                  subcase="dependent_nonconstant"),
    CanonicalForm("general_dim2", "general_position", 2, P="1/x", S="1/x",
                  subcase="all_constant", primary=True),
    CanonicalForm("case1_dim0", "intermediate_1", 0, Q="1", R="y", S="x/3",
                  subcase="independent"),
    CanonicalForm("case1_dim1", "intermediate_1", 1, Q="1", S="x/3",
                  subcase="dependent_nonconstant", primary=True),
    CanonicalForm("case1_dim2", "intermediate_1", 2, Q="1/x", S="1/x",
                  subcase="all_constant", structure="non-Abelian"),
    CanonicalForm("case2", "intermediate_2", 0, Q=_Q45, R="r(y) + x^(-1/4)", S=_CASE2_S,
                  functions=("r", "s", "sigma"), primary=True, radical=True),
    CanonicalForm("case2_const", "intermediate_2", 1, Q=_Q45, R="1 + x^(-1/4)",
                  S=_constant(_CASE2_S, {"sigma": 1, "s": 1, "r": 1}), radical=True),
    CanonicalForm("case3", "intermediate_3", 0, Q=_Q45, R="1", S=_CASE3_S,
                  functions=("s", "sigma"), primary=True, radical=True),
    CanonicalForm("case3_const", "intermediate_3", 1, Q=_Q45, R="1",
                  S=_constant(_CASE3_S, {"sigma": 1, "s": 2}), radical=True),
    CanonicalForm("case4", "intermediate_4", 0, Q=_Q45, S=_CASE4_S,
                  functions=("sigma",), primary=True, radical=True),
    CanonicalForm("case4_const", "intermediate_4", 1, Q=_Q45,
                  S=_constant(_CASE4_S, {"sigma": 2}), radical=True),
    CanonicalForm("case5", "intermediate_5", 3, Q=_Q45, S="(4/3)*x^2",
                  structure="sl(2,R)", primary=True),
    CanonicalForm("case6", "intermediate_6", 0, R="x",
                  S="x^3 + x^2/2 + sigma(y)*x + s(y)", functions=("s", "sigma"),
                  primary=True),
    CanonicalForm("case6_const", "intermediate_6", 1, R="x", S="x^3 + x^2/2 + 2*x + 1"),
    CanonicalForm("case7", "intermediate_7", 0, S="x^2/2 + s(y)", functions=("s",),
                  primary=True),
    CanonicalForm("case7_const", "intermediate_7", 1, S="x^2/2 + 1"),
    CanonicalForm("case7_zero", "intermediate_7", 2, S="x^2/2", structure="non-Abelian"),
)


def by_name(name: str) -> CanonicalForm:
    for form in CATALOGUE:
        if form.name == name:
            return form
    raise KeyError(name)


def primaries() -> list:
    return [f for f in CATALOGUE if f.primary]


# -- random transforms -------------------------------------------------------------

def _rand_q(rng: random.Random, lo=-3, hi=3, nonzero=False) -> Fraction:
    while True:
        q = F(rng.randint(lo, hi), rng.choice((1, 2, 3)))
        if q or not nonzero:
            return q


def _rand_poly_y(rng: random.Random, degree=2) -> RatFunc:
    y = RatFunc.var("y")
    return sum((RatFunc.const(_rand_q(rng)) * y ** k for k in range(degree + 1)),
               RatFunc.const(0))


def radical_transform(rng: random.Random, scale_y: bool) -> PointTransform:
    """x~ = x / (c y^(4k)), y~ = b y with c a fourth power."""
    x, y = RatFunc.var("x"), RatFunc.var("y")
    c = rng.choice(_FOURTH_POWERS)
    k = rng.choice((-1, 0, 1))
    b = F(rng.choice((1, 2, 3)), rng.choice((1, 2))) if scale_y else F(1)
    xt = x * y ** (-4 * k) / c
    yt = y * b
    inv_y = y / b
    inv_x = x * inv_y ** (4 * k) * c
    return PointTransform(xt, yt, (inv_x, inv_y)).checked()


def fiber_transform(rng: random.Random) -> PointTransform:
    """x~ = a x + p(y), y~ = y; keeps functions of y intact."""
    x, y = RatFunc.var("x"), RatFunc.var("y")
    a = _rand_q(rng, 1, 4, nonzero=True)
    p = _rand_poly_y(rng)
    return PointTransform(x * a + p, y).checked()


def triangular_transform(rng: random.Random) -> PointTransform:
    """x~ = (a + y^2) x + p(y), y~ = c y + e, with non-constant Jacobian."""
    x, y = RatFunc.var("x"), RatFunc.var("y")
    a = _rand_q(rng, 1, 4, nonzero=True)
    c = _rand_q(rng, -3, 3, nonzero=True)
    e = _rand_q(rng)
    p = _rand_poly_y(rng)
    return PointTransform((y ** 2 + a) * x + p, y * c + e).checked()


def random_transform(form: CanonicalForm, rng: random.Random) -> PointTransform:
    """A transform from the widest family the form's coefficients allow."""
    if form.radical:
        return radical_transform(rng, scale_y=not form.functions)
    if form.functions:
        return fiber_transform(rng)
    return triangular_transform(rng)
