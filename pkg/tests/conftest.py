"""Shared fixtures: seeded random equations and transforms."""

from __future__ import annotations

import random
import sys
from fractions import Fraction

import pytest

from pointequiv.canonical import by_name
from pointequiv.expr.ratfunc import RatFunc
from pointequiv.fields import BaseFields, Equation
from pointequiv.transform import PointTransform, apply

F = Fraction


def rand_q(rng, lo=-3, hi=3, nonzero=False):
    while True:
        q = F(rng.randint(lo, hi), rng.choice((1, 2)))
        if q or not nonzero:
            return q


def rand_poly(rng, degree=1, density=0.7):
    """Random polynomial in x, y of total degree at most ``degree``."""
    x, y = RatFunc.var("x"), RatFunc.var("y")
    out = RatFunc.const(0)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            if rng.random() < density:
                out = out + RatFunc.const(rand_q(rng)) * x ** i * y ** j
    return out


def random_equation(seed, degree=1) -> Equation:
    """Random polynomial coefficients, redrawn until F^5 does not vanish."""
    rng = random.Random(seed)
    while True:
        eq = Equation(*(rand_poly(rng, degree) for _ in range(4)))
        if BaseFields(eq).general_position:
            return eq


def affine_mix(rng) -> PointTransform:
    """Affine map mixing x and y, so both components of alpha are non-zero."""
    x, y = RatFunc.var("x"), RatFunc.var("y")
    while True:
        a, b, c, d = (rand_q(rng, 1, 3, nonzero=True) for _ in range(4))
        b, c = -b, c
        if a * d - b * c:
            break
    return PointTransform(x * a + y * b + rand_q(rng), x * c + y * d + rand_q(rng)).checked()


# rational degenerate forms, by the deepest field they reach
DEGENERATE_BASES = ("case1_dim0", "case1_dim1", "case1_dim2", "case5", "case6_const",
                    "case7_const", "case7_zero")
LAMBDA_BASES = ("case5", "case6_const", "case7_const", "case7_zero")


def degenerate_equation(seed, bases=DEGENERATE_BASES) -> Equation:
    """A degenerate equation with both A and B non-zero: a canonical form
    under a random mixing affine map."""
    rng = random.Random(seed)
    eq = by_name(bases[seed % len(bases)]).equation()
    while True:
        out = apply(eq, affine_mix(rng))
        bf = BaseFields(out)
        if bf.branches.both:
            return out


def point_in_chart(rng):
    return {"x": F(rng.randint(1, 30), rng.randint(1, 5)),
            "y": F(rng.randint(1, 30), rng.randint(1, 5))}


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
