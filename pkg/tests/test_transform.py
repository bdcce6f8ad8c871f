"""Point transforms: inversion, the transformed equation, weight laws."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import affine_mix, degenerate_equation, random_equation
from pointequiv.canonical import by_name, radical_transform, triangular_transform
from pointequiv.expr.ratfunc import RatFunc
from pointequiv.fields import BaseFields, Equation, mirror
from pointequiv.geninv import frame_invariants
from pointequiv.transform import (NonInvertible, PointTransform, SingularTransform, apply,
                                  check_theta_law, check_weight_law)

F = Fraction
x, y = RatFunc.var("x"), RatFunc.var("y")


def test_identity_leaves_equation_unchanged():
    eq = random_equation(3, 2)
    assert apply(eq, PointTransform(x, y).checked()).coefficients == eq.coefficients


def test_swap_is_the_mirror():
    eq = random_equation(4, 2)
    assert apply(eq, PointTransform(y, x).checked()).coefficients == mirror(eq).coefficients


@pytest.mark.parametrize("seed", range(3))
def test_affine_image_of_trivial_equation_is_trivial(seed):
    t = affine_mix(random.Random(seed))
    assert all(v.is_zero() for v in apply(Equation.make(), t).coefficients)


def test_nonlinear_image_of_trivial_equation():
    # x~ = x, y~ = y + x^2 turns the lines y = ax + b into y~ = x^2 + ax + b
    eq = apply(Equation.make(), PointTransform(x, y + x ** 2).checked())
    P, Q, R, S = eq.coefficients
    assert P == RatFunc.const(2) and Q.is_zero() and R.is_zero() and S.is_zero()


@pytest.mark.parametrize("seed", range(3))
def test_apply_then_inverse_returns_the_equation(seed):
    rng = random.Random(seed)
    eq = random_equation(seed, 1)
    t = triangular_transform(rng)
    back = apply(apply(eq, t), t.inverse_transform())
    assert back.coefficients == eq.coefficients


def test_auto_inverse_of_triangular_map():
    t = PointTransform((y ** 2 + 1) * x + y, 2 * y - 1).checked()
    X, Y = t.inverse
    assert t.xt.subs({"x": X, "y": Y}) == x and t.yt.subs({"x": X, "y": Y}) == y


def test_supplied_inverse_is_checked():
    with pytest.raises(NonInvertible):
        PointTransform(2 * x, y, (x, y)).checked()


def test_non_invertible_shape_needs_an_inverse():
    with pytest.raises(NonInvertible):
        PointTransform(x ** 3 + y, y ** 3).checked()


def test_singular_transform_rejected():
    with pytest.raises(SingularTransform):
        PointTransform(x + y, 2 * x + 2 * y).checked()


def test_from_strings():
    t = PointTransform.from_strings("2*x + y", "y")
    assert t.det() == RatFunc.const(2)
    assert t.image({"x": F(1), "y": F(3)}) == {"x": F(5), "y": F(3)}


# -- weight laws -------------------------------------------------------------------------

def test_n_scales_by_det_squared():
    # x~ = 2x: det T = 2, so N = (det T)^2 N~ at corresponding points
    eq = by_name("case5").equation()
    t = PointTransform(2 * x, y).checked()
    teq = apply(eq, t)
    n0, n1 = BaseFields(eq).N.value, BaseFields(teq).N.value
    p = {"x": F(3), "y": F(1)}
    assert n0.evaluate(p) == 4 * n1.evaluate(t.image(p))
    assert check_weight_law(lambda e: BaseFields(e).N, eq, t, 2)


@pytest.mark.parametrize("seed", range(3))
def test_alpha_and_f5_laws(seed):
    eq = random_equation(seed)
    t = triangular_transform(random.Random(seed))
    assert check_weight_law(lambda e: BaseFields(e).alpha, eq, t, 2, samples=3).passed
    r = check_weight_law(lambda e: BaseFields(e).F5, eq, t, 5, samples=3)
    assert r.passed and r.exact and r.max_deviation == 0


@pytest.mark.parametrize("seed", range(3))
def test_beta_and_gamma_laws(seed):
    eq = degenerate_equation(seed)
    t = triangular_transform(random.Random(seed))
    bf = lambda e: BaseFields(e, verify=False)
    assert check_weight_law(lambda e: bf(e).beta, eq, t, 4, samples=3)
    assert check_weight_law(lambda e: bf(e).N, eq, t, 2, samples=3)
    assert check_weight_law(lambda e: bf(e).Omega, eq, t, 1, samples=3)
    assert check_weight_law(lambda e: bf(e).M, eq, t, 4, samples=3)
    assert check_weight_law(lambda e: bf(e).gamma, eq, t, 3, samples=3)


def test_wrong_weight_fails():
    eq = random_equation(1)
    t = PointTransform(2 * x, y).checked()
    assert not check_weight_law(lambda e: BaseFields(e).F5, eq, t, 4, samples=3)


def test_i2_is_a_scalar():
    eq = random_equation(2)
    t = PointTransform(3 * x, y).checked()
    law = check_weight_law(lambda e: frame_invariants(BaseFields(e), verify=False)["I2"].rho,
                           eq, t, 0, samples=3)
    assert law.passed and law.exact


@pytest.mark.parametrize("seed", range(3))
def test_theta_law(seed):
    eq = random_equation(seed, 2)
    r = check_theta_law(eq, triangular_transform(random.Random(seed)))
    assert r.passed and r.exact and r.max_deviation == 0


def test_theta_law_on_radical_form():
    eq = by_name("case4").equation()
    r = check_theta_law(eq, radical_transform(random.Random(0), scale_y=False))
    assert r.passed
