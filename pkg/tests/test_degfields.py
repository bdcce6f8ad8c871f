"""Curvature-derived fields of the degenerate regime."""

from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import LAMBDA_BASES, degenerate_equation
from pointequiv.canonical import by_name
from pointequiv.degfields import (DegenerateFields, OmegaNotCollinear, compute_Rkq,
                                  K_via_A, K_via_B, omega_closed_A, omega_closed_B,
                                  omega_via_matrix, w_field)
from pointequiv.expr.ratfunc import RatFunc
from pointequiv.fields import BaseFields, PreconditionError
from pointequiv.tensors import lower_index

F = Fraction
c = RatFunc.const
x = RatFunc.var("x")
sigma = RatFunc.func("sigma")

# canonical forms with M = 0 written in special coordinates (A = 0, B = 1)
SPECIAL_FORMS = ("case2", "case3", "case4", "case5", "case6", "case6_const", "case7",
                 "case7_zero")


def dfields(name):
    bf = BaseFields(by_name(name).equation())
    return bf, DegenerateFields(bf)


def test_case7_eigenvalues_vanish():
    _, df = dfields("case7")
    assert df.lambda1.value.is_zero() and df.lambda2.value.is_zero()


def test_case6_eigenvalues():
    _, df = dfields("case6")
    assert df.lambda1.value == c(F(6, 5)) and df.lambda2.value == c(F(-3, 5))
    assert df.lambda1.weight == df.lambda2.weight == 1


@pytest.mark.parametrize("name", SPECIAL_FORMS)
def test_reduced_curvature_upper_triangular_in_special_coordinates(name):
    bf, df = dfields(name)
    assert bf.A.is_zero() and bf.B == c(1)
    assert df.Rkq[1][0].is_zero()


@pytest.mark.parametrize("name", SPECIAL_FORMS)
def test_trace_and_determinant_match_eigenvalues(name):
    bf, df = dfields(name)
    R = df.Rkq
    assert R[0][0] + R[1][1] == df.lambda1.value + df.lambda2.value
    assert R[0][0] * R[1][1] - R[0][1] * R[1][0] == df.lambda1.value * df.lambda2.value
    assert df.lambda1.value == -F(3, 5) * bf.Lambda.value
    assert df.lambda2.value == F(3, 5) * (bf.Omega.value + bf.Lambda.value)


@pytest.mark.parametrize("name", SPECIAL_FORMS)
def test_omega_in_special_coordinates(name):
    bf, df = dfields(name)
    P, Q, R, S = bf.eq.coefficients
    W, L = bf.Omega.value, bf.Lambda.value
    assert df.omega.c1 == -F(3, 5) * W - F(6, 5) * L
    assert df.omega.c2 == (S.diff("x") - F(6, 5) * R.diff("y") + F(12, 5) * S * Q
                           - F(54, 25) * R ** 2)
    assert df.omega.weight == -1


def test_case7_omega():
    _, df = dfields("case7")
    assert df.omega.c1.is_zero()
    assert df.omega.c2 == x == df.Theta.value


@pytest.mark.parametrize("seed", range(len(LAMBDA_BASES)))
def test_omega_matrix_and_closed_routes_agree(seed):
    bf = BaseFields(degenerate_equation(seed, LAMBDA_BASES), verify=False)
    assert bf.branches.both
    Rkq, _, l2 = compute_Rkq(bf, verify=False)
    mx = omega_via_matrix(bf.alpha, Rkq, l2, bf.branches)
    cb = omega_closed_B(bf.eq, bf.alpha, bf.Lambda, bf.Omega)
    ca = omega_closed_A(bf.eq, bf.alpha, bf.Lambda, bf.Omega)
    assert mx[0] == cb[0] == ca[0]
    assert mx[1] == cb[1] == ca[1]


# -- K --------------------------------------------------------------------------------

def test_case4_K():
    _, df = dfields("case4")
    assert df.K.value == -F(5, 48) * sigma * RatFunc.var("x", F(-3, 4)) - F(5, 9)
    assert df.K.weight == 0


def test_case5_K():
    _, df = dfields("case5")
    assert (df.K.value + F(5, 9)).is_zero()


def test_case6_K():
    _, df = dfields("case6")
    assert df.K.value == x


@pytest.mark.parametrize("seed", range(len(LAMBDA_BASES)))
def test_w_equals_K_alpha(seed):
    bf = BaseFields(degenerate_equation(seed, LAMBDA_BASES))
    df = DegenerateFields(bf)
    w = w_field(bf, df.omega)
    low = lower_index(bf.alpha)
    assert w.c1 == df.K.value * low.c1
    assert w.c2 == df.K.value * low.c2
    assert w.weight == 1
    assert K_via_A(bf, df.omega) == K_via_B(bf, df.omega)


# -- Theta and theta ------------------------------------------------------------------

def test_case4_theta():
    _, df = dfields("case4")
    assert df.Theta.value == sigma * RatFunc.var("x", F(1, 4)) / 4 + F(4, 3) * x
    assert df.Theta.weight == -2


def test_case7_theta_raised():
    _, df = dfields("case7")
    assert df.Theta.value == x
    th = df.theta_raised
    assert th.c1.is_zero() and th.c2 == c(-1)


@pytest.mark.parametrize("name", ("case4", "case4_const", "case5"))
def test_K_is_N_Theta(name):
    bf, df = dfields(name)
    assert df.K.value == bf.N.value * df.Theta.value


@pytest.mark.parametrize("name", ("case4", "case4_const", "case5"))
def test_theta_contraction_is_K_plus_5_9(name):
    _, df = dfields(name)
    assert df.L_contraction().value == df.K.value + F(5, 9)


def test_theta_needs_collinear_omega():
    _, df = dfields("case6")
    with pytest.raises(OmegaNotCollinear):
        df.Theta


def test_general_position_is_rejected():
    with pytest.raises(PreconditionError):
        DegenerateFields(BaseFields(by_name("general_dim2").equation()))
