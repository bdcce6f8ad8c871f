"""Curvature-derived fields for F^5 = 0, M = 0: eigenvalues of R^k_q, the
covector omega, K, Theta and the covector theta.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from .fields import BaseFields, PreconditionError, _agree, d
from .tensors import (PseudoCovector, PseudoScalar, contract, curvature,
                      lower_index, raise_index, weighted_gradient)

F = Fraction


class OmegaNotCollinear(PreconditionError):
    """omega is not proportional to alpha, so Theta is undefined."""


def eigenvalues(Lambda: PseudoScalar, Omega: PseudoScalar):
    l1 = PseudoScalar(-F(3, 5) * Lambda.value, 1)
    l2 = PseudoScalar(F(3, 5) * Omega.value + F(3, 5) * Lambda.value, 1)
    return l1, l2


def compute_Rkq(bf: BaseFields, verify: bool = True):
    """Reduced curvature R^k_q with the eigenvalues lambda_1, lambda_2."""
    if bf.general_position:
        raise PreconditionError("R^k_q fields need F^5 = 0")
    Rkq = curvature(bf.connection).reduced
    l1, l2 = eigenvalues(bf.Lambda, bf.Omega)
    if verify:
        tr = Rkq[0][0] + Rkq[1][1]
        det = Rkq[0][0] * Rkq[1][1] - Rkq[0][1] * Rkq[1][0]
        _agree(bf.tester, tr, l1.value + l2.value, "trace R")
        _agree(bf.tester, det, l1.value * l2.value, "det R")
    return Rkq, l1, l2


def omega_via_matrix(alpha, Rkq, lambda2, branches):
    A, B = -alpha.c2, alpha.c1
    l2 = lambda2.value
    if not branches.B_zero:
        return (Rkq[0][0] - l2) / B, Rkq[0][1] / B
    return -Rkq[1][0] / A, (l2 - Rkq[1][1]) / A


def omega_closed_B(eq, alpha, Lambda, Omega):
    P, Q, R, S = eq.coefficients
    A, B = -alpha.c2, alpha.c1
    L, W = Lambda.value, Omega.value
    B01 = d(B, 0, 1)
    w1 = (-(6 * L + 3 * W) / (5 * B)
          + (5 * A * d(S, 1, 0) - 6 * A * d(R, 0, 1) + 12 * Q * A * S) / (5 * B ** 2)
          - F(54, 25) * A * R ** 2 / B ** 2
          + (2 * A * d(A, 0, 1) * S + A * d(B, 1, 0) * S + A ** 2 * d(S, 0, 1)
             - A * d(B, 0, 2)) / (5 * B ** 3)
          - 12 * A ** 2 * S * R / (25 * B ** 3)
          + 3 * A * R * B01 / (25 * B ** 3)
          + (6 * A * B01 ** 2 + 6 * A ** 3 * S ** 2 - 12 * A ** 2 * B01 * S) / (25 * B ** 4))
    w2 = (12 * S * Q / (5 * B) - F(54, 25) * R ** 2 / B + d(S, 1, 0) / B
          - 6 * d(R, 0, 1) / (5 * B)
          + (S * d(B, 1, 0) + A * d(S, 0, 1) - d(B, 0, 2)) / (5 * B ** 2)
          + 2 * d(A, 0, 1) * S / (5 * B ** 2)
          - (3 * R * B01 + 12 * S * A * R) / (25 * B ** 2)
          + (6 * A ** 2 * S ** 2 - 12 * B01 * A * S + 6 * B01 ** 2) / (25 * B ** 3))
    return w1, w2


def omega_closed_A(eq, alpha, Lambda, Omega):
    P, Q, R, S = eq.coefficients
    A, B = -alpha.c2, alpha.c1
    L, W = Lambda.value, Omega.value
    A10 = d(A, 1, 0)
    w1 = (12 * P * R / (5 * A) - F(54, 25) * Q ** 2 / A - d(P, 0, 1) / A
          + 6 * d(Q, 1, 0) / (5 * A)
          - (P * d(A, 0, 1) + B * d(P, 1, 0) + d(A, 2, 0)) / (5 * A ** 2)
          - 2 * P * d(B, 1, 0) / (5 * A ** 2)
          + (3 * Q * A10 - 12 * P * B * Q) / (25 * A ** 2)
          + (6 * B ** 2 * P ** 2 + 12 * B * P * A10 + 6 * A10 ** 2) / (25 * A ** 3))
    w2 = ((6 * L + 3 * W) / (5 * A)
          + (6 * B * d(Q, 1, 0) + 12 * R * B * P - 5 * B * d(P, 0, 1)) / (5 * A ** 2)
          - F(54, 25) * B * Q ** 2 / A ** 2
          - (2 * B * d(B, 1, 0) * P + B * P * d(A, 0, 1) + B ** 2 * d(P, 1, 0)
             + B * d(A, 2, 0)) / (5 * A ** 3)
          - 12 * B ** 2 * P * Q / (25 * A ** 3)
          + 3 * B * Q * A10 / (25 * A ** 3)
          + (6 * B * A10 ** 2 + 6 * B ** 3 * P ** 2 + 12 * B ** 2 * P * A10) / (25 * A ** 4))
    return w1, w2


def compute_omega(bf: BaseFields, Rkq, lambda2, verify: bool = True) -> PseudoCovector:
    br = bf.branches
    main = (omega_closed_B if not br.B_zero else omega_closed_A)(
        bf.eq, bf.alpha, bf.Lambda, bf.Omega)
    if verify:
        mx = omega_via_matrix(bf.alpha, Rkq, lambda2, br)
        _agree(bf.tester, main[0], mx[0], "omega_1(matrix)")
        _agree(bf.tester, main[1], mx[1], "omega_2(matrix)")
        if br.both:
            other = omega_closed_A(bf.eq, bf.alpha, bf.Lambda, bf.Omega)
            _agree(bf.tester, main[0], other[0], "omega_1")
            _agree(bf.tester, main[1], other[1], "omega_2")
    return PseudoCovector(main[0], main[1], -1)


def K_via_B(bf, omega):
    phi, L, W, N, B = bf.phi, bf.Lambda.value, bf.Omega.value, bf.N.value, bf.B
    return ((d(L, 0, 1) + L * phi.c2) / B + (d(W, 0, 1) + W * phi.c2) / (3 * B)
            + N * omega.c2 / B)


def K_via_A(bf, omega):
    phi, L, W, N, A = bf.phi, bf.Lambda.value, bf.Omega.value, bf.N.value, bf.A
    return ((d(L, 1, 0) + L * phi.c1) / A + (d(W, 1, 0) + W * phi.c1) / (3 * A)
            + N * omega.c1 / A)


def w_field(bf, omega) -> PseudoCovector:
    """w = N omega + nabla Lambda + (1/3) nabla Omega, a weight-1 covector."""
    gl = weighted_gradient(bf.Lambda, bf.phi)
    gw = weighted_gradient(bf.Omega, bf.phi)
    return bf.N * omega + gl + gw * F(1, 3)


def compute_K(bf: BaseFields, omega, verify: bool = True) -> PseudoScalar:
    br = bf.branches
    K = K_via_B(bf, omega) if not br.B_zero else K_via_A(bf, omega)
    if verify:
        w = w_field(bf, omega)
        alpha_low = lower_index(bf.alpha)
        _agree(bf.tester, w.c1, K * alpha_low.c1, "w_1 = K alpha_1")
        _agree(bf.tester, w.c2, K * alpha_low.c2, "w_2 = K alpha_2")
        if br.both:
            _agree(bf.tester, K_via_B(bf, omega), K_via_A(bf, omega), "K")
    return PseudoScalar(K, 0)


def compute_Theta_theta(bf: BaseFields, omega, verify: bool = True):
    """Theta with omega = Theta alpha (lowered), and theta = nabla Theta."""
    A, B = bf.A, bf.B
    br = bf.branches
    # collinearity: omega_1 B - omega_2 A must vanish
    if not bf.tester.is_zero(omega.c1 * B - omega.c2 * A, "omega x alpha"):
        raise OmegaNotCollinear("omega is not collinear with alpha")
    Theta = omega.c2 / B if not br.B_zero else omega.c1 / A
    if verify and br.both:
        _agree(bf.tester, omega.c2 / B, omega.c1 / A, "Theta")
    Theta = PseudoScalar(Theta, -2)
    theta = weighted_gradient(Theta, bf.phi)
    return Theta, theta


class DegenerateFields:
    """Bundle of the curvature-derived fields of one equation."""

    def __init__(self, bf: BaseFields, verify: bool | None = None):
        self.bf = bf
        self.verify = bf.verify if verify is None else verify
        if bf.general_position:
            raise PreconditionError("F^5 does not vanish")

    @cached_property
    def _R(self):
        return compute_Rkq(self.bf, self.verify)

    @property
    def Rkq(self):
        return self._R[0]

    @property
    def lambda1(self):
        return self._R[1]

    @property
    def lambda2(self):
        return self._R[2]

    @cached_property
    def omega(self) -> PseudoCovector:
        return compute_omega(self.bf, self.Rkq, self.lambda2, self.verify)

    @cached_property
    def omega_raised(self):
        return raise_index(self.omega)

    @cached_property
    def K(self) -> PseudoScalar:
        return compute_K(self.bf, self.omega, self.verify)

    @cached_property
    def _Theta(self):
        return compute_Theta_theta(self.bf, self.omega, self.verify)

    @property
    def Theta(self) -> PseudoScalar:
        return self._Theta[0]

    @property
    def theta(self) -> PseudoCovector:
        return self._Theta[1]

    @cached_property
    def theta_raised(self):
        return raise_index(self.theta)

    def L_contraction(self) -> PseudoScalar:
        """(5/9) theta_i alpha^i, equal to K + 5/9 where both are defined."""
        c = contract(self.theta, self.bf.alpha)
        return PseudoScalar(F(5, 9) * c.value, c.weight)
