"""Base classifying fields of y'' = P + 3Q y' + 3R y'^2 + S y'^3.

Every field is computed in the given coordinates from explicit formulas in
P, Q, R, S and their partial derivatives.  Where two branches exist (one
dividing by B, one by A) both are evaluated when possible and compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .expr.errors import ExprError, UnsupportedExpression
from .expr.parser import parse
from .expr.ratfunc import RatFunc
from .expr.tree import Expr, Var, as_expr, pretty, substitute, to_ratfunc
from .expr.zerotest import ZeroTester
from .tensors import (PseudoCovector, PseudoScalar, PseudoVector,
                      build_connection, contract, lower_index, raise_index,
                      theta_array, weighted_gradient)

F = Fraction


class FieldError(ExprError):
    pass


class BothComponentsZero(FieldError):
    """A and B vanish identically, so no branch formula applies."""


class PreconditionError(FieldError):
    pass


class DualRouteMismatch(FieldError):
    """Two formulas for the same field disagree: an internal inconsistency."""


def coerce_value(v, functions=()):
    """Normal form when possible, otherwise an expression tree."""
    if isinstance(v, (RatFunc, Expr)):
        e = v
    elif isinstance(v, str):
        e = parse(v, functions)
    else:
        e = as_expr(v)
    if isinstance(e, RatFunc):
        return e
    try:
        return to_ratfunc(e)
    except UnsupportedExpression:
        return e


@dataclass(frozen=True)
class Equation:
    """Coefficients of the cubic right-hand side."""

    P: object
    Q: object
    R: object
    S: object
    functions: tuple = ()
    assumptions: tuple = ("x>0",)
    point: dict | None = None

    @classmethod
    def from_strings(cls, P="0", Q="0", R="0", S="0", functions=(), **kw):
        functions = tuple(functions)
        return cls(*(coerce_value(c, functions) for c in (P, Q, R, S)),
                   functions=functions, **kw)

    @classmethod
    def make(cls, P=0, Q=0, R=0, S=0, functions=(), **kw):
        functions = tuple(functions)
        return cls(*(coerce_value(c, functions) for c in (P, Q, R, S)),
                   functions=functions, **kw)

    @property
    def coefficients(self):
        return (self.P, self.Q, self.R, self.S)

    @property
    def in_fragment(self) -> bool:
        return all(isinstance(c, RatFunc) for c in self.coefficients)

    def with_coefficients(self, P, Q, R, S) -> "Equation":
        return Equation(P, Q, R, S, self.functions, self.assumptions, self.point)

    def swapped(self, f) -> "Equation":
        return self.with_coefficients(*(f(c) for c in self.coefficients))

    def to_strings(self) -> dict:
        return {k: pretty(v.to_expr() if isinstance(v, RatFunc) else v)
                for k, v in zip("PQRS", self.coefficients)}

    def __str__(self):
        s = self.to_strings()
        return "; ".join(f"{k} = {v}" for k, v in s.items())


def d(f, p: int, q: int):
    """f_{p.q}."""
    return f.partial(p, q)


# -- alpha, F^5, beta ----------------------------------------------------------

def compute_A_B(eq: Equation):
    P, Q, R, S = eq.coefficients
    A = (d(P, 0, 2) - 2 * d(Q, 1, 1) + d(R, 2, 0) + 2 * P * d(S, 1, 0) + S * d(P, 1, 0)
         - 3 * P * d(R, 0, 1) - 3 * R * d(P, 0, 1) - 3 * Q * d(R, 1, 0) + 6 * Q * d(Q, 0, 1))
    B = (d(S, 2, 0) - 2 * d(R, 1, 1) + d(Q, 0, 2) - 2 * S * d(P, 0, 1) - P * d(S, 0, 1)
         + 3 * S * d(Q, 1, 0) + 3 * Q * d(S, 1, 0) + 3 * R * d(Q, 0, 1) - 6 * R * d(R, 1, 0))
    return A, B


def compute_alpha(eq: Equation) -> PseudoVector:
    A, B = compute_A_B(eq)
    return PseudoVector(B, -A, 2)


def _AB(alpha: PseudoVector):
    return -alpha.c2, alpha.c1


def compute_F5(eq: Equation, alpha: PseudoVector) -> PseudoScalar:
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    F5 = (A * B * d(A, 0, 1) + B * A * d(B, 1, 0) - A ** 2 * d(B, 0, 1) - B ** 2 * d(A, 1, 0)
          - P * B ** 3 + 3 * Q * A * B ** 2 - 3 * R * A ** 2 * B + S * A ** 3)
    return PseudoScalar(F5, 5)


def compute_beta(eq: Equation, alpha: PseudoVector) -> PseudoVector:
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    G = (-B * d(B, 1, 0) - 3 * A * d(B, 0, 1) + 4 * B * d(A, 0, 1)
         + 3 * S * A ** 2 - 6 * R * B * A + 3 * Q * B ** 2)
    H = (-A * d(A, 0, 1) - 3 * B * d(A, 1, 0) + 4 * A * d(B, 1, 0)
         - 3 * P * B ** 2 + 6 * Q * A * B - 3 * R * A ** 2)
    return PseudoVector(G, H, 4)


def pairing_F5(alpha: PseudoVector, beta: PseudoVector) -> PseudoScalar:
    """(1/3) alpha_i beta^i, which equals F^5 identically."""
    s = contract(lower_index(alpha), beta)
    return PseudoScalar(F(1, 3) * s.value, s.weight)


# -- degenerate regime: N, phi, Omega, M, gamma, Lambda --------------------------

class Branches:
    """Which of A, B vanish identically, decided once per equation."""

    def __init__(self, alpha, tester: ZeroTester):
        A, B = _AB(alpha)
        self.A_zero = tester.is_zero(A, "A")
        self.B_zero = tester.is_zero(B, "B")
        if self.A_zero and self.B_zero:
            raise BothComponentsZero("A and B vanish identically")

    @property
    def both(self) -> bool:
        return not (self.A_zero or self.B_zero)


def _agree(tester, a, b, label):
    if not tester.is_zero(a - b, f"dual:{label}"):
        raise DualRouteMismatch(f"the two formulas for {label} disagree")


def compute_N(alpha, beta, tester: ZeroTester, branches: Branches | None = None,
              verify: bool = True) -> PseudoScalar:
    branches = branches or Branches(alpha, tester)
    A, B = _AB(alpha)
    G, H = beta.c
    via_B = G / (3 * B) if not branches.B_zero else None
    via_A = -H / (3 * A) if not branches.A_zero else None
    if verify and via_A is not None and via_B is not None:
        _agree(tester, via_A, via_B, "N")
    return PseudoScalar(via_B if via_B is not None else via_A, 2)


def phi_via_B(eq, alpha):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    t = A * S - d(B, 0, 1)
    phi1 = (-3 * A * t / (5 * B ** 2) - 3 * (d(A, 0, 1) + d(B, 1, 0) - 3 * A * R) / (5 * B)
            - F(6, 5) * Q)
    phi2 = 3 * t / (5 * B) - F(3, 5) * R
    return phi1, phi2


def phi_via_A(eq, alpha):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    t = B * P + d(A, 1, 0)
    phi1 = -3 * t / (5 * A) + F(3, 5) * Q
    phi2 = (3 * B * t / (5 * A ** 2) - 3 * (d(B, 1, 0) + d(A, 0, 1) + 3 * B * Q) / (5 * A)
            + F(6, 5) * R)
    return phi1, phi2


def compute_phi(eq, alpha, tester, branches=None, verify=True) -> PseudoCovector:
    branches = branches or Branches(alpha, tester)
    vb = phi_via_B(eq, alpha) if not branches.B_zero else None
    va = phi_via_A(eq, alpha) if not branches.A_zero else None
    if verify and va is not None and vb is not None:
        _agree(tester, va[0], vb[0], "phi_1")
        _agree(tester, va[1], vb[1], "phi_2")
    p1, p2 = vb if vb is not None else va
    return PseudoCovector(p1, p2, 0)


def Omega_from_phi(phi: PseudoCovector):
    return F(5, 3) * (phi.c1.diff("y") - phi.c2.diff("x"))


def Omega_via_B(eq, alpha):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    B01, A01 = d(B, 0, 1), d(A, 0, 1)
    return (2 * A * B01 * (A * S - B01) / B ** 3
            + (2 * A01 - 3 * A * R) * B01 / B ** 2
            + (d(B, 1, 0) - 2 * A01) * A * S / B ** 2
            + (A * d(B, 0, 2) - A ** 2 * d(S, 0, 1)) / B ** 2
            - d(A, 0, 2) / B
            + (3 * A01 * R + 3 * A * d(R, 0, 1) - d(A, 1, 0) * S - A * d(S, 1, 0)) / B
            + d(R, 1, 0) - 2 * d(Q, 0, 1))


def Omega_via_A(eq, alpha):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    A10, B10 = d(A, 1, 0), d(B, 1, 0)
    return (2 * B * A10 * (B * P + A10) / A ** 3
            - (2 * B10 + 3 * B * Q) * A10 / A ** 2
            + (d(A, 0, 1) - 2 * B10) * B * P / A ** 2
            - (B * d(A, 2, 0) + B ** 2 * d(P, 1, 0)) / A ** 2
            + d(B, 2, 0) / A
            + (3 * B10 * Q + 3 * B * d(Q, 1, 0) - d(B, 0, 1) * P - B * d(P, 0, 1)) / A
            + d(Q, 0, 1) - 2 * d(R, 1, 0))


def compute_Omega(eq, alpha, phi, tester, branches=None, verify=True) -> PseudoScalar:
    branches = branches or Branches(alpha, tester)
    closed = Omega_via_B(eq, alpha) if not branches.B_zero else Omega_via_A(eq, alpha)
    if verify:
        _agree(tester, closed, Omega_from_phi(phi), "Omega(phi)")
        if branches.both:
            _agree(tester, Omega_via_B(eq, alpha), Omega_via_A(eq, alpha), "Omega")
    return PseudoScalar(closed, 1)


def M_via_B(eq, alpha, N):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N = N.value
    return (-12 * A * N * (A * S - d(B, 0, 1)) / (5 * B) - A * d(N, 0, 1)
            + F(24, 5) * A * N * R - F(6, 5) * N * d(A, 0, 1) - F(6, 5) * N * d(B, 1, 0)
            + B * d(N, 1, 0) - F(12, 5) * B * N * Q)


def M_via_A(eq, alpha, N):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N = N.value
    return (-12 * B * N * (B * P + d(A, 1, 0)) / (5 * A) + B * d(N, 1, 0)
            + F(24, 5) * B * N * Q + F(6, 5) * N * d(B, 1, 0) + F(6, 5) * N * d(A, 0, 1)
            - A * d(N, 0, 1) - F(12, 5) * A * N * R)


def gamma_via_B(eq, alpha, N, Omega):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N, W = N.value, Omega.value
    t = A * S - d(B, 0, 1)
    g1 = -6 * N * t / (5 * B) - d(N, 0, 1) + F(6, 5) * N * R - 2 * W * B
    g2 = (-6 * A * N * t / (5 * B ** 2) + 18 * N * A * R / (5 * B)
          - 6 * N * (d(A, 0, 1) + d(B, 1, 0)) / (5 * B) + d(N, 1, 0)
          - F(12, 5) * N * Q + 2 * W * A)
    return g1, g2


def gamma_via_A(eq, alpha, N, Omega):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N, W = N.value, Omega.value
    t = B * P + d(A, 1, 0)
    g1 = (-6 * B * N * t / (5 * A ** 2) + 18 * N * B * Q / (5 * A)
          + 6 * N * (d(B, 1, 0) + d(A, 0, 1)) / (5 * A) - d(N, 0, 1)
          - F(12, 5) * N * R - 2 * W * B)
    g2 = -6 * N * t / (5 * A) + d(N, 1, 0) + F(6, 5) * N * Q + 2 * W * A
    return g1, g2


def xi_field(N: PseudoScalar, phi: PseudoCovector) -> PseudoVector:
    """xi^i = d^{ij} nabla_j N with nabla_k N = N_k + 2 phi_k N."""
    return raise_index(weighted_gradient(N, phi))


def M_gamma_via_xi(alpha, N, Omega, phi):
    xi = xi_field(N, phi)
    gamma = PseudoVector(-2 * Omega.value * alpha.c1 - xi.c1,
                         -2 * Omega.value * alpha.c2 - xi.c2, 3)
    M = contract(lower_index(alpha), xi)
    return PseudoScalar(-M.value, M.weight), gamma


def compute_M_gamma(eq, alpha, N, Omega, phi, tester, branches=None, verify=True):
    branches = branches or Branches(alpha, tester)
    if not branches.B_zero:
        M = M_via_B(eq, alpha, N)
        g = gamma_via_B(eq, alpha, N, Omega)
    else:
        M = M_via_A(eq, alpha, N)
        g = gamma_via_A(eq, alpha, N, Omega)
    if verify:
        Mx, gx = M_gamma_via_xi(alpha, N, Omega, phi)
        _agree(tester, M, Mx.value, "M(xi)")
        _agree(tester, g[0], gx.c1, "gamma^1(xi)")
        _agree(tester, g[1], gx.c2, "gamma^2(xi)")
        if branches.both:
            _agree(tester, M_via_B(eq, alpha, N), M_via_A(eq, alpha, N), "M")
            gb, ga = gamma_via_B(eq, alpha, N, Omega), gamma_via_A(eq, alpha, N, Omega)
            _agree(tester, gb[0], ga[0], "gamma^1")
            _agree(tester, gb[1], ga[1], "gamma^2")
    return PseudoScalar(M, 4), PseudoVector(g[0], g[1], 3)


def Lambda_via_B(eq, alpha, N, Omega):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N, W = N.value, Omega.value
    return (-6 * N * (A * S - d(B, 0, 1)) / (5 * B ** 2) - d(N, 0, 1) / B
            + 6 * N * R / (5 * B) - 2 * W)


def Lambda_via_A(eq, alpha, N, Omega):
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    N, W = N.value, Omega.value
    return (6 * N * (B * P + d(A, 1, 0)) / (5 * A ** 2) - d(N, 1, 0) / A
            - 6 * N * Q / (5 * A) - 2 * W)


def compute_Lambda(alpha, gamma, N, Omega, eq, tester, branches=None, verify=True):
    """gamma = Lambda alpha when M vanishes."""
    branches = branches or Branches(alpha, tester)
    A, B = _AB(alpha)
    C, D = gamma.c
    main = C / B if not branches.B_zero else -D / A
    if verify:
        if not branches.B_zero:
            _agree(tester, main, Lambda_via_B(eq, alpha, N, Omega), "Lambda(6.11)")
        if not branches.A_zero:
            _agree(tester, -D / A, Lambda_via_A(eq, alpha, N, Omega), "Lambda(6.12)")
            _agree(tester, main, -D / A, "Lambda(C/B,-D/A)")
    return PseudoScalar(main, 1)


# -- mirror ------------------------------------------------------------------------

def swap_xy(v):
    """Exchange the roles of x and y in a value (function arguments follow)."""
    if isinstance(v, RatFunc):
        return v.subs({"x": RatFunc.var("y"), "y": RatFunc.var("x")})
    return substitute(v, {"x": Var("y"), "y": Var("x")})


def mirror(eq: Equation) -> Equation:
    """x <-> y together with P -> -S, S -> -P, Q -> -R, R -> -Q."""
    P, Q, R, S = (swap_xy(c) for c in eq.coefficients)
    return eq.with_coefficients(-S, -R, -Q, -P)


# field name -> (sign, partner); the image of f under the mirror is
# sign * swap_xy(partner evaluated on the original equation)
MIRROR_RULES = {
    "A": (-1, "B"), "B": (-1, "A"),
    "G": (1, "H"), "H": (1, "G"),
    "F5": (-1, "F5"), "N": (1, "N"),
    "phi1": (1, "phi2"), "phi2": (1, "phi1"),
    "Omega": (-1, "Omega"), "Lambda": (-1, "Lambda"),
    "gamma1": (-1, "gamma2"), "gamma2": (-1, "gamma1"),
    "omega1": (-1, "omega2"), "omega2": (-1, "omega1"),
}


def mirror_expected(name: str):
    """(sign, partner) such that f(mirror(eq)) = sign * swap(partner(eq))."""
    return MIRROR_RULES[name]


# -- lazily computed bundle ---------------------------------------------------------

class BaseFields:
    """All base fields of one equation, computed on demand.

    Optional fields raise PreconditionError when their regime does not hold.
    """

    def __init__(self, eq: Equation, tester: ZeroTester | None = None, verify: bool = True):
        self.eq = eq
        self.tester = tester or ZeroTester()
        self.verify = verify

    def zero(self, v, label=""):
        value = v.value if isinstance(v, PseudoScalar) else v
        return self.tester.is_zero(value, label)

    @cached_property
    def alpha(self) -> PseudoVector:
        return compute_alpha(self.eq)

    @property
    def A(self):
        return -self.alpha.c2

    @property
    def B(self):
        return self.alpha.c1

    @cached_property
    def maximally_degenerate(self) -> bool:
        return self.zero(self.A, "A") and self.zero(self.B, "B")

    @cached_property
    def F5(self) -> PseudoScalar:
        return compute_F5(self.eq, self.alpha)

    @cached_property
    def beta(self) -> PseudoVector:
        return compute_beta(self.eq, self.alpha)

    @cached_property
    def general_position(self) -> bool:
        return not self.zero(self.F5, "F5")

    def _require_degenerate(self):
        if self.general_position:
            raise PreconditionError("F^5 does not vanish: general position")

    @cached_property
    def branches(self) -> Branches:
        return Branches(self.alpha, self.tester)

    @cached_property
    def N(self) -> PseudoScalar:
        self._require_degenerate()
        return compute_N(self.alpha, self.beta, self.tester, self.branches, self.verify)

    @cached_property
    def phi(self) -> PseudoCovector:
        self._require_degenerate()
        return compute_phi(self.eq, self.alpha, self.tester, self.branches, self.verify)

    @cached_property
    def Omega(self) -> PseudoScalar:
        return compute_Omega(self.eq, self.alpha, self.phi, self.tester,
                             self.branches, self.verify)

    @cached_property
    def _M_gamma(self):
        return compute_M_gamma(self.eq, self.alpha, self.N, self.Omega, self.phi,
                               self.tester, self.branches, self.verify)

    @property
    def M(self) -> PseudoScalar:
        return self._M_gamma[0]

    @property
    def gamma(self) -> PseudoVector:
        return self._M_gamma[1]

    @cached_property
    def Lambda(self) -> PseudoScalar:
        if not self.zero(self.M, "M"):
            raise PreconditionError("M does not vanish; Lambda is undefined")
        return compute_Lambda(self.alpha, self.gamma, self.N, self.Omega, self.eq,
                              self.tester, self.branches, self.verify)

    @cached_property
    def connection(self):
        """The connection built from theta and the degenerate-regime phi."""
        return build_connection(theta_array(self.eq), self.phi)

    def named(self, name: str):
        """Raw value of a field by its mirror-table name."""
        table = {
            "A": lambda: self.A, "B": lambda: self.B,
            "G": lambda: self.beta.c1, "H": lambda: self.beta.c2,
            "F5": lambda: self.F5.value, "N": lambda: self.N.value,
            "phi1": lambda: self.phi.c1, "phi2": lambda: self.phi.c2,
            "Omega": lambda: self.Omega.value, "Lambda": lambda: self.Lambda.value,
            "gamma1": lambda: self.gamma.c1, "gamma2": lambda: self.gamma.c2,
            "M": lambda: self.M.value,
        }
        return table[name]()
