"""Invariants and symmetry dimensions for the seven cases of intermediate
degeneration (F^5 = 0 with alpha nonzero).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .degfields import DegenerateFields
from .fields import BaseFields, FieldError, PreconditionError, d
from .geninv import (DEFAULT_DEPTH, MAX_ENTRIES, InvariantSeq, RadicalScalar,
                     decide_subcase)
from .tensors import PseudoScalar, PseudoVector, covariant_along, frame_coefficients

F = Fraction


class ConsistencyError(FieldError):
    """A relation that must hold in this case fails."""


@dataclass
class Invariant:
    """A named field with its weight and, once decided, its constancy."""

    name: str
    value: object
    weight: int
    constant: bool | None = None
    constant_value: object = None
    exported: bool = True  # weight-0 invariants enter signatures


@dataclass
class CaseInvariants:
    case_id: int
    invariants: list = dc_field(default_factory=list)
    auxiliary: dict = dc_field(default_factory=dict)
    dimension: int | None = None
    structure: str = ""
    subcase: str | None = None
    notes: list = dc_field(default_factory=list)

    def __getitem__(self, name):
        for inv in self.invariants:
            if inv.name == name:
                return inv
        if name in self.auxiliary:
            return self.auxiliary[name]
        raise KeyError(name)

    def add(self, name, value, weight, exported=True):
        if exported and weight != 0:
            raise FieldError(f"{name} has weight {weight}, expected 0")
        inv = Invariant(name, value, weight, exported=exported)
        self.invariants.append(inv)
        return inv


# -- shared helpers --------------------------------------------------------------

def _val(v):
    return v.value if isinstance(v, PseudoScalar) else v


def gamma122_closed(eq, C, D, denominator):
    """[CD(C_x - D_y) + D^2 C_y - C^2 D_x + P C^3 + 3Q C^2 D + 3R C D^2 + S D^3] / den.

    Every case writes its nabla_V V coefficient along alpha in this shape;
    only the denominator (a multiple of d(alpha, V)) changes.
    """
    P, Q, R, S = eq.coefficients
    num = (C * D * (d(C, 1, 0) - d(D, 0, 1)) + D ** 2 * d(C, 0, 1) - C ** 2 * d(D, 1, 0)
           + P * C ** 3 + 3 * Q * C ** 2 * D + 3 * R * C * D ** 2 + S * D ** 3)
    return num / denominator


def frame_table(bf: BaseFields, second: PseudoVector, conn=None) -> dict:
    """Coefficients of nabla_{e_i} e_j in the frame (alpha, second)."""
    return frame_coefficients(bf.alpha, second, conn or bf.connection)


def _check_gamma122(bf, table, closed, label):
    if not bf.tester.is_zero(table["G1_22"].value - closed, f"frame:{label}"):
        raise ConsistencyError(f"closed form and frame expansion disagree for {label}")


def _check_table(bf, table, expected: dict, label, notes=None):
    """expected maps keys like 'G2_11' to values; mismatches raise."""
    for key, want in expected.items():
        got = table[key].value
        if not bf.tester.is_zero(got - want, f"table:{label}:{key}"):
            raise ConsistencyError(f"{label}: {key} differs from its expected value")


def decide_constancy(ci: CaseInvariants, tester, names=None):
    """Fill ``constant`` and ``constant_value`` for the exported invariants."""
    for inv in ci.invariants:
        if names is not None and inv.name not in names:
            continue
        if not inv.exported:
            continue
        v = inv.value
        if isinstance(v, RadicalScalar):
            inv.constant = v.is_constant(tester, f"const:{inv.name}")
            inv.constant_value = v.constant_value(tester) if inv.constant else None
        else:
            inv.constant = tester.is_constant(v, f"const:{inv.name}")
            inv.constant_value = tester.constant_value(v) if inv.constant else None
    return all(inv.constant for inv in ci.invariants
               if inv.exported and (names is None or inv.name in names))


def _along(V: PseudoVector, s: PseudoScalar, conn) -> PseudoScalar:
    return covariant_along(V, s, conn)


# -- case 1 ----------------------------------------------------------------------

def _case1_extend(bf, seq):
    """Next generation: nabla_alpha J / N and (nabla_gamma J)^2 / N^3."""
    lo, hi = seq.generations[-1]
    N = bf.N
    conn = bf.connection
    start = len(seq.entries)
    batch = []
    prev = seq.entries[lo:hi]
    for name, v in prev:
        if len(seq.entries) + len(batch) >= MAX_ENTRIES:
            break
        J = PseudoScalar(v.rho, 0)
        batch.append((f"I{start + len(batch) + 1}",
                      (_along(bf.alpha, J, conn) / N)))
    for name, v in prev:
        if len(seq.entries) + len(batch) >= MAX_ENTRIES:
            break
        J = PseudoScalar(v.rho, 0)
        batch.append((f"I{start + len(batch) + 1}",
                      (_along(bf.gamma, J, conn) ** 2 / N ** 3)))
    for name, s in batch:
        s.require_weight(0, name)
        seq.entries.append((name, RadicalScalar.make(s.value, 0, N.value)))
    if batch:
        seq.generations.append((start, len(seq.entries)))


def case1_invariants(bf: BaseFields, depth: int = DEFAULT_DEPTH) -> CaseInvariants:
    """Case 1 (M nonzero): I_1, I_2, I_3 and the derivative sequence."""
    if bf.general_position or bf.zero(bf.M, "M"):
        raise PreconditionError("case 1 needs F^5 = 0 and M nonzero")
    t, eq = bf.tester, bf.eq
    N, M, W = bf.N, bf.M, bf.Omega
    ci = CaseInvariants(1)
    I1 = M / N ** 2
    I2 = W ** 2 / N
    C, D = bf.gamma.c
    G122 = PseudoScalar(gamma122_closed(eq, C, D, M.value), 4)
    table = frame_table(bf, bf.gamma)
    if bf.verify:
        _check_gamma122(bf, table, G122.value, "case 1")
        n = N.value
        _check_table(bf, table, {"G2_11": 0, "G1_21": 0,
                                 "G1_11": -F(3, 5) * n, "G2_21": -F(3, 5) * n}, "case 1")
    # weight bookkeeping: G122 N^2 / M^2 has weight 0; the printed G122 N^2 / M has 4
    I3 = G122 * N ** 2 / M ** 2
    ci.auxiliary["Gamma1_22"] = G122
    ci.auxiliary["I3_as_printed"] = G122 * N ** 2 / M
    ci.notes.append("I3 uses Gamma1_22 N^2 / M^2; the weight-4 variant "
                    "Gamma1_22 N^2 / M is kept as an auxiliary field")
    for name, v in (("I1", I1), ("I2", I2), ("I3", I3)):
        ci.add(name, v.value, v.weight)
    seq = InvariantSeq([(n, RadicalScalar.make(inv.value, 0, N.value))
                        for n, inv in (("I1", I1), ("I2", I2), ("I3", I3))], [(0, 3)])
    if bf.verify:
        # I_1 G^2_12 = I_4 N + (3/5) I_1 N + 2 I_1^2 N
        I4 = _along(bf.alpha, I1, bf.connection) / N
        lhs = I1.value * table["G2_12"].value
        rhs = (I4.value * N.value + F(3, 5) * I1.value * N.value
               + 2 * I1.value ** 2 * N.value)
        if not t.is_zero(lhs - rhs, "relation:G2_12"):
            raise ConsistencyError("case 1: the G^2_12 relation fails")
        # (I1 G22)^4 + (I7 N^3)^2 + (16 I2 N^3 I1^4)^2
        #   = 32 I7 N^6 I2 I1^4 + 2 (I7 N^3 + 16 I2 N^3 I1^4)(I1 G22)^2
        I7 = _along(bf.gamma, I1, bf.connection) ** 2 / N ** 3
        g = I1.value * table["G2_22"].value
        a, b = I7.value * N.value ** 3, 16 * I2.value * N.value ** 3 * I1.value ** 4
        rel = (g ** 4 + a ** 2 + b ** 2 - 32 * I7.value * N.value ** 6 * I2.value
               * I1.value ** 4 - 2 * (a + b) * g ** 2)
        if not t.is_zero(rel, "relation:G2_22"):
            raise ConsistencyError("case 1: the G^2_22 relation fails")
        if not t.is_zero(table["G2_22"].value + table["G1_12"].value, "relation:G1_12"):
            raise ConsistencyError("case 1: G^2_22 + G^1_12 does not vanish")
    verdict = decide_subcase(seq, t, lambda s: _case1_extend(bf, s), depth, MAX_ENTRIES)
    ci.auxiliary["sequence"] = seq
    ci.auxiliary["verdict"] = verdict
    ci.subcase = verdict.subcase
    ci.dimension = verdict.dimension
    if verdict.depth_limited:
        ci.notes.append(f"subcase decided at depth {verdict.depth} (depth cap)")
    decide_constancy(ci, t)
    if verdict.subcase == "all_constant":
        abelian = (t.is_zero(I1.value + F(12, 5), "abelian:I1")
                   and t.is_zero(I2.value, "abelian:I2"))
        ci.structure = "Abelian" if abelian else "non-Abelian"
    return ci


# -- case 2 ----------------------------------------------------------------------

def epsilon_field(bf: BaseFields, df: DegenerateFields) -> PseudoVector:
    """epsilon = N omega + nabla Lambda, raised to a weight-2 vector."""
    phi = bf.phi
    N, L = bf.N.value, bf.Lambda.value
    w1, w2 = df.omega.c
    c1 = N * w2 + d(L, 0, 1) + phi.c2 * L
    c2 = -N * w1 - d(L, 1, 0) - phi.c1 * L
    return PseudoVector(c1, c2, 2)


def epsilon_as_printed(bf: BaseFields, df: DegenerateFields) -> PseudoVector:
    """The componentwise formula with Omega in place of Lambda (diagnostic only)."""
    phi = bf.phi
    N, W = bf.N.value, bf.Omega.value
    w1, w2 = df.omega.c
    return PseudoVector(N * w2 + d(W, 0, 1) + phi.c2 * W,
                        -N * w1 - d(W, 1, 0) + phi.c1 * W, 2)


def case2_invariants(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    t, eq = bf.tester, bf.eq
    N, W, Lm = bf.N, bf.Omega, bf.Lambda
    if bf.zero(N, "N") or bf.zero(W, "Omega"):
        raise PreconditionError("case 2 needs N and Omega nonzero")
    ci = CaseInvariants(2)
    K = df.K
    I1 = Lm ** 12 / (W ** 8 * N ** 2)
    eps = epsilon_field(bf, df)
    C, D = eps.c
    G122 = PseudoScalar(gamma122_closed(eq, C, D, F(3, 5) * N.value * W.value), 2)
    if bf.verify:
        table = frame_table(bf, eps)
        _check_gamma122(bf, table, G122.value, "case 2")
        n, w, l, k = N.value, W.value, Lm.value, K.value
        _check_table(bf, table, {
            "G2_11": 0, "G1_21": 0, "G1_11": -F(3, 5) * n, "G2_21": -F(3, 5) * n,
            "G1_12": -F(6, 5) * k * n + n - F(6, 5) * l ** 2 - 3 * w * l,
            "G2_22": F(9, 5) * k * n - F(6, 5) * w ** 2 - F(3, 5) * w * l,
        }, "case 2")
    L = K * N + F(5, 9) * N + 3 * Lm * W + F(7, 9) * W ** 2 + 2 * Lm ** 2
    I2 = L ** 4 / (N ** 2 * W ** 4)
    conn = bf.connection
    dL = _along(eps, L, conn)
    dLm = _along(eps, Lm, conn)
    n = N
    E = (G122 - dL / n + 4 * Lm * dLm / n + F(17, 6) * W * dLm / n
         + F(12, 5) * L ** 2 / n - F(53, 5) * L * Lm * W / n
         - F(48, 5) * L * Lm ** 2 / n - F(62, 15) * L * W ** 2 / n - F(8, 3) * L
         + F(48, 5) * Lm ** 4 / n + F(106, 5) * Lm ** 3 * W / n + F(16, 3) * Lm ** 2
         + F(1163, 60) * Lm ** 2 * W ** 2 / n + F(137, 18) * Lm * W ** 3 / n
         + F(50, 9) * Lm * W + F(203, 108) * W ** 2 - F(77, 135) * W ** 4 / n
         + F(20, 27) * N)
    I3 = E ** 6 * N ** 4 / W ** 20
    ci.notes.append("E takes -(77/135) Omega^4 / N, the sign for which E is "
                    "proportional to the free function s")
    ci.auxiliary.update({"epsilon": eps, "Gamma1_22": G122, "L": L, "E": E, "K": K})
    for name, v in (("I1", I1), ("I2", I2), ("I3", I3)):
        ci.add(name, v.value, v.weight)
    ci.dimension = 1 if decide_constancy(ci, t) else 0
    return ci


# -- case 3 ----------------------------------------------------------------------

def case3_invariants(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    t, eq = bf.tester, bf.eq
    N, W, Lm = bf.N, bf.Omega, bf.Lambda
    if bf.zero(N, "N") or not bf.zero(W, "Omega") or bf.zero(Lm, "Lambda"):
        raise PreconditionError("case 3 needs N nonzero, Omega = 0, Lambda nonzero")
    ci = CaseInvariants(3)
    K = df.K
    om = df.omega_raised
    C, D = om.c
    G122 = PseudoScalar(gamma122_closed(eq, C, D, F(6, 5) * Lm.value), -2)
    if bf.verify:
        table = frame_table(bf, om)
        _check_gamma122(bf, table, G122.value, "case 3")
        n, k = N.value, K.value
        _check_table(bf, table, {
            "G2_11": 0, "G1_21": 0, "G1_11": -F(3, 5) * n, "G2_21": -F(3, 5) * n,
            "G1_12": 1 - F(3, 5) * k, "G2_12": F(9, 5) * n, "G2_22": F(6, 5) * k,
        }, "case 3")
    L = K + F(5, 9) + 2 * Lm ** 2 / N
    I1 = L ** 8 * N ** 6 / Lm ** 12
    dL = _along(om, L, bf.connection)
    E = (G122 - dL / N + F(9, 5) * L ** 2 / N - 2 * L / N - F(12, 5) * L * Lm ** 2 / N ** 2
         + F(7, 3) * Lm ** 2 / N ** 2 + F(5, 9) / N + F(63, 20) * Lm ** 4 / N ** 3)
    I2 = E * N ** 3 / Lm ** 4
    ci.auxiliary.update({"omega": om, "Gamma1_22": G122, "L": L, "E": E, "K": K})
    for name, v in (("I1", I1), ("I2", I2)):
        ci.add(name, v.value, v.weight)
    ci.dimension = 1 if decide_constancy(ci, t) else 0
    return ci


# -- cases 4 and 5 -----------------------------------------------------------------

def _L_check(bf, df):
    """(5/9) theta_i alpha^i = K + 5/9."""
    Lc = df.L_contraction()
    if not bf.tester.is_zero(Lc.value - df.K.value - F(5, 9), "relation:L"):
        raise ConsistencyError("(5/9) theta.alpha differs from K + 5/9")
    return Lc


def case4_invariants(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    t, eq = bf.tester, bf.eq
    N, W, Lm = bf.N, bf.Omega, bf.Lambda
    if bf.zero(N, "N") or not bf.zero(W, "Omega") or not bf.zero(Lm, "Lambda"):
        raise PreconditionError("case 4 needs N nonzero and Omega = Lambda = 0")
    K = df.K
    L = K + F(5, 9)
    if bf.zero(L, "K+5/9"):
        raise PreconditionError("K + 5/9 vanishes: case 5")
    ci = CaseInvariants(4)
    if bf.verify:
        _L_check(bf, df)
    Theta, th = df.Theta, df.theta_raised
    C, D = th.c
    G122 = PseudoScalar(gamma122_closed(eq, C, D, -F(9, 5) * L.value), -4)
    if bf.verify:
        table = frame_table(bf, th)
        _check_gamma122(bf, table, G122.value, "case 4")
        n = N.value
        _check_table(bf, table, {
            "G2_11": 0, "G1_12": 0, "G1_21": 0, "G2_22": 0,
            "G1_11": -F(3, 5) * n, "G2_21": -F(3, 5) * n, "G2_12": F(12, 5) * n,
        }, "case 4")
    shifted = Theta + PseudoScalar(F(5, 9) / N.value, -2)
    E = G122 + F(27, 5) * N * shifted ** 3 - F(3, 4) * shifted ** 2
    I1 = E ** 6 * N ** 12 / L ** 20
    ci.auxiliary.update({"Theta": Theta, "theta": th, "Gamma1_22": G122, "L": L,
                         "E": E, "K": K})
    ci.add("I1", I1.value, I1.weight)
    ci.dimension = 1 if decide_constancy(ci, t) else 0
    return ci


def case5_check(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    N, W, Lm = bf.N, bf.Omega, bf.Lambda
    if bf.zero(N, "N") or not bf.zero(W, "Omega") or not bf.zero(Lm, "Lambda"):
        raise PreconditionError("case 5 needs N nonzero and Omega = Lambda = 0")
    if not bf.zero(df.K.value + F(5, 9), "K+5/9"):
        raise PreconditionError("K + 5/9 does not vanish: case 4")
    ci = CaseInvariants(5, dimension=3, structure="sl(2,R)")
    ci.auxiliary["K"] = df.K
    return ci


# -- case 6 ----------------------------------------------------------------------

def case6_invariants(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    t, eq = bf.tester, bf.eq
    N, W, Lm = bf.N, bf.Omega, bf.Lambda
    if not bf.zero(N, "N") or bf.zero(W, "Omega"):
        raise PreconditionError("case 6 needs N = 0 and Omega nonzero")
    if not t.is_zero(Lm.value + 2 * W.value, "relation:Lambda+2Omega"):
        raise ConsistencyError("Lambda + 2 Omega does not vanish")
    ci = CaseInvariants(6)
    K = df.K
    om = df.omega_raised
    C, D = om.c
    G122 = PseudoScalar(gamma122_closed(eq, C, D, -F(9, 5) * W.value), -2)
    if bf.verify:
        table = frame_table(bf, om)
        _check_gamma122(bf, table, G122.value, "case 6")
        k = K.value
        _check_table(bf, table, {
            "G1_11": 0, "G2_11": 0, "G2_12": 0, "G1_21": 0, "G2_21": 0,
            "G1_12": 1 - F(12, 25) * k, "G2_22": F(27, 25) * k,
        }, "case 6")
    conn = bf.connection
    dK = _along(om, K, conn)
    L = dK - F(21, 25) * K ** 2 - K
    ci.auxiliary["I1_as_printed"] = dK - F(21, 25) * K - K
    ci.notes.append("I1 subtracts (21/25) K^2; the variant with (21/25) K is kept "
                    "as an auxiliary field")
    dL = _along(om, L, conn)
    I2 = (W ** 2 * G122 - dL - F(72, 625) * K ** 3 + F(63, 50) * K ** 2
          + F(12, 25) * K * L - K - L)
    ci.auxiliary.update({"omega": om, "Gamma1_22": G122, "K": K, "nabla_omega_K": dK})
    ci.add("I1", L.value, L.weight)
    ci.add("I2", I2.value, I2.weight)
    ci.dimension = 1 if decide_constancy(ci, t) else 0
    return ci


# -- case 7 ----------------------------------------------------------------------

def case7_invariants(bf: BaseFields, df: DegenerateFields | None = None) -> CaseInvariants:
    df = df or DegenerateFields(bf)
    t, eq = bf.tester, bf.eq
    N, W = bf.N, bf.Omega
    if not bf.zero(N, "N") or not bf.zero(W, "Omega"):
        raise PreconditionError("case 7 needs N = 0 and Omega = 0")
    ci = CaseInvariants(7)
    Theta, th = df.Theta, df.theta_raised
    C, D = th.c
    G122 = PseudoScalar(-gamma122_closed(eq, C, D, 1), -4)
    if bf.verify:
        table = frame_table(bf, th)
        _check_gamma122(bf, table, G122.value, "case 7")
        _check_table(bf, table, {k: 0 for k in
                                 ("G1_11", "G2_11", "G1_12", "G2_12",
                                  "G1_21", "G2_21", "G2_22")}, "case 7")
    L = G122 - F(1, 2) * Theta ** 2
    ci.auxiliary.update({"Theta": Theta, "theta": th, "Gamma1_22": G122})
    ci.add("L", L.value, L.weight, exported=False)
    if t.is_zero(L.value, "L"):
        ci.dimension = 2
        ci.structure = "non-Abelian"
        ci["L"].constant, ci["L"].constant_value = True, Fraction(0)
        return ci
    dL = _along(th, L, bf.connection)
    ci.auxiliary["nabla_theta_L"] = dL
    I1 = dL ** 4 / L ** 5
    ci.add("I1", I1.value, I1.weight)
    ci.dimension = 1 if decide_constancy(ci, t) else 0
    return ci
