"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also gathered into the pytest terminal summary (see conftest).
Run directly with ``python tests/test_acceptance.py`` to see only these lines.
"""

from __future__ import annotations

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import (DEGENERATE_BASES, LAMBDA_BASES, affine_mix, degenerate_equation,
                      rand_poly, random_equation)
from pointequiv.canonical import by_name, primaries, random_transform, triangular_transform
from pointequiv.classify import classify
from pointequiv.degfields import (DegenerateFields, compute_Rkq, omega_closed_A, omega_closed_B,
                                  omega_via_matrix)
from pointequiv.deginv import (case2_invariants, case3_invariants, case4_invariants,
                               case5_check, case6_invariants, case7_invariants)
from pointequiv.expr import ZeroTester
from pointequiv.expr.ratfunc import RatFunc
from pointequiv.fields import (BaseFields, Equation, Lambda_via_A, Lambda_via_B, M_via_A,
                               M_via_B, Omega_via_A, Omega_via_B, compute_alpha, compute_beta,
                               compute_F5, gamma_via_A, gamma_via_B, mirror, mirror_expected,
                               phi_via_A, phi_via_B, swap_xy)
from pointequiv.geninv import closed_forms, frame_invariants, frame_route
from pointequiv.tensors import PseudoVector, skew
from pointequiv.transform import apply, check_theta_law, check_weight_law

F = Fraction
x = RatFunc.var("x")
r, s, sigma = RatFunc.func("r"), RatFunc.func("s"), RatFunc.func("sigma")
T = ZeroTester()
TIME_LIMIT = 10.0

RESULTS = []


@contextmanager
def criterion(number, text):
    """Record PASS when the block completes within the time limit, FAIL otherwise."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < TIME_LIMIT
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text} ({elapsed:.2f} s)"
        RESULTS.append(line)
        print(line)
    assert elapsed < TIME_LIMIT, f"criterion {number} took {elapsed:.2f} s"


def test_criterion_01_maximal_degeneration():
    with criterion(1, "y''=0 and its affine images: maximal degeneration, dimension 8"):
        rng = random.Random(1)
        eqs = [Equation.make()] + [apply(Equation.make(), affine_mix(rng)) for _ in range(5)]
        for eq in eqs:
            rep = classify(eq)
            assert (rep.case_id, rep.symmetry_dimension) == ("maximal_degeneration", 8)
            assert rep.verdict == "exact"


def test_criterion_02_reduction_identity():
    with criterion(2, "F^5 with B=1, A=0 reduces to -P"):
        special = PseudoVector(RatFunc.const(1), RatFunc.const(0), 2)
        names = ("p", "q", "r", "s")
        opaque = Equation.from_strings(*(f"{n}(y)" for n in names), functions=names)
        rng = random.Random(2)
        polys = [Equation(*(rand_poly(rng, 3) for _ in range(4))) for _ in range(5)]
        for eq in [opaque] + polys:
            assert (compute_F5(eq, special).value + eq.P).is_zero()


def test_criterion_03_pairing_identity():
    with criterion(3, "3 F^5 = d(alpha, beta) on 20 random equations"):
        for seed in range(20):
            eq = random_equation(1000 + seed, 2)
            alpha = compute_alpha(eq)
            pair = skew(alpha, compute_beta(eq, alpha))
            assert (3 * compute_F5(eq, alpha).value - pair.value).is_zero()


def test_criterion_04_general_position_relations():
    with criterion(4, "I2=1/3, I1=-4 I6, I4=4 I6, I5=-I8 and short I6 = long I6 "
                      "on 10 random equations"):
        for seed in range(10):
            bf = BaseFields(random_equation(2000 + seed))
            cf = closed_forms(bf.eq, bf.alpha, bf.beta, bf.F5)
            fr = frame_route(bf.eq, bf.alpha, bf.beta, bf.F5)
            assert cf["I6"].equals(cf["I6_short"], T)
            assert fr["I2"].e == 0 and (fr["I2"].rho - F(1, 3)).is_zero()
            assert fr["I1"].equals(fr["I6"] * (-4), T)
            assert fr["I4"].equals(fr["I6"] * 4, T)
            assert fr["I5"].equals(-fr["I8"], T)
            for name in ("I3", "I6", "I7", "I8"):
                assert fr[name].equals(cf[name], T)
            assert frame_invariants(bf).names()[:8] == [f"I{k}" for k in range(1, 9)]


def test_criterion_05_case2():
    with criterion(5, "case 2: Omega, Lambda, I1, I2, I3"):
        bf = BaseFields(by_name("case2").equation())
        assert bf.Omega.value == -RatFunc.var("x", F(-1, 4)) / (4 * x)
        assert bf.Lambda.value == -r / (2 * x)
        ci = case2_invariants(bf)
        assert ci["I1"].value == F(2304, 25) * r ** 12
        assert ci["I2"].value == F(15625, 2985984) * sigma ** 4
        assert ci["I3"].value == F(625, 1296) * s ** 6


def test_criterion_06_case3():
    with criterion(6, "case 3: I1, I2"):
        ci = case3_invariants(BaseFields(by_name("case3").equation()))
        assert ci["I1"].value == F(6103515625, 20542695432781824) * sigma ** 8
        assert ci["I2"].value == F(5, 3) * s


def test_criterion_07_case4():
    with criterion(7, "case 4: K, Theta, I1; constant sigma gives dimension 1"):
        ci = case4_invariants(BaseFields(by_name("case4").equation()))
        assert ci["K"].value == -F(5, 48) * sigma * RatFunc.var("x", F(-3, 4)) - F(5, 9)
        assert ci["Theta"].value == sigma * RatFunc.var("x", F(1, 4)) / 4 + F(4, 3) * x
        s1, s2 = RatFunc.func("sigma", 1), RatFunc.func("sigma", 2)
        want = F(6879707136, 390625) * (3 * s2 * sigma - 4 * s1 ** 2) ** 6 / sigma ** 20
        assert ci["I1"].value == want
        const = case4_invariants(BaseFields(by_name("case4_const").equation()))
        assert const["I1"].constant and const.dimension == 1
        rep = classify(by_name("case4_const").equation())
        assert (rep.case_id, rep.symmetry_dimension) == ("intermediate_4", 1)


def test_criterion_08_case5():
    with criterion(8, "case 5: K + 5/9 = 0, dimension 3, sl(2,R)"):
        eq = by_name("case5").equation()
        ci = case5_check(BaseFields(eq))
        assert (ci["K"].value + F(5, 9)).is_zero()
        rep = classify(eq)
        assert (rep.case_id, rep.symmetry_dimension, rep.structure) == \
            ("intermediate_5", 3, "sl(2,R)")


def test_criterion_09_case6():
    with criterion(9, "case 6: Omega=1, Lambda=-2, K=x, I1=sigma, I2=(81/25) s"):
        bf = BaseFields(by_name("case6").equation())
        assert bf.Omega.value == RatFunc.const(1) and bf.Lambda.value == RatFunc.const(-2)
        ci = case6_invariants(bf)
        assert ci["K"].value == x
        assert ci["I1"].value == sigma
        assert ci["I2"].value == F(81, 25) * s


def test_criterion_10_case7():
    with criterion(10, "case 7: Theta, Gamma1_22, L; s=0, s=const, generic s"):
        ci = case7_invariants(BaseFields(by_name("case7").equation()))
        assert ci["Theta"].value == x
        assert ci["Gamma1_22"].value == x ** 2 / 2 + s
        assert ci["L"].value == s
        assert ci.dimension == 0
        zero = classify(by_name("case7_zero").equation())
        assert (zero.symmetry_dimension, zero.structure) == (2, "non-Abelian")
        const = case7_invariants(BaseFields(by_name("case7_const").equation()))
        assert const["I1"].constant and const.dimension == 1
        assert classify(by_name("case7").equation()).symmetry_dimension == 0


def _exact(report):
    return report.passed and report.exact and report.max_deviation == 0


def test_criterion_11_covariance():
    with criterion(11, "weight laws of A/B, F^5, N, Omega and the theta law, "
                       "10 equations x 3 transforms"):
        bf = lambda e: BaseFields(e, verify=False)
        for seed in range(10):
            rng = random.Random(3000 + seed)
            eq = random_equation(3000 + seed)
            deg = degenerate_equation(seed)
            for k in range(3):
                t = triangular_transform(rng)
                for e in (eq, deg):
                    assert _exact(check_weight_law(lambda q: bf(q).alpha, e, t, 2, samples=2))
                    assert _exact(check_weight_law(lambda q: bf(q).F5, e, t, 5, samples=2))
                    assert _exact(check_theta_law(e, t, samples=2))
                assert _exact(check_weight_law(lambda q: bf(q).N, deg, t, 2, samples=2))
                assert _exact(check_weight_law(lambda q: bf(q).Omega, deg, t, 1, samples=2))


def _mirror_ok(bf, mbf, names):
    for name in names:
        sign, partner = mirror_expected(name)
        if mbf.named(name) != sign * swap_xy(bf.named(partner)):
            return False
    return True


def test_criterion_12_mirror():
    with criterion(12, "mirror rules on general and degenerate equations"):
        for seed in range(5):
            eq = random_equation(4000 + seed, 2)
            assert mirror(mirror(eq)).coefficients == eq.coefficients
            assert _mirror_ok(BaseFields(eq), BaseFields(mirror(eq)),
                              ("A", "B", "G", "H", "F5"))
        for seed in range(len(DEGENERATE_BASES)):
            eq = degenerate_equation(seed)
            assert _mirror_ok(BaseFields(eq), BaseFields(mirror(eq)),
                              ("N", "phi1", "phi2", "Omega", "gamma1", "gamma2"))
        for seed in range(len(LAMBDA_BASES)):
            eq = degenerate_equation(seed, LAMBDA_BASES)
            bf, mbf = BaseFields(eq), BaseFields(mirror(eq))
            assert _mirror_ok(bf, mbf, ("Lambda",))
            om, mom = DegenerateFields(bf).omega, DegenerateFields(mbf).omega
            assert mom.c1 == -swap_xy(om.c2) and mom.c2 == -swap_xy(om.c1)


def test_criterion_13_stability():
    with criterion(13, "classification of the nine representatives is stable "
                       "under 3 transforms each"):
        rng = random.Random(13)
        for form in primaries():
            base = classify(form.equation())
            for _ in range(3):
                moved = classify(apply(form.equation(), random_transform(form, rng)))
                assert moved.case_id == base.case_id, form.name
                assert moved.subcase == base.subcase, form.name
                assert moved.symmetry_dimension == base.symmetry_dimension, form.name
                assert moved.constants() == base.constants(), form.name


def test_criterion_14_dual_routes():
    with criterion(14, "B-branch and A-branch formulas agree, matrix and closed omega "
                       "agree"):
        for seed in range(len(DEGENERATE_BASES)):
            eq = degenerate_equation(seed)
            bf = BaseFields(eq, verify=False)
            assert bf.branches.both
            a = bf.alpha
            assert phi_via_B(eq, a) == phi_via_A(eq, a)
            assert Omega_via_B(eq, a) == Omega_via_A(eq, a)
            assert M_via_B(eq, a, bf.N) == M_via_A(eq, a, bf.N)
            assert gamma_via_B(eq, a, bf.N, bf.Omega) == gamma_via_A(eq, a, bf.N, bf.Omega)
        for seed in range(len(LAMBDA_BASES)):
            eq = degenerate_equation(seed, LAMBDA_BASES)
            bf = BaseFields(eq, verify=False)
            a = bf.alpha
            assert Lambda_via_B(eq, a, bf.N, bf.Omega) == Lambda_via_A(eq, a, bf.N, bf.Omega)
            Rkq, _, l2 = compute_Rkq(bf, verify=False)
            mx = omega_via_matrix(a, Rkq, l2, bf.branches)
            cb = omega_closed_B(eq, a, bf.Lambda, bf.Omega)
            ca = omega_closed_A(eq, a, bf.Lambda, bf.Omega)
            assert mx[0] == cb[0] == ca[0] and mx[1] == cb[1] == ca[1]


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
