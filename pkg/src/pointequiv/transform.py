"""Point transformations of the equation and numerical checks of the
transformation laws of weighted fields.

A transform is given by the new coordinates as functions of the old ones,
``xt(x, y)`` and ``yt(x, y)``, together with the inverse map written in the
new coordinates (which, in the output equation, are again called x and y).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .expr.errors import (DivisionByZero, EvaluationExhausted, ExprError,
                          NegativeBaseFractionalPower)
from .expr.ratfunc import RatFunc
from .expr.tree import Expr, substitute
from .expr.zerotest import ZeroTester, _perfect_power_sample
from .fields import Equation, coerce_value
from .tensors import PseudoCovector, PseudoScalar, PseudoVector, theta_array

VARS = ("x", "y")


class TransformError(ExprError):
    pass


class SingularTransform(TransformError):
    """The Jacobian determinant vanishes identically."""


class NonInvertible(TransformError):
    """No inverse was supplied and the map is not of an auto-invertible shape."""


def _subs(v, bindings):
    if isinstance(v, RatFunc):
        return v.subs(bindings)
    return substitute(v, {k: (b if isinstance(b, Expr) else b.to_expr())
                          for k, b in bindings.items()})


def _x():
    return RatFunc.var("x")


def _y():
    return RatFunc.var("y")


def _is_zero(v) -> bool:
    if isinstance(v, RatFunc):
        return v.is_zero()
    return ZeroTester().is_zero(v)


def _split_affine(f, var):
    """(a, b) with f = a*var + b and a, b free of var, or None."""
    if not _is_zero(f.diff(var, 2)):
        return None
    a = f.diff(var)
    b = f - a * RatFunc.var(var)
    return a, b


def _depends_on(f, var) -> bool:
    return not _is_zero(f.diff(var))


def auto_inverse(xt, yt):
    """Invert maps whose structure is linear in each variable in turn.

    Handles affine maps, and triangular maps where one new coordinate is an
    affine function (constant coefficients) of a single old coordinate while
    the other is affine in the remaining old coordinate, with coefficients
    that may depend on the first one.
    """
    new = {"x": _x(), "y": _y()}
    for first_name, first, second_name, second in (("x", xt, "y", yt), ("y", yt, "x", xt)):
        for solo, other in (("x", "y"), ("y", "x")):
            if _depends_on(first, other):
                continue
            lin = _split_affine(first, solo)
            if lin is None or not (lin[0].is_constant() and lin[1].is_constant()):
                continue
            a, b = lin
            if _is_zero(a):
                continue
            solo_inv = (new[first_name] - b) / a
            lin2 = _split_affine(second, other)
            if lin2 is None or _is_zero(lin2[0]):
                continue
            c, e = (v.subs({solo: solo_inv}) for v in lin2)
            other_inv = (new[second_name] - e) / c
            inv = {solo: solo_inv, other: other_inv}
            return inv["x"], inv["y"]
    lx, ly = _split_affine(xt, "x"), _split_affine(yt, "x")
    if lx and ly:
        a, rest_x = lx
        c, rest_y = ly
        lx2, ly2 = _split_affine(rest_x, "y"), _split_affine(rest_y, "y")
        if lx2 and ly2 and all(v.is_constant() for v in (a, c, *lx2, *ly2)):
            b, e = lx2
            d, f = ly2
            det = a * d - b * c
            if not _is_zero(det):
                u, v = new["x"] - e, new["y"] - f
                return (d * u - b * v) / det, (a * v - c * u) / det
    raise NonInvertible("supply the inverse map for this transform")


@dataclass(frozen=True)
class PointTransform:
    xt: object
    yt: object
    inverse: tuple | None = None

    @classmethod
    def from_strings(cls, xt, yt, inverse=None, functions=()):
        f = lambda s: coerce_value(s, functions)
        inv = None if inverse is None else (f(inverse[0]), f(inverse[1]))
        return cls(f(xt), f(yt), inv).checked()

    @classmethod
    def make(cls, xt, yt, inverse=None):
        return cls.from_strings(xt, yt, inverse)

    def checked(self) -> "PointTransform":
        if _is_zero(self.det()):
            raise SingularTransform("the Jacobian determinant vanishes identically")
        inv = self.inverse
        if inv is None:
            inv = auto_inverse(self.xt, self.yt)
        elif all(isinstance(v, RatFunc) for v in (*inv, self.xt, self.yt)):
            back = (_subs(self.xt, {"x": inv[0], "y": inv[1]}),
                    _subs(self.yt, {"x": inv[0], "y": inv[1]}))
            if not (back[0] == _x() and back[1] == _y()):
                raise NonInvertible("the supplied inverse does not invert the map")
        return PointTransform(self.xt, self.yt, tuple(inv))

    # -- Jacobians -----------------------------------------------------
    def jacobian(self):
        """T^i_j = d(new^i)/d(old^j) as functions of the old coordinates."""
        return tuple(tuple(f.diff(v) for v in VARS) for f in (self.xt, self.yt))

    def det(self):
        T = self.jacobian()
        return T[0][0] * T[1][1] - T[0][1] * T[1][0]

    def inverse_transform(self) -> "PointTransform":
        return PointTransform(self.inverse[0], self.inverse[1], (self.xt, self.yt))

    def image(self, point: dict) -> dict:
        return {"x": _value(self.xt, point), "y": _value(self.yt, point)}

    def __str__(self):
        return f"(x, y) -> ({self.xt}, {self.yt})"


def _value(v, point, func_values=None):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return v.evaluate(point, func_values or {})


# -- applying a transform ------------------------------------------------------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            out[i + j] = out[i + j] + p * q
    return out


def _padd(*ps):
    n = max(len(p) for p in ps)
    out = [0] * n
    for p in ps:
        for i, c in enumerate(p):
            out[i] = out[i] + c
    return out


def _pscale(p, s):
    return [s * c for c in p]


def apply(eq: Equation, t: PointTransform) -> Equation:
    """The equation satisfied by the curves in the new coordinates.

    With x = X(u, v), y = Y(u, v) and w = dv/du, the chain rule gives
    J w'' = P d^3 + 3Q n d^2 + 3R n^2 d + S n^3 - (Y_uu + 2Y_uv w + Y_vv w^2) d
    + (X_uu + 2X_uv w + X_vv w^2) n, where d = X_u + X_v w, n = Y_u + Y_v w
    and J = X_u Y_v - X_v Y_u.
    """
    if t.inverse is None:
        t = t.checked()
    X, Y = t.inverse
    P, Q, R, S = (_subs(c, {"x": X, "y": Y}) for c in eq.coefficients)
    Xu, Xv, Yu, Yv = X.diff("x"), X.diff("y"), Y.diff("x"), Y.diff("y")
    dd = [Xu, Xv]
    nn = [Yu, Yv]
    d2, n2 = _pmul(dd, dd), _pmul(nn, nn)
    c = _padd(_pscale(_pmul(d2, dd), P),
              _pscale(_pmul(d2, nn), 3 * Q),
              _pscale(_pmul(n2, dd), 3 * R),
              _pscale(_pmul(n2, nn), S),
              _pscale(_pmul([Y.diff("x", 2), 2 * Y.partial(1, 1), Y.diff("y", 2)], dd), -1),
              _pmul([X.diff("x", 2), 2 * X.partial(1, 1), X.diff("y", 2)], nn))
    J = Xu * Yv - Xv * Yu
    if _is_zero(J):
        raise SingularTransform("inverse Jacobian vanishes identically")
    c = c + [0] * (4 - len(c))
    coeffs = (c[0] / J, c[1] / (3 * J), c[2] / (3 * J), c[3] / J)
    coeffs = tuple(v if not isinstance(v, int) else RatFunc.const(v) for v in coeffs)
    return eq.with_coefficients(*coeffs)


# -- numerical law checks ---------------------------------------------------------------

@dataclass
class LawReport:
    passed: bool
    samples: int
    max_deviation: object
    exact: bool
    details: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def _root_orders(values) -> dict:
    from .expr.zerotest import _root_orders as ro
    out = {}
    for v in values:
        if isinstance(v, (RatFunc, Expr)):
            for k, L in ro(v).items():
                out[k] = math.lcm(out.get(k, 1), L)
    return out


def _func_jet(eq, rng):
    """Random values for every function atom (name, order) up to order 12."""
    names = set(eq.functions)
    for c in eq.coefficients:
        if isinstance(c, (RatFunc, Expr)):
            names |= {a.name for a in c.atoms() if not a.is_variable}
    return {(n, k): Fraction(rng.randint(1, 60), rng.randint(1, 7))
            for n in sorted(names) for k in range(13)}


def _sample_points(eq, t, samples, seed):
    rng = random.Random(seed)
    roots = _root_orders(list(eq.coefficients) + [t.xt, t.yt])
    for _ in range(samples * 10):
        p = {v: _perfect_power_sample(rng, 1, 20, roots.get(v, 1)) for v in VARS}
        yield p, _func_jet(eq, rng)


def _num(v):
    return v if not isinstance(v, Fraction) else mpmath.mpf(v.numerator) / v.denominator


def _deviation(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return abs(a - b), True
    with mpmath.workdps(60):
        a, b = _num(a), _num(b)
        scale = max(abs(a), abs(b), mpmath.mpf(1))
        return abs(a - b) / scale, False


def _tensor_parts(v):
    """(weight, kind, components) for a field value."""
    if isinstance(v, PseudoScalar):
        return v.weight, "s", (v.value,)
    if isinstance(v, PseudoVector):
        return v.weight, "u", v.c
    if isinstance(v, PseudoCovector):
        return v.weight, "d", v.c
    return None, "s", (v,)


def check_weight_law(field_fn, eq: Equation, t: PointTransform, m: int,
                     samples: int = 5, seed: int = 0, rtol: float = 1e-9) -> LawReport:
    """Compare f(eq) at p with (det T)^m times the transformed field at t(p).

    ``field_fn`` returns a PseudoScalar, PseudoVector, PseudoCovector or a
    bare value; vectors pick up S factors and covectors T factors.
    """
    t = t if t.inverse is not None else t.checked()
    teq = apply(eq, t)
    f0 = field_fn(eq)
    f1 = field_fn(teq)
    _, kind, c0 = _tensor_parts(f0)
    _, _, c1 = _tensor_parts(f1)
    T = t.jacobian()
    det = t.det()
    worst, exact, done, details = Fraction(0), True, 0, []
    for p, jet in _sample_points(eq, t, samples, seed):
        if done >= samples:
            break
        try:
            q = t.image(p)
            lhs = [_value(c, p, jet) for c in c0]
            rhs = [_value(c, q, jet) for c in c1]
            D = _value(det, p)
            Tn = [[_value(T[i][j], p) for j in range(2)] for i in range(2)]
        except (DivisionByZero, NegativeBaseFractionalPower, ZeroDivisionError):
            continue
        if D == 0:
            continue
        if kind == "u":
            Dt = Tn[0][0] * Tn[1][1] - Tn[0][1] * Tn[1][0]
            Sn = [[Tn[1][1] / Dt, -Tn[0][1] / Dt], [-Tn[1][0] / Dt, Tn[0][0] / Dt]]
            rhs = [Sn[i][0] * rhs[0] + Sn[i][1] * rhs[1] for i in range(2)]
        elif kind == "d":
            rhs = [Tn[0][i] * rhs[0] + Tn[1][i] * rhs[1] for i in range(2)]
        factor = D ** m
        for a, b in zip(lhs, rhs):
            dev, ex = _deviation(a, factor * b)
            exact = exact and ex
            worst = max(worst, dev) if ex == isinstance(worst, Fraction) else max(_num(worst), _num(dev))
        details.append({"point": p, "image": q})
        done += 1
    if done < samples:
        raise EvaluationExhausted("too many singular sample points")
    passed = worst == 0 if exact else worst <= rtol
    return LawReport(passed, done, worst, exact, details)


def check_theta_law(eq: Equation, t: PointTransform, samples: int = 3,
                    seed: int = 0) -> LawReport:
    """Residual of the affine-like transformation law of theta^k_{ij}."""
    t = t if t.inverse is not None else t.checked()
    teq = apply(eq, t)
    th, tht = theta_array(eq), theta_array(teq)
    T = t.jacobian()
    dT = [[[T[m][i].diff(VARS[j]) for j in range(2)] for i in range(2)] for m in range(2)]
    det = t.det()
    ddet = [det.diff(v) for v in VARS]
    worst, exact, done = Fraction(0), True, 0
    for p, jet in _sample_points(eq, t, samples, seed):
        if done >= samples:
            break
        try:
            q = t.image(p)
            a = [[[_value(th[k][i][j], p, jet) for j in range(2)] for i in range(2)]
                 for k in range(2)]
            b = [[[_value(tht[k][i][j], q, jet) for j in range(2)] for i in range(2)]
                 for k in range(2)]
            Tn = [[_value(T[i][j], p) for j in range(2)] for i in range(2)]
            dTn = [[[_value(dT[m][i][j], p) for j in range(2)] for i in range(2)]
                   for m in range(2)]
            D = _value(det, p)
            sig = [_value(g, p) / D for g in ddet]
        except (DivisionByZero, NegativeBaseFractionalPower, ZeroDivisionError):
            continue
        Sn = [[Tn[1][1] / D, -Tn[0][1] / D], [-Tn[1][0] / D, Tn[0][0] / D]]
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    v = 0
                    for mm in range(2):
                        for pp in range(2):
                            for qq in range(2):
                                v += Sn[k][mm] * Tn[pp][i] * Tn[qq][j] * b[mm][pp][qq]
                        v += Sn[k][mm] * dTn[mm][i][j]
                    v -= (sig[i] * (k == j) + sig[j] * (k == i)) / 3
                    dev, ex = _deviation(a[k][i][j], v)
                    exact = exact and ex
                    worst = max(_num(worst), _num(dev)) if not exact else max(worst, dev)
        done += 1
    if done < samples:
        raise EvaluationExhausted("too many singular sample points")
    passed = worst == 0 if exact else worst <= 1e-9
    return LawReport(passed, done, worst, exact)
