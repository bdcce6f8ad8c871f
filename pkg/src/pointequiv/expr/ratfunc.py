"""Canonical rational functions in x, y and function-symbol atoms.

``RatFunc`` is the normal form used by all field computations: a reduced
quotient of two flint polynomials over QQ whose generators are rational roots
of atoms (see :mod:`pointequiv.expr.atoms`).  Values are immutable; internally
a value may be re-laid-out when the registry grows.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _Rational

import flint
import mpmath

from .atoms import REGISTRY, X, Y, Atom
from .errors import (DivisionByZero, NegativeBaseFractionalPower,
                     UnsupportedExpression)

EVAL_DPS = 60


def _fmpq(q) -> flint.fmpq:
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _exact_root(q: Fraction, n: int) -> Fraction | None:
    """The real ``n``-th root of ``q`` if it is rational."""
    if n == 1:
        return q
    sign = 1
    if q < 0:
        if n % 2 == 0:
            return None
        sign, q = -1, -q
    out = []
    for part in (q.numerator, q.denominator):
        r = flint.fmpz(part).root(n)
        if int(r) ** n != part:
            return None
        out.append(int(r))
    return sign * Fraction(out[0], out[1])


class RatFunc:
    __slots__ = ("_num", "_den", "_ver", "_dcache")

    def __init__(self, num, den, ver):
        # callers guarantee num/den coprime and den monic in layout ``ver``
        self._num = num
        self._den = den
        self._ver = ver
        self._dcache = None

    # -- construction ------------------------------------------------------
    @classmethod
    def const(cls, q) -> RatFunc:
        lay = REGISTRY.current
        return cls(lay.ctx.constant(_fmpq(q)), lay.ctx.constant(1), lay.version)

    @classmethod
    def atom(cls, atom: Atom, exponent=1) -> RatFunc:
        exponent = Fraction(exponent)
        idx = REGISTRY.ensure(atom, exponent.denominator)
        lay = REGISTRY.current
        k = exponent * lay.roots[idx]
        assert k.denominator == 1
        k = int(k)
        g = lay.ctx.gen(idx)
        one = lay.ctx.constant(1)
        if k >= 0:
            return cls(g ** k, one, lay.version)
        return cls(one, g ** (-k), lay.version)

    @classmethod
    def var(cls, name: str, exponent=1) -> RatFunc:
        return cls.atom(Atom(name), exponent)

    @classmethod
    def func(cls, name: str, order: int = 0, arg: str = "y", exponent=1) -> RatFunc:
        return cls.atom(Atom(name, order, arg), exponent)

    @classmethod
    def _make(cls, num, den) -> RatFunc:
        lay = REGISTRY.current
        if num.is_zero():
            return cls(num, lay.ctx.constant(1), lay.version)
        if den.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls(num, den, lay.version)

    # -- layout ------------------------------------------------------------
    def _cur(self):
        lay = REGISTRY.current
        if self._ver != lay.version:
            num = REGISTRY.lift(self._num, self._ver)
            den = REGISTRY.lift(self._den, self._ver)
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num / lc, den / lc
            self._num, self._den, self._ver = num, den, lay.version
            self._dcache = None
        return self._num, self._den

    @staticmethod
    def _coerce(other) -> RatFunc | None:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, _Rational)):
            return RatFunc.const(other)
        return None

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cur()
        c, d = o._cur()
        if b == d:
            return RatFunc._make(a + c, b)
        if b.is_one():
            return RatFunc._make(a * d + c, d)
        if d.is_one():
            return RatFunc._make(a + c * b, b)
        g = b.gcd(d)
        if g.is_one():
            return RatFunc._make(a * d + c * b, b * d)
        b1, d1 = b / g, d / g
        return RatFunc._make(a * d1 + c * b1, b1 * d)

    __radd__ = __add__

    def __neg__(self):
        a, b = self._cur()
        return RatFunc(-a, b, self._ver)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cur()
        c, d = o._cur()
        if a.is_zero() or c.is_zero():
            return RatFunc._make(a.context().constant(0), b)
        if b.is_one() and d.is_one():
            return RatFunc(a * c, b, REGISTRY.current.version)
        g1 = a.gcd(d) if not d.is_one() else None
        g2 = c.gcd(b) if not b.is_one() else None
        if g1 is not None and not g1.is_one():
            a, d = a / g1, d / g1
        if g2 is not None and not g2.is_one():
            c, b = c / g2, b / g2
        num, den = a * c, b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc(num, den, REGISTRY.current.version)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        a, b = self._cur()
        if a.is_zero():
            raise DivisionByZero("inverse of zero")
        lc = a.leading_coefficient()
        return RatFunc(b / lc, a / lc, self._ver)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent):
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            n = int(exponent)
            if n < 0:
                return self.inverse() ** (-n)
            a, b = self._cur()
            return RatFunc(a ** n, b ** n, self._ver)
        return self._root_power(exponent)

    def _root_power(self, q: Fraction) -> RatFunc:
        """Fractional power; only monomial quotients are supported."""
        a, b = self._cur()
        if len(a) != 1 or len(b) != 1:
            raise UnsupportedExpression(
                f"non-integer power {q} of a non-monomial expression: {self}")
        (ea, ca), = a.terms()
        (eb, cb), = b.terms()
        coeff = _frac(ca) / _frac(cb)
        if coeff < 0:
            raise NegativeBaseFractionalPower(f"({coeff})^{q}")
        root = _exact_root(coeff, q.denominator)
        if root is None:
            raise UnsupportedExpression(f"irrational constant ({coeff})^{q}")
        lay = REGISTRY.current
        out = RatFunc.const(root ** q.numerator)
        for i, atom in enumerate(lay.atoms):
            e = Fraction(int(ea[i] - eb[i]), lay.roots[i]) if i < len(ea) else 0
            if e:
                out = out * RatFunc.atom(atom, e * q)
        return out

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cur()
        c, d = o._cur()
        return a * d == c * b

    def __hash__(self):
        return hash(str(self))

    def proportional(self, other) -> Fraction | None:
        """c with other = c * self for a rational constant c, else None."""
        a, b = self._cur()
        c, d = other._cur()
        if a.is_zero() or c.is_zero() or b != d:
            return None
        la, lc = a.leading_coefficient(), c.leading_coefficient()
        if c * la != a * lc:
            return None
        return _frac(lc) / _frac(la)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_constant(self) -> bool:
        a, b = self._cur()
        return a.is_constant() and b.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        a, b = self._cur()
        ca = a.leading_coefficient() if not a.is_zero() else 0
        return _frac(flint.fmpq(ca)) / _frac(flint.fmpq(b.leading_coefficient()))

    # -- structure ---------------------------------------------------------
    def atoms(self) -> set[Atom]:
        a, b = self._cur()
        lay = REGISTRY.current
        used = set()
        for p in (a, b):
            for i, deg in enumerate(p.degrees()):
                if deg > 0:
                    used.add(lay.atoms[i])
        return used

    def numerator(self) -> RatFunc:
        a, b = self._cur()
        return RatFunc(a, b.context().constant(1), self._ver)

    def denominator(self) -> RatFunc:
        a, b = self._cur()
        return RatFunc(b, b.context().constant(1), self._ver)

    def is_polynomial(self) -> bool:
        return self._cur()[1].is_one()

    def terms(self, which="num"):
        """Yield ``(coeff, {atom: Fraction exponent})`` for num or den."""
        a, b = self._cur()
        p = a if which == "num" else b
        lay = REGISTRY.current
        for exps, c in p.terms():
            mono = {lay.atoms[i]: Fraction(int(e), lay.roots[i])
                    for i, e in enumerate(exps) if e}
            yield _frac(c), mono

    # -- calculus ----------------------------------------------------------
    def _poly_diff(self, p, var: str):
        """d p/d var as a RatFunc, p a polynomial in the current layout."""
        lay = REGISTRY.current
        ctx = lay.ctx
        plain = ctx.constant(0)
        extra = None
        if p.is_zero():
            return RatFunc(p, ctx.constant(1), lay.version)
        for i, deg in enumerate(p.degrees()):
            if deg <= 0:
                continue
            d_atom = lay.atoms[i].derivative(var)
            if d_atom == 0:
                continue
            if d_atom == 1:
                dpoly = ctx.constant(1)
            else:
                j = REGISTRY.ensure(d_atom)
                if REGISTRY.current.version != lay.version:
                    return self._poly_diff(REGISTRY.lift(p, lay.version), var)
                dpoly = ctx.gen(j) ** lay.roots[j]
            L = lay.roots[i]
            part = p.derivative(i) * dpoly
            if L == 1:
                plain += part
            else:
                g = ctx.gen(i)
                term = RatFunc._make(part * g / L, g ** L)
                extra = term if extra is None else extra + term
        out = RatFunc(plain, ctx.constant(1), lay.version)
        if extra is not None:
            out = out + extra
        return out

    def diff(self, var: str, n: int = 1) -> RatFunc:
        if n == 0:
            return self
        if n > 1:
            return self.diff(var).diff(var, n - 1)
        a, b = self._cur()
        if self._dcache is not None and var in self._dcache:
            return self._dcache[var]
        da = self._poly_diff(a, var)
        a, b = self._cur()
        if b.is_one():
            out = da
        else:
            db = self._poly_diff(b, var)
            a, b = self._cur()
            num = da * RatFunc(b, b.context().constant(1), self._ver) \
                - db * RatFunc(a, b.context().constant(1), self._ver)
            out = num / RatFunc(b * b, b.context().constant(1), self._ver)
        if self._dcache is None:
            self._dcache = {}
        self._dcache[var] = out
        return out

    def partial(self, p: int, q: int) -> RatFunc:
        """The mixed partial f_{p.q}."""
        return self.diff("x", p).diff("y", q)

    # -- substitution ------------------------------------------------------
    def subs(self, bindings: dict) -> RatFunc:
        """Simultaneous substitution of the variables x, y.

        Function atoms ``f(v)`` follow their argument only when it is mapped
        to a bare variable; anything else leaves the fragment.
        """
        bindings = {k: self._coerce(v) for k, v in bindings.items()}
        self._cur()
        images = {}
        steps = {}
        for atom in self.atoms():
            i = REGISTRY.index(atom)
            L = REGISTRY.current.roots[i]
            if atom.is_variable:
                if atom.name not in bindings:
                    continue
                img = bindings[atom.name]
                # substitute for gen^m, where m divides every exponent present
                m = self._exponent_gcd(i, L)
                steps[i] = (m, L)
                images[atom] = img if m == L else img ** Fraction(m, L)
            elif atom.arg in bindings:
                img = bindings[atom.arg]
                target = None
                if img.is_polynomial():
                    for v in ("x", "y"):
                        if img == RatFunc.var(v):
                            target = v
                if target is None:
                    raise UnsupportedExpression(
                        f"cannot substitute {atom.arg} -> {img} inside {atom}")
                images[atom] = RatFunc.atom(Atom(atom.name, atom.order, target),
                                            Fraction(1, L))
                steps[i] = (1, L)
        if not images:
            return self
        num = self._subs_poly(self._num, images, steps)
        den = self._subs_poly(self._den, images, steps)
        return num / den

    def _exponent_gcd(self, i: int, L: int) -> int:
        g = L
        for p in self._cur():
            for exps, _ in p.terms():
                g = math.gcd(g, int(exps[i]))
        return g

    def _subs_poly(self, p, images: dict, steps: dict) -> RatFunc:
        gens = {REGISTRY.index(atom): img for atom, img in images.items()}
        parts = {i: (img.numerator(), img.denominator()) for i, img in gens.items()}
        lay = REGISTRY.current
        ctx = lay.ctx
        p = REGISTRY.lift(p, self._ver)
        parts = {i: (n._cur()[0], d._cur()[0]) for i, (n, d) in parts.items()}
        # a step fixed in the old layout scales with any growth of the root
        step = {i: m * lay.roots[i] // L for i, (m, L) in steps.items()}
        degs = [max(0, int(k)) // step.get(i, 1) for i, k in enumerate(p.degrees())]
        pw_n = {i: [ctx.constant(1)] for i in gens}
        pw_d = {i: [ctx.constant(1)] for i in gens}
        for i in gens:
            for _ in range(degs[i]):
                pw_n[i].append(pw_n[i][-1] * parts[i][0])
                pw_d[i].append(pw_d[i][-1] * parts[i][1])
        total = ctx.constant(0)
        for exps, c in p.terms():
            term = ctx.constant(c)
            rest = list(exps)
            for i in gens:
                m = int(exps[i]) // step[i]
                term *= pw_n[i][m] * pw_d[i][degs[i] - m]
                rest[i] = 0
            total += term * ctx.from_dict({tuple(rest): 1})
        den = ctx.constant(1)
        for i in gens:
            den *= pw_d[i][degs[i]]
        return RatFunc._make(total, den)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, point: dict, func_values: dict | None = None):
        """Value at ``point`` ({'x': q, 'y': q}); function atoms are looked up
        in ``func_values`` keyed by Atom or ``(name, order)``.

        Exact Fraction when every generator value is rational, otherwise an
        mpmath float at ``EVAL_DPS`` digits.
        """
        func_values = func_values or {}
        a, b = self._cur()
        lay = REGISTRY.current
        vals = []
        steps = {}  # generator index -> m, when vals holds the value of gen^m
        exact = True
        da, db = a.degrees(), b.degrees()
        for i, atom in enumerate(lay.atoms):
            if da[i] <= 0 and db[i] <= 0:
                vals.append(0)
                continue
            if atom.is_variable:
                if atom.name not in point:
                    raise KeyError(f"no value for {atom}")
                v = point[atom.name]
            else:
                if atom in func_values:
                    v = func_values[atom]
                elif (atom.name, atom.order) in func_values:
                    v = func_values[(atom.name, atom.order)]
                else:
                    raise KeyError(f"no value for {atom}")
            L = lay.roots[i]
            if isinstance(v, mpmath.mpf):
                exact = False
                if L > 1:
                    if v < 0:
                        raise NegativeBaseFractionalPower(f"{atom} = {v}")
                    v = mpmath.root(v, L)
                vals.append(v)
                continue
            v = Fraction(v)
            if L > 1:
                # only powers gen^m occur, so an exact root of order L/m suffices
                m = self._exponent_gcd(i, L)
                if v < 0 and m < L:
                    raise NegativeBaseFractionalPower(f"{atom} = {v}")
                r = v if m == L else _exact_root(v, L // m)
                if r is not None:
                    steps[i] = m
                    vals.append(r)
                    continue
                exact = False
                with mpmath.workdps(EVAL_DPS):
                    r = mpmath.root(mpmath.mpf(v.numerator) / v.denominator, L)
                v = r
            vals.append(v)
        if exact:
            if steps:
                den = _eval_exact(b, vals, steps)
                num = _eval_exact(a, vals, steps) if den else 0
            else:
                args = [_fmpq(v) for v in vals]
                den = _frac(b(*args))
                num = _frac(a(*args)) if den else 0
            if den == 0:
                raise DivisionByZero(f"denominator vanishes at {point}")
            return num / den
        for i, m in steps.items():
            vals[i] = _mp_root_power(vals[i], m)
        with mpmath.workdps(EVAL_DPS):
            mvals = [v if isinstance(v, mpmath.mpf)
                     else mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction)
                     else mpmath.mpf(v) for v in vals]
            den = _eval_dict(b, mvals)
            if den == 0:
                raise DivisionByZero(f"denominator vanishes at {point}")
            return _eval_dict(a, mvals) / den

    # -- output ------------------------------------------------------------
    def to_expr(self):
        from .tree import from_ratfunc
        return from_ratfunc(self)

    def __str__(self):
        return str(self.to_expr())

    def __repr__(self):
        return f"RatFunc({self})"


def _eval_exact(p, vals, steps):
    total = Fraction(0)
    for exps, c in p.terms():
        t = Fraction(int(c.p), int(c.q))
        for i, (v, e) in enumerate(zip(vals, exps)):
            if e:
                t *= v ** (int(e) // steps.get(i, 1))
        total += t
    return total


def _mp_root_power(r: Fraction, m: int):
    """The generator value (r^(1/m)) as an mpmath float, r being gen^m."""
    with mpmath.workdps(EVAL_DPS):
        return mpmath.root(mpmath.mpf(r.numerator) / r.denominator, m)


def _eval_dict(p, vals):
    total = mpmath.mpf(0)
    for exps, c in p.terms():
        t = mpmath.mpf(int(c.p)) / int(c.q)
        for v, e in zip(vals, exps):
            if e:
                t *= v ** int(e)
        total += t
    return total


def x() -> RatFunc:
    return RatFunc.atom(X)


def y() -> RatFunc:
    return RatFunc.atom(Y)
