"""Immutable expression trees.

Trees are what users write and read: the parser produces them, reports print
them.  ``to_ratfunc`` maps a tree into the canonical normal form when it lies
in the supported fragment; ``normalize`` maps back to a canonical tree.
Arithmetic on trees performs only light local simplification (flattening,
constant folding, dropping zeros and ones), never expansion.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _Rational

import mpmath

from .atoms import Atom
from .errors import (DivisionByZero, NegativeBaseFractionalPower,
                     UnsupportedExpression)
from .ratfunc import EVAL_DPS, RatFunc, _exact_root


class Expr:
    __slots__ = ("_hash", "_memo")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, mul(-1, other))

    def __rsub__(self, other):
        return add(other, mul(-1, self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return mul(-1, self)

    def __pow__(self, exponent):
        return power(self, exponent)

    # -- protocol shared with RatFunc -------------------------------------
    def diff(self, var: str, n: int = 1) -> Expr:
        out = self
        for _ in range(n):
            out = _diff(out, var)
        return out

    def partial(self, p: int, q: int) -> Expr:
        return self.diff("x", p).diff("y", q)

    def subs(self, bindings: dict) -> Expr:
        return substitute(self, bindings)

    def evaluate(self, point: dict, func_values: dict | None = None):
        return eval_tree(self, point, func_values)

    def to_ratfunc(self) -> RatFunc:
        return to_ratfunc(self)

    def atoms(self) -> set[Atom]:
        return _atoms(self)

    def __str__(self):
        return pretty(self)

    def __repr__(self):
        return f"Expr({pretty(self)})"

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__, self._key()))
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other):
        if not isinstance(other, Expr):
            if isinstance(other, (int, _Rational)):
                return isinstance(self, Const) and self.value == other
            return NotImplemented
        return type(self) is type(other) and self._key() == other._key()

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    def _key(self):
        raise NotImplementedError


def _init(obj, **fields):
    for k, v in fields.items():
        object.__setattr__(obj, k, v)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        _init(self, value=Fraction(value))

    def _key(self):
        return self.value


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        _init(self, name=name)

    def _key(self):
        return self.name


class Func(Expr):
    """Application ``name^(order)(arg)`` of an opaque univariate function."""

    __slots__ = ("name", "order", "arg")

    def __init__(self, name: str, order: int = 0, arg: str = "y"):
        _init(self, name=name, order=order, arg=arg)

    @property
    def atom(self) -> Atom:
        return Atom(self.name, self.order, self.arg)

    def _key(self):
        return (self.name, self.order, self.arg)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        _init(self, terms=tuple(terms))

    def _key(self):
        return self.terms


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        _init(self, factors=tuple(factors))

    def _key(self):
        return self.factors


class Div(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        _init(self, num=num, den=den)

    def _key(self):
        return (self.num, self.den)


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        _init(self, base=base, exp=Fraction(exp))

    def _key(self):
        return (self.base, self.exp)


ZERO = Const(0)
ONE = Const(1)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, RatFunc):
        return v.to_expr()
    if isinstance(v, (int, _Rational)):
        return Const(v)
    if isinstance(v, str):
        from .parser import parse
        return parse(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Expr")


# -- smart constructors ------------------------------------------------------

def add(*args) -> Expr:
    terms = []
    c = Fraction(0)
    for a in args:
        a = as_expr(a)
        parts = a.terms if isinstance(a, Add) else (a,)
        for t in parts:
            if isinstance(t, Const):
                c += t.value
            else:
                terms.append(t)
    if c:
        terms.append(Const(c))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(terms)


def mul(*args) -> Expr:
    factors = []
    c = Fraction(1)
    for a in args:
        a = as_expr(a)
        parts = a.factors if isinstance(a, Mul) else (a,)
        for f in parts:
            if isinstance(f, Const):
                c *= f.value
            else:
                factors.append(f)
    if c == 0:
        return ZERO
    if c != 1:
        factors.insert(0, Const(c))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(factors)


def div(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(b, Const):
        if b.value == 0:
            raise DivisionByZero("division by the constant 0")
        return mul(Const(1 / b.value), a)
    if a == ZERO:
        return ZERO
    return Div(a, b)


def power(base, exponent) -> Expr:
    base = as_expr(base)
    exponent = Fraction(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if exponent.denominator == 1:
            if base.value == 0 and exponent < 0:
                raise DivisionByZero("0 to a negative power")
            return Const(base.value ** int(exponent))
        root = _exact_root(base.value, exponent.denominator) if base.value >= 0 else None
        if root is not None:
            return Const(root ** exponent.numerator)
    if isinstance(base, Pow) and exponent.denominator == 1:
        return power(base.base, base.exp * exponent)
    return Pow(base, exponent)


# -- differentiation ---------------------------------------------------------

def _memo(e: Expr) -> dict:
    try:
        return e._memo
    except AttributeError:
        m = {}
        object.__setattr__(e, "_memo", m)
        return m


def _diff(e: Expr, var: str) -> Expr:
    memo = _memo(e)
    key = ("d", var)
    if key in memo:
        return memo[key]
    if isinstance(e, Const):
        out = ZERO
    elif isinstance(e, Var):
        out = ONE if e.name == var else ZERO
    elif isinstance(e, Func):
        out = Func(e.name, e.order + 1, e.arg) if e.arg == var else ZERO
    elif isinstance(e, Add):
        out = add(*[_diff(t, var) for t in e.terms])
    elif isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            df = _diff(f, var)
            if df != ZERO:
                parts.append(mul(*e.factors[:i], df, *e.factors[i + 1:]))
        out = add(*parts)
    elif isinstance(e, Div):
        dn, dd = _diff(e.num, var), _diff(e.den, var)
        if dd == ZERO:
            out = div(dn, e.den)
        else:
            out = div(add(mul(dn, e.den), mul(-1, e.num, dd)), power(e.den, 2))
    elif isinstance(e, Pow):
        db = _diff(e.base, var)
        out = ZERO if db == ZERO else mul(Const(e.exp), power(e.base, e.exp - 1), db)
    else:
        raise TypeError(type(e))
    memo[key] = out
    return out


def differentiate(e, var: str, n: int = 1) -> Expr:
    """n-th partial derivative of ``e`` with respect to ``var``."""
    return as_expr(e).diff(var, n)


def partial(e, p: int, q: int) -> Expr:
    """f_{p.q}: p times in x, q times in y."""
    return as_expr(e).partial(p, q)


# -- substitution ------------------------------------------------------------

def substitute(e, bindings: dict) -> Expr:
    """Simultaneous substitution of the variables named in ``bindings``."""
    e = as_expr(e)
    bindings = {k: as_expr(v) for k, v in bindings.items()}
    cache = {}

    def go(n):
        if id(n) in cache:
            return cache[id(n)][1]
        if isinstance(n, Const):
            out = n
        elif isinstance(n, Var):
            out = bindings.get(n.name, n)
        elif isinstance(n, Func):
            if n.arg in bindings:
                img = bindings[n.arg]
                if not isinstance(img, Var):
                    raise UnsupportedExpression(
                        f"cannot substitute {n.arg} -> {img} inside {n}")
                out = Func(n.name, n.order, img.name)
            else:
                out = n
        elif isinstance(n, Add):
            out = add(*[go(t) for t in n.terms])
        elif isinstance(n, Mul):
            out = mul(*[go(f) for f in n.factors])
        elif isinstance(n, Div):
            out = div(go(n.num), go(n.den))
        elif isinstance(n, Pow):
            out = power(go(n.base), n.exp)
        else:
            raise TypeError(type(n))
        cache[id(n)] = (n, out)
        return out

    return go(e)


# -- evaluation (independent of the normal form) ------------------------------

def eval_tree(e, point: dict, func_values: dict | None = None):
    """Recursive evaluation; exact Fractions unless an irrational root occurs."""
    e = as_expr(e)
    func_values = func_values or {}
    cache = {}

    def lookup(n):
        if (n.name, n.order) in func_values:
            return func_values[(n.name, n.order)]
        if n.atom in func_values:
            return func_values[n.atom]
        raise KeyError(f"no value for {n.atom}")

    def go(n):
        k = id(n)
        if k in cache:
            return cache[k][1]
        if isinstance(n, Const):
            v = n.value
        elif isinstance(n, Var):
            v = point[n.name]
            v = v if isinstance(v, mpmath.mpf) else Fraction(v)
        elif isinstance(n, Func):
            v = lookup(n)
            v = v if isinstance(v, mpmath.mpf) else Fraction(v)
        elif isinstance(n, Add):
            v = sum((go(t) for t in n.terms), Fraction(0))
        elif isinstance(n, Mul):
            v = Fraction(1)
            for f in n.factors:
                v = v * go(f)
        elif isinstance(n, Div):
            d = go(n.den)
            if d == 0:
                raise DivisionByZero(f"{n.den} vanishes at {point}")
            v = go(n.num) / d
        elif isinstance(n, Pow):
            v = _pow_value(go(n.base), n.exp)
        else:
            raise TypeError(type(n))
        cache[k] = (n, v)
        return v

    with mpmath.workdps(EVAL_DPS):
        return go(e)


def _pow_value(b, q: Fraction):
    if q.denominator == 1:
        if b == 0 and q < 0:
            raise DivisionByZero("0 to a negative power")
        return b ** int(q)
    if b < 0:
        raise NegativeBaseFractionalPower(f"({b})^({q})")
    if isinstance(b, Fraction):
        r = _exact_root(b, q.denominator)
        if r is not None:
            return r ** q.numerator
        b = mpmath.mpf(b.numerator) / b.denominator
    if b == 0 and q < 0:
        raise DivisionByZero("0 to a negative power")
    return mpmath.root(b, q.denominator) ** q.numerator


# -- normal form bridge ------------------------------------------------------

def to_ratfunc(e) -> RatFunc:
    """Map a tree into the normal form; raises UnsupportedExpression outside
    the fragment."""
    e = as_expr(e)
    memo = _memo(e)
    if "rf" in memo:
        return memo["rf"]
    if isinstance(e, Const):
        out = RatFunc.const(e.value)
    elif isinstance(e, Var):
        out = RatFunc.var(e.name)
    elif isinstance(e, Func):
        out = RatFunc.func(e.name, e.order, e.arg)
    elif isinstance(e, Add):
        out = RatFunc.const(0)
        for t in e.terms:
            out = out + to_ratfunc(t)
    elif isinstance(e, Mul):
        out = RatFunc.const(1)
        for f in e.factors:
            out = out * to_ratfunc(f)
    elif isinstance(e, Div):
        out = to_ratfunc(e.num) / to_ratfunc(e.den)
    elif isinstance(e, Pow):
        if e.exp.denominator == 1:
            out = to_ratfunc(e.base) ** e.exp
        elif isinstance(e.base, (Var, Func)):
            # rational powers of atoms are representable directly
            atom = e.base.atom if isinstance(e.base, Func) else Atom(e.base.name)
            out = RatFunc.atom(atom, e.exp)
        else:
            out = to_ratfunc(e.base) ** e.exp
    else:
        raise TypeError(type(e))
    memo["rf"] = out
    return out


def _mono_key(mono: dict):
    # x first, then y, then function atoms; higher powers first
    def rank(a: Atom):
        if a.is_variable:
            return (0, a.name, 0, "")
        return (1, a.name, a.order, a.arg)
    return tuple(sorted(((rank(a), -e) for a, e in mono.items())))


def _mono_expr(coeff: Fraction, mono: dict) -> Expr:
    def rank(a: Atom):
        return (0, a.name, 0, "") if a.is_variable else (1, a.name, a.order, a.arg)
    factors = []
    for a in sorted(mono, key=rank):
        base = Var(a.name) if a.is_variable else Func(a.name, a.order, a.arg)
        factors.append(power(base, mono[a]))
    return mul(Const(coeff), *factors)


def _poly_expr(terms) -> Expr:
    terms = sorted(terms, key=lambda t: (_total_degree_key(t[1]), _mono_key(t[1])))
    return add(*[_mono_expr(c, m) for c, m in terms])


def _total_degree_key(mono: dict):
    return -sum(mono.values(), Fraction(0))


def from_ratfunc(rf: RatFunc) -> Expr:
    num = _poly_expr(list(rf.terms("num")))
    if rf.is_polynomial():
        return num
    den_terms = list(rf.terms("den"))
    den = _poly_expr(den_terms)
    return Div(num, den)


def normalize(e) -> Expr:
    """Canonical tree: a single quotient of sorted, expanded monomial sums."""
    return from_ratfunc(to_ratfunc(e))


def _atoms(e: Expr) -> set[Atom]:
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(Atom(n.name))
        elif isinstance(n, Func):
            out.add(n.atom)
        elif isinstance(n, Add):
            stack.extend(n.terms)
        elif isinstance(n, Mul):
            stack.extend(n.factors)
        elif isinstance(n, Div):
            stack.extend((n.num, n.den))
        elif isinstance(n, Pow):
            stack.append(n.base)
    return out


# -- printing ----------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Const):
        if e.value < 0:
            return _PREC_UNARY
        return _PREC_ATOM if e.value.denominator == 1 else _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = pretty(e)
    return f"({s})" if _prec(e) < min_prec else s


def _split_sign(e: Expr):
    """(negative?, |e|) for printing sums."""
    if isinstance(e, Const) and e.value < 0:
        return True, Const(-e.value)
    if isinstance(e, Mul) and isinstance(e.factors[0], Const) and e.factors[0].value < 0:
        return True, mul(Const(-e.factors[0].value), *e.factors[1:])
    return False, e


def pretty(e) -> str:
    """Render in the input grammar, so that ``parse(pretty(e))`` round-trips."""
    e = as_expr(e)
    if isinstance(e, Const):
        return _fmt_fraction(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}{chr(39) * e.order}({e.arg})"
    if isinstance(e, Add):
        out = []
        for i, t in enumerate(e.terms):
            neg, t = _split_sign(t)
            body = _wrap(t, _PREC_ADD + 1) if isinstance(t, Add) else pretty(t)
            if i == 0:
                out.append(f"-{_wrap(t, _PREC_MUL)}" if neg else body)
            else:
                out.append(f" - {_wrap(t, _PREC_MUL)}" if neg else f" + {body}")
        return "".join(out)
    if isinstance(e, Mul):
        fs = list(e.factors)
        prefix = ""
        if isinstance(fs[0], Const):
            c = fs[0].value
            if c == -1:
                prefix, fs = "-", fs[1:]
            elif c.denominator != 1:
                prefix = f"({_fmt_fraction(c)})*" if c > 0 else f"-({_fmt_fraction(-c)})*"
                fs = fs[1:]
            elif c < 0:
                prefix, fs = f"-{-c}*", fs[1:]
        body = "*".join(_wrap(f, _PREC_POW) for f in fs)
        return prefix + body
    if isinstance(e, Div):
        if isinstance(e.num, Const) and e.num.value.denominator != 1:
            return f"({pretty(e.num)})/{_wrap(e.den, _PREC_POW)}"
        return f"{_wrap(e.num, _PREC_MUL)}/{_wrap(e.den, _PREC_POW)}"
    if isinstance(e, Pow):
        q = e.exp
        exp = _fmt_fraction(q)
        if q.denominator != 1 or q < 0:
            exp = f"({exp})"
        return f"{_wrap(e.base, _PREC_ATOM)}^{exp}"
    raise TypeError(type(e))
