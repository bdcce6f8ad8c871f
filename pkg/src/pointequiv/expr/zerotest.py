"""Identical-vanishing tests.

Inside the normal-form fragment zero testing is exact.  Outside it (a tree
that ``to_ratfunc`` rejects) the tester falls back to evaluation at seeded
random points, and every such verdict is recorded as probabilistic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import (DivisionByZero, EvaluationExhausted, ExprError,
                     NegativeBaseFractionalPower, UnsupportedExpression)
from .ratfunc import EVAL_DPS, RatFunc
from .tree import Expr, Pow, as_expr, eval_tree, to_ratfunc

MODES = ("auto", "symbolic", "probabilistic")

# numeric residues below this count as zero when radicals force floats
_FLOAT_EPS = mpmath.mpf(10) ** (-(EVAL_DPS // 2))


class IndeterminateRegime(ExprError):
    """Symbolic and probabilistic verdicts disagree."""


@dataclass
class ZeroTestConfig:
    mode: str = "auto"
    samples: int = 12
    seed: int = 0
    box: tuple = (1, 100)
    cross_check: bool = False
    base_point: dict | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown zero-test mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")


@dataclass
class ZeroTester:
    """Stateful front end: remembers which verdicts were probabilistic."""

    config: ZeroTestConfig = field(default_factory=ZeroTestConfig)
    diagnostics: list = field(default_factory=list)

    def _note(self, label, msg):
        entry = f"{label}: {msg}" if label else msg
        if entry not in self.diagnostics:
            self.diagnostics.append(entry)

    @property
    def probabilistic_used(self) -> bool:
        return any("probabilistic" in d for d in self.diagnostics)

    # -- main entry points --------------------------------------------------
    def is_zero(self, e, label: str = "") -> bool:
        mode = self.config.mode
        rf = _as_ratfunc(e) if mode != "probabilistic" or self.config.cross_check else None
        if mode == "symbolic" and rf is None:
            raise UnsupportedExpression(
                f"{label or 'expression'} is outside the normalizable fragment")
        if rf is not None and mode != "probabilistic":
            verdict = rf.is_zero()
            if self.config.cross_check:
                prob = self._sample_zero(e, label)
                if prob != verdict:
                    raise IndeterminateRegime(
                        f"{label or 'expression'}: symbolic says "
                        f"{'zero' if verdict else 'nonzero'}, sampling disagrees")
            return verdict
        verdict = self._sample_zero(e, label)
        self._note(label, "probabilistic zero test "
                   f"({self.config.samples} samples, seed {self.config.seed})")
        if rf is not None and self.config.cross_check and rf.is_zero() != verdict:
            raise IndeterminateRegime(f"{label or 'expression'}: verdicts disagree")
        return verdict

    def is_constant(self, e, label: str = "") -> bool:
        return (self.is_zero(e.diff("x"), label + "_x" if label else "")
                and self.is_zero(e.diff("y"), label + "_y" if label else ""))

    def constant_value(self, e):
        rf = _as_ratfunc(e)
        if rf is not None and rf.is_constant():
            return rf.constant_value()
        return None

    # -- sampling -----------------------------------------------------------
    def _sample_zero(self, e, label) -> bool:
        rng = random.Random(f"{self.config.seed}:{label}")
        points = list(self._points(e, rng, label))
        for value in points:
            if not _vanishes(value):
                return False
        return True

    def _points(self, e, rng, label=""):
        atoms = e.atoms()
        roots = _root_orders(e)
        lo, hi = self.config.box
        need = self.config.samples
        if self.config.base_point is not None:
            try:
                yield _evaluate(e, self.config.base_point, _func_values(atoms, rng, lo, hi))
                need -= 1
            except (DivisionByZero, NegativeBaseFractionalPower):
                pass
        failures = 0
        got = 0
        while got < need:
            L = roots.get("x", 1)
            point = {"x": _perfect_power_sample(rng, lo, hi, L),
                     "y": _perfect_power_sample(rng, lo, hi, roots.get("y", 1))}
            fv = _func_values(atoms, rng, lo, hi, roots)
            try:
                v = _evaluate(e, point, fv)
            except (DivisionByZero, NegativeBaseFractionalPower, ZeroDivisionError):
                failures += 1
                if failures >= need * 10:
                    raise EvaluationExhausted(
                        f"{failures} singular samples while testing {label or 'expression'}")
                continue
            got += 1
            yield v


def _as_ratfunc(e) -> RatFunc | None:
    if isinstance(e, RatFunc):
        return e
    try:
        return to_ratfunc(e)
    except UnsupportedExpression:
        return None


def _evaluate(e, point, func_values):
    if isinstance(e, RatFunc):
        return e.evaluate(point, func_values)
    return eval_tree(e, point, func_values)


def _vanishes(v) -> bool:
    if isinstance(v, Fraction):
        return v == 0
    return abs(v) < _FLOAT_EPS


def _perfect_power_sample(rng, lo, hi, L):
    """A rational in [lo, hi] that is an exact L-th power, so roots stay exact."""
    if L == 1:
        den = rng.randint(1, 12)
        return Fraction(rng.randint(lo * den, hi * den), den)
    tlo, thi = lo ** (1.0 / L), hi ** (1.0 / L)
    den = rng.randint(1, 6)
    a = math.ceil(tlo * den)
    b = max(a, math.floor(thi * den))
    return Fraction(rng.randint(a, b), den) ** L


def _func_values(atoms, rng, lo, hi, roots=None):
    roots = roots or {}
    out = {}
    for a in atoms:
        if a.is_variable:
            continue
        L = roots.get(a, 1)
        out[a] = _perfect_power_sample(rng, lo, hi, L)
    return out


def _root_orders(e) -> dict:
    """Root order needed per atom (keyed 'x', 'y' or Atom) for exact sampling."""
    if isinstance(e, RatFunc):
        from .atoms import REGISTRY
        lay = REGISTRY.current
        out = {}
        for a in e.atoms():
            L = lay.roots[REGISTRY.index(a)]
            out[a.name if a.is_variable else a] = L
        return out
    out = {}
    stack = [as_expr(e)]
    seen = set()
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        if isinstance(n, Pow):
            base = n.base
            d = n.exp.denominator
            key = None
            if base.__class__.__name__ == "Var":
                key = base.name
            elif base.__class__.__name__ == "Func":
                key = base.atom
            if key is not None and d > 1:
                out[key] = math.lcm(out.get(key, 1), d)
            stack.append(base)
        else:
            for attr in ("terms", "factors"):
                stack.extend(getattr(n, attr, ()))
            if hasattr(n, "num"):
                stack.extend((n.num, n.den))
    return out


def is_identically_zero(e, mode: str = "auto", samples: int = 12, seed: int = 0,
                        tester: ZeroTester | None = None) -> bool:
    """True iff ``e`` vanishes identically.

    ``mode='auto'`` is exact inside the normal-form fragment and samples
    otherwise; pass a ``tester`` to collect diagnostics.
    """
    if tester is None:
        tester = ZeroTester(ZeroTestConfig(mode=mode, samples=samples, seed=seed))
    if not isinstance(e, (RatFunc, Expr)):
        e = as_expr(e)
    return tester.is_zero(e)
