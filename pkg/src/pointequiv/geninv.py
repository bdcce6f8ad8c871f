"""General position (F^5 not identically zero): the frame X = F^-2 alpha,
Y = F^-4 beta, the invariants I_1..I_8 and their derivative sequence.

The weight-1 radical F = (F^5)^(1/5) is kept formal: every quantity is
stored as ``rho * F^e`` with ``rho`` rational and ``0 <= e < 5``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .expr.ratfunc import RatFunc, _exact_root
from .fields import BaseFields, FieldError, _AB, d
from .tensors import (PseudoCovector, PseudoScalar, PseudoVector, build_connection,
                      frame_coefficients, theta_array)

F = Fraction

DEFAULT_DEPTH = 2
MAX_ENTRIES = 40


class ZeroField(FieldError):
    """F^5 vanishes identically, so the general-position frame is undefined."""


class RadicalMismatch(FieldError):
    """Sum of terms carrying different powers of the radical."""


@dataclass(frozen=True)
class RadicalConstant:
    """The real fifth root of the rational ``fifth``."""

    fifth: Fraction

    def __str__(self):
        return f"({self.fifth})^(1/5)"


@dataclass(frozen=True)
class RadicalScalar:
    """rho * F^e with F^5 = ``f5``; ``weight`` is the total weight."""

    rho: object
    e: int
    f5: object
    weight: int = 0

    @classmethod
    def make(cls, rho, e, f5, weight=0):
        if isinstance(rho, (int, Fraction)):
            rho = f5 * 0 + rho  # same kind of value as F^5
        q, r = divmod(e, 5)
        if q:
            rho = rho * f5 ** q if q > 0 else rho / f5 ** (-q)
        return cls(rho, r, f5, weight)

    def _same(self, o):
        if not isinstance(o, RadicalScalar):
            return RadicalScalar.make(o, 0, self.f5, 0)
        return o

    def __add__(self, o):
        o = self._same(o)
        if o.e != self.e:
            raise RadicalMismatch(f"F^{self.e} and F^{o.e} in a sum")
        if o.weight != self.weight:
            raise RadicalMismatch(f"weights {self.weight} and {o.weight} in a sum")
        return RadicalScalar(self.rho + o.rho, self.e, self.f5, self.weight)

    __radd__ = __add__

    def __neg__(self):
        return RadicalScalar(-self.rho, self.e, self.f5, self.weight)

    def __sub__(self, o):
        return self + (-self._same(o))

    def __mul__(self, o):
        if not isinstance(o, RadicalScalar):
            return RadicalScalar.make(self.rho * o, self.e, self.f5, self.weight)
        return RadicalScalar.make(self.rho * o.rho, self.e + o.e, self.f5,
                                  self.weight + o.weight)

    __rmul__ = __mul__

    def fifth_power(self):
        """rho^5 (F^5)^e, an ordinary rational function."""
        return self.rho ** 5 * self.f5 ** self.e

    def derivative_bracket(self, var: str):
        """b with d(rho F^e)/d var = b F^e."""
        b = self.rho.diff(var)
        if self.e:
            b = b + F(self.e, 5) * self.rho * self.f5.diff(var) / self.f5
        return b

    def along(self, vec: PseudoVector, vec_exp: int, vec_weight: int) -> "RadicalScalar":
        """Directional derivative along F^vec_exp * vec."""
        b = vec.c1 * self.derivative_bracket("x") + vec.c2 * self.derivative_bracket("y")
        return RadicalScalar.make(b, self.e + vec_exp, self.f5, self.weight + vec_weight)

    def is_zero(self, tester, label=""):
        return tester.is_zero(self.rho, label)

    def is_constant(self, tester, label=""):
        return (tester.is_zero(self.derivative_bracket("x"), label + "_x")
                and tester.is_zero(self.derivative_bracket("y"), label + "_y"))

    def constant_value(self, tester):
        """Exact value of a constant entry: a Fraction, or a RadicalConstant
        when the value is the real fifth root of a non-fifth-power rational.
        None when the entry is not a recognizable constant."""
        if self.e == 0:
            return tester.constant_value(self.rho)
        q = tester.constant_value(self.fifth_power())
        if q is None:
            return None
        root = _exact_root(q, 5)
        return root if root is not None else RadicalConstant(q)


    def equals(self, o, tester, label=""):
        o = self._same(o)
        if o.e != self.e:
            return tester.is_zero(self.rho, label) and tester.is_zero(o.rho, label)
        return tester.is_zero(self.rho - o.rho, label)


def jacobian_bracket(a: RadicalScalar, b: RadicalScalar):
    """Rational factor of the Jacobian of (a, b); the full value is this times F^(ea+eb)."""
    return (a.derivative_bracket("x") * b.derivative_bracket("y")
            - a.derivative_bracket("y") * b.derivative_bracket("x"))


def bracket_numerators(v: RadicalScalar):
    """Polynomials (n_x, n_y) with derivative_bracket(var) = n_var / D for one
    nonzero D shared by both variables; None outside the normal form.

    Zero tests of constancy and of Jacobians only need these numerators,
    which avoids the gcd work of reduced quotients.
    """
    if not (isinstance(v.rho, RatFunc) and isinstance(v.f5, RatFunc)):
        return None
    n, dd = v.rho.numerator(), v.rho.denominator()
    out = []
    if v.e:
        fn, fd = v.f5.numerator(), v.f5.denominator()
        for var in ("x", "y"):
            out.append(5 * (n.diff(var) * dd - n * dd.diff(var)) * fn * fd
                       + v.e * n * dd * (fn.diff(var) * fd - fn * fd.diff(var)))
    else:
        for var in ("x", "y"):
            out.append(n.diff(var) * dd - n * dd.diff(var))
    return tuple(out)


def jacobian_vanishes(a: RadicalScalar, b: RadicalScalar, tester, label="",
                      na=None, nb=None) -> bool:
    na = na or bracket_numerators(a)
    nb = nb or bracket_numerators(b)
    if na is None or nb is None:
        return tester.is_zero(jacobian_bracket(a, b), label)
    return tester.is_zero(na[0] * nb[1] - na[1] * nb[0], label)


def constant_entry(v: RadicalScalar, tester, label="", nv=None) -> bool:
    nv = nv or bracket_numerators(v)
    if nv is None:
        return v.is_constant(tester, label)
    return tester.is_zero(nv[0], label + "_x") and tester.is_zero(nv[1], label + "_y")


# -- phi, frame -----------------------------------------------------------------

def phi_general(F5: PseudoScalar, tester=None) -> PseudoCovector:
    """phi_i = -(1/5) d_i F^5 / F^5."""
    if tester is not None and tester.is_zero(F5.value, "F5"):
        raise ZeroField("F^5 vanishes identically")
    v = F5.value
    return PseudoCovector(-F(1, 5) * v.diff("x") / v, -F(1, 5) * v.diff("y") / v, 0)


def frame_fields(alpha: PseudoVector, beta: PseudoVector, F5: PseudoScalar):
    """X = F^-2 alpha and Y = F^-4 beta, as (components, radical exponent)."""
    return (alpha, -2), (beta, -4)


def _psi(f5):
    """d_i F / F = (1/5) d_i F^5 / F^5."""
    return F(1, 5) * f5.diff("x") / f5, F(1, 5) * f5.diff("y") / f5


def closed_forms(eq, alpha, beta, F5) -> dict:
    """I_3, I_6, I_7, I_8 by their explicit formulas, and I_6 by the short one.

    The S term of the long I_6 formula enters with a minus sign, so that the
    P, Q, R, S part is a uniform contraction; the frame route confirms it.
    """
    P, Q, R, S = eq.coefficients
    A, B = _AB(alpha)
    G, H = beta.c
    f5 = F5.value
    p1, p2 = _psi(f5)
    Gx, Gy, Hx, Hy = d(G, 1, 0), d(G, 0, 1), d(H, 1, 0), d(H, 0, 1)
    rad = lambda rho, e: RadicalScalar.make(rho, e, f5)

    poly3 = (B * G ** 2 * P - (A * G ** 2 - 2 * H * B * G) * Q
             + (B * H ** 2 - 2 * H * A * G) * R - A * H ** 2 * S)
    I3 = (rad((B * (H * Gx - G * Hx) - A * (H * Gy - G * Hy) + poly3) / 3, -9)
          + rad((H * p2 + G * p1) / 3, -4))
    I6 = (rad((A * (G * d(A, 0, 1) + H * d(B, 0, 1)) - B * (G * d(A, 1, 0) + H * d(B, 1, 0))
               - G * B ** 2 * P - (H * B ** 2 - 2 * G * B * A) * Q
               - (G * A ** 2 - 2 * H * B * A) * R - H * A ** 2 * S) / 12, -7)
          - rad(4 * (A * p2 - B * p1) / 12, -2))
    I7 = rad((G * H * Gx - G ** 2 * Hx + H ** 2 * Gy - H * G * Hy
              + G ** 3 * P + 3 * G ** 2 * H * Q + 3 * G * H ** 2 * R + H ** 3 * S) / 3, -11)
    I8 = (rad((G * (A * Gx + B * Hx) + H * (A * Gy + B * Hy) - poly3) / 3, -9)
          - rad(10 * (H * p2 + G * p1) / 3, -4))
    I6_short = rad((d(A, 0, 1) - d(B, 1, 0)) / 3 - (A * p2 - B * p1) / 3, -2)
    return {"I3": I3, "I6": I6, "I7": I7, "I8": I8, "I6_short": I6_short}


# frame exponent of X (index 1) and Y (index 2)
_FRAME_EXP = {1: 2, 2: 4}
_NAMES = {"G1_11": "I1", "G2_11": "I2", "G1_12": "I3", "G2_12": "I4",
          "G1_21": "I5", "G2_21": "I6", "G1_22": "I7", "G2_22": "I8"}


def frame_route(eq, alpha, beta, F5) -> dict:
    """I_1..I_8 by expanding nabla_X X, ... in the frame X, Y."""
    phi = phi_general(F5)
    conn = build_connection(theta_array(eq), phi)
    coeffs = frame_coefficients(alpha, beta, conn)
    out = {}
    for key, name in _NAMES.items():
        k, i, j = int(key[1]), int(key[3]), int(key[4])
        exp = _FRAME_EXP[k] - _FRAME_EXP[i] - _FRAME_EXP[j]
        c = coeffs[key]
        if c.weight + exp != 0:
            raise FieldError(f"{name} has weight {c.weight + exp}, expected 0")
        out[name] = RadicalScalar.make(c.value, exp, F5.value)
    return out


# -- the sequence ------------------------------------------------------------------

@dataclass
class InvariantSeq:
    entries: list = dc_field(default_factory=list)
    generations: list = dc_field(default_factory=list)  # index ranges per generation

    @property
    def depth(self):
        return len(self.generations) - 1

    def names(self):
        return [n for n, _ in self.entries]

    def __getitem__(self, name):
        for n, v in self.entries:
            if n == name:
                return v
        raise KeyError(name)

    def __len__(self):
        return len(self.entries)


def frame_invariants(bf: BaseFields, verify: bool | None = None) -> InvariantSeq:
    """I_1..I_8, with the closed forms checked against the frame route."""
    verify = bf.verify if verify is None else verify
    if not bf.general_position:
        raise ZeroField("F^5 vanishes identically")
    cf = closed_forms(bf.eq, bf.alpha, bf.beta, bf.F5)
    t = bf.tester
    vals = {
        "I1": cf["I6"] * (-4), "I2": RadicalScalar.make(F(1, 3), 0, bf.F5.value),
        "I3": cf["I3"], "I4": cf["I6"] * 4, "I5": -cf["I8"],
        "I6": cf["I6"], "I7": cf["I7"], "I8": cf["I8"],
    }
    if verify:
        if not cf["I6"].equals(cf["I6_short"], t, "I6 short form"):
            raise FieldError("the two formulas for I6 disagree")
        fr = frame_route(bf.eq, bf.alpha, bf.beta, bf.F5)
        for name, v in vals.items():
            if not v.equals(fr[name], t, f"frame:{name}"):
                raise FieldError(f"frame route and closed form disagree for {name}")
    seq = InvariantSeq([(f"I{k}", vals[f"I{k}"]) for k in range(1, 9)], [(0, 8)])
    return seq


def proportional(u: RadicalScalar, v: RadicalScalar):
    """c with v = c u when both are normal forms with one radical exponent."""
    if u.e != v.e or not (isinstance(u.rho, RatFunc) and isinstance(v.rho, RatFunc)):
        return None
    return u.rho.proportional(v.rho)


def _is_trivial(v: RadicalScalar) -> bool:
    """Zero, or a rational constant; its derivatives vanish."""
    return isinstance(v.rho, RatFunc) and v.e == 0 and v.rho.is_constant()


def extend_sequence(seq: InvariantSeq, bf: BaseFields, depth: int = 1,
                    max_entries: int = MAX_ENTRIES) -> InvariantSeq:
    """Append X- and Y-derivatives of the last generation, ``depth`` times.

    Entries proportional to an earlier one reuse its derivative.
    """
    for _ in range(depth):
        lo, hi = seq.generations[-1]
        start = len(seq.entries)
        batch = []
        for vec, exp in ((bf.alpha, -2), (bf.beta, -4)):
            done = []  # (source entry, its derivative)
            for name, v in seq.entries[lo:hi]:
                if len(seq.entries) + len(batch) >= max_entries:
                    break
                if _is_trivial(v):
                    new = RadicalScalar.make(0, 0, bf.F5.value)
                else:
                    new = None
                    for u, du in done:
                        c = proportional(u, v)
                        if c is not None:
                            new = du * c
                            break
                    if new is None:
                        new = v.along(vec, exp, vec.weight + exp)
                        done.append((v, new))
                if new.weight != 0:
                    raise FieldError(f"derived entry has weight {new.weight}")
                batch.append((f"I{start + len(batch) + 1}", new))
        if not batch:
            break
        seq.entries.extend(batch)
        seq.generations.append((start, len(seq.entries)))
    return seq


SUBCASE_DIMENSION = {"independent": 0, "dependent_nonconstant": 1, "all_constant": 2}


@dataclass
class GeneralVerdict:
    subcase: str
    dimension: int
    depth: int
    depth_limited: bool
    witness: tuple = ()


class _DecisionState:
    """Memo of per-entry tests, so sequence extension only tests new entries."""

    def __init__(self):
        self.numerators = {}
        self.constant = {}
        self.dependent = set()


def _decide(seq: InvariantSeq, tester, state: _DecisionState):
    """Returns (pivot, independent pair or None); the pivot is the first
    non-constant entry."""

    def nums(name, v):
        if name not in state.numerators:
            state.numerators[name] = bracket_numerators(v)
        return state.numerators[name]

    pivot = None
    for name, v in seq.entries:
        if name not in state.constant:
            state.constant[name] = constant_entry(v, tester, f"const:{name}", nums(name, v))
        if not state.constant[name]:
            pivot = (name, v)
            break
    if pivot is None:
        return None, None
    pn = nums(*pivot)
    tested = [pivot[1]]
    for name, v in seq.entries:
        if name == pivot[0] or name in state.dependent:
            continue
        # multiples of a tested entry share its verdict
        if _is_trivial(v) or any(proportional(u, v) is not None for u in tested):
            state.dependent.add(name)
            continue
        if not jacobian_vanishes(pivot[1], v, tester, f"jac:{pivot[0]},{name}",
                                 pn, nums(name, v)):
            return pivot, (pivot[0], name)
        state.dependent.add(name)
        tested.append(v)
    return pivot, None


def decide_subcase(seq: InvariantSeq, tester, extend, depth: int = DEFAULT_DEPTH,
                   max_entries: int = MAX_ENTRIES) -> GeneralVerdict:
    """The three-way subcase of a derivative sequence.

    ``extend(seq)`` appends one generation.  Generation stops as soon as the
    verdict is certain; a dependence verdict at the depth cap is flagged.
    """
    state = _DecisionState()
    while True:
        pivot, pair = _decide(seq, tester, state)
        if pivot is None:
            # every entry constant, so every further derivative vanishes
            return GeneralVerdict("all_constant", 2, seq.depth, False)
        if pair is not None:
            return GeneralVerdict("independent", 0, seq.depth, False, pair)
        if seq.depth >= depth or len(seq) >= max_entries:
            return GeneralVerdict("dependent_nonconstant", 1, seq.depth, True)
        before = len(seq)
        extend(seq)
        if len(seq) == before:
            return GeneralVerdict("dependent_nonconstant", 1, seq.depth, True)


def subcase_general(bf: BaseFields, depth: int = DEFAULT_DEPTH,
                    max_entries: int = MAX_ENTRIES, seq: InvariantSeq | None = None):
    """Decide the general-position subcase; returns (GeneralVerdict, InvariantSeq)."""
    seq = seq or frame_invariants(bf)
    verdict = decide_subcase(seq, bf.tester,
                             lambda s: extend_sequence(s, bf, 1, max_entries),
                             depth, max_entries)
    return verdict, seq
