"""Weighted pseudotensors in two dimensions, the affine connection and curvature.

Components always refer to the coordinates (x, y).  Index positions are
0-based in code: ``gamma[k][i][j]`` is the connection component with upper
index k+1 and lower indices i+1, j+1.

Values may be any objects supporting ring arithmetic and ``.diff(var)``:
normal-form ``RatFunc``, trees, or ``RadicalScalar``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

VARS = ("x", "y")

# d_{ij} = d^{ij}
D = ((0, 1), (-1, 0))


class WeightError(ValueError):
    """Arithmetic mixing pseudotensors of different weights."""


def _is_zero_literal(v) -> bool:
    return isinstance(v, (int, Fraction)) and v == 0


@dataclass(frozen=True)
class PseudoScalar:
    value: object
    weight: int

    def _other(self, o, op):
        if isinstance(o, PseudoScalar):
            return o
        if isinstance(o, (int, Fraction)):
            if self.weight != 0 and o != 0 and op == "add":
                raise WeightError(
                    f"cannot add a plain number to a weight-{self.weight} scalar")
            return PseudoScalar(o, 0 if op == "mul" else self.weight)
        return None

    def __add__(self, o):
        o = self._other(o, "add")
        if o is None:
            return NotImplemented
        if o.weight != self.weight:
            raise WeightError(f"weights {self.weight} and {o.weight} in a sum")
        return PseudoScalar(self.value + o.value, self.weight)

    __radd__ = __add__

    def __neg__(self):
        return PseudoScalar(-self.value, self.weight)

    def __sub__(self, o):
        o = self._other(o, "add")
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._other(o, "add")
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        if isinstance(o, (PseudoVector, PseudoCovector)):
            return o.scale(self)
        o = self._other(o, "mul")
        if o is None:
            return NotImplemented
        return PseudoScalar(self.value * o.value, self.weight + o.weight)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._other(o, "mul")
        if o is None:
            return NotImplemented
        return PseudoScalar(self.value / o.value, self.weight - o.weight)

    def __rtruediv__(self, o):
        o = self._other(o, "mul")
        if o is None:
            return NotImplemented
        return PseudoScalar(o.value / self.value, o.weight - self.weight)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("pseudoscalar powers must be integers")
        return PseudoScalar(self.value ** n, self.weight * n)

    def require_weight(self, w: int, what: str = "value"):
        if self.weight != w:
            raise WeightError(f"{what} has weight {self.weight}, expected {w}")
        return self


class _Pair:
    """Common code of vectors and covectors: a pair of components."""

    __slots__ = ("c1", "c2", "weight")

    def __init__(self, c1, c2, weight: int):
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, k, v):
        raise AttributeError("immutable")

    @property
    def c(self):
        return (self.c1, self.c2)

    def __getitem__(self, i):
        return self.c[i]

    def __iter__(self):
        return iter(self.c)

    def _check(self, o):
        if type(o) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(o).__name__}")
        if o.weight != self.weight:
            raise WeightError(f"weights {self.weight} and {o.weight} in a sum")

    def __add__(self, o):
        self._check(o)
        return type(self)(self.c1 + o.c1, self.c2 + o.c2, self.weight)

    def __sub__(self, o):
        self._check(o)
        return type(self)(self.c1 - o.c1, self.c2 - o.c2, self.weight)

    def __neg__(self):
        return type(self)(-self.c1, -self.c2, self.weight)

    def scale(self, s):
        if isinstance(s, PseudoScalar):
            return type(self)(s.value * self.c1, s.value * self.c2, self.weight + s.weight)
        return type(self)(s * self.c1, s * self.c2, self.weight)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def map(self, fn):
        return type(self)(fn(self.c1), fn(self.c2), self.weight)

    def __repr__(self):
        return f"{type(self).__name__}({self.c1}, {self.c2}; weight={self.weight})"


class PseudoVector(_Pair):
    """Upper-index pair (v^1, v^2)."""


class PseudoCovector(_Pair):
    """Lower-index pair (v_1, v_2)."""


def raise_index(v: PseudoCovector) -> PseudoVector:
    """xi^i = d^{ij} v_j, so xi^1 = v_2 and xi^2 = -v_1."""
    if not isinstance(v, PseudoCovector):
        raise TypeError("raise_index expects a covector")
    return PseudoVector(v.c2, -v.c1, v.weight + 1)


def lower_index(v: PseudoVector) -> PseudoCovector:
    """v_i = v^j d_{ji}; the inverse of :func:`raise_index`."""
    if not isinstance(v, PseudoVector):
        raise TypeError("lower_index expects a vector")
    return PseudoCovector(-v.c2, v.c1, v.weight - 1)


def contract(a: PseudoCovector, b: PseudoVector) -> PseudoScalar:
    """a_i b^i."""
    if not (isinstance(a, PseudoCovector) and isinstance(b, PseudoVector)):
        raise TypeError("contract expects (covector, vector)")
    return PseudoScalar(a.c1 * b.c1 + a.c2 * b.c2, a.weight + b.weight)


def skew(a: PseudoVector, b: PseudoVector) -> PseudoScalar:
    """d_{ij} a^i b^j = a^1 b^2 - a^2 b^1 (weight of d_{ij} is -1)."""
    return PseudoScalar(a.c1 * b.c2 - a.c2 * b.c1, a.weight + b.weight - 1)


def gradient(f, weight: int = 0) -> PseudoCovector:
    value = f.value if isinstance(f, PseudoScalar) else f
    return PseudoCovector(value.diff("x"), value.diff("y"), weight)


def weighted_gradient(f: PseudoScalar, phi: PseudoCovector) -> PseudoCovector:
    """nabla_k f = f_k + m phi_k f for a weight-m scalar (no index terms)."""
    m = f.weight
    comps = [f.value.diff(v) for v in VARS]
    if m:
        comps = [c + m * p * f.value for c, p in zip(comps, phi.c)]
    return PseudoCovector(comps[0], comps[1], m)


# -- theta array and connection ----------------------------------------------

def lowered_theta(P, Q, R, S):
    """theta_{kij}, symmetric in all three indices."""
    vals = (P, Q, R, S)
    return [[[vals[k + i + j] for j in range(2)] for i in range(2)] for k in range(2)]


@dataclass(frozen=True)
class ThetaArray:
    """theta^k_{ij} = d^{kr} theta_{rij}."""

    entries: tuple

    def __getitem__(self, k):
        return self.entries[k]

    def component(self, k, i, j):
        return self.entries[k][i][j]


def theta_array(eq) -> ThetaArray:
    low = lowered_theta(eq.P, eq.Q, eq.R, eq.S)
    # raising with d^{12} = 1, d^{21} = -1
    up = (tuple(tuple(low[1][i][j] for j in range(2)) for i in range(2)),
          tuple(tuple(-low[0][i][j] for j in range(2)) for i in range(2)))
    return ThetaArray(up)


@dataclass(frozen=True)
class Connection:
    gamma: tuple
    phi: PseudoCovector

    def __getitem__(self, k):
        return self.gamma[k]

    def component(self, k, i, j):
        return self.gamma[k][i][j]


def build_connection(theta: ThetaArray, phi: PseudoCovector) -> Connection:
    """Gamma^k_{ij} = theta^k_{ij} - (phi_i delta^k_j + phi_j delta^k_i)/3."""
    third = Fraction(1, 3)
    rows = []
    for k in range(2):
        block = []
        for i in range(2):
            row = []
            for j in range(2):
                g = theta[k][i][j]
                corr = 0
                if k == j:
                    corr = corr + phi[i]
                if k == i:
                    corr = corr + phi[j]
                if not _is_zero_literal(corr):
                    g = g - third * corr
                row.append(g)
            block.append(tuple(row))
        rows.append(tuple(block))
    return Connection(tuple(rows), phi)


# -- covariant differentiation ------------------------------------------------

@dataclass(frozen=True)
class MixedTensor:
    """Components t[a][b] of a rank-2 field; ``kinds`` is e.g. ('u', 'd')."""

    t: tuple
    kinds: tuple
    weight: int

    def __getitem__(self, a):
        return self.t[a]


def _mul_add(terms):
    out = None
    for t in terms:
        if _is_zero_literal(t):
            continue
        out = t if out is None else out + t
    return 0 if out is None else out


def covariant_derivative(field, conn: Connection):
    """nabla_k of a weighted scalar, vector or covector.

    Scalars give a covector; vectors (covectors) give a MixedTensor
    ``t[i][k] = nabla_k v^i`` (``nabla_k v_i``).  Weights are preserved.
    """
    phi = conn.phi
    if isinstance(field, PseudoScalar):
        return weighted_gradient(field, phi)
    if isinstance(field, PseudoVector):
        m = field.weight
        t = []
        for i in range(2):
            row = []
            for k in range(2):
                c = field[i].diff(VARS[k])
                c = c + _mul_add(conn[i][k][q] * field[q] for q in range(2))
                if m:
                    c = c + m * phi[k] * field[i]
                row.append(c)
            t.append(tuple(row))
        return MixedTensor(tuple(t), ("u", "d"), m)
    if isinstance(field, PseudoCovector):
        m = field.weight
        t = []
        for i in range(2):
            row = []
            for k in range(2):
                c = field[i].diff(VARS[k])
                c = c - _mul_add(conn[q][k][i] * field[q] for q in range(2))
                if m:
                    c = c + m * phi[k] * field[i]
                row.append(c)
            t.append(tuple(row))
        return MixedTensor(tuple(t), ("d", "d"), m)
    raise TypeError(f"cannot differentiate {type(field).__name__}")


def covariant_along(vector: PseudoVector, field, conn: Connection):
    """V^k nabla_k field; the result weight is weight(V) + weight(field)."""
    d = covariant_derivative(field, conn)
    w = vector.weight + field.weight
    if isinstance(field, PseudoScalar):
        return PseudoScalar(vector.c1 * d.c1 + vector.c2 * d.c2, w)
    comps = [vector.c1 * d[i][0] + vector.c2 * d[i][1] for i in range(2)]
    return type(field)(comps[0], comps[1], w)


# -- curvature -----------------------------------------------------------------

@dataclass(frozen=True)
class Curvature:
    """R^k_{qij} as ``full[k][q][i][j]`` and the reduced R^k_q = R^k_{q12}."""

    full: tuple
    reduced: tuple
    weight: int = 1


def curvature(conn: Connection) -> Curvature:
    """R^k_{qij} = d_i G^k_{jq} - d_j G^k_{iq} + G^k_{is} G^s_{jq} - G^k_{js} G^s_{iq}."""
    g = conn.gamma
    dg = [[[[g[k][i][j].diff(VARS[v]) if not _is_zero_literal(g[k][i][j]) else 0
             for v in range(2)] for j in range(2)] for i in range(2)] for k in range(2)]

    def comp(k, q, i, j):
        if i == j:
            return 0
        terms = [dg[k][j][q][i], -dg[k][i][q][j] if not _is_zero_literal(dg[k][i][q][j]) else 0]
        for s in range(2):
            terms.append(g[k][i][s] * g[s][j][q])
            terms.append(-(g[k][j][s] * g[s][i][q]))
        return _mul_add(terms)

    full = tuple(tuple(tuple(tuple(comp(k, q, i, j) for j in range(2))
                             for i in range(2)) for q in range(2)) for k in range(2))
    # (1/2) sum R^k_{qij} d^{ij} = R^k_{q12} by antisymmetry
    reduced = tuple(tuple(full[k][q][0][1] for q in range(2)) for k in range(2))
    return Curvature(full, reduced)


# -- frame expansions -------------------------------------------------------------

def expand_in_frame(v: PseudoVector, e1: PseudoVector, e2: PseudoVector):
    """Coefficients (a, b) with v = a e1 + b e2, by Cramer's rule."""
    det = e1.c1 * e2.c2 - e1.c2 * e2.c1
    a = (v.c1 * e2.c2 - v.c2 * e2.c1) / det
    b = (e1.c1 * v.c2 - e1.c2 * v.c1) / det
    return (PseudoScalar(a, v.weight - e1.weight),
            PseudoScalar(b, v.weight - e2.weight))


def frame_coefficients(e1: PseudoVector, e2: PseudoVector, conn: Connection) -> dict:
    """All eight coefficients of nabla_{e_i} e_j = G^1_{ij} e1 + G^2_{ij} e2.

    Keys are strings such as ``'G1_22'``.
    """
    frame = (e1, e2)
    out = {}
    for i in range(2):
        for j in range(2):
            v = covariant_along(frame[i], frame[j], conn)
            a, b = expand_in_frame(v, e1, e2)
            out[f"G1_{i + 1}{j + 1}"] = a
            out[f"G2_{i + 1}{j + 1}"] = b
    return out
