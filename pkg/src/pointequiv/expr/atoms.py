"""Atoms of the normal form and the process-wide generator registry.

Every normal-form polynomial lives in a flint ``fmpq_mpoly`` context whose
generators stand for ``atom**(1/L)``, one generator per atom, with ``L`` the
root order currently needed for that atom.  The registry only grows: new
atoms are appended and root orders are only ever multiplied, so polynomials
built under an older layout can always be lifted to the current one by
padding and scaling exponent vectors.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import flint

VARIABLES = ("x", "y")


@dataclass(frozen=True, order=True)
class Atom:
    """A variable (``arg is None``) or the ``order``-th derivative of an
    opaque univariate function ``name(arg)``."""

    name: str
    order: int = 0
    arg: str | None = None

    @property
    def is_variable(self) -> bool:
        return self.arg is None

    def derivative(self, var: str) -> Atom | int:
        """d(atom)/d(var): an Atom, or the integers 1 / 0."""
        if self.is_variable:
            return 1 if self.name == var else 0
        if self.arg == var:
            return Atom(self.name, self.order + 1, self.arg)
        return 0

    def slug(self) -> str:
        if self.is_variable:
            return self.name
        return f"{self.name}__{self.arg}_{self.order}"

    def __str__(self) -> str:
        if self.is_variable:
            return self.name
        return f"{self.name}{chr(39) * self.order}({self.arg})"


X = Atom("x")
Y = Atom("y")

# function atoms are registered this many orders ahead to avoid relayouts
_LOOKAHEAD = 6


class _Layout:
    __slots__ = ("version", "atoms", "roots", "ctx")

    def __init__(self, version, atoms, roots):
        self.version = version
        self.atoms = tuple(atoms)
        self.roots = tuple(roots)
        self.ctx = flint.fmpq_mpoly_ctx.get(
            tuple(a.slug() for a in self.atoms), "degrevlex")


class Registry:
    def __init__(self):
        self._lock = threading.RLock()
        self._index: dict[Atom, int] = {}
        self._layouts: list[_Layout] = []
        self._atoms: list[Atom] = []
        self._roots: list[int] = []
        for a in (X, Y):
            self._index[a] = len(self._atoms)
            self._atoms.append(a)
            self._roots.append(1)
        self._publish()

    def _publish(self):
        self._layouts.append(_Layout(len(self._layouts), self._atoms, self._roots))

    @property
    def current(self) -> _Layout:
        return self._layouts[-1]

    def layout(self, version: int) -> _Layout:
        return self._layouts[version]

    def ensure(self, atom: Atom, root: int = 1) -> int:
        """Register ``atom`` (with at least root order ``root``); return its index."""
        idx = self._index.get(atom)
        if idx is not None and self._roots[idx] % root == 0:
            return idx
        with self._lock:
            changed = False
            todo = [atom]
            if not atom.is_variable:
                todo += [Atom(atom.name, atom.order + k, atom.arg)
                         for k in range(1, _LOOKAHEAD + 1)]
            for a in todo:
                if a not in self._index:
                    self._index[a] = len(self._atoms)
                    self._atoms.append(a)
                    self._roots.append(1)
                    changed = True
            idx = self._index[atom]
            old = self._roots[idx]
            new = old * root // math.gcd(old, root)
            if new != old:
                self._roots[idx] = new
                changed = True
            if changed:
                self._publish()
            return idx

    def index(self, atom: Atom) -> int:
        return self.ensure(atom)

    def lift(self, poly, version: int):
        """Re-express ``poly`` (built under layout ``version``) in the current layout."""
        cur = self.current
        if version == cur.version:
            return poly
        old = self._layouts[version]
        scale = [cur.roots[i] // old.roots[i] for i in range(len(old.atoms))]
        pad = len(cur.atoms) - len(old.atoms)
        if pad == 0 and all(s == 1 for s in scale):
            return cur.ctx.from_dict(poly.to_dict())
        data = {}
        for exps, c in poly.to_dict().items():
            data[tuple(e * s for e, s in zip(exps, scale)) + (0,) * pad] = c
        return cur.ctx.from_dict(data)


REGISTRY = Registry()
