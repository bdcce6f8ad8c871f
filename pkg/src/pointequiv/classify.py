"""Decision tree over the nine equivalence cases and the classification report."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .degfields import DegenerateFields
from .deginv import (CaseInvariants, case1_invariants, case2_invariants,
                     case3_invariants, case4_invariants, case5_check,
                     case6_invariants, case7_invariants)
from .expr.tree import pretty
from .expr.zerotest import ZeroTestConfig, ZeroTester
from .fields import BaseFields, Equation
from .geninv import DEFAULT_DEPTH, MAX_ENTRIES, RadicalScalar, subcase_general

CASE_IDS = ("maximal_degeneration", "general_position",
            *(f"intermediate_{k}" for k in range(1, 8)))

_CASE_FUNCS = {1: None, 2: case2_invariants, 3: case3_invariants, 4: case4_invariants,
               5: case5_check, 6: case6_invariants, 7: case7_invariants}


@dataclass
class ClassifyOptions:
    zero_test: str = "auto"
    samples: int = 12
    seed: int = 0
    depth: int = DEFAULT_DEPTH
    max_entries: int = MAX_ENTRIES
    cross_check: bool = False
    verify: bool = True
    base_point: dict | None = None

    def tester(self) -> ZeroTester:
        return ZeroTester(ZeroTestConfig(mode=self.zero_test, samples=self.samples,
                                         seed=self.seed, cross_check=self.cross_check,
                                         base_point=self.base_point))


@dataclass
class InvariantEntry:
    name: str
    expression: str
    weight: int
    constant: bool | None
    value: str | None

    def to_json(self) -> dict:
        return {"name": self.name, "expression": self.expression, "weight": self.weight,
                "constant": self.constant, "value": self.value}


@dataclass
class ClassificationReport:
    case_id: str
    symmetry_dimension: int
    subcase: str | None = None
    structure: str = ""
    invariants: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    probable: bool = False
    equation: dict = field(default_factory=dict)
    details: object = None  # CaseInvariants or the general-position sequence

    @property
    def verdict(self) -> str:
        return "probable" if self.probable else "exact"

    def constants(self) -> dict:
        return {e.name: e.value for e in self.invariants if e.constant}

    def to_json(self) -> dict:
        return {
            "equation": self.equation,
            "case": self.case_id,
            "subcase": self.subcase,
            "symmetry_dimension": self.symmetry_dimension,
            "structure": self.structure or None,
            "verdict": self.verdict,
            "invariants": [e.to_json() for e in self.invariants],
            "diagnostics": list(self.diagnostics),
            "assumptions": list(self.assumptions),
        }

    def to_text(self) -> str:
        lines = [f"case: {self.case_id}"]
        if self.subcase:
            lines.append(f"subcase: {self.subcase}")
        lines.append(f"symmetry dimension: {self.symmetry_dimension} ({self.verdict})")
        if self.structure:
            lines.append(f"structure: {self.structure}")
        for e in self.invariants:
            tag = f"constant = {e.value}" if e.constant else "not constant"
            lines.append(f"  {e.name} [{tag}] = {e.expression}")
        for d in self.diagnostics:
            lines.append(f"  note: {d}")
        if self.assumptions:
            lines.append(f"assumptions: {', '.join(self.assumptions)}")
        return "\n".join(lines)


# -- formatting -----------------------------------------------------------------

def _fmt_value(v) -> str | None:
    if v is None:
        return None
    if isinstance(v, (int, Fraction)):
        q = Fraction(v)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return str(v)


def _fmt_expr(v) -> str:
    if isinstance(v, RadicalScalar):
        body = pretty(v.rho)
        if v.e == 0:
            return body
        return f"({body})*({pretty(v.f5)})^({v.e}/5)"
    return pretty(v)


def _entries_from_case(ci: CaseInvariants) -> list:
    return [InvariantEntry(inv.name, _fmt_expr(inv.value), inv.weight, inv.constant,
                           _fmt_value(inv.constant_value))
            for inv in ci.invariants if inv.exported]


def _entries_from_sequence(seq, tester, generation=0) -> list:
    lo, hi = seq.generations[generation]
    out = []
    for name, v in seq.entries[lo:hi]:
        const = v.is_constant(tester, f"const:{name}")
        out.append(InvariantEntry(name, _fmt_expr(v), 0, const,
                                  _fmt_value(v.constant_value(tester)) if const else None))
    return out


def _singular_loci(bf: BaseFields) -> list:
    """Denominators of the branch formulas that vanish somewhere."""
    out = []
    br = bf.branches
    for name, v, usable in (("B", bf.B, not br.B_zero), ("A", bf.A, br.B_zero)):
        if usable and not bf.tester.is_constant(v, f"locus:{name}"):
            out.append(f"points with {name} = {pretty(v)} = 0 are excluded (singular locus)")
            break
    return out


# -- the decision tree ---------------------------------------------------------------

def intermediate_case(bf: BaseFields) -> int:
    """Which of the seven intermediate cases applies (F^5 = 0, alpha nonzero)."""
    if not bf.zero(bf.M, "M"):
        return 1
    N_zero = bf.zero(bf.N, "N")
    W_zero = bf.zero(bf.Omega, "Omega")
    if N_zero:
        return 7 if W_zero else 6
    if not W_zero:
        return 2
    if not bf.zero(bf.Lambda, "Lambda"):
        return 3
    df = DegenerateFields(bf)
    return 5 if bf.zero(df.K.value + Fraction(5, 9), "K+5/9") else 4


def classify(eq: Equation, options: ClassifyOptions | None = None) -> ClassificationReport:
    options = options or ClassifyOptions()
    if options.base_point is None and eq.point:
        options = replace(options, base_point=dict(eq.point))
    tester = options.tester()
    bf = BaseFields(eq, tester, verify=options.verify)
    rep = _classify(bf, options)
    rep.equation = {**eq.to_strings(), "functions": list(eq.functions)}
    rep.assumptions = list(eq.assumptions)
    rep.diagnostics.extend(tester.diagnostics)
    rep.probable = tester.probabilistic_used
    return rep


def _classify(bf: BaseFields, options: ClassifyOptions) -> ClassificationReport:
    if bf.maximally_degenerate:
        return ClassificationReport("maximal_degeneration", 8,
                                    structure="sl(3,R), point-equivalent to y''=0")
    if bf.general_position:
        verdict, seq = subcase_general(bf, options.depth, options.max_entries)
        rep = ClassificationReport("general_position", verdict.dimension,
                                   subcase=verdict.subcase, details=seq)
        rep.invariants = _entries_from_sequence(seq, bf.tester)
        if verdict.depth_limited:
            rep.diagnostics.append(f"subcase decided at depth {verdict.depth} (depth cap)")
        return rep
    k = intermediate_case(bf)
    ci = (case1_invariants(bf, options.depth) if k == 1 else _CASE_FUNCS[k](bf))
    rep = ClassificationReport(f"intermediate_{k}", ci.dimension, subcase=ci.subcase,
                               structure=ci.structure, details=ci)
    rep.invariants = _entries_from_case(ci)
    rep.diagnostics.extend(ci.notes)
    rep.diagnostics.extend(_singular_loci(bf))
    return rep


# -- signatures -----------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    case_id: str
    subcase: str | None
    constants: tuple  # sorted (name, value) pairs of constant weight-0 invariants

    def to_json(self) -> dict:
        return {"case": self.case_id, "subcase": self.subcase,
                "constants": [{"name": n, "value": v} for n, v in self.constants]}


def signature_of(rep: ClassificationReport) -> Signature:
    consts = tuple(sorted((e.name, e.value) for e in rep.invariants
                          if e.constant and e.weight == 0))
    return Signature(rep.case_id, rep.subcase, consts)


def signature(eq: Equation, options: ClassifyOptions | None = None) -> Signature:
    return signature_of(classify(eq, options))


def compare_signatures(a: Signature, b: Signature) -> str:
    """'inequivalent' when the signatures differ, otherwise 'not excluded'."""
    return "not excluded" if a == b else "inequivalent"
