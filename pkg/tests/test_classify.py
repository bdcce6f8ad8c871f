"""Decision tree, reports and signatures."""

from __future__ import annotations

import random

import pytest

from conftest import affine_mix, degenerate_equation, random_equation
from pointequiv.canonical import CATALOGUE, by_name, primaries
from pointequiv.classify import (CASE_IDS, ClassifyOptions, classify, compare_signatures,
                                 intermediate_case, signature, signature_of)
from pointequiv.fields import BaseFields, Equation
from pointequiv.transform import apply

FORMS = [f.name for f in CATALOGUE]


def test_trivial_equation_is_maximally_degenerate():
    rep = classify(Equation.make())
    assert (rep.case_id, rep.symmetry_dimension) == ("maximal_degeneration", 8)
    assert rep.verdict == "exact"


@pytest.mark.parametrize("name", FORMS)
def test_catalogue_is_classified_as_expected(name):
    form = by_name(name)
    rep = classify(form.equation())
    assert rep.case_id == form.case_id
    assert rep.subcase == form.subcase
    assert rep.symmetry_dimension == form.dimension
    assert rep.structure == form.structure
    assert rep.case_id in CASE_IDS


def test_every_case_has_a_primary_representative():
    assert sorted(f.case_id for f in primaries()) == sorted(CASE_IDS)


def test_case5_is_sl2():
    rep = classify(by_name("case5").equation())
    assert (rep.symmetry_dimension, rep.structure) == (3, "sl(2,R)")


def test_case7_zero_is_non_abelian():
    rep = classify(by_name("case7_zero").equation())
    assert (rep.symmetry_dimension, rep.structure) == (2, "non-Abelian")


@pytest.mark.parametrize("seed", range(len(CATALOGUE)))
def test_decision_tree_is_total(seed):
    # every equation lands in exactly one case, whichever branch it takes
    eq = degenerate_equation(seed) if seed % 2 else random_equation(seed)
    rep = classify(eq)
    assert rep.case_id in CASE_IDS
    assert rep.symmetry_dimension in (0, 1, 2, 3, 8)


@pytest.mark.parametrize("name,case", [("case1_dim0", 1), ("case2", 2), ("case3", 3),
                                       ("case4", 4), ("case5", 5), ("case6", 6),
                                       ("case7", 7)])
def test_intermediate_case(name, case):
    assert intermediate_case(BaseFields(by_name(name).equation())) == case


def test_report_json_fields():
    rep = classify(by_name("case6").equation())
    js = rep.to_json()
    assert js["case"] == "intermediate_6" and js["symmetry_dimension"] == 0
    assert [i["name"] for i in js["invariants"]] == ["I1", "I2"]
    assert js["equation"]["functions"] == ["s", "sigma"]


def test_report_records_interpretation_notes():
    rep = classify(by_name("case6").equation())
    assert any("21/25" in d for d in rep.diagnostics)


def test_constants_of_case6_const():
    rep = classify(by_name("case6_const").equation())
    assert rep.constants() == {"I1": "2", "I2": "81/25"}


def test_text_report():
    text = classify(by_name("case5").equation()).to_text()
    assert "case: intermediate_5" in text and "symmetry dimension: 3 (exact)" in text


# -- signatures -----------------------------------------------------------------------

def test_signature_of_equation_matches_itself():
    eq = by_name("case6_const").equation()
    assert compare_signatures(signature(eq), signature(eq)) == "not excluded"


def test_case5_and_trivial_are_inequivalent():
    a = signature(by_name("case5").equation())
    b = signature(Equation.make())
    assert compare_signatures(a, b) == "inequivalent"


def test_case7_with_different_constants_not_excluded():
    # s = 1 and s = 2 both give I1 = 0; the signature cannot tell them apart
    a = signature(Equation.from_strings(S="x^2/2 + 1"))
    b = signature(Equation.from_strings(S="x^2/2 + 2"))
    assert compare_signatures(a, b) == "not excluded"


def test_different_constant_values_are_inequivalent():
    a = signature(Equation.from_strings(R="x", S="x^3 + x^2/2 + 2*x + 1"))
    b = signature(Equation.from_strings(R="x", S="x^3 + x^2/2 + 3*x + 1"))
    assert a.case_id == b.case_id == "intermediate_6"
    assert compare_signatures(a, b) == "inequivalent"


@pytest.mark.parametrize("seed", range(3))
def test_signature_is_stable_under_mixing(seed):
    eq = by_name("case6_const").equation()
    moved = apply(eq, affine_mix(random.Random(seed)))
    assert signature(moved) == signature(eq)


def test_signature_json():
    js = signature_of(classify(by_name("case1_dim2").equation())).to_json()
    assert js["case"] == "intermediate_1" and js["subcase"] == "all_constant"
    assert {c["name"] for c in js["constants"]} == {"I1", "I2", "I3"}


def test_symbolic_mode_classifies_canonical_forms():
    rep = classify(by_name("case2").equation(), ClassifyOptions(zero_test="symbolic"))
    assert rep.case_id == "intermediate_2" and rep.verdict == "exact"
