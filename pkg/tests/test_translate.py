import random
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from featuremu.features import parse_fexpr, sat_products
from featuremu.harness import GenBounds, gen_formula
from featuremu.logic import MULF, MULPF, Diamond, Ruby, parse_formula
from featuremu.logic.fo import BoolConst, FConj, check_well_formed, format_fo
from featuremu.logic.syntax import guards, subformulas
from featuremu.models import build_param_lts
from featuremu.semantics import eval_fo, sat_family
from featuremu.translate import fm, fp, ruby_lift, sm, to_fo

GOLDEN = Path(__file__).parent / "golden"


def mulf(text):
    return parse_formula(text, MULF)


def mulpf(text):
    return parse_formula(text, MULPF)


def test_sm_examples():
    assert sm(mulf("<ins|D>true"), {"E"}) == parse_formula("false", MULF)
    assert sm(mulf("mu X. [cd|C]X"), {"E"}) == mulf("mu X. true")
    got = sm(mulf("mu X. (<a|true>X || <b|D>true)"), {"D"})
    assert got == parse_formula("mu X. (<a>X || <b>true)", "muL")


def test_sm_rejects_foreign_product(coffee):
    with pytest.raises(ValueError):
        sm(mulf("true"), {"C"}, coffee.fm)


def test_fm_examples(sd_often):
    assert fm(mulpf("<<a|true>>true")) == mulf("<a|true>true")
    assert fm(sd_often) == sd_often
    assert fm(mulpf("nu X. <<a|C>>X")) == mulf("nu X. <a|C>X")


def test_ruby_lift_examples(sd_often):
    assert ruby_lift(mulf("<a|C>true")) == mulpf("<<a|C>>true")
    assert ruby_lift(sd_often) == sd_often


def test_fp_examples():
    p1, p2 = frozenset("a"), frozenset("b")
    assert fp({("s0", frozenset({p1, p2}))}) == {("s0", p1), ("s0", p2)}
    assert fp({("s", frozenset())}) == set()
    assert fp(set()) == set()


def _normalise(text):
    return re.sub(r"\s+", "", text)


def test_to_fo_golden(coffee, sd_often):
    P = sat_products(parse_fexpr("!(C | D)"), coffee.fm)
    got = format_fo(to_fo(P, sd_often))
    expected = (GOLDEN / "example4_fo.txt").read_text(encoding="utf-8")
    assert _normalise(got) == _normalise(expected)


def test_to_fo_ascii_tokens(coffee, sd_often):
    got = format_fo(to_fo(coffee.fm.products, sd_often), unicode=False)
    assert got.startswith("nu X(P_x: PSet = P). mu Y(P_y: PSet = P_x).")
    assert "forall e: PSet. [ins(e)](P_y * E * e == {} || Y(P_y * E * e))" in got
    assert all(ord(c) < 128 for c in got)


def test_to_fo_small_cases():
    assert to_fo([], mulpf("true")) == BoolConst(True)
    phi = to_fo([frozenset("a")], mulpf("<<a|true>>true"))
    assert isinstance(phi, FConj)
    assert format_fo(phi) == "P ⊆ 𝒫 ∧ ∃e:PSet. <a(e)>(P ⊆ e ∧ true)"
    check_well_formed(phi)
    with pytest.raises(ValueError):
        to_fo([], mulpf("!<<a|true>>true"))


def test_to_fo_nested_binders_get_fresh_names():
    phi = to_fo([], mulpf("[a|true]<<b|true>>true"))
    assert "∀e:PSet" in format_fo(phi) and "∃e1:PSet" in format_fo(phi)
    check_well_formed(phi)


seeds = st.integers(0, 2**40)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_sm_erases_feature_data(seed):
    phi = gen_formula(GenBounds(seed=seed), MULF)
    p = random.Random(seed).choice([frozenset(), frozenset({"f0"}), frozenset({"f0", "f2"})])
    assert guards(sm(phi, p)) == []
    assert all(getattr(q, "guard", None) is None for q in subformulas(sm(phi, p)))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_fm_ruby_lift_roundtrips(seed):
    phi = gen_formula(GenBounds(seed=seed), MULF)
    assert fm(ruby_lift(phi)) == phi
    psi = gen_formula(GenBounds(seed=seed), MULPF)
    assert ruby_lift(fm(psi)) == psi
    assert not any(isinstance(q, Diamond) for q in subformulas(ruby_lift(phi)))
    assert not any(isinstance(q, Ruby) for q in subformulas(fm(psi)))


@settings(max_examples=100, deadline=None)
@given(
    st.sets(st.tuples(st.sampled_from("stu"), st.frozensets(st.frozensets(st.sampled_from("xy"))))),
    st.sets(st.tuples(st.sampled_from("stu"), st.frozensets(st.frozensets(st.sampled_from("xy"))))),
)
def test_fp_is_union_preserving(a, b):
    assert fp(a | b) == fp(a) | fp(b)


def test_ruby_translation_agrees_with_family_semantics(example3):
    pl = build_param_lts(example3)
    phi = mulpf("<<a|true>>true")
    for P in ([], [frozenset("fg")], [frozenset("g")], [frozenset("fg"), frozenset("g")]):
        assert ("s0" in eval_fo(to_fo(P, phi), pl)) == sat_family(example3, P, phi)
