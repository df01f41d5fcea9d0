import random
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from featuremu.features import FeatureModel, parse_fexpr, sat_products
from featuremu.harness import GenBounds, gen_formula, gen_fts
from featuremu.logic import MUL, MULF, MULPF, NotClosedError, NotMonotoneError, Not, nnf, nnf_family, parse_formula
from featuremu.logic.fo import BoolConst, Forall, IsEmpty, MayAct, PConst, PInter, PVar, VarApp
from featuremu.logic.transform import NotNormalizable
from featuremu.models import Lts, build_param_lts, project
from featuremu.semantics import (
    FixpointChainError,
    FixpointStats,
    UnboundVariableError,
    eval_fo,
    eval_fts_family,
    eval_fts_product,
    eval_lts,
    kleene,
    sat_family,
    sat_lts,
    sat_product,
)
from featuremu.semantics.fixpoint import mask_leq
from featuremu.translate import fm as fm_of
from featuremu.translate import sm, to_fo
from oracle import all_families, family_sem, lts_sem, product_sem

CD, CE, D, E = frozenset("CD"), frozenset("CE"), frozenset("D"), frozenset("E")
P1, P2 = frozenset("fg"), frozenset("g")


def mulf(text):
    return parse_formula(text, MULF)


def mulpf(text):
    return parse_formula(text, MULPF)


# -- plain LTS ---------------------------------------------------------------


def test_lts_reachability_example(coffee):
    lts = project(coffee, {"E"})
    phi = parse_formula("mu X. (<ins>X || <sd>true)", MUL)

    # oracle: states with a path ins* sd, by backwards search
    can_sd = {s for (s, a, _) in lts.transitions if a == "sd"}
    seen, todo = set(can_sd), deque(can_sd)
    while todo:
        t = todo.popleft()
        for s, a, u in lts.transitions:
            if a == "ins" and u == t and s not in seen:
                seen.add(s)
                todo.append(s)
    assert eval_lts(phi, lts) == seen == {"s0", "s1"}


def test_lts_trivial_examples(coffee):
    lts = project(coffee, {"D"})
    assert eval_lts(parse_formula("true", MUL), lts) == set(lts.states)
    single = Lts(("s",), set(), set(), "s")
    assert eval_lts(parse_formula("<a>true", MUL), single) == set()


def test_lts_env_handling(coffee):
    lts = project(coffee, {"E"})
    phi = parse_formula("<ins>Z", MUL)
    assert eval_lts(phi, lts) == set()  # no env: every variable denotes the empty set
    assert eval_lts(phi, lts, {"Z": {"s1"}}) == {"s0"}
    with pytest.raises(UnboundVariableError):
        eval_lts(phi, lts, {"W": set()})
    with pytest.raises(NotMonotoneError):
        eval_lts(parse_formula("mu X. !X", MUL), lts)


# -- product semantics -------------------------------------------------------


def test_product_diamond_example(coffee):
    got = eval_fts_product(mulf("<ins|D>true"), coffee)
    assert ("s1", CD) in got
    assert ("s1", E) not in got


def test_product_vacuous_box(coffee):
    got = eval_fts_product(mulf("[a|false]false"), coffee)
    assert got == {(s, p) for s in coffee.states for p in coffee.fm.products}


def test_sd_often_as_feature_formula(coffee, sd_often):
    phi = fm_of(sd_often)
    got = eval_fts_product(phi, coffee)
    for p in coffee.fm.products:
        # oracle justified by projection: evaluate sm(phi, p) on F|p
        expected = "s0" in eval_lts(sm(phi, p), project(coffee, p))
        assert (("s0", p) in got) == expected
    assert ("s0", E) in got
    assert ("s0", CE) not in got


def test_sat_product_examples(coffee):
    assert sat_product(coffee, E, mulf("[ins|D]false"))
    assert sat_product(coffee, CD, mulf("<cd|C>true"))
    assert not sat_product(coffee, E, mulf("<cd|C>true"))
    with pytest.raises(NotClosedError):
        sat_product(coffee, E, mulf("<cd|C>Z"))
    with pytest.raises(ValueError):
        sat_product(coffee, frozenset("C"), mulf("true"))


def test_sat_lts_examples(coffee, sd_often):
    lts = project(coffee, {"E"})
    assert sat_lts(lts, parse_formula("true", MUL))
    assert sat_lts(lts, parse_formula("<ins>true", MUL))
    # every guard of the formula is E, so for {C,D} all boxes are vacuous
    p1 = project(coffee, CD)
    got = sat_lts(p1, sm(fm_of(sd_often), CD))
    assert got == sat_product(coffee, CD, fm_of(sd_often))
    assert got is True


# -- family semantics --------------------------------------------------------


def test_example3_family(example3):
    both = frozenset({P1, P2})
    assert not sat_family(example3, both, mulpf("<<a|true>>true"))
    assert not sat_family(example3, both, mulpf("[a|true]false"))
    for p in (P1, P2):
        assert sat_product(example3, p, mulf("<a|true>true"))
        assert sat_family(example3, {p}, mulpf("<<a|true>>true"))


def test_empty_family_passes_ruby(example3):
    got = eval_fts_family(mulpf("<<a|true>>true"), example3)
    assert ("s0", frozenset()) in got
    # no a-transition from s1
    assert ("s1", frozenset()) not in got


def test_sat_family_coffee(coffee, sd_often):
    assert sat_family(coffee, {E}, sd_often)
    assert not sat_family(coffee, {CE}, sd_often)
    assert sat_family(coffee, sat_products(parse_fexpr("!(C | D)"), coffee.fm), sd_often)


def test_sat_family_rejects_foreign_member(coffee, sd_often):
    with pytest.raises(ValueError):
        sat_family(coffee, {frozenset("C")}, sd_often)


# -- first-order fragment ----------------------------------------------------


def test_fo_example4(coffee, sd_often):
    pl = build_param_lts(coffee)
    P = sat_products(parse_fexpr("!(C | D)"), coffee.fm)
    assert "s0" in eval_fo(to_fo(P, sd_often), pl)


def test_fo_trivial_and_lookup(coffee):
    pl = build_param_lts(coffee)
    phi = Forall("e", IsEmpty(PInter(PVar("e"), PConst(frozenset()))))
    assert eval_fo(phi, pl) == set(pl.states)
    d = sat_products(parse_fexpr("D"), coffee.fm)
    got = eval_fo(MayAct("ins", "e", BoolConst(True)), pl, data_env={"e": d})
    assert "s1" in got and "s2" not in got
    # the label must match exactly, not merely overlap
    assert "s0" not in got


def test_fo_unbound_variables(coffee):
    pl = build_param_lts(coffee)
    with pytest.raises(ValueError):
        eval_fo(MayAct("ins", "e", BoolConst(True)), pl)
    with pytest.raises(ValueError):
        eval_fo(VarApp("X", PConst(frozenset())), pl)


# -- fixpoint iteration ------------------------------------------------------


def test_kleene_detects_non_monotone_chain():
    stats = FixpointStats()
    with pytest.raises(FixpointChainError):
        kleene(lambda x: x ^ 1, 0, mask_leq, least=True, capacity=1, stats=stats)
    assert stats.violations == 1


def test_kleene_counts_iterations():
    stats = FixpointStats()
    # grows one bit per step on a 4-bit lattice
    got = kleene(lambda x: (x << 1 | 1) & 0b1111, 0, mask_leq, least=True, capacity=4, stats=stats)
    assert got == 0b1111
    assert stats.max_iterations == 5 and stats.violations == 0


# -- differential checks against the literal set-based definitions -------------

small = GenBounds(max_states=4, max_features=2, max_actions=2, max_formula_depth=4)


def _random_env(rng, universe):
    return {"Z": frozenset(x for x in universe if rng.random() < 0.4)}


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**40))
def test_lts_evaluator_matches_oracle(seed):
    b = GenBounds(seed=seed)
    f = gen_fts(b)
    lts = project(f, f.fm.products[0])
    phi = gen_formula(b, MUL, free=("Z",))
    env = _random_env(random.Random(seed), lts.states)
    assert eval_lts(phi, lts, env) == lts_sem(phi, lts, env)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**40))
def test_product_evaluator_matches_oracle(seed):
    b = GenBounds(seed=seed)
    f = gen_fts(b)
    phi = gen_formula(b, MULF, free=("Z",))
    env = _random_env(random.Random(seed), [(s, p) for s in f.states for p in f.fm.products])
    assert eval_fts_product(phi, f, env) == product_sem(phi, f, env)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**40))
def test_family_evaluator_matches_oracle(seed):
    from dataclasses import replace

    b = replace(small, seed=seed)
    f = gen_fts(b)
    phi = gen_formula(b, MULPF, free=("Z",))
    env = _random_env(random.Random(seed), [(s, P) for s in f.states for P in all_families(f.fm.products)])
    assert eval_fts_family(phi, f, env) == family_sem(phi, f, env)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**40))
def test_nnf_preserves_product_semantics(seed):
    b = GenBounds(seed=seed)
    f = gen_fts(b)
    phi = gen_formula(b, MULF)
    for q in (phi, Not(phi)):
        assert eval_fts_product(nnf(q), f) == eval_fts_product(q, f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**40))
def test_nnf_family_preserves_family_semantics(seed):
    from dataclasses import replace

    b = replace(small, seed=seed)
    f = gen_fts(b)
    phi = gen_formula(b, MULPF)
    try:
        out = nnf_family(Not(phi))
    except NotNormalizable:
        return
    assert eval_fts_family(out, f) == eval_fts_family(Not(phi), f)


def test_family_models_with_restricted_universe():
    fm = FeatureModel(("x", "y"), (frozenset(), frozenset("x")))
    from featuremu.models import parse_fts

    f = parse_fts("features: x y\nproducts: {} {x}\nstates: a b\ninitial: a\ntrans: a -t|x-> b\n")
    assert f.fm == fm
    got = eval_fts_family(mulpf("<<t|x>>true"), f)
    assert ("a", frozenset({frozenset("x")})) in got
    assert ("a", frozenset({frozenset(), frozenset("x")})) not in got


def test_box_disjunction_breaks_family_product_equivalence(example3):
    # each product passes one disjunct vacuously, yet the family splits on f
    # and fails both; fixed here as a documented counterexample
    phi = mulpf("[a|f]false || [a|!f]false")
    both = frozenset({P1, P2})
    assert all(sat_product(example3, p, fm_of(phi)) for p in both)
    assert not sat_family(example3, both, phi)
    assert ("s0", both) not in family_sem(phi, example3)


def test_empty_family_fails_false():
    # (s, {}) is never in the denotation of false, while "every product of {}" is vacuous
    from featuremu.models import parse_fts

    f = parse_fts("features: x\nstates: a\ninitial: a\n")
    assert not sat_family(f, [], mulpf("false"))
