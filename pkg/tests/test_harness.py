import json
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from featuremu.features import Atom
from featuremu.harness import PROPERTIES, GenBounds, Instance, check_property, gen_fts, shrink
from featuremu.logic import MULF, parse_formula
from featuremu.logic.syntax import size
from featuremu.models import format_fts
from featuremu.semantics import eval_fts_product


def test_bounds_validation():
    with pytest.raises(ValueError):
        GenBounds(max_states=0)
    with pytest.raises(ValueError):
        GenBounds(fixpoint_probability=1.5)
    b = GenBounds()
    assert (b.max_states, b.max_features, b.max_actions, b.max_formula_depth) == (6, 3, 3, 4)


def test_gen_fts_is_deterministic():
    assert format_fts(gen_fts(GenBounds(seed=1))) == format_fts(gen_fts(GenBounds(seed=1)))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_gen_fts_tiny_bounds(seed):
    f = gen_fts(GenBounds(seed=seed, max_states=1, max_actions=1))
    assert f.states == ("s0",)
    assert all(k == ("s0", "a", "s0") for k in f.theta)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_generated_theta_keys_are_unique(seed):
    f = gen_fts(GenBounds(seed=seed))
    lines = [ln for ln in format_fts(f).splitlines() if ln.startswith("trans:")]
    keys = [(ln.split()[1], ln.split()[2].split("|")[0][1:], ln.split()[-1]) for ln in lines]
    assert len(keys) == len(set(keys)) == len(f.theta)
    assert len(f.states) <= 6 and len(f.fm.features) <= 3


def test_duality_single_instance():
    prop = PROPERTIES["duality"]
    inst = prop.generate(3, GenBounds())
    inst = replace(inst, formula=parse_formula("![a|f0]false", MULF), extra={"action": "a", "guard": Atom("f0")})
    failures, _ = prop.check(inst)
    assert failures == []
    f = inst.fts
    assert eval_fts_product(inst.formula, f) == eval_fts_product(parse_formula("<a|f0>true", MULF), f)


def test_theorem2_lists_example3_as_witness():
    report = check_property("theorem2", 5)
    fixed = [r for r in report.results if r.index == "example3"]
    assert len(fixed) == 1
    r = fixed[0]
    assert r.passed
    assert any(w["family_verdict"] is False and w["per_product_verdicts"] is True for w in r.witnesses)
    assert any("{g},{f,g}" in w["subject"] for w in r.witnesses)
    assert "fixed instance example3: non-failure" in report.to_text()


def test_reports_are_deterministic():
    a = check_property("singleton", 20, GenBounds(seed=4))
    b = check_property("singleton", 20, GenBounds(seed=4), jobs=2)
    strip = lambda r: [{k: v for k, v in rec.items()} for rec in r.records()]  # noqa: E731
    assert strip(a) == strip(b)
    c = check_property("singleton", 20, GenBounds(seed=5))
    assert strip(a) != strip(c)


def test_shrunk_counterexample_still_fails():
    # an empty family is where the biconditional breaks; the shrinker must keep that
    report = check_property("eq3", 60)
    assert report.failures
    prop = PROPERTIES["eq3"]
    for r in report.failures:
        assert r.shrunk is not None
        assert prop.check(r.shrunk)[0]
        assert size(r.shrunk.formula) <= size(r.instance.formula)
        assert len(r.shrunk.fts.states) <= len(r.instance.fts.states)


def test_shrink_keeps_fragment():
    prop = PROPERTIES["theorem3"]
    report = check_property("theorem3", 60)
    for r in report.failures:
        assert prop.in_fragment(r.shrunk.formula)


def test_shrink_on_passing_instance_is_identity():
    prop = PROPERTIES["theorem1"]
    inst = prop.generate(11, GenBounds())
    best, fails = shrink(prop, inst)
    assert best is inst and fails == []


def test_jsonl_schema(tmp_path):
    report = check_property("theorem2", 3)
    path = tmp_path / "out.jsonl"
    report.write_jsonl(path)
    recs = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(recs) == 4  # the fixed instance plus three random ones
    for rec in recs:
        assert {"property", "index", "seed", "model", "formula", "passed", "failures", "witnesses", "stats"} <= set(rec)
        assert rec["property"] == "theorem2"


def test_unknown_property_and_bad_n():
    with pytest.raises(KeyError):
        check_property("theorem9", 1)
    with pytest.raises(ValueError):
        check_property("theorem1", 0)


def test_instance_describe_lists_environment():
    inst = PROPERTIES["theorem1"].generate(2, GenBounds())
    d = inst.describe()
    assert isinstance(inst, Instance)
    assert set(d["env_products"]) == set(inst.fts.states)
