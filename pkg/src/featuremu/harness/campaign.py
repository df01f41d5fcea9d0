"""Seeded campaigns over the properties, with greedy counterexample shrinking."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator

from ..logic.syntax import Bot, Formula, Top, children, rebuild, size
from ..logic.transform import check_monotone
from ..models import Fts
from ..semantics.fixpoint import FixpointStats
from .gen import GenBounds, derive_seed
from .properties import PROPERTIES, Instance, Property


@dataclass
class InstanceResult:
    index: int | str
    instance: Instance
    failures: list[dict]
    witnesses: list[dict]
    stats: FixpointStats
    shrunk: Instance | None = None
    shrunk_failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, prop: str) -> dict:
        rec = {
            "property": prop,
            "index": self.index,
            **self.instance.describe(),
            "passed": self.passed,
            "failures": self.failures,
            "witnesses": self.witnesses,
            "stats": self.stats.as_dict(),
        }
        if self.shrunk is not None:
            rec["shrunk"] = {**self.shrunk.describe(), "failures": self.shrunk_failures}
        return rec


@dataclass
class CampaignReport:
    property: str
    instances: int
    results: list[InstanceResult]
    stats: FixpointStats
    wall_time: float

    @property
    def failures(self) -> list[InstanceResult]:
        return [r for r in self.results if not r.passed]

    @property
    def witnesses(self) -> list[InstanceResult]:
        return [r for r in self.results if r.witnesses]

    @property
    def passed(self) -> bool:
        return not self.failures

    def records(self) -> Iterator[dict]:
        for r in self.results:
            yield r.record(self.property)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records():
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def to_text(self, max_failures: int = 3) -> str:
        lines = [
            f"property   {self.property}",
            f"instances  {self.instances}",
            f"failures   {len(self.failures)}",
            f"witnesses  {len(self.witnesses)}",
            f"fixpoints  {self.stats.fixpoints} (max iterations {self.stats.max_iterations}, chain violations {self.stats.violations})",
            f"wall time  {self.wall_time:.2f}s",
            f"verdict    {'PASS' if self.passed else 'FAIL'}",
        ]
        for r in self.results:
            if r.index == "example3" or (r.witnesses and not isinstance(r.index, int)):
                w = r.witnesses[0] if r.witnesses else None
                lines.append(f"fixed instance {r.index}: {'non-failure' if r.passed else 'FAILURE'}" + (f", witness at {w['subject']}: family false, every product true" if w else ""))
        for r in self.failures[:max_failures]:
            best = r.shrunk or r.instance
            fails = r.shrunk_failures or r.failures
            lines.append("")
            lines.append(f"counterexample (instance {r.index}, seed {r.instance.seed}){' shrunk' if r.shrunk else ''}:")
            lines.append("  formula: " + best.describe()["formula"])
            for ln in best.describe()["model"].splitlines():
                lines.append("  | " + ln)
            if best.prod_env is not None:
                lines.append("  env Z: " + json.dumps(best.describe()["env_products"]))
            for f in fails[:3]:
                lines.append(f"  at {f['subject']}: lhs={f['lhs']} rhs={f['rhs']}")
        return "\n".join(lines)


def _check(prop: Property, inst: Instance) -> tuple[list[dict], list[dict], FixpointStats]:
    stats = FixpointStats()
    failures, witnesses = prop.check(inst, stats)
    return failures, witnesses, stats


# -- shrinking ---------------------------------------------------------------


def _formula_candidates(phi: Formula) -> Iterator[Formula]:
    """Strictly smaller variants: replace one subformula by a constant or a child."""

    def go(q: Formula) -> Iterator[Formula]:
        if not isinstance(q, (Top, Bot)):
            yield Top()
            yield Bot()
        for c in children(q):
            yield c
        kids = children(q)
        for k, c in enumerate(kids):
            for c2 in go(c):
                yield rebuild(q, kids[:k] + (c2,) + kids[k + 1 :])

    seen = set()
    for cand in go(phi):
        if cand not in seen and size(cand) < size(phi):
            seen.add(cand)
            yield cand


def _drop_state(inst: Instance, s: str) -> Instance:
    f = inst.fts
    k = f.index[s]
    states = tuple(x for x in f.states if x != s)
    theta = {key: g for key, g in f.theta.items() if s not in (key[0], key[2])}
    cut = lambda rows: None if rows is None else rows[:k] + rows[k + 1 :]  # noqa: E731
    return replace(
        inst,
        fts=Fts(states, f.actions, f.initial, f.fm, theta),
        prod_env=cut(inst.prod_env),
        fam_env=cut(inst.fam_env),
    )


def _drop_transition(inst: Instance, key) -> Instance:
    f = inst.fts
    theta = {k: g for k, g in f.theta.items() if k != key}
    return replace(inst, fts=Fts(f.states, f.actions, f.initial, f.fm, theta))


def _valid(prop: Property, phi: Formula) -> bool:
    return prop.in_fragment(phi) and check_monotone(phi) is None


def shrink(prop: Property, inst: Instance, max_steps: int = 500) -> tuple[Instance, list[dict]]:
    """Greedy deletion of states, transitions and subformulas while the failure persists."""
    best = inst
    best_failures = prop.check(best)[0]
    steps = 0
    progress = True
    while progress and steps < max_steps:
        progress = False
        candidates: list[Instance] = []
        f = best.fts
        candidates += [_drop_state(best, s) for s in reversed(f.states) if s != f.initial]
        candidates += [_drop_transition(best, key) for key in sorted(f.theta, reverse=True)]
        candidates += [replace(best, formula=q) for q in _formula_candidates(best.formula) if _valid(prop, q)]
        for cand in candidates:
            steps += 1
            try:
                fails = prop.check(cand)[0]
            except ValueError:  # a malformed candidate is simply not a counterexample
                fails = []
            if fails:
                best, best_failures = cand, fails
                progress = True
                break
            if steps >= max_steps:
                break
    return best, best_failures


# -- campaigns ---------------------------------------------------------------


def _run_one(args) -> InstanceResult:
    name, index, seed, b, do_shrink = args
    prop = PROPERTIES[name]
    inst = prop.generate(seed, b)
    failures, witnesses, stats = _check(prop, inst)
    res = InstanceResult(index, inst, failures, witnesses, stats)
    if failures and do_shrink:
        shrunk, shrunk_failures = shrink(prop, inst)
        # re-check: the reported counterexample must still violate the property
        recheck = prop.check(shrunk)[0]
        assert recheck, "shrunk instance no longer fails"
        res.shrunk, res.shrunk_failures = shrunk, shrunk_failures
    return res


def _fixed_instances(name: str) -> list[tuple[str, Instance]]:
    if name != "theorem2":
        return []
    from ..features import Atom, FeatureModel, FNot, FTrue
    from ..logic.syntax import Ruby

    # two products that each take an a-step, but never along the same transition
    fm = FeatureModel(("f", "g"), (frozenset({"f", "g"}), frozenset({"g"})))
    f = Fts(("s0", "s1", "s2"), {"a"}, "s0", fm, {("s0", "a", "s1"): Atom("f"), ("s0", "a", "s2"): FNot(Atom("f"))})
    inst = Instance(0, f, Ruby("a", FTrue(), Top()), prod_env=(0, 0, 0), fam_env=(0, 0, 0))
    return [("example3", inst)]


def check_property(name: str, n: int, b: GenBounds | None = None, *, jobs: int = 1, shrink_failures: bool = True) -> CampaignReport:
    """Run ``n`` seeded instances of property ``name``.

    Instance ``k`` uses seed ``derive_seed(b.seed, name, k)``, so reports are
    reproducible and independent of ``jobs``.
    """
    if name not in PROPERTIES:
        raise KeyError(f"unknown property {name!r}; choose from {sorted(PROPERTIES)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    b = b or GenBounds()
    prop = PROPERTIES[name]
    start = time.perf_counter()
    results: list[InstanceResult] = []
    for label, inst in _fixed_instances(name):
        failures, witnesses, stats = _check(prop, inst)
        results.append(InstanceResult(label, inst, failures, witnesses, stats))
    work = [(name, k, derive_seed(b.seed, name, k), b, shrink_failures) for k in range(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results += list(pool.map(_run_one, work, chunksize=max(1, n // (4 * jobs))))
    else:
        results += [_run_one(w) for w in work]
    total = FixpointStats()
    for r in results:
        total.merge(r.stats)
    return CampaignReport(name, n, results, total, time.perf_counter() - start)
