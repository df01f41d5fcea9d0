"""Executable forms of the correspondence results between the semantics.

Each property knows how to generate a random instance from a seed and how to
check one.  ``check`` returns a list of mismatch records (empty when the
property holds) and a list of strictness witnesses, i.e. points where a
one-directional result is strict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from ..features import format_product
from ..logic.syntax import MULF, MULPF, Formula, Mu, Not, Or, Var, format_formula, free_vars, subformulas, substitute
from ..logic.transform import nnf
from ..models import Fts, build_param_lts, format_fts, project
from ..semantics.family import FamilyEvaluator
from ..semantics.fixpoint import FixpointStats
from ..semantics.fo import FOEvaluator
from ..semantics.lts import LtsEvaluator
from ..semantics.product import ProductEvaluator
from ..translate import fm as to_product_formula
from ..translate import sm, to_fo
from .gen import GenBounds, gen_fexpr, gen_formula, gen_fts

FREE = "Z"  # free variable used by the environment-carrying properties


@dataclass
class Instance:
    seed: int
    fts: Fts
    formula: Formula
    # environment for FREE: per-state product masks and per-state family masks
    prod_env: tuple[int, ...] | None = None
    fam_env: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict)

    def describe(self) -> dict:
        d = {"seed": self.seed, "model": format_fts(self.fts), "formula": format_formula(self.formula)}
        if self.prod_env is not None:
            d["env_products"] = {
                s: [format_product(p, self.fts.fm) for p in self.fts.fm.ordered(m)]
                for s, m in zip(self.fts.states, self.prod_env)
            }
        if self.extra:
            d.update({k: str(v) for k, v in self.extra.items()})
        return d


def _subset_rows(rng: random.Random, rows: tuple[int, ...], fam_count: int) -> tuple[int, ...]:
    """Random per-state family sets whose members are all subsets of ``rows[s]``."""
    out = []
    for m in rows:
        fam = 0
        for P in range(fam_count):
            if P & ~m == 0 and rng.random() < 0.5:
                fam |= 1 << P
        out.append(fam)
    return tuple(out)


def _derived_family_rows(rows: tuple[int, ...], fam_count: int) -> tuple[int, ...]:
    """``(s,P)`` in the result iff every product of ``P`` is paired with ``s``."""
    out = []
    for m in rows:
        fam = 0
        for P in range(fam_count):
            if P & ~m == 0:
                fam |= 1 << P
        out.append(fam)
    return tuple(out)


class Property:
    name = ""
    dialect = MULF
    negation_free = False
    box_only = False
    disjunction_free = False
    with_env = False
    nonempty_families = False
    description = ""

    def bounds(self, b: GenBounds) -> GenBounds:
        return replace(
            b,
            negation_free=b.negation_free or self.negation_free,
            box_only=b.box_only or self.box_only,
        )

    def generate(self, seed: int, b: GenBounds) -> Instance:
        b = replace(self.bounds(b), seed=seed)
        f = gen_fts(b)
        rng = random.Random(seed ^ 0x5EED)
        free = (FREE,) if self.with_env else ()
        phi = gen_formula(b, self.dialect, free=free, rng=rng)
        if self.disjunction_free:
            phi = _drop_disjunctions(phi)
        inst = Instance(seed, f, phi)
        if self.with_env:
            self.attach_env(inst, rng)
        return inst

    def attach_env(self, inst: Instance, rng: random.Random) -> None:
        n = len(inst.fts.fm.products)
        inst.prod_env = tuple(rng.getrandbits(n) for _ in inst.fts.states) if n else (0,) * len(inst.fts.states)

    def in_fragment(self, phi: Formula) -> bool:
        allowed_free = {FREE} if self.with_env else set()
        if free_vars(phi) - allowed_free:
            return False
        for q in subformulas(phi):
            if self.negation_free and isinstance(q, Not):
                return False
            if self.disjunction_free and isinstance(q, Or):
                return False
            if self.box_only and type(q).__name__ in ("Diamond", "Ruby"):
                return False
        return True

    def check(self, inst: Instance, stats: FixpointStats | None = None) -> tuple[list[dict], list[dict]]:
        raise NotImplementedError


def _drop_disjunctions(phi: Formula) -> Formula:
    from ..logic.syntax import And, children, rebuild

    if isinstance(phi, Or):
        return And(_drop_disjunctions(phi.left), _drop_disjunctions(phi.right))
    kids = children(phi)
    return rebuild(phi, tuple(_drop_disjunctions(c) for c in kids)) if kids else phi


def _mismatch(inst: Instance, subject: str, lhs, rhs, **detail) -> dict:
    return {"subject": subject, "lhs": lhs, "rhs": rhs, **detail}


# ---------------------------------------------------------------------------


class Theorem1(Property):
    name = "theorem1"
    dialect = MULF
    with_env = True
    description = "(s,p) in [[phi]]_F(eta)  iff  s in [[sm(phi,p)]]_{F|p}(eps) for matched environments"

    def check(self, inst, stats=None):
        f, phi = inst.fts, inst.formula
        pe = ProductEvaluator(f, stats)
        rows = pe.eval(phi, {FREE: inst.prod_env})
        bad = []
        for k, p in enumerate(f.fm.products):
            le = LtsEvaluator(project(f, p), stats)
            eps = sum(1 << i for i, m in enumerate(inst.prod_env) if m >> k & 1)
            got = le.eval(sm(phi, p), {FREE: eps})
            for i, s in enumerate(f.states):
                lhs, rhs = bool(rows[i] >> k & 1), bool(got >> i & 1)
                if lhs != rhs:
                    bad.append(_mismatch(inst, f"state {s}, product {format_product(p, f.fm)}", lhs, rhs))
        return bad, []


class Eq1(Property):
    name = "eq1"
    dialect = MULF
    description = "p |=_F phi  iff  F|p |= sm(phi,p)  for closed phi"

    def check(self, inst, stats=None):
        from ..semantics import sat_lts, sat_product

        f, phi = inst.fts, inst.formula
        bad = []
        for p in f.fm.products:
            lhs = sat_product(f, p, phi, stats)
            rhs = sat_lts(project(f, p), sm(phi, p), stats)
            if lhs != rhs:
                bad.append(_mismatch(inst, f"product {format_product(p, f.fm)}", lhs, rhs))
        return bad, []


class Duality(Property):
    name = "duality"
    dialect = MULF
    description = "negated modalities and fixpoints equal their duals; nnf preserves the denotation"

    def generate(self, seed, b):
        inst = super().generate(seed, b)
        rng = random.Random(seed ^ 0xD0A1)
        inst.extra = {"action": rng.choice(b.actions), "guard": gen_fexpr(rng, b.features, 2, 0.3)}
        return inst

    def check(self, inst, stats=None):
        from ..logic.syntax import Box, Diamond, Nu

        f, phi = inst.fts, inst.formula
        a, chi = inst.extra["action"], inst.extra["guard"]
        pe = ProductEvaluator(f, stats)
        ev = lambda q: pe.eval(q, {})  # noqa: E731
        pairs = [
            ("!(box) vs <>!", Not(Box(a, chi, phi)), Diamond(a, chi, Not(phi))),
            ("!(<>) vs box!", Not(Diamond(a, chi, phi)), Box(a, chi, Not(phi))),
            ("phi vs nnf(phi)", phi, nnf(phi)),
            ("!phi vs nnf(!phi)", Not(phi), nnf(Not(phi))),
        ]
        for q in subformulas(phi):
            if isinstance(q, (Mu, Nu)) and not free_vars(q):
                dual = (Nu if isinstance(q, Mu) else Mu)(q.var, Not(substitute(q.body, q.var, Not(Var(q.var)))))
                pairs.append((f"!{type(q).__name__} {q.var} vs dual", Not(q), dual))
        bad = []
        for label, lhs, rhs in pairs:
            x, y = ev(lhs), ev(rhs)
            if x != y:
                bad.append(_mismatch(inst, label, format_formula(lhs), format_formula(rhs), lhs_set=str(pe.to_pairs(x)), rhs_set=str(pe.to_pairs(y))))
        return bad, []


class Singleton(Property):
    name = "singleton"
    dialect = MULPF
    with_env = True
    description = "(s,{p}) in [[phi']]'(zeta)  iff  (s,p) in [[fm(phi')]](eta) for related environments"

    def attach_env(self, inst, rng):
        super().attach_env(inst, rng)
        nfam = 1 << len(inst.fts.fm.products)
        fam = []
        for m in inst.prod_env:
            r = rng.getrandbits(nfam)
            # singletons follow eta exactly; other families are arbitrary
            for k in range(len(inst.fts.fm.products)):
                r &= ~(1 << (1 << k))
                if m >> k & 1:
                    r |= 1 << (1 << k)
            fam.append(r)
        inst.fam_env = tuple(fam)

    def check(self, inst, stats=None):
        f, phi = inst.fts, inst.formula
        fam = FamilyEvaluator(f, stats).eval(phi, {FREE: inst.fam_env})
        prod = ProductEvaluator(f, stats).eval(to_product_formula(phi), {FREE: inst.prod_env})
        bad = []
        for i, s in enumerate(f.states):
            for k, p in enumerate(f.fm.products):
                lhs, rhs = bool(fam[i] >> (1 << k) & 1), bool(prod[i] >> k & 1)
                if lhs != rhs:
                    bad.append(_mismatch(inst, f"state {s}, product {format_product(p, f.fm)}", lhs, rhs))
        return bad, []


class Theorem2(Property):
    name = "theorem2"
    dialect = MULPF
    negation_free = True
    with_env = True
    description = "(s,P) in [[phi']]'(zeta)  implies  (s,p) in [[fm(phi')]](eta) for all p in P, when fp(zeta) <= eta"

    def attach_env(self, inst, rng):
        super().attach_env(inst, rng)
        inst.fam_env = _subset_rows(rng, inst.prod_env, 1 << len(inst.fts.fm.products))

    def check(self, inst, stats=None):
        f, phi = inst.fts, inst.formula
        fam = FamilyEvaluator(f, stats).eval(phi, {FREE: inst.fam_env})
        prod = ProductEvaluator(f, stats).eval(to_product_formula(phi), {FREE: inst.prod_env})
        bad, witnesses = [], []
        fm = f.fm
        for i, s in enumerate(f.states):
            for P in range(1 << len(fm.products)):
                holds = bool(fam[i] >> P & 1)
                every = P & ~prod[i] == 0
                subject = f"state {s}, family {{{','.join(format_product(p, fm) for p in fm.ordered(P))}}}"
                if holds and not every:
                    bad.append(_mismatch(inst, subject, holds, every))
                elif not holds and every and P and i == f.index[f.initial]:
                    witnesses.append({"subject": subject, "family_verdict": False, "per_product_verdicts": True})
        return bad, witnesses


class Eq2(Theorem2):
    name = "eq2"
    with_env = False
    description = "P |=' phi'  implies  p |= fm(phi') for all p in P  (closed, negation-free)"

    def check(self, inst, stats=None):
        from ..semantics import sat_family, sat_product

        f, phi = inst.fts, inst.formula
        fm = f.fm
        per_product = {p: sat_product(f, p, to_product_formula(phi), stats) for p in fm.products}
        fam = FamilyEvaluator(f, stats).eval(phi, {})[f.index[f.initial]]
        bad, witnesses = [], []
        for P in range(1 << len(fm.products)):
            members = fm.ordered(P)
            holds = bool(fam >> P & 1)
            every = all(per_product[p] for p in members)
            subject = f"family {{{','.join(format_product(p, fm) for p in members)}}}"
            if P in (0, fm.full_mask):  # cross-check the public judgment on the edge families
                assert holds == sat_family(f, members, phi, stats)
            if holds and not every:
                bad.append(_mismatch(inst, subject, holds, every))
            elif not holds and every and P:
                witnesses.append({"subject": subject, "family_verdict": False, "per_product_verdicts": True})
        return bad, witnesses


class Theorem3(Property):
    name = "theorem3"
    dialect = MULPF
    negation_free = True
    box_only = True
    with_env = True
    description = "for negation-free box-only phi': (s,P) in [[phi']]'(zeta)  iff  (s,p) in [[phi']](eta) for all p in P"

    def attach_env(self, inst, rng):
        super().attach_env(inst, rng)
        inst.fam_env = _derived_family_rows(inst.prod_env, 1 << len(inst.fts.fm.products))

    def check(self, inst, stats=None):
        f, phi = inst.fts, inst.formula
        fam = FamilyEvaluator(f, stats).eval(phi, {FREE: inst.fam_env})
        prod = ProductEvaluator(f, stats).eval(to_product_formula(phi), {FREE: inst.prod_env})
        fm = f.fm
        bad = []
        for i, s in enumerate(f.states):
            for P in range(1 << len(fm.products)):
                if self.nonempty_families and P == 0:
                    continue
                holds = bool(fam[i] >> P & 1)
                every = P & ~prod[i] == 0
                if holds != every:
                    subject = f"state {s}, family {{{','.join(format_product(p, fm) for p in fm.ordered(P))}}}"
                    bad.append(_mismatch(inst, subject, holds, every))
        return bad, []


class Theorem3Restricted(Theorem3):
    """The box-only biconditional, additionally restricted to disjunction-free
    formulas and nonempty families, where it does hold."""

    name = "theorem3_restricted"
    disjunction_free = True
    nonempty_families = True
    description = "theorem3 restricted to disjunction-free formulas and nonempty families"


class Eq3(Property):
    name = "eq3"
    dialect = MULPF
    negation_free = True
    box_only = True
    description = "P |=' phi'  iff  p |= phi' for all p in P  (closed, negation-free, box-only)"

    def check(self, inst, stats=None):
        from ..semantics import sat_product

        f, phi = inst.fts, inst.formula
        fm = f.fm
        per_product = {p: sat_product(f, p, to_product_formula(phi), stats) for p in fm.products}
        fam = FamilyEvaluator(f, stats).eval(phi, {})[f.index[f.initial]]
        bad = []
        for P in range(1 << len(fm.products)):
            members = fm.ordered(P)
            holds = bool(fam >> P & 1)
            every = all(per_product[p] for p in members)
            if holds != every:
                subject = f"family {{{','.join(format_product(p, fm) for p in members)}}}"
                bad.append(_mismatch(inst, subject, holds, every))
        return bad, []


class FODifferential(Property):
    name = "fo_differential"
    dialect = MULPF
    negation_free = True
    description = "(s*,P) in [[phi']]'  iff  s* in [[T(P,phi')]] on L(F), for every family P"

    def check(self, inst, stats=None):
        f, phi = inst.fts, inst.formula
        fm = f.fm
        fam = FamilyEvaluator(f, stats).eval(phi, {})[f.index[f.initial]]
        fo = FOEvaluator(build_param_lts(f), stats)
        init = f.index[f.initial]
        bad = []
        for P in range(1 << len(fm.products)):
            members = fm.ordered(P)
            lhs = bool(fam >> P & 1)
            rhs = bool(fo.eval(to_fo(members, phi), {}, {}) >> init & 1)
            if lhs != rhs:
                subject = f"family {{{','.join(format_product(p, fm) for p in members)}}}"
                bad.append(_mismatch(inst, subject, lhs, rhs))
        return bad, []


PROPERTIES: dict[str, Property] = {
    p.name: p
    for p in (
        Theorem1(),
        Duality(),
        Singleton(),
        Theorem2(),
        Theorem3(),
        FODifferential(),
        Eq1(),
        Eq2(),
        Eq3(),
        Theorem3Restricted(),
    )
}
