"""Seeded random generation of featured transition systems and formulas."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass

from ..features import Atom, FAnd, FeatureExpr, FeatureModel, FFalse, FNot, FOr, FTrue
from ..logic.syntax import MUL, MULF, MULPF, And, Bot, Box, Diamond, Formula, Mu, Not, Nu, Or, Ruby, Top, Var
from ..models import Fts


@dataclass(frozen=True)
class GenBounds:
    max_states: int = 6
    max_features: int = 3
    max_actions: int = 3
    max_formula_depth: int = 4
    fixpoint_probability: float = 0.3
    negation_free: bool = False
    box_only: bool = False
    seed: int = 0

    def __post_init__(self):
        for name in ("max_states", "max_features", "max_actions", "max_formula_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if not 0.0 <= self.fixpoint_probability <= 1.0:
            raise ValueError("fixpoint_probability must lie in [0, 1]")

    @property
    def features(self) -> tuple[str, ...]:
        return tuple(f"f{k}" for k in range(self.max_features))

    @property
    def actions(self) -> tuple[str, ...]:
        return tuple("abcdefghijklmnopqrstuvwxyz"[k] if k < 26 else f"a{k}" for k in range(self.max_actions))


def derive_seed(seed: int, *path) -> int:
    """Stable 63-bit seed for instance ``path`` of campaign ``seed``."""
    digest = hashlib.sha256("/".join(map(str, (seed, *path))).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def gen_fexpr(rng: random.Random, features, depth: int, p_true: float = 0.3) -> FeatureExpr:
    if rng.random() < p_true:
        return FTrue()
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.05:
            return FFalse()
        a = Atom(rng.choice(features))
        return FNot(a) if rng.random() < 0.3 else a
    kind = rng.choice(("not", "and", "or"))
    if kind == "not":
        return FNot(gen_fexpr(rng, features, depth - 1, 0.0))
    left = gen_fexpr(rng, features, depth - 1, 0.1)
    right = gen_fexpr(rng, features, depth - 1, 0.1)
    return FAnd(left, right) if kind == "and" else FOr(left, right)


def gen_feature_model(rng: random.Random, b: GenBounds) -> FeatureModel:
    feats = b.features
    if rng.random() < 0.6:
        return FeatureModel(feats)
    every = [frozenset(c) for r in range(len(feats) + 1) for c in itertools.combinations(feats, r)]
    k = rng.randint(1, len(every))
    return FeatureModel(feats, tuple(rng.sample(every, k)))


def gen_fts(b: GenBounds) -> Fts:
    """A random FTS; states need not be reachable and guards have depth at most 3."""
    rng = random.Random(b.seed)
    fm = gen_feature_model(rng, b)
    n = rng.randint(1, b.max_states)
    states = tuple(f"s{k}" for k in range(n))
    acts = b.actions
    keys = [(s, a, t) for s in states for a in acts for t in states]
    m = rng.randint(0, min(len(keys), 2 * n + 2))
    theta = {key: gen_fexpr(rng, fm.features, 3) for key in rng.sample(keys, m)}
    return Fts(states, frozenset(acts), states[0], fm, theta)


def gen_formula(
    b: GenBounds,
    dialect: str = MULF,
    *,
    free: tuple[str, ...] = (),
    rng: random.Random | None = None,
) -> Formula:
    """A random formula, monotone by construction.

    A variable is only used where the number of negations between it and its
    binder is even.  Names in ``free`` may occur free (at even polarity).
    """
    rng = rng or random.Random(b.seed)
    features, actions = b.features, b.actions
    counter = itertools.count()

    def modal(depth: int, pol: int, scope) -> Formula:
        act = rng.choice(actions)
        guard = None if dialect == MUL else gen_fexpr(rng, features, 2, 0.4)
        body = go(depth - 1, pol, scope)
        if b.box_only or rng.random() < 0.5:
            return Box(act, guard, body)
        if dialect == MULPF:
            return Ruby(act, guard, body)
        return Diamond(act, guard, body)

    def leaf(pol: int, scope) -> Formula:
        usable = [x for x, p in scope if p == pol]
        if usable and rng.random() < 0.7:
            return Var(rng.choice(usable))
        return Top() if rng.random() < 0.5 else Bot()

    def go(depth: int, pol: int, scope) -> Formula:
        if depth == 0 or rng.random() < 0.15:
            return leaf(pol, scope)
        r = rng.random()
        if r < b.fixpoint_probability:
            name = f"X{next(counter)}"
            cls = Mu if rng.random() < 0.5 else Nu
            return cls(name, go(depth - 1, pol, scope + [(name, pol)]))
        kinds = ["or", "and", "modal", "modal"]
        if not b.negation_free:
            kinds.append("not")
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(go(depth - 1, 1 - pol, scope))
        if kind == "modal":
            return modal(depth, pol, scope)
        left, right = go(depth - 1, pol, scope), go(depth - 1, pol, scope)
        return Or(left, right) if kind == "or" else And(left, right)

    return go(b.max_formula_depth, 0, [(x, 0) for x in free])


def gen_family(rng: random.Random, fm: FeatureModel) -> int:
    """Random family mask; the empty family and the whole universe are boosted."""
    r = rng.random()
    if r < 0.15:
        return 0
    if r < 0.3:
        return fm.full_mask
    return rng.getrandbits(len(fm.products)) & fm.full_mask


__all__ = ["GenBounds", "derive_seed", "gen_family", "gen_fexpr", "gen_fts", "gen_formula", "MUL", "MULF", "MULPF"]
