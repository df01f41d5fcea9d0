"""Product-based semantics: formulas denote sets of (state, product) pairs.

A lattice element is a tuple of per-state masks over the product universe.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from ..features import Product
from ..logic.syntax import MULF, And, Bot, Box, Diamond, Formula, Mu, Not, Nu, Or, Top, Var
from ..models import Fts
from .fixpoint import FixpointStats, kleene, rows_leq
from .lts import _check

Rows = tuple[int, ...]


class ProductEvaluator:
    def __init__(self, f: Fts, stats: FixpointStats | None = None):
        self.f = f
        self.stats = stats
        self.n = len(f.states)
        self.full = f.fm.full_mask
        self.top: Rows = (self.full,) * self.n
        self.bot: Rows = (0,) * self.n
        idx = f.index
        # out[a][s] = [(guard mask, target index)]
        self.out: dict[str, list[list[tuple[int, int]]]] = defaultdict(lambda: [[] for _ in range(self.n)])
        for (s, a, t), g in f.guard_masks.items():
            self.out[a][idx[s]].append((g, idx[t]))
        self._guards: dict = {}

    def guard(self, chi) -> int:
        m = self._guards.get(chi)
        if m is None:
            m = self._guards[chi] = self.f.fm.fexpr_mask(chi)
        return m

    def to_rows(self, pairs: Iterable[tuple[str, Product]]) -> Rows:
        rows = [0] * self.n
        for s, p in pairs:
            rows[self.f.index[s]] |= 1 << self.f.fm.product_index(p)
        return tuple(rows)

    def to_pairs(self, rows: Rows) -> frozenset[tuple[str, Product]]:
        prods = self.f.fm.products
        return frozenset(
            (s, prods[k]) for s, m in zip(self.f.states, rows) for k in range(len(prods)) if m >> k & 1
        )

    def eval(self, phi: Formula, env: dict[str, Rows]) -> Rows:
        if isinstance(phi, Bot):
            return self.bot
        if isinstance(phi, Top):
            return self.top
        if isinstance(phi, Not):
            return tuple(self.full & ~x for x in self.eval(phi.arg, env))
        if isinstance(phi, Or):
            return tuple(x | y for x, y in zip(self.eval(phi.left, env), self.eval(phi.right, env)))
        if isinstance(phi, And):
            return tuple(x & y for x, y in zip(self.eval(phi.left, env), self.eval(phi.right, env)))
        if isinstance(phi, Diamond):
            chi = self.guard(phi.guard)
            body = self.eval(phi.body, env)
            out = self.out.get(phi.action)
            if out is None:
                return self.bot
            rows = []
            for trans in out:
                m = 0
                for g, t in trans:
                    m |= g & body[t]
                rows.append(chi & m)
            return tuple(rows)
        if isinstance(phi, Box):
            chi = self.guard(phi.guard)
            body = self.eval(phi.body, env)
            out = self.out.get(phi.action)
            if out is None:
                return self.top
            rows = []
            for trans in out:
                bad = 0
                for g, t in trans:
                    bad |= g & ~body[t]
                rows.append(self.full & ~(chi & bad))
            return tuple(rows)
        if isinstance(phi, Var):
            return env.get(phi.name, self.bot)
        if isinstance(phi, (Mu, Nu)):
            least = isinstance(phi, Mu)
            return kleene(
                lambda v: self.eval(phi.body, {**env, phi.var: v}),
                self.bot if least else self.top,
                rows_leq,
                least=least,
                capacity=self.n * len(self.f.fm.products),
                stats=self.stats,
            )
        raise TypeError(f"cannot evaluate {phi!r} with product semantics")


def eval_fts_product(
    phi: Formula,
    f: Fts,
    env: Mapping[str, Iterable[tuple[str, Product]]] | None = None,
    stats: FixpointStats | None = None,
) -> frozenset[tuple[str, Product]]:
    """All (state, product) pairs of ``f`` satisfying the feature formula ``phi``."""
    _check(phi, MULF, env)
    ev = ProductEvaluator(f, stats)
    renv = {k: ev.to_rows(v) for k, v in (env or {}).items()}
    return ev.to_pairs(ev.eval(phi, renv))
