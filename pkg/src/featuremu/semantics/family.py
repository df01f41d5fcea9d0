"""Family-based semantics: formulas denote sets of (state, family) pairs.

A family is identified with its product mask ``m`` (``0 <= m < 2**|P|``).  A
lattice element is a tuple of per-state integers whose bit ``m`` is set iff
``(state, family m)`` belongs to the set.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping

from ..features import ProductSet
from ..logic.syntax import MULPF, And, Bot, Box, Formula, Mu, Not, Nu, Or, Ruby, Top, Var
from ..models import Fts
from .fixpoint import FixpointStats, kleene, rows_leq
from .lts import _check
from .product import Rows


@lru_cache(maxsize=None)
def submask_indicator(k: int) -> int:
    """Integer with bit ``m`` set for every ``m`` that is a submask of ``k``."""
    out, m = 0, k
    while True:
        out |= 1 << m
        if m == 0:
            return out
        m = (m - 1) & k


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class FamilyEvaluator:
    def __init__(self, f: Fts, stats: FixpointStats | None = None):
        self.f = f
        self.stats = stats
        self.n = len(f.states)
        self.universe = f.fm.full_mask
        self.nfam = 1 << len(f.fm.products)
        self.full = (1 << self.nfam) - 1
        self.top: Rows = (self.full,) * self.n
        self.bot: Rows = (0,) * self.n
        idx = f.index
        self.out: dict[str, list[list[tuple[int, int]]]] = defaultdict(lambda: [[] for _ in range(self.n)])
        for (s, a, t), g in f.guard_masks.items():
            self.out[a][idx[s]].append((g, idx[t]))
        self._guards: dict = {}

    def guard(self, chi) -> int:
        m = self._guards.get(chi)
        if m is None:
            m = self._guards[chi] = self.f.fm.fexpr_mask(chi)
        return m

    def to_rows(self, pairs: Iterable[tuple[str, ProductSet]]) -> Rows:
        rows = [0] * self.n
        for s, P in pairs:
            rows[self.f.index[s]] |= 1 << self.f.fm.mask_of(P)
        return tuple(rows)

    def to_pairs(self, rows: Rows) -> frozenset[tuple[str, ProductSet]]:
        fm = self.f.fm
        return frozenset((s, fm.products_of(m)) for s, r in zip(self.f.states, rows) for m in _bits(r))

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
        if isinstance(phi, Ruby):
            # (s,P): P <= chi and some s -a|g-> t with P <= g and (t, P & chi & g) in body.
            # For P <= chi & g the target family is P itself.
            chi = self.guard(phi.guard)
            body = self.eval(phi.body, env)
            out = self.out.get(phi.action)
            if out is None:
                return self.bot
            rows = []
            for trans in out:
                good = 0
                for g, t in trans:
                    good |= body[t] & submask_indicator(chi & g)
                rows.append(good)
            return tuple(rows)
        if isinstance(phi, Box):
            # (s,P) fails iff some s -a|g-> t has q = P & chi & g nonempty with (t,q) not in body.
            # The families P with P & k == q are exactly q | r for r <= ~k.
            chi = self.guard(phi.guard)
            body = self.eval(phi.body, env)
            out = self.out.get(phi.action)
            if out is None:
                return self.top
            rows = []
            for trans in out:
                bad = 0
                for g, t in trans:
                    k = chi & g
                    missing = submask_indicator(k) & ~body[t] & ~1
                    if missing:
                        spread = submask_indicator(self.universe & ~k)
                        for q in _bits(missing):
                            bad |= spread << q
                rows.append(self.full & ~bad)
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
                capacity=self.n * self.nfam,
                stats=self.stats,
            )
        raise TypeError(f"cannot evaluate {phi!r} with family semantics")


def eval_fts_family(
    phi: Formula,
    f: Fts,
    env: Mapping[str, Iterable[tuple[str, ProductSet]]] | None = None,
    stats: FixpointStats | None = None,
) -> frozenset[tuple[str, ProductSet]]:
    """All (state, family) pairs of ``f`` satisfying the family formula ``phi``.

    Families range over every subset of the universe, the empty one included.
    """
    _check(phi, MULPF, env)
    ev = FamilyEvaluator(f, stats)
    renv = {k: ev.to_rows(v) for k, v in (env or {}).items()}
    return ev.to_pairs(ev.eval(phi, renv))
