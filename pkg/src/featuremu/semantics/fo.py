"""First-order fragment over a parametrised LTS.

Data values of sort PSet are product masks.  A parametrised fixpoint variable
denotes a map from PSet values to state sets.  The map is computed only on the
parameter values the body actually demands, starting from the initial
argument.  Values outside that demand-closed set cannot influence it, so the
restriction coincides with the global fixpoint.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping

from ..features import ProductSet
from ..logic.fo import (
    BoolConst,
    Equal,
    Exists,
    FConj,
    FDisj,
    FMu,
    FNeg,
    FNu,
    FOFormula,
    Forall,
    IsEmpty,
    MayAct,
    MustAct,
    PConst,
    PInter,
    PSat,
    PVar,
    SortError,
    Subset,
    Term,
    VarApp,
    check_well_formed,
)
from ..models import ParamLts
from .fixpoint import FixpointChainError, FixpointStats, mask_leq

FixEnv = Mapping[str, Callable[[int], int]]


class FOEvaluator:
    def __init__(self, pl: ParamLts, stats: FixpointStats | None = None):
        self.pl = pl
        self.stats = stats
        self.fm = pl.fm
        self.n = len(pl.states)
        self.full = (1 << self.n) - 1
        self.nvalues = 1 << len(self.fm.products)
        idx = pl.index
        # edges[a][d] = [(source, target)] for transitions a(d)
        self.edges: dict[str, dict[int, list[tuple[int, int]]]] = defaultdict(lambda: defaultdict(list))
        for s, a, d, t in pl.transitions:
            self.edges[a][self.fm.mask_of(d)].append((idx[s], idx[t]))
        self._sat: dict = {}

    def term(self, t: Term, data: Mapping[str, int]) -> int:
        if isinstance(t, PVar):
            try:
                return data[t.name]
            except KeyError:
                raise SortError(f"unbound data variable {t.name}") from None
        if isinstance(t, PConst):
            return self.fm.mask_of(t.value)
        if isinstance(t, PSat):
            m = self._sat.get(t.fexpr)
            if m is None:
                m = self._sat[t.fexpr] = self.fm.fexpr_mask(t.fexpr)
            return m
        if isinstance(t, PInter):
            return self.term(t.left, data) & self.term(t.right, data)
        raise TypeError(f"not a PSet term: {t!r}")

    def _labels(self, body: FOFormula, var: str):
        """Values of ``var`` that can matter when ``body`` is a modality on ``var``."""
        if isinstance(body, (MayAct, MustAct)) and body.var == var:
            return list(self.edges.get(body.action, {}))
        return None

    def eval(self, phi: FOFormula, data: Mapping[str, int], fix: FixEnv) -> int:
        if isinstance(phi, BoolConst):
            return self.full if phi.value else 0
        if isinstance(phi, IsEmpty):
            return self.full if self.term(phi.term, data) == 0 else 0
        if isinstance(phi, Subset):
            return self.full if mask_leq(self.term(phi.left, data), self.term(phi.right, data)) else 0
        if isinstance(phi, Equal):
            return self.full if self.term(phi.left, data) == self.term(phi.right, data) else 0
        if isinstance(phi, FNeg):
            return self.full & ~self.eval(phi.arg, data, fix)
        if isinstance(phi, FDisj):
            return self.eval(phi.left, data, fix) | self.eval(phi.right, data, fix)
        if isinstance(phi, FConj):
            return self.eval(phi.left, data, fix) & self.eval(phi.right, data, fix)
        if isinstance(phi, (Exists, Forall)):
            ex = isinstance(phi, Exists)
            values = self._labels(phi.body, phi.var)
            # a modality over a value labelling no transition is empty (<>) or full ([])
            acc = 0 if ex else self.full
            for d in range(self.nvalues) if values is None else values:
                r = self.eval(phi.body, {**data, phi.var: d}, fix)
                acc = acc | r if ex else acc & r
            return acc
        if isinstance(phi, (MayAct, MustAct)):
            body = self.eval(phi.body, data, fix)
            try:
                d = data[phi.var]
            except KeyError:
                raise SortError(f"unbound action parameter {phi.var}") from None
            pairs = self.edges.get(phi.action, {}).get(d, ())
            if isinstance(phi, MayAct):
                out = 0
                for s, t in pairs:
                    if body >> t & 1:
                        out |= 1 << s
                return out
            bad = 0
            for s, t in pairs:
                if not body >> t & 1:
                    bad |= 1 << s
            return self.full & ~bad
        if isinstance(phi, VarApp):
            arg = self.term(phi.arg, data)
            fn = fix.get(phi.name)
            return 0 if fn is None else fn(arg)
        if isinstance(phi, (FMu, FNu)):
            return self._fixpoint(phi, data, fix)
        raise TypeError(f"cannot evaluate {phi!r}")

    def _fixpoint(self, phi, data, fix) -> int:
        least = isinstance(phi, FMu)
        start = 0 if least else self.full
        v0 = self.term(phi.init, data)
        approx: dict[int, int] = {v0: start}
        capacity = self.nvalues * self.n
        kind = "lfp" if least else "gfp"
        n = 0
        while True:
            demanded: set[int] = set()

            def lookup(v: int, snapshot=approx) -> int:
                if v not in snapshot:
                    demanded.add(v)
                    return start
                return snapshot[v]

            inner_fix = {**fix, phi.name: lookup}
            new = {v: self.eval(phi.body, {**data, phi.param: v}, inner_fix) for v in approx}
            n += 1
            for v, old in approx.items():
                ok = mask_leq(old, new[v]) if least else mask_leq(new[v], old)
                if not ok:
                    if self.stats is not None:
                        self.stats.violations += 1
                    raise FixpointChainError(f"parametrised {kind} chain broke at argument {v}")
            stable = new == approx and not demanded
            for v in demanded:
                new.setdefault(v, start)
            if stable:
                if self.stats is not None:
                    self.stats.record(kind, n)
                return approx[v0]
            if n > capacity:
                if self.stats is not None:
                    self.stats.violations += 1
                raise FixpointChainError(f"parametrised {kind} did not stabilise within {capacity + 1} iterations")
            approx = new


def eval_fo(
    phi: FOFormula,
    pl: ParamLts,
    env: Mapping[str, Mapping[ProductSet, Iterable[str]]] | None = None,
    data_env: Mapping[str, ProductSet] | None = None,
    stats: FixpointStats | None = None,
) -> frozenset[str]:
    """States of ``pl`` satisfying ``phi``.

    ``env`` gives free fixpoint variables as maps from product sets to state
    sets (missing arguments denote the empty set); ``data_env`` binds free
    PSet variables.
    """
    data_env = dict(data_env or {})
    env = dict(env or {})
    _check_free(phi, set(data_env), set(env))
    ev = FOEvaluator(pl, stats)
    idx = pl.index
    data = {k: pl.fm.mask_of(v) for k, v in data_env.items()}
    fix: dict[str, Callable[[int], int]] = {}
    for name, table in env.items():
        masks = {pl.fm.mask_of(P): sum(1 << idx[s] for s in states) for P, states in table.items()}
        fix[name] = lambda v, masks=masks: masks.get(v, 0)
    result = ev.eval(phi, data, fix)
    return frozenset(s for i, s in enumerate(pl.states) if result >> i & 1)


def _check_free(phi: FOFormula, data_vars: set[str], fix_vars: set[str]) -> None:
    # wrap in binders for the supplied free variables and reuse the closed check
    wrapped = phi
    for v in data_vars:
        wrapped = Forall(v, wrapped)
    for x in fix_vars:
        wrapped = FMu(x, f"_{x}", PConst(frozenset()), wrapped)
    check_well_formed(wrapped)
