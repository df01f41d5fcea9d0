"""Plain modal mu-calculus over an LTS.  State sets are bit masks over ``lts.states``."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from ..logic.syntax import MUL, And, Bot, Box, Diamond, Formula, Mu, Not, Nu, Or, Top, Var, dialect_errors, free_vars
from ..logic.transform import NotMonotoneError, check_monotone
from ..models import Lts
from .fixpoint import FixpointStats, kleene, mask_leq


class UnboundVariableError(KeyError):
    pass


def _check(phi: Formula, dialect: str, env: Mapping | None) -> None:
    problems = dialect_errors(phi, dialect)
    if problems:
        raise ValueError(f"not a {dialect} formula: {problems[0]}")
    bad = check_monotone(phi)
    if bad:
        raise NotMonotoneError(str(bad))
    if env is not None:
        missing = free_vars(phi) - set(env)
        if missing:
            raise UnboundVariableError(f"environment does not bind {sorted(missing)}")


class LtsEvaluator:
    def __init__(self, lts: Lts, stats: FixpointStats | None = None):
        self.lts = lts
        self.stats = stats
        self.n = len(lts.states)
        self.full = (1 << self.n) - 1
        idx = lts.index
        # succ[a][s] = mask of a-successors of s
        self.succ: dict[str, list[int]] = defaultdict(lambda: [0] * self.n)
        for s, a, t in lts.transitions:
            self.succ[a][idx[s]] |= 1 << idx[t]

    def to_mask(self, states: Iterable[str]) -> int:
        m = 0
        for s in states:
            m |= 1 << self.lts.index[s]
        return m

    def to_set(self, mask: int) -> frozenset[str]:
        return frozenset(s for i, s in enumerate(self.lts.states) if mask >> i & 1)

    def eval(self, phi: Formula, env: dict[str, int]) -> int:
        if isinstance(phi, Bot):
            return 0
        if isinstance(phi, Top):
            return self.full
        if isinstance(phi, Not):
            return self.full & ~self.eval(phi.arg, env)
        if isinstance(phi, Or):
            return self.eval(phi.left, env) | self.eval(phi.right, env)
        if isinstance(phi, And):
            return self.eval(phi.left, env) & self.eval(phi.right, env)
        if isinstance(phi, Diamond):
            body = self.eval(phi.body, env)
            succ = self.succ.get(phi.action)
            if succ is None:
                return 0
            return sum(1 << i for i in range(self.n) if succ[i] & body)
        if isinstance(phi, Box):
            body = self.eval(phi.body, env)
            succ = self.succ.get(phi.action)
            if succ is None:
                return self.full
            return sum(1 << i for i in range(self.n) if not succ[i] & ~body)
        if isinstance(phi, Var):
            return env.get(phi.name, 0)
        if isinstance(phi, (Mu, Nu)):
            least = isinstance(phi, Mu)
            return kleene(
                lambda v: self.eval(phi.body, {**env, phi.var: v}),
                0 if least else self.full,
                mask_leq,
                least=least,
                capacity=self.n,
                stats=self.stats,
            )
        raise TypeError(f"cannot evaluate {phi!r} over an LTS")


def eval_lts(
    phi: Formula,
    lts: Lts,
    env: Mapping[str, Iterable[str]] | None = None,
    stats: FixpointStats | None = None,
) -> frozenset[str]:
    """States of ``lts`` satisfying ``phi``; ``env=None`` is the all-empty environment."""
    _check(phi, MUL, env)
    ev = LtsEvaluator(lts, stats)
    menv = {k: ev.to_mask(v) for k, v in (env or {}).items()}
    return ev.to_set(ev.eval(phi, menv))
