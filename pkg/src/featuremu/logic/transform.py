"""Monotonicity checking and negation normal forms."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    And,
    Bot,
    Box,
    Diamond,
    Fixpoint,
    Formula,
    Mu,
    Not,
    Nu,
    Or,
    Ruby,
    Top,
    Var,
    children,
    free_vars,
    substitute,
)


@dataclass(frozen=True)
class MonotonicityViolation:
    var: str
    path: tuple[int, ...]  # child indices from the root to the offending occurrence

    def __str__(self):
        return f"{self.var} occurs under an odd number of negations (path {list(self.path)})"


class NotClosedError(ValueError):
    pass


class NotMonotoneError(ValueError):
    pass


class NotNormalizable(ValueError):
    """A negation would have to cross a family modality, which has no dual."""

    def __init__(self, blocking: Formula):
        super().__init__(f"no dual law for negated {type(blocking).__name__}: {blocking}")
        self.blocking = blocking


def check_monotone(phi: Formula) -> MonotonicityViolation | None:
    """``None`` when every bound occurrence sits under an even number of
    negations inside its binder, otherwise the first offending occurrence."""

    def go(q: Formula, path: tuple[int, ...], parity: dict[str, int]):
        if isinstance(q, Var):
            if parity.get(q.name, 0) % 2:
                return MonotonicityViolation(q.name, path)
            return None
        if isinstance(q, Not):
            parity = {k: v + 1 for k, v in parity.items()}
        elif isinstance(q, Fixpoint):
            parity = {**parity, q.var: 0}
        for k, c in enumerate(children(q)):
            found = go(c, path + (k,), parity)
            if found:
                return found
        return None

    return go(phi, (), {})


def _require(phi: Formula) -> None:
    fv = free_vars(phi)
    if fv:
        raise NotClosedError(f"formula has free variables {sorted(fv)}")
    bad = check_monotone(phi)
    if bad:
        raise NotMonotoneError(str(bad))


def _push(phi: Formula, neg: bool, through_modalities: bool) -> Formula:
    if isinstance(phi, Not):
        return _push(phi.arg, not neg, through_modalities)
    if isinstance(phi, Bot):
        return Top() if neg else phi
    if isinstance(phi, Top):
        return Bot() if neg else phi
    if isinstance(phi, Var):
        if neg:
            # cannot happen for closed monotone input
            raise NotMonotoneError(f"negated occurrence of {phi.name} survived normalisation")
        return phi
    if isinstance(phi, (Or, And)):
        flip = {Or: And, And: Or}[type(phi)] if neg else type(phi)
        return flip(
            _push(phi.left, neg, through_modalities), _push(phi.right, neg, through_modalities)
        )
    if isinstance(phi, Fixpoint):
        if not neg:
            return type(phi)(phi.var, _push(phi.body, False, through_modalities))
        dual = Nu if isinstance(phi, Mu) else Mu
        body = substitute(phi.body, phi.var, Not(Var(phi.var)))
        return dual(phi.var, _push(body, True, through_modalities))
    if isinstance(phi, (Diamond, Box, Ruby)):
        if not neg:
            return type(phi)(phi.action, phi.guard, _push(phi.body, False, through_modalities))
        if not through_modalities or isinstance(phi, Ruby):
            raise NotNormalizable(phi)
        dual = Box if isinstance(phi, Diamond) else Diamond
        return dual(phi.action, phi.guard, _push(phi.body, True, through_modalities))
    raise TypeError(f"not a formula: {phi!r}")


def nnf(phi: Formula) -> Formula:
    """Negation-free equivalent of a closed monotone product-dialect formula.

    Uses De Morgan, ``!<a|x>p == [a|x]!p``, ``![a|x]p == <a|x>!p`` and
    ``!mu X.p == nu X.!p[!X/X]`` (and dually).
    """
    _require(phi)
    if any(isinstance(q, Ruby) for q in _walk(phi)):
        raise ValueError("nnf is for product-dialect formulas; use nnf_family")
    return _push(phi, False, True)


def nnf_family(phi: Formula) -> Formula:
    """Push negations through Boolean connectives and fixpoints only.

    Raises ``NotNormalizable`` when a negation reaches a ``Ruby`` or ``Box``.
    """
    _require(phi)
    return _push(phi, False, False)


def _walk(phi: Formula):
    yield phi
    for c in children(phi):
        yield from _walk(c)
