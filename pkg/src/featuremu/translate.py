"""Translations between the formula languages and between the semantic domains."""

from __future__ import annotations

from typing import Iterable

from .features import ProductSet, eval_fexpr
from .logic.fo import (
    BoolConst,
    Exists,
    FConj,
    FDisj,
    FMu,
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
    Subset,
    Term,
    VarApp,
    intersect,
)
from .logic.syntax import (
    And,
    Bot,
    Box,
    Diamond,
    Formula,
    Mu,
    Not,
    Nu,
    Or,
    Ruby,
    Top,
    Var,
    children,
    rebuild,
)


def sm(phi: Formula, p: Iterable[str], fm=None) -> Formula:
    """Specialise a feature formula to product ``p``.

    A modality whose guard excludes ``p`` collapses (diamond to false, box to
    true); otherwise the guard is dropped.
    """
    p = frozenset(p)
    if fm is not None:
        fm.product_index(p)

    def go(q: Formula) -> Formula:
        if isinstance(q, (Diamond, Box)):
            if q.guard is not None and not eval_fexpr(q.guard, p):
                return Bot() if isinstance(q, Diamond) else Top()
            return type(q)(q.action, None, go(q.body))
        if isinstance(q, Ruby):
            raise ValueError("sm expects a product-dialect formula; apply fm first")
        kids = children(q)
        return rebuild(q, tuple(go(c) for c in kids)) if kids else q

    return go(phi)


def fm(phi: Formula) -> Formula:
    """Family formula to product formula: every ``<<a|x>>`` becomes ``<a|x>``."""
    if isinstance(phi, Ruby):
        return Diamond(phi.action, phi.guard, fm(phi.body))
    kids = children(phi)
    return rebuild(phi, tuple(fm(c) for c in kids)) if kids else phi


def ruby_lift(phi: Formula) -> Formula:
    """Product formula to family formula: every ``<a|x>`` becomes ``<<a|x>>``."""
    if isinstance(phi, Diamond):
        if phi.guard is None:
            raise ValueError("ruby_lift needs guarded diamonds")
        return Ruby(phi.action, phi.guard, ruby_lift(phi.body))
    kids = children(phi)
    return rebuild(phi, tuple(ruby_lift(c) for c in kids)) if kids else phi


def fp(pairs: Iterable[tuple[str, ProductSet]]) -> frozenset:
    """Flatten state-family pairs into state-product pairs."""
    return frozenset((s, p) for s, P in pairs for p in P)


# ---------------------------------------------------------------------------
# Embedding of negation-free family formulas into the first-order fragment


def param_name(var: str) -> str:
    return f"P_{var.lower()}"


def to_fo(P: Iterable[Iterable[str]] | Term, phi: Formula, label: str | None = "P") -> FOFormula:
    """``T(P, phi)`` for a closed negation-free family formula ``phi``.

    The translation carries a context term ``c`` (initially the constant
    ``P``) describing the family currently under evaluation:

    * ``sigma X. psi``   becomes ``sigma X(P_x:PSet = c). T_{P_x}(psi)``
    * ``X``              becomes ``X(c)``
    * ``[a|chi] psi``    becomes ``c ∩ chi = ∅ ∨ ∀e. [a(e)](c ∩ chi ∩ e = ∅ ∨ T_{c∩chi∩e}(psi))``
    * ``<<a|chi>> psi``  becomes ``c ⊆ chi ∧ ∃e. <a(e)>(c ⊆ e ∧ T_{c∩chi∩e}(psi))``
    """
    if isinstance(P, Term):
        top = P
    else:
        top = PConst(frozenset(frozenset(p) for p in P), label)

    def go(q: Formula, c: Term, nesting: int) -> FOFormula:
        if isinstance(q, Bot):
            return BoolConst(False)
        if isinstance(q, Top):
            return BoolConst(True)
        if isinstance(q, Or):
            return FDisj(go(q.left, c, nesting), go(q.right, c, nesting))
        if isinstance(q, And):
            return FConj(go(q.left, c, nesting), go(q.right, c, nesting))
        if isinstance(q, Var):
            return VarApp(q.name, c)
        if isinstance(q, (Mu, Nu)):
            param = param_name(q.var)
            body = go(q.body, PVar(param), nesting)
            return (FMu if isinstance(q, Mu) else FNu)(q.var, param, c, body)
        if isinstance(q, (Box, Ruby)):
            if q.guard is None:
                raise ValueError("to_fo needs guarded modalities")
            e = "e" if nesting == 0 else f"e{nesting}"
            restricted = intersect(c, q.guard)
            inner = PInter(restricted, PVar(e))
            body = go(q.body, inner, nesting + 1)
            if isinstance(q, Box):
                return FDisj(
                    IsEmpty(restricted),
                    Forall(e, MustAct(q.action, e, FDisj(IsEmpty(inner), body))),
                )
            return FConj(
                Subset(c, PSat(q.guard)),
                Exists(e, MayAct(q.action, e, FConj(Subset(c, PVar(e)), body))),
            )
        if isinstance(q, Not):
            raise ValueError("to_fo needs a negation-free formula; normalise with nnf_family first")
        if isinstance(q, Diamond):
            raise ValueError("to_fo needs a family-dialect formula; lift diamonds with ruby_lift")
        raise TypeError(f"not a formula: {q!r}")

    return go(phi, top, 0)


__all__ = ["fm", "fp", "param_name", "ruby_lift", "sm", "to_fo"]
