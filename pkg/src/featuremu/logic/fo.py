"""First-order modal mu-calculus fragment with a product-set data sort (PSet).

Data terms denote product sets.  Boolean data expressions test emptiness,
inclusion and equality of terms.  Modalities range over actions ``a(v)`` whose
parameter is a PSet variable; fixpoint variables take one PSet argument.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..features import FeatureExpr, FTrue, format_fexpr


# -- PSet terms --------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class PConst(Term):
    """A literal product set.  ``label`` is only used for printing."""

    value: frozenset
    label: str | None = None


@dataclass(frozen=True)
class PVar(Term):
    name: str


@dataclass(frozen=True)
class PSat(Term):
    """The products satisfying a feature expression."""

    fexpr: FeatureExpr


@dataclass(frozen=True)
class PInter(Term):
    left: Term
    right: Term


def intersect(c: Term, chi: FeatureExpr) -> Term:
    """``c ∩ sat(chi)``, dropping the trivially idempotent ``∩ sat(true)``."""
    return c if isinstance(chi, FTrue) else PInter(c, PSat(chi))


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class FOFormula:
    def __str__(self) -> str:
        return format_fo(self)


@dataclass(frozen=True)
class BoolConst(FOFormula):
    value: bool


@dataclass(frozen=True)
class IsEmpty(FOFormula):
    term: Term


@dataclass(frozen=True)
class Subset(FOFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Equal(FOFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class FNeg(FOFormula):
    arg: FOFormula


@dataclass(frozen=True)
class FDisj(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FConj(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Exists(FOFormula):
    var: str
    body: FOFormula


@dataclass(frozen=True)
class Forall(FOFormula):
    var: str
    body: FOFormula


@dataclass(frozen=True)
class MayAct(FOFormula):
    """``<a(v)> body``"""

    action: str
    var: str
    body: FOFormula


@dataclass(frozen=True)
class MustAct(FOFormula):
    """``[a(v)] body``"""

    action: str
    var: str
    body: FOFormula


@dataclass(frozen=True)
class VarApp(FOFormula):
    name: str
    arg: Term


@dataclass(frozen=True)
class FMu(FOFormula):
    name: str
    param: str
    init: Term
    body: FOFormula


@dataclass(frozen=True)
class FNu(FOFormula):
    name: str
    param: str
    init: Term
    body: FOFormula


def fo_children(phi: FOFormula) -> tuple[FOFormula, ...]:
    if isinstance(phi, (FDisj, FConj)):
        return (phi.left, phi.right)
    if isinstance(phi, FNeg):
        return (phi.arg,)
    if isinstance(phi, (Exists, Forall, MayAct, MustAct, FMu, FNu)):
        return (phi.body,)
    return ()


def term_vars(t: Term) -> set[str]:
    if isinstance(t, PVar):
        return {t.name}
    if isinstance(t, PInter):
        return term_vars(t.left) | term_vars(t.right)
    return set()


class SortError(ValueError):
    pass


def check_well_formed(phi: FOFormula) -> None:
    """Every data variable and every applied fixpoint variable must be bound."""

    def go(q: FOFormula, data: frozenset, fix: frozenset):
        terms = ()
        if isinstance(q, IsEmpty):
            terms = (q.term,)
        elif isinstance(q, (Subset, Equal)):
            terms = (q.left, q.right)
        elif isinstance(q, VarApp):
            terms = (q.arg,)
            if q.name not in fix:
                raise SortError(f"fixpoint variable {q.name} is not bound")
        elif isinstance(q, (FMu, FNu)):
            terms = (q.init,)
        for t in terms:
            unbound = term_vars(t) - data
            if unbound:
                raise SortError(f"unbound data variables {sorted(unbound)}")
        if isinstance(q, (MayAct, MustAct)) and q.var not in data:
            raise SortError(f"unbound action parameter {q.var}")
        if isinstance(q, (Exists, Forall)):
            data = data | {q.var}
        elif isinstance(q, (FMu, FNu)):
            data, fix = data | {q.param}, fix | {q.name}
        for c in fo_children(q):
            go(c, data, fix)

    go(phi, frozenset(), frozenset())


# -- printing ----------------------------------------------------------------

_UNICODE = {
    "inter": " ∩ ",
    "empty": "∅",
    "eq": " = ",
    "sub": " ⊆ ",
    "or": " ∨ ",
    "and": " ∧ ",
    "not": "¬",
    "true": "true",
    "false": "false",
    "mu": "μ",
    "nu": "ν",
    "ex": "∃",
    "all": "∀",
    "sort": ":PSet",
}
_ASCII = {
    "inter": " * ",
    "empty": "{}",
    "eq": " == ",
    "sub": " <= ",
    "or": " || ",
    "and": " && ",
    "not": "!",
    "true": "true",
    "false": "false",
    "mu": "mu ",
    "nu": "nu ",
    "ex": "exists ",
    "all": "forall ",
    "sort": ": PSet",
}


def format_term(t: Term, unicode: bool = True) -> str:
    sym = _UNICODE if unicode else _ASCII
    if isinstance(t, PConst):
        if t.label is not None:
            return t.label
        return "{" + ",".join("{" + ",".join(sorted(p)) + "}" for p in sorted(t.value, key=sorted)) + "}"
    if isinstance(t, PVar):
        return t.name
    if isinstance(t, PSat):
        if isinstance(t.fexpr, FTrue):
            return "𝒫" if unicode else "ALL"
        s = format_fexpr(t.fexpr)
        return s if s.replace("_", "").isalnum() else f"sat({s})"
    # left-nested intersections print flat
    right = format_term(t.right, unicode)
    if isinstance(t.right, PInter):
        right = f"({right})"
    return format_term(t.left, unicode) + sym["inter"] + right


def format_fo(phi: FOFormula, unicode: bool = True) -> str:
    """Print with mathematical symbols (``unicode=True``) or in an ASCII
    rendering close to mCRL2's first-order modal formulas."""
    sym = _UNICODE if unicode else _ASCII
    T = lambda t: format_term(t, unicode)  # noqa: E731

    def go(q: FOFormula, ctx: int, tail: bool) -> str:
        # ctx: 0 top, 1 operand of or, 2 operand of and, 3 prefix operand.
        # tail: nothing follows q inside its enclosing parentheses, so a
        # binder (whose body extends to the right) needs no parentheses.
        if isinstance(q, BoolConst):
            return sym["true"] if q.value else sym["false"]
        if isinstance(q, IsEmpty):
            s = T(q.term) + sym["eq"] + sym["empty"]
            return f"({s})" if ctx == 3 else s
        if isinstance(q, (Subset, Equal)):
            op = sym["sub"] if isinstance(q, Subset) else sym["eq"]
            s = T(q.left) + op + T(q.right)
            return f"({s})" if ctx == 3 else s
        if isinstance(q, VarApp):
            return f"{q.name}({T(q.arg)})"
        if isinstance(q, FNeg):
            return sym["not"] + go(q.arg, 3, tail)
        if isinstance(q, (MayAct, MustAct)):
            o, c = ("<", ">") if isinstance(q, MayAct) else ("[", "]")
            return f"{o}{q.action}({q.var}){c}" + go(q.body, 3, tail)
        if isinstance(q, (Exists, Forall, FMu, FNu)):
            if isinstance(q, (Exists, Forall)):
                head = f"{sym['ex'] if isinstance(q, Exists) else sym['all']}{q.var}{sym['sort']}"
            else:
                mu = sym["mu"] if isinstance(q, FMu) else sym["nu"]
                head = f"{mu}{q.name}({q.param}{sym['sort']} = {T(q.init)})"
            nested = isinstance(q.body, (Exists, Forall, FMu, FNu, MayAct, MustAct, FNeg))
            s = f"{head}. {go(q.body, 0 if nested else 3, True)}"
            return s if tail else f"({s})"
        prec, op = (1, sym["or"]) if isinstance(q, FDisj) else (2, sym["and"])
        wrap = prec < ctx
        s = go(q.left, prec, False) + op + go(q.right, prec + 1, True if wrap else tail)
        return f"({s})" if wrap else s

    return go(phi, 0, True)
