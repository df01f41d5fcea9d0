"""Formula ASTs shared by the three modal dialects.

One constructor family serves all dialects:

* ``muL``   -- modalities carry no guard (``guard is None``), no ``Ruby``;
* ``muLf``  -- ``Diamond``/``Box`` carry a feature-expression guard;
* ``muLpf`` -- ``Ruby``/``Box`` carry a guard, no ``Diamond``.

``dialect_of`` recovers the narrowest dialect a formula belongs to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..features import FeatureExpr, format_fexpr

MUL, MULF, MULPF = "muL", "muLf", "muLpf"
DIALECTS = (MUL, MULF, MULPF)


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    action: str
    guard: FeatureExpr | None
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    action: str
    guard: FeatureExpr | None
    body: Formula


@dataclass(frozen=True)
class Ruby(Formula):
    """Family diamond: one transition shared by every product of the family."""

    action: str
    guard: FeatureExpr
    body: Formula


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula


Modal = (Diamond, Box, Ruby)
Fixpoint = (Mu, Nu)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Or, And)):
        return (phi.left, phi.right)
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, Modal + Fixpoint):
        return (phi.body,)
    return ()


def rebuild(phi: Formula, kids: tuple[Formula, ...]) -> Formula:
    """Same constructor as ``phi`` with new children."""
    if isinstance(phi, (Or, And)):
        return type(phi)(*kids)
    if isinstance(phi, Not):
        return Not(kids[0])
    if isinstance(phi, Modal):
        return type(phi)(phi.action, phi.guard, kids[0])
    if isinstance(phi, Fixpoint):
        return type(phi)(phi.var, kids[0])
    return phi


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    for c in children(phi):
        yield from subformulas(c)


def depth(phi: Formula) -> int:
    """Longest root-to-leaf path counted in edges; leaves have depth 0."""
    kids = children(phi)
    return 1 + max(depth(c) for c in kids) if kids else 0


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def modal_depth(phi: Formula) -> int:
    kids = children(phi)
    inner = max((modal_depth(c) for c in kids), default=0)
    return inner + 1 if isinstance(phi, Modal) else inner


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Var):
        return frozenset([phi.name])
    if isinstance(phi, Fixpoint):
        return free_vars(phi.body) - {phi.var}
    out: frozenset[str] = frozenset()
    for c in children(phi):
        out |= free_vars(c)
    return out


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def bound_vars(phi: Formula) -> list[str]:
    return [q.var for q in subformulas(phi) if isinstance(q, Fixpoint)]


def substitute(phi: Formula, name: str, replacement: Formula) -> Formula:
    """Replace free occurrences of ``name``.

    Binder names are unique after parsing, so no capture avoidance is done.
    """
    if isinstance(phi, Var):
        return replacement if phi.name == name else phi
    if isinstance(phi, Fixpoint) and phi.var == name:
        return phi
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(substitute(c, name, replacement) for c in kids))


def guards(phi: Formula) -> list[FeatureExpr]:
    return [q.guard for q in subformulas(phi) if isinstance(q, Modal) and q.guard is not None]


def is_negation_free(phi: Formula) -> bool:
    return not any(isinstance(q, Not) for q in subformulas(phi))


def is_box_only(phi: Formula) -> bool:
    return not any(isinstance(q, (Diamond, Ruby)) for q in subformulas(phi))


def dialect_errors(phi: Formula, dialect: str) -> list[str]:
    """Constructs in ``phi`` that ``dialect`` does not admit (empty when fine)."""
    problems = []
    for q in subformulas(phi):
        if isinstance(q, Ruby) and dialect != MULPF:
            problems.append(f"<<{q.action}|...>> is only allowed in {MULPF}")
        elif isinstance(q, Diamond) and dialect == MULPF:
            problems.append(f"<{q.action}|...> is not a {MULPF} modality; use <<{q.action}|...>>")
        elif isinstance(q, (Diamond, Box)):
            if dialect == MUL and q.guard is not None:
                problems.append(f"guarded modality on {q.action!r} is not allowed in {MUL}")
            elif dialect != MUL and q.guard is None:
                problems.append(f"unguarded modality on {q.action!r} is only allowed in {MUL}")
    return problems


def dialect_of(phi: Formula) -> str | None:
    for d in DIALECTS:
        if not dialect_errors(phi, d):
            return d
    return None


# ---------------------------------------------------------------------------
# Printing


def format_formula(phi: Formula) -> str:
    """Concrete syntax accepted by ``parse_formula``.

    Prefix operators bind tightest, then ``&&``, then ``||`` (both left
    associative).  Fixpoints are parenthesised unless they stand at the top
    or directly under another fixpoint, since their bodies extend to the right.
    """

    def mod(q) -> str:
        g = "" if q.guard is None else "|" + format_fexpr(q.guard)
        if isinstance(q, Ruby):
            return f"<<{q.action}{g}>>"
        if isinstance(q, Diamond):
            return f"<{q.action}{g}>"
        return f"[{q.action}{g}]"

    def go(q: Formula, ctx: int) -> str:
        if isinstance(q, Bot):
            return "false"
        if isinstance(q, Top):
            return "true"
        if isinstance(q, Var):
            return q.name
        if isinstance(q, Not):
            return "!" + go(q.arg, 3)
        if isinstance(q, Modal):
            return mod(q) + go(q.body, 3)
        if isinstance(q, Fixpoint):
            s = f"{'mu' if isinstance(q, Mu) else 'nu'} {q.var}. {go(q.body, 0)}"
            return s if ctx == 0 else f"({s})"
        prec, op = (1, " || ") if isinstance(q, Or) else (2, " && ")
        s = go(q.left, prec) + op + go(q.right, prec + 1)
        return f"({s})" if prec < ctx else s

    return go(phi, 0)
