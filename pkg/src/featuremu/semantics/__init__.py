"""Evaluators and satisfaction judgments for the four formula languages."""

from __future__ import annotations

from typing import Iterable

from ..features import ModelMismatchError
from ..logic.syntax import Formula, free_vars
from ..logic.transform import NotClosedError
from ..models import Fts, Lts
from .family import FamilyEvaluator, eval_fts_family
from .fixpoint import FixpointChainError, FixpointStats, kleene
from .fo import FOEvaluator, eval_fo
from .lts import LtsEvaluator, UnboundVariableError, eval_lts
from .product import ProductEvaluator, eval_fts_product


def _closed(phi: Formula) -> None:
    fv = free_vars(phi)
    if fv:
        raise NotClosedError(f"satisfaction needs a closed formula; free: {sorted(fv)}")


def sat_lts(lts: Lts, phi: Formula, stats: FixpointStats | None = None) -> bool:
    _closed(phi)
    return lts.initial in eval_lts(phi, lts, stats=stats)


def sat_product(f: Fts, p: Iterable[str], phi: Formula, stats: FixpointStats | None = None) -> bool:
    """``p |=_F phi``: the pair (initial state, p) is in the product denotation."""
    _closed(phi)
    p = frozenset(p)
    f.fm.product_index(p)  # raises for a foreign product
    return (f.initial, p) in eval_fts_product(phi, f, stats=stats)


def sat_family(f: Fts, P: Iterable[Iterable[str]], phi: Formula, stats: FixpointStats | None = None) -> bool:
    """``P |=' phi``: the pair (initial state, P) is in the family denotation."""
    _closed(phi)
    P = frozenset(frozenset(p) for p in P)
    for p in P:
        if p not in f.fm.products:
            raise ModelMismatchError(f"family member {sorted(p)} is not in the universe")
    return (f.initial, P) in eval_fts_family(phi, f, stats=stats)


__all__ = [
    "FamilyEvaluator",
    "FOEvaluator",
    "FixpointChainError",
    "FixpointStats",
    "LtsEvaluator",
    "ProductEvaluator",
    "UnboundVariableError",
    "eval_fo",
    "eval_fts_family",
    "eval_fts_product",
    "eval_lts",
    "kleene",
    "sat_family",
    "sat_lts",
    "sat_product",
]
