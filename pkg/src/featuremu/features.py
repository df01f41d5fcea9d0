"""Features, products, product sets and Boolean feature expressions.

A product is a frozenset of feature names.  A product set is a frozenset of
products.  Internally the evaluators work with bit masks: a product is
identified by its index in ``FeatureModel.products`` and a product set by an
integer whose bit ``i`` is set iff product ``i`` is a member.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

Product = frozenset  # frozenset[str]
ProductSet = frozenset  # frozenset[Product]


class ModelMismatchError(ValueError):
    """A feature, product or expression does not belong to the feature model."""


class FexprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


# ---------------------------------------------------------------------------
# Feature expressions


@dataclass(frozen=True)
class FeatureExpr:
    def __str__(self) -> str:
        return format_fexpr(self)


@dataclass(frozen=True)
class FTrue(FeatureExpr):
    pass


@dataclass(frozen=True)
class FFalse(FeatureExpr):
    pass


@dataclass(frozen=True)
class Atom(FeatureExpr):
    name: str


@dataclass(frozen=True)
class FNot(FeatureExpr):
    arg: FeatureExpr


@dataclass(frozen=True)
class FAnd(FeatureExpr):
    left: FeatureExpr
    right: FeatureExpr


@dataclass(frozen=True)
class FOr(FeatureExpr):
    left: FeatureExpr
    right: FeatureExpr


def atoms(chi: FeatureExpr) -> frozenset[str]:
    if isinstance(chi, Atom):
        return frozenset([chi.name])
    if isinstance(chi, FNot):
        return atoms(chi.arg)
    if isinstance(chi, (FAnd, FOr)):
        return atoms(chi.left) | atoms(chi.right)
    return frozenset()


def _holds(chi: FeatureExpr, members: frozenset) -> bool:
    if isinstance(chi, FTrue):
        return True
    if isinstance(chi, FFalse):
        return False
    if isinstance(chi, Atom):
        return chi.name in members
    if isinstance(chi, FNot):
        return not _holds(chi.arg, members)
    if isinstance(chi, FAnd):
        return _holds(chi.left, members) and _holds(chi.right, members)
    if isinstance(chi, FOr):
        return _holds(chi.left, members) or _holds(chi.right, members)
    raise TypeError(f"not a feature expression: {chi!r}")


_PREC = {FOr: 1, FAnd: 2}


def format_fexpr(chi: FeatureExpr) -> str:
    """Concrete syntax with minimal parentheses (``!`` > ``&`` > ``|``)."""

    def go(e: FeatureExpr, ctx: int) -> str:
        if isinstance(e, FTrue):
            return "true"
        if isinstance(e, FFalse):
            return "false"
        if isinstance(e, Atom):
            return e.name
        if isinstance(e, FNot):
            return "!" + go(e.arg, 3)
        prec = _PREC[type(e)]
        op = " & " if isinstance(e, FAnd) else " | "
        # left associative: the right operand needs strictly higher precedence
        s = go(e.left, prec) + op + go(e.right, prec + 1)
        return f"({s})" if prec < ctx else s

    return go(chi, 0)


_FEX_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[!&|()]))")


def parse_fexpr(text: str) -> FeatureExpr:
    """Parse ``true | false | IDENT | !e | e & e | e | e | (e)``."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _FEX_TOKEN.match(text, pos)
        if not m:
            raise FexprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        tokens.append((m.group("ident") or m.group("op"), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    i = 0

    def peek() -> str:
        return tokens[i][0]

    def take(expected: str | None = None) -> str:
        nonlocal i
        tok, at = tokens[i]
        if expected is not None and tok != expected:
            raise FexprSyntaxError(f"expected {expected!r}, found {tok!r}", text, at)
        i += 1
        return tok

    def disj() -> FeatureExpr:
        e = conj()
        while peek() == "|":
            take()
            e = FOr(e, conj())
        return e

    def conj() -> FeatureExpr:
        e = unary()
        while peek() == "&":
            take()
            e = FAnd(e, unary())
        return e

    def unary() -> FeatureExpr:
        tok, at = tokens[i]
        if tok == "!":
            take()
            return FNot(unary())
        if tok == "(":
            take()
            e = disj()
            take(")")
            return e
        if tok in ("<eof>", "&", "|", ")"):
            raise FexprSyntaxError(f"unexpected {tok!r}", text, at)
        take()
        if tok == "true":
            return FTrue()
        if tok == "false":
            return FFalse()
        return Atom(tok)

    e = disj()
    if peek() != "<eof>":
        raise FexprSyntaxError(f"trailing input {peek()!r}", text, tokens[i][1])
    return e


# ---------------------------------------------------------------------------
# Feature models


@dataclass(frozen=True)
class FeatureModel:
    """A feature universe together with the products it admits.

    When ``products`` is omitted every subset of ``features`` is a product.
    Products are kept in a canonical order: by the bit vector obtained from
    the declaration order of the features.
    """

    features: tuple[str, ...]
    products: tuple[Product, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        feats = tuple(self.features)
        if not feats:
            raise ValueError("a feature model needs at least one feature")
        if any(not isinstance(f, str) or not f for f in feats):
            raise ValueError("feature names must be non-empty strings")
        if len(set(feats)) != len(feats):
            raise ValueError(f"duplicate feature names in {feats}")
        object.__setattr__(self, "features", feats)
        if self.products is None:
            prods = [
                frozenset(c) for r in range(len(feats) + 1) for c in itertools.combinations(feats, r)
            ]
        else:
            prods = [frozenset(p) for p in self.products]
            for p in prods:
                unknown = p - set(feats)
                if unknown:
                    raise ModelMismatchError(f"product mentions undeclared features {sorted(unknown)}")
            if len(set(prods)) != len(prods):
                raise ValueError("duplicate products in product list")
        bit = {f: 1 << k for k, f in enumerate(feats)}
        prods.sort(key=lambda p: sum(bit[f] for f in p))
        object.__setattr__(self, "products", tuple(prods))

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(self.products)}

    @property
    def full_mask(self) -> int:
        return (1 << len(self.products)) - 1

    def product_index(self, p: Iterable[str]) -> int:
        key = frozenset(p)
        try:
            return self._index[key]
        except KeyError:
            raise ModelMismatchError(f"product {format_product(key, self)} is not in the universe") from None

    def mask_of(self, products: Iterable[Iterable[str]]) -> int:
        m = 0
        for p in products:
            m |= 1 << self.product_index(p)
        return m

    def products_of(self, mask: int) -> ProductSet:
        return frozenset(self.ordered(mask))

    def ordered(self, mask: int) -> list[Product]:
        """Members of ``mask`` in canonical universe order."""
        return [p for i, p in enumerate(self.products) if mask >> i & 1]

    def check_fexpr(self, chi: FeatureExpr) -> None:
        unknown = atoms(chi) - set(self.features)
        if unknown:
            raise ModelMismatchError(f"undeclared features {sorted(unknown)} in {format_fexpr(chi)}")

    def fexpr_mask(self, chi: FeatureExpr) -> int:
        self.check_fexpr(chi)
        m = 0
        for i, p in enumerate(self.products):
            if _holds(chi, p):
                m |= 1 << i
        return m


def eval_fexpr(chi: FeatureExpr, p: Iterable[str], fm: FeatureModel | None = None) -> bool:
    """Truth of ``chi`` under the assignment that sets exactly the features of ``p``."""
    members = frozenset(p)
    if fm is not None:
        fm.check_fexpr(chi)
        unknown = members - set(fm.features)
        if unknown:
            raise ModelMismatchError(f"product mentions undeclared features {sorted(unknown)}")
    return _holds(chi, members)


def sat_products(chi: FeatureExpr, fm: FeatureModel) -> ProductSet:
    return fm.products_of(fm.fexpr_mask(chi))


def fexpr_equiv(a: FeatureExpr, b: FeatureExpr, fm: FeatureModel) -> bool:
    return fm.fexpr_mask(a) == fm.fexpr_mask(b)


# ---------------------------------------------------------------------------
# Product and family concrete syntax: ``{C,D}`` and ``{{E},{C,E}}``


def format_product(p: Iterable[str], fm: FeatureModel | None = None) -> str:
    members = list(p)
    if fm is not None:
        order = {f: k for k, f in enumerate(fm.features)}
        members.sort(key=lambda f: order.get(f, len(order)))
    else:
        members.sort()
    return "{" + ",".join(members) + "}"


def format_family(P: Iterable[Iterable[str]], fm: FeatureModel) -> str:
    mask = fm.mask_of(P)
    return "{" + ",".join(format_product(p, fm) for p in fm.ordered(mask)) + "}"


_PRODUCT = re.compile(r"\{\s*([^{}]*?)\s*\}")


def parse_product(text: str) -> Product:
    m = re.fullmatch(r"\s*\{([^{}]*)\}\s*", text)
    if not m:
        raise ValueError(f"malformed product {text!r}; expected e.g. {{C,D}}")
    body = m.group(1).strip()
    if not body:
        return frozenset()
    names = [n.strip() for n in body.split(",")]
    if any(not n for n in names):
        raise ValueError(f"malformed product {text!r}")
    return frozenset(names)


def parse_products(text: str) -> list[Product]:
    """Parse a whitespace separated sequence of products ``{C,D} {E} {}``."""
    rest = _PRODUCT.sub("", text)
    if rest.strip():
        raise ValueError(f"malformed product list {text!r}")
    return [parse_product(m.group(0)) for m in _PRODUCT.finditer(text)]


def parse_family(text: str) -> ProductSet:
    m = re.fullmatch(r"\s*\{(.*)\}\s*", text, re.S)
    if not m:
        raise ValueError(f"malformed family {text!r}; expected e.g. {{{{E}},{{C,E}}}}")
    inner = m.group(1)
    rest = _PRODUCT.sub("", inner).replace(",", "")
    if rest.strip():
        raise ValueError(f"malformed family {text!r}")
    return frozenset(parse_product(pm.group(0)) for pm in _PRODUCT.finditer(inner))
