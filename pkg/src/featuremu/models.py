"""Labelled and featured transition systems, projection, and L(F)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .features import (
    FeatureExpr,
    FeatureModel,
    FexprSyntaxError,
    FOr,
    ModelMismatchError,
    Product,
    ProductSet,
    format_fexpr,
    format_product,
    parse_fexpr,
    parse_products,
)


class ModelSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _check_states(states: tuple, initial, triples: Iterable[tuple]) -> None:
    if len(set(states)) != len(states):
        raise ValueError("duplicate state names")
    known = set(states)
    if initial not in known:
        raise ValueError(f"initial state {initial!r} is not a declared state")
    for s, _, t in triples:
        for x in (s, t):
            if x not in known:
                raise ValueError(f"unknown state {x!r} in transition {s} -> {t}")


@dataclass(frozen=True)
class Lts:
    states: tuple[str, ...]
    actions: frozenset[str]
    transitions: frozenset[tuple[str, str, str]]
    initial: str

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        acts = frozenset(self.actions) | {a for _, a, _ in self.transitions}
        object.__setattr__(self, "actions", acts)
        _check_states(self.states, self.initial, self.transitions)

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}


@dataclass(frozen=True)
class Fts:
    """A featured transition system.

    ``theta`` is the transition constraint function stored sparsely: a key
    ``(s, a, t)`` absent from the map has guard false.
    """

    states: tuple[str, ...]
    actions: frozenset[str]
    initial: str
    fm: FeatureModel
    theta: Mapping[tuple[str, str, str], FeatureExpr] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        theta = dict(self.theta)
        object.__setattr__(self, "theta", theta)
        acts = frozenset(self.actions) | {a for _, a, _ in theta}
        object.__setattr__(self, "actions", acts)
        _check_states(self.states, self.initial, theta)
        for guard in theta.values():
            self.fm.check_fexpr(guard)

    def __hash__(self):
        return hash((self.states, self.initial, self.fm, frozenset(self.theta.items())))

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def guard_masks(self) -> dict[tuple[str, str, str], int]:
        """Product-set mask of every guard, in universe index order."""
        return {k: self.fm.fexpr_mask(g) for k, g in self.theta.items()}

    def transitions(self) -> list[tuple[str, str, FeatureExpr, str]]:
        return [(s, a, g, t) for (s, a, t), g in self.theta.items()]


@dataclass(frozen=True)
class ParamLts:
    """LTS whose action labels carry a product set, e.g. ``ins(D)``."""

    states: tuple[str, ...]
    transitions: frozenset[tuple[str, str, ProductSet, str]]
    initial: str
    fm: FeatureModel

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}


def project(f: Fts, p: Iterable[str]) -> Lts:
    """The LTS seen by product ``p``: keep exactly the transitions whose guard admits ``p``.

    States are not pruned for reachability.
    """
    bit = 1 << f.fm.product_index(p)
    kept = {key for key, mask in f.guard_masks.items() if mask & bit}
    return Lts(f.states, f.actions, kept, f.initial)


def build_param_lts(f: Fts) -> ParamLts:
    trans = frozenset(
        (s, a, f.fm.products_of(f.guard_masks[(s, a, t)]), t) for (s, a, t) in f.theta
    )
    return ParamLts(f.states, trans, f.initial, f.fm)


# ---------------------------------------------------------------------------
# .fts / .lts text format

_TRANS = re.compile(r"^(?P<src>\S+)\s+-(?P<act>[^\s|>-]+)(?:\|(?P<guard>[^>]*?))?->\s+(?P<dst>\S+)$")
_KEYS = ("features", "products", "states", "initial", "trans")


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise ModelSyntaxError(f"expected one of {', '.join(k + ':' for k in _KEYS)}", n)
        yield n, key, rest.strip()


def _parse(text: str, featured: bool):
    features = products = states = initial = None
    trans: list[tuple[int, str, str, str | None, str]] = []
    for n, key, rest in _lines(text):
        if key == "trans":
            m = _TRANS.match(rest)
            if not m:
                raise ModelSyntaxError(f"malformed transition {rest!r}", n)
            trans.append((n, m["src"], m["act"], m["guard"], m["dst"]))
            continue
        if key in ("features", "products") and not featured:
            raise ModelSyntaxError(f"{key}: not allowed in a plain LTS file", n)
        seen = {"features": features, "products": products, "states": states, "initial": initial}
        if seen[key] is not None:
            raise ModelSyntaxError(f"duplicate {key}: line", n)
        if key == "features":
            features = (n, rest.split())
        elif key == "products":
            try:
                products = (n, parse_products(rest))
            except ValueError as e:
                raise ModelSyntaxError(str(e), n) from None
        elif key == "states":
            states = (n, rest.split())
        else:
            initial = (n, rest)
    if states is None:
        raise ModelSyntaxError("missing states: line")
    if initial is None:
        raise ModelSyntaxError("missing initial: line")
    known = set(states[1])
    if initial[1] not in known:
        raise ModelSyntaxError(f"initial state {initial[1]!r} is not declared", initial[0])
    for n, s, _, _, t in trans:
        for x in (s, t):
            if x not in known:
                raise ModelSyntaxError(f"unknown state {x!r}", n)
    return features, products, states, initial, trans


def parse_fts(text: str) -> Fts:
    """Parse the line-oriented ``.fts`` format.

    Repeated ``(s, a, t)`` transitions are merged by disjoining their guards.
    """
    features, products, states, initial, trans = _parse(text, featured=True)
    if features is None:
        raise ModelSyntaxError("missing features: line")
    try:
        fm = FeatureModel(tuple(features[1]), products[1] if products else None)
    except ValueError as e:
        raise ModelSyntaxError(str(e), (products or features)[0]) from None
    theta: dict[tuple[str, str, str], FeatureExpr] = {}
    for n, s, a, gtext, t in trans:
        if gtext is None:
            raise ModelSyntaxError("transition needs a guard, e.g. -a|true->", n)
        try:
            g = parse_fexpr(gtext)
            fm.check_fexpr(g)
        except (FexprSyntaxError, ModelMismatchError) as e:
            raise ModelSyntaxError(str(e), n) from None
        key = (s, a, t)
        theta[key] = FOr(theta[key], g) if key in theta else g
    return Fts(tuple(states[1]), frozenset(), initial[1], fm, theta)


def parse_lts(text: str) -> Lts:
    _, _, states, initial, trans = _parse(text, featured=False)
    triples = set()
    for n, s, a, gtext, t in trans:
        if gtext is not None:
            raise ModelSyntaxError("guards are not allowed in a plain LTS file", n)
        triples.add((s, a, t))
    return Lts(tuple(states[1]), frozenset(), triples, initial[1])


def format_fts(f: Fts) -> str:
    lines = [f"features: {' '.join(f.fm.features)}"]
    lines.append("products: " + " ".join(format_product(p, f.fm) for p in f.fm.products))
    lines.append(f"states: {' '.join(f.states)}")
    lines.append(f"initial: {f.initial}")
    for (s, a, t), g in f.theta.items():
        lines.append(f"trans: {s} -{a}|{format_fexpr(g)}-> {t}")
    return "\n".join(lines) + "\n"


def format_lts(lts: Lts) -> str:
    lines = [f"states: {' '.join(lts.states)}", f"initial: {lts.initial}"]
    order = lts.index
    for s, a, t in sorted(lts.transitions, key=lambda x: (order[x[0]], x[1], order[x[2]])):
        lines.append(f"trans: {s} -{a}-> {t}")
    return "\n".join(lines) + "\n"


def format_param_lts(pl: ParamLts) -> str:
    lines = [f"states: {' '.join(pl.states)}", f"initial: {pl.initial}"]
    order = pl.index
    for s, a, d, t in sorted(pl.transitions, key=lambda x: (order[x[0]], x[1], order[x[3]])):
        data = "{" + ",".join(format_product(p, pl.fm) for p in pl.fm.ordered(pl.fm.mask_of(d))) + "}"
        lines.append(f"trans: {s} -{a}({data})-> {t}")
    return "\n".join(lines) + "\n"


def product_label(p: Product, f: Fts) -> str:
    return format_product(p, f.fm)
