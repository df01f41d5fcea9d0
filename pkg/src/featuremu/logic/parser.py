"""Recursive-descent parser for the modal formula grammar.

::

    phi ::= false | true | ! phi | phi || phi | phi && phi
          | <a> phi | [a] phi | <a|fexpr> phi | [a|fexpr] phi | <<a|fexpr>> phi
          | X | mu X. phi | nu X. phi | ( phi )
"""

from __future__ import annotations

import re

from ..features import Atom, FAnd, FeatureExpr, FFalse, FNot, FOr, FTrue
from .syntax import (
    DIALECTS,
    MULPF,
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
    dialect_errors,
    free_vars,
    rebuild,
    subformulas,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line, self.column = line, col


class DialectError(ValueError):
    pass


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op><<|>>|\|\||&&|[<>\[\]()|!&.])"
)
_KEYWORDS = {"mu", "nu", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos] == "%":  # comment to end of line
            nl = text.find("\n", pos)
            pos = len(text) if nl < 0 else nl
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if not m.group("ws"):
            kind = "ident" if m.group("ident") else "op"
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "<eof>", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][1]

    def error(self, msg: str):
        raise FormulaSyntaxError(msg, self.text, self.toks[self.i][2])

    def take(self, expected: str | None = None) -> str:
        kind, tok, _ = self.toks[self.i]
        if expected is not None and tok != expected:
            self.error(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def ident(self, what: str) -> str:
        kind, tok, _ = self.toks[self.i]
        if kind != "ident" or tok in _KEYWORDS:
            self.error(f"expected {what}, found {tok!r}")
        self.i += 1
        return tok

    # phi ::= disj
    def formula(self) -> Formula:
        left = self.conj()
        while self.peek() == "||":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "&&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("mu", "nu"):
            self.take()
            name = self.ident("a fixpoint variable")
            self.take(".")
            body = self.formula()
            return Mu(name, body) if tok == "mu" else Nu(name, body)
        if tok == "<<":
            self.take()
            act = self.ident("an action")
            if self.peek() != "|":
                self.error("<<a|chi>> needs a feature expression")
            self.take("|")
            guard = self.fexpr()
            self.take(">>")
            return Ruby(act, guard, self.unary())
        if tok in ("<", "["):
            self.take()
            close = ">" if tok == "<" else "]"
            act = self.ident("an action")
            guard = None
            if self.peek() == "|":
                self.take()
                guard = self.fexpr()
            self.take(close)
            body = self.unary()
            return Diamond(act, guard, body) if tok == "<" else Box(act, guard, body)
        if tok == "(":
            self.take()
            phi = self.formula()
            self.take(")")
            return phi
        if tok == "true":
            self.take()
            return Top()
        if tok == "false":
            self.take()
            return Bot()
        return Var(self.ident("a formula"))

    # feature expressions embedded in modalities
    def fexpr(self) -> FeatureExpr:
        e = self.fconj()
        while self.peek() == "|":
            self.take()
            e = FOr(e, self.fconj())
        return e

    def fconj(self) -> FeatureExpr:
        e = self.funary()
        while self.peek() == "&":
            self.take()
            e = FAnd(e, self.funary())
        return e

    def funary(self) -> FeatureExpr:
        tok = self.peek()
        if tok == "!":
            self.take()
            return FNot(self.funary())
        if tok == "(":
            self.take()
            e = self.fexpr()
            self.take(")")
            return e
        if tok == "true":
            self.take()
            return FTrue()
        if tok == "false":
            self.take()
            return FFalse()
        kind, name, _ = self.toks[self.i]
        if kind != "ident" or name in _KEYWORDS:
            self.error(f"expected a feature expression, found {name!r}")
        self.take()
        return Atom(name)


def alpha_rename(phi: Formula) -> Formula:
    """Rename binders so that every fixpoint variable is bound exactly once
    and no binder shares its name with a free variable."""
    taken = set(free_vars(phi)) | {q.name for q in subformulas(phi) if isinstance(q, Var)}
    taken |= {q.var for q in subformulas(phi) if isinstance(q, Fixpoint)}
    used: set[str] = set(free_vars(phi))

    def fresh(base: str) -> str:
        k = 1
        while f"{base}{k}" in taken:
            k += 1
        name = f"{base}{k}"
        taken.add(name)
        return name

    def go(q: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(q, Var):
            return Var(ren.get(q.name, q.name))
        if isinstance(q, Fixpoint):
            name = q.var
            if name in used:
                name = fresh(q.var)
            used.add(name)
            return type(q)(name, go(q.body, {**ren, q.var: name}))
        kids = children(q)
        if not kids:
            return q
        return rebuild(q, tuple(go(c, ren) for c in kids))

    return go(phi, {})


def parse_formula(text: str, dialect: str = MULPF, *, check_dialect: bool = True) -> Formula:
    """Parse ``text`` and check that it only uses constructs of ``dialect``."""
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}; choose from {', '.join(DIALECTS)}")
    p = _Parser(text)
    phi = p.formula()
    if p.peek() != "<eof>":
        p.error(f"unexpected {p.peek()!r}")
    if check_dialect:
        problems = dialect_errors(phi, dialect)
        if problems:
            raise DialectError(f"not a {dialect} formula: {problems[0]}")
    return alpha_rename(phi)


def read_formula_file(path, dialect: str = MULPF) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_formula(fh.read(), dialect)


__all__ = [
    "DialectError",
    "FormulaSyntaxError",
    "alpha_rename",
    "parse_formula",
    "read_formula_file",
    "MULPF",
]
