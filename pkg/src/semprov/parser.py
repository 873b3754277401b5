"""Recursive-descent parser for the ASCII formula language.

Grammar, loosest first::

    formula := disj ('->' formula)?          # extended mode only
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | ('forall'|'exists') ident+ '.' disj | atom
    atom    := ident '(' term (',' term)* ')' | term ('='|'!=') term | '(' formula ')'

A quantifier body runs as far right as a disjunction reaches but stops at
``->``; write parentheses to quantify over an implication.  Lines starting
with ``def`` declare macros such as ``def dominant(x) := forall y. ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, VocabularyError
from .syntax import (
    And, Eq, Exists, Forall, Formula, Implies, Neq, Not, Or, Rel, Universe, Value, Var,
    Vocabulary, free_vars, substitute,
)

KEYWORDS = {"forall", "exists", "def"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<op>->|!=|:=|[()&|!=,.;])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line0: int = 1) -> list[_Tok]:
    out = []
    pos, line, start = 0, line0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("op", "ident"):
            out.append(_Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


@dataclass
class Macro:
    name: str
    params: tuple[str, ...]
    body: Formula


@dataclass
class FormulaParser:
    vocab: Vocabulary | None = None
    universe: Universe | None = None
    macros: dict[str, Macro] = field(default_factory=dict)
    extended: bool = False

    # -- entry points --------------------------------------------------------
    def parse(self, text: str, sentence: bool = True) -> Formula:
        """Parse macro definitions followed by one formula."""
        body_lines = []
        for lineno, line in enumerate(text.splitlines() or [""], 1):
            stripped = line.strip()
            if stripped.startswith("def ") or stripped == "def":
                self.define(line, lineno)
                body_lines.append("")
            else:
                body_lines.append(line)
        formula_text = "\n".join(body_lines)
        if not formula_text.strip() or all(l.strip().startswith("#") or not l.strip() for l in body_lines):
            raise ParseError("expected a formula, found end of input", len(body_lines), 1)
        return self.parse_formula_only(formula_text, sentence=sentence)

    def parse_formula_only(self, text: str, sentence: bool = True, line0: int = 1) -> Formula:
        self._toks = _tokenize(text, line0)
        self._i = 0
        f = self._formula()
        self._expect_eof()
        if sentence:
            free = sorted(free_vars(f))
            if free:
                raise ParseError(f"unbound variable {free[0]}")
        return f

    def define(self, line: str, lineno: int = 1) -> Macro:
        """Register ``def name(params) := formula`` (one line)."""
        self._toks = _tokenize(line, lineno)
        self._i = 0
        if self._take("ident").text != "def":
            raise ParseError("expected 'def'", lineno, 1)
        name_tok = self._take("ident")
        name = name_tok.text
        if name in KEYWORDS:
            raise ParseError(f"{name!r} is reserved", name_tok.line, name_tok.col)
        if self.vocab is not None and name in self.vocab:
            raise ParseError(f"macro {name} shadows a relation", name_tok.line, name_tok.col)
        self._take("op", "(")
        params = [self._take("ident").text]
        while self._peek().text == ",":
            self._take()
            params.append(self._take("ident").text)
        self._take("op", ")")
        self._take("op", ":=")
        if len(set(params)) != len(params):
            raise ParseError(f"repeated parameter in macro {name}", name_tok.line, name_tok.col)
        bound = set(params)
        body = self._formula()
        if self._peek().text == ";":
            self._take()
        self._expect_eof()
        extra = sorted(free_vars(body) - bound)
        if extra:
            raise ParseError(f"unbound variable {extra[0]} in macro {name}", name_tok.line, name_tok.col)
        macro = Macro(name, tuple(params), body)
        self.macros[name] = macro
        return macro

    # -- token helpers -------------------------------------------------------
    def _peek(self) -> _Tok:
        return self._toks[self._i]

    def _take(self, kind: str | None = None, text: str | None = None) -> _Tok:
        tok = self._toks[self._i]
        if (kind and tok.kind != kind) or (text and tok.text != text):
            want = repr(text) if text else ("an identifier" if kind == "ident" else kind)
            raise ParseError(f"expected {want}, found {_describe(tok)}", tok.line, tok.col)
        self._i += 1
        return tok

    def _expect_eof(self):
        tok = self._peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {_describe(tok)}", tok.line, tok.col)

    # -- grammar -------------------------------------------------------------
    def _formula(self) -> Formula:
        left = self._disj()
        tok = self._peek()
        if tok.text == "->":
            if not self.extended:
                raise ParseError("'->' is only available in extended mode", tok.line, tok.col)
            self._take()
            return Implies(left, self._formula())
        return left

    def _disj(self) -> Formula:
        f = self._conj()
        while self._peek().text == "|":
            self._take()
            f = Or(f, self._conj())
        return f

    def _conj(self) -> Formula:
        f = self._unary()
        while self._peek().text == "&":
            self._take()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok.text == "!":
            self._take()
            return Not(self._unary())
        if tok.kind == "ident" and tok.text in ("forall", "exists"):
            self._take()
            names = [self._binder()]
            while self._peek().kind == "ident":
                names.append(self._binder())
            self._take("op", ".")
            body = self._disj()
            cls = Forall if tok.text == "forall" else Exists
            for name in reversed(names):
                body = cls(name, body)
            return body
        return self._atom()

    def _binder(self) -> str:
        tok = self._take("ident")
        if tok.text in KEYWORDS:
            raise ParseError(f"{tok.text!r} cannot be a variable", tok.line, tok.col)
        if self.universe is not None and tok.text in self.universe:
            raise ParseError(f"{tok.text} is a universe element and cannot be bound", tok.line, tok.col)
        return tok.text

    def _atom(self) -> Formula:
        tok = self._peek()
        if tok.text == "(":
            self._take()
            f = self._formula()
            self._take("op", ")")
            return f
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise ParseError(f"expected a formula, found {_describe(tok)}", tok.line, tok.col)
        self._take()
        if self._peek().text == "(":
            self._take()
            args = [self._term()]
            while self._peek().text == ",":
                self._take()
                args.append(self._term())
            self._take("op", ")")
            return self._apply(tok, tuple(args))
        left = self._term_of(tok)
        op = self._peek()
        if op.text not in ("=", "!="):
            raise ParseError(f"expected '(', '=' or '!=' after {tok.text}, found {_describe(op)}", op.line, op.col)
        self._take()
        right = self._term()
        return Eq(left, right) if op.text == "=" else Neq(left, right)

    def _term(self) -> Var | Value:
        return self._term_of(self._take("ident"))

    def _term_of(self, tok: _Tok) -> Var | Value:
        if tok.text in KEYWORDS:
            raise ParseError(f"{tok.text!r} cannot be a term", tok.line, tok.col)
        if self.universe is not None and tok.text in self.universe:
            return Value(tok.text)
        return Var(tok.text)

    def _apply(self, tok: _Tok, args: tuple) -> Formula:
        name = tok.text
        macro = self.macros.get(name)
        if macro is not None:
            if len(args) != len(macro.params):
                raise VocabularyError(
                    f"macro {name} takes {len(macro.params)} arguments, got {len(args)} "
                    f"(line {tok.line}, column {tok.col})"
                )
            return substitute(macro.body, dict(zip(macro.params, args)))
        if self.vocab is not None:
            if name not in self.vocab:
                raise VocabularyError(f"unknown relation {name} (line {tok.line}, column {tok.col})")
            if self.vocab.arity(name) != len(args):
                raise VocabularyError(
                    f"relation {name} has arity {self.vocab.arity(name)}, got {len(args)} arguments "
                    f"(line {tok.line}, column {tok.col})"
                )
        return Rel(name, args)


def _describe(tok: _Tok) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


def parse_formula(
    text: str,
    vocab: Vocabulary | None = None,
    universe: Universe | None = None,
    *,
    macros: dict[str, Macro] | None = None,
    extended: bool = False,
    sentence: bool = True,
) -> Formula:
    """Parse ``text`` (optionally preceded by ``def`` lines) into a formula."""
    parser = FormulaParser(vocab, universe, dict(macros or {}), extended)
    return parser.parse(text, sentence=sentence)
