"""Line-oriented input files for structures, interpretations and cost models.

A structure file looks like::

    universe: a b c
    relation: E/2
    semiring: ndualpoly
    default + : 0
    default - : 1
    annot +E(a,b) = p
    annot -E(a,c) = ~r
    fact E(b,a)
    model: E(a,b) E(b,c)
    def dominant(x) := forall y. x = y | (E(x,y) & !E(y,x))

``model:`` names the structure that analyses refer to when the
interpretation does not define one by itself.  ``semiring: table FILE``
loads a finite semiring from addition and multiplication tables.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ProvenanceError
from .interpretation import Interpretation, Structure
from .parser import FormulaParser, Macro
from .polynomial import Token, TokenAssignment
from .semirings import FiniteSemiring, Semiring, get_semiring
from .syntax import GroundLiteral, Universe, Vocabulary

_ATOM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)\s*")
_RELATION = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\Z")


@dataclass
class Document:
    universe: Universe
    vocab: Vocabulary
    semiring: Semiring
    interpretation: Interpretation
    model: Structure | None = None
    macros: dict[str, Macro] = field(default_factory=dict)
    source: str = "<input>"

    def parser(self, extended: bool = False) -> FormulaParser:
        return FormulaParser(self.vocab, self.universe, dict(self.macros), extended)

    def parse_formula(self, text: str, extended: bool = False):
        return self.parser(extended).parse(text)


def parse_atom(text: str, where: tuple[int, int] | None = None) -> GroundLiteral:
    m = _ATOM.fullmatch(text)
    if not m:
        raise ParseError(f"expected an atom like E(a,b), found {text.strip()!r}", *(where or (None, None)))
    args = tuple(a.strip() for a in m.group(2).split(",")) if m.group(2).strip() else ()
    return GroundLiteral(m.group(1), args, True)


def split_atoms(text: str) -> list[str]:
    return [a + ")" for a in (p.strip() for p in text.split(")")) if a]


def parse_signed_literal(text: str, where=None) -> GroundLiteral:
    t = text.strip()
    if t[:1] in "+-":
        return parse_atom(t[1:], where)._replace(positive=t[0] == "+")
    if t[:1] == "!":
        return parse_atom(t[1:], where).negate()
    return parse_atom(t, where)


def load_document(
    text: str, source: str = "<input>", base: Path | None = None, semiring: Semiring | str | None = None
) -> Document:
    """Parse a structure file; ``semiring`` overrides its ``semiring:`` line."""
    universe = None
    vocab = Vocabulary()
    override = get_semiring(semiring) if isinstance(semiring, str) else semiring
    semiring = get_semiring("ndualpoly")
    defaults: dict[str, tuple[str, int]] = {}
    annots: list[tuple[GroundLiteral, str, int]] = []
    model: set[GroundLiteral] | None = None
    model_lines: list[tuple[str, int]] = []
    def_lines: list[tuple[str, int]] = []
    relaxed = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("def ") or line == "def":
            def_lines.append((line, lineno))
            continue
        if line.startswith("annot "):
            body = line[len("annot "):]
            lhs, eq, rhs = body.partition("=")
            if not eq or not rhs.strip():
                raise ParseError("expected 'annot +R(a,..) = value'", lineno, 1)
            lhs = lhs.strip()
            if lhs[:1] not in "+-":
                raise ParseError("annotated literals start with + or -", lineno, len("annot ") + 1)
            annots.append((parse_signed_literal(lhs, (lineno, 1)), rhs.strip(), lineno))
            continue
        if line.startswith("fact "):
            lit = parse_atom(line[len("fact "):], (lineno, 1))
            annots.append((lit, "1", lineno))
            annots.append((lit.negate(), "0", lineno))
            continue
        m = re.match(r"default\s*([+-])\s*:\s*(.+)\Z", line)
        if m:
            defaults[m.group(1)] = (m.group(2).strip(), lineno)
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"unrecognized directive {line!r}", lineno, 1)
        key, rest = key.strip(), rest.strip()
        if key == "universe":
            if universe is not None:
                raise ParseError("universe declared twice", lineno, 1)
            try:
                universe = Universe(rest.split())
            except ProvenanceError as e:
                raise ParseError(str(e), lineno, 1) from None
        elif key == "relation":
            for item in rest.replace(",", " ").split():
                rm = _RELATION.match(item)
                if not rm:
                    raise ParseError(f"expected NAME/ARITY, found {item!r}", lineno, 1)
                vocab.add(rm.group(1), int(rm.group(2)))
        elif key == "semiring":
            if rest.startswith("table "):
                path = Path(rest[len("table "):].strip())
                if base is not None and not path.is_absolute():
                    path = base / path
                semiring = FiniteSemiring.from_text(path.read_text())
            else:
                semiring = get_semiring(rest)
        elif key == "model":
            model_lines.append((rest, lineno))
        elif key == "relaxed":
            relaxed = rest.lower() in ("yes", "true", "1", "on")
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, 1)

    if universe is None:
        raise ParseError("missing 'universe:' line")
    if override is not None:
        semiring = override

    def value(text, lineno):
        try:
            return semiring.parse_value(text)
        except ParseError as e:
            raise ParseError(str(e), lineno, 1) from None

    values = {}
    for lit, text_value, lineno in annots:
        if lit in values:
            raise ParseError(f"{'+' if lit.positive else '-'}{lit.atom_text()} annotated twice", lineno, 1)
        _check_known(lit, universe, vocab, lineno)
        values[lit] = value(text_value, lineno)
    dpos = value(*defaults["+"]) if "+" in defaults else None
    dneg = value(*defaults["-"]) if "-" in defaults else None
    pi = Interpretation(semiring, universe, vocab, values, dpos, dneg, relaxed=relaxed)

    if model_lines:
        model = set()
        for rest, lineno in model_lines:
            for atom in split_atoms(rest):
                lit = parse_atom(atom, (lineno, 1))
                _check_known(lit, universe, vocab, lineno)
                model.add(lit)
    structure = Structure(universe, vocab, model) if model is not None else None

    parser = FormulaParser(vocab, universe)
    for line, lineno in def_lines:
        parser.define(line, lineno)
    return Document(universe, vocab, semiring, pi, structure, parser.macros, source)


def _check_known(lit: GroundLiteral, universe: Universe, vocab: Vocabulary, lineno: int) -> None:
    if lit.relation not in vocab:
        raise ParseError(f"unknown relation {lit.relation}", lineno, 1)
    if vocab.arity(lit.relation) != len(lit.args):
        raise ParseError(f"{lit.atom_text()} does not match arity {vocab.arity(lit.relation)}", lineno, 1)
    for a in lit.args:
        if a not in universe:
            raise ParseError(f"{a} is not an element of the universe", lineno, 1)


def load_document_file(path: str | Path, semiring: Semiring | str | None = None) -> Document:
    path = Path(path)
    return load_document(path.read_text(), str(path), path.parent, semiring)


@dataclass
class CostModel:
    """Tropical costs: per token, plus flat costs for inserting and deleting facts."""

    tokens: dict[Token, float] = field(default_factory=dict)
    insert: float = 0.0
    delete: float = 0.0

    def __post_init__(self):
        for tok, c in self.tokens.items():
            if c < 0:
                raise ValueError(f"negative cost for {tok}")
        if self.insert < 0 or self.delete < 0:
            raise ValueError("costs must be nonnegative")


def load_cost_model(text: str) -> CostModel:
    tokens: dict[Token, float] = {}
    insert = delete = 0.0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise ParseError("expected 'token X = cost', 'insert = cost' or 'delete = cost'", lineno, 1)
        try:
            cost = float(rhs)
        except ValueError:
            raise ParseError(f"not a number: {rhs.strip()!r}", lineno, len(lhs) + 2) from None
        if cost < 0:
            raise ParseError("costs must be nonnegative", lineno, len(lhs) + 2)
        words = lhs.split()
        if words == ["insert"]:
            insert = cost
        elif words == ["delete"]:
            delete = cost
        elif len(words) == 2 and words[0] == "token":
            tokens[Token.parse(words[1])] = cost
        else:
            raise ParseError(f"unrecognized cost line {line!r}", lineno, 1)
    return CostModel(tokens, insert, delete)


def load_cost_model_file(path: str | Path) -> CostModel:
    return load_cost_model(Path(path).read_text())


def load_assignment(text: str, semiring: Semiring | str | None = None, exact: bool = False):
    """Read a token assignment: ``semiring: NAME``, ``default +/- : v`` and ``token X = v`` lines.

    Returns the target semiring and a :class:`TokenAssignment`.  With
    ``exact`` the values are kept as fractions instead of being parsed by
    the semiring.
    """
    sr = get_semiring(semiring) if isinstance(semiring, str) else semiring
    raw: dict[Token, tuple[str, int]] = {}
    defaults: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"default\s*([+-])\s*:\s*(.+)\Z", line)
        if m:
            defaults[m.group(1)] = (m.group(2).strip(), lineno)
            continue
        key, colon, rest = line.partition(":")
        if colon and key.strip() == "semiring":
            if sr is None:
                sr = get_semiring(rest.strip())
            continue
        lhs, eq, rhs = line.partition("=")
        words = lhs.split()
        if not eq or len(words) != 2 or words[0] != "token":
            raise ParseError(f"unrecognized assignment line {line!r}", lineno, 1)
        try:
            raw[Token.parse(words[1])] = (rhs.strip(), lineno)
        except ProvenanceError as e:
            raise ParseError(str(e), lineno, 1) from None
    if sr is None:
        raise ParseError("assignment names no semiring")

    def conv(text, lineno):
        try:
            return Fraction(text) if exact else sr.parse_value(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not an exact number: {text!r}", lineno, 1) from None
        except ParseError as e:
            raise ParseError(str(e), lineno, 1) from None

    values = {t: conv(*v) for t, v in raw.items()}
    dpos = conv(*defaults["+"]) if "+" in defaults else None
    dneg = conv(*defaults["-"]) if "-" in defaults else None
    return sr, TokenAssignment(values, dpos, dneg)


def load_assignment_file(path: str | Path, semiring: Semiring | str | None = None, exact: bool = False):
    return load_assignment(Path(path).read_text(), semiring, exact)
