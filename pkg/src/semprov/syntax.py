"""First-order syntax: vocabularies, universes, formulas, NNF and grounding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import CapabilityError, VocabularyError


class Vocabulary:
    """Relation symbols with their arities, in declaration order."""

    def __init__(self, relations: dict[str, int] | Iterable[tuple[str, int]] = ()):
        self.relations: dict[str, int] = {}
        items = relations.items() if isinstance(relations, dict) else relations
        for name, arity in items:
            self.add(name, arity)

    def add(self, name: str, arity: int) -> None:
        if arity < 1:
            raise VocabularyError(f"relation {name} must have positive arity")
        if self.relations.get(name, arity) != arity:
            raise VocabularyError(f"relation {name} declared with arities {self.relations[name]} and {arity}")
        self.relations[name] = arity

    def arity(self, name: str) -> int:
        try:
            return self.relations[name]
        except KeyError:
            raise VocabularyError(f"unknown relation {name}") from None

    def __contains__(self, name) -> bool:
        return name in self.relations

    def __iter__(self):
        return iter(self.relations.items())

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.relations == other.relations

    def __repr__(self):
        return "Vocabulary(" + ", ".join(f"{n}/{a}" for n, a in self.relations.items()) + ")"


class Universe(tuple):
    """Ordered, duplicate-free, nonempty tuple of element names."""

    def __new__(cls, elements: Iterable[str]):
        elements = tuple(elements)
        if not elements:
            raise VocabularyError("the universe must be nonempty")
        if len(set(elements)) != len(elements):
            raise VocabularyError("universe elements must be distinct")
        return super().__new__(cls, elements)

    def check(self, value: str) -> str:
        if value not in self:
            raise VocabularyError(f"{value} is not an element of the universe")
        return value


# ---------------------------------------------------------------------------
# terms and formulas


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Value:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Value]


@dataclass(frozen=True)
class Rel:
    symbol: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Rel, Eq, Neq, Not, And, Or, Implies, Exists, Forall]
ATOMS = (Rel, Eq, Neq)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def is_literal(f: Formula) -> bool:
    return isinstance(f, ATOMS) or isinstance(f, Not) and isinstance(f.body, Rel)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return isinstance(f.body, Rel)
    if isinstance(f, Implies):
        return False
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    return is_nnf(f.body)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Rel):
        return {t.name for t in f.args if isinstance(t, Var)}
    if isinstance(f, (Eq, Neq)):
        return {t.name for t in (f.left, f.right) if isinstance(t, Var)}
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def bound_vars(f: Formula) -> set[str]:
    if isinstance(f, ATOMS):
        return set()
    if isinstance(f, Not):
        return bound_vars(f.body)
    if isinstance(f, BINARY):
        return bound_vars(f.left) | bound_vars(f.right)
    return bound_vars(f.body) | {f.var}


def formula_size(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, BINARY):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, BINARY):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def _fresh(name: str, avoid: set[str]) -> str:
    for i in itertools.count(1):
        cand = f"{name}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError


def substitute(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Replace free variables by terms, renaming binders that would capture."""
    if not mapping:
        return f

    def term(t):
        return mapping.get(t.name, t) if isinstance(t, Var) else t

    if isinstance(f, Rel):
        return Rel(f.symbol, tuple(term(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(term(f.left), term(f.right))
    if isinstance(f, Neq):
        return Neq(term(f.left), term(f.right))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    incoming = {t.name for t in inner.values() if isinstance(t, Var)}
    var, body = f.var, f.body
    if var in incoming and inner.keys() & free_vars(body):
        new = _fresh(var, incoming | free_vars(body) | bound_vars(body) | set(inner))
        body = substitute(body, {var: Var(new)})
        var = new
    return type(f)(var, substitute(body, inner))


def instantiate(f: Formula, var: str, value: str, universe: Universe | None = None) -> Formula:
    """Substitute the ground value ``value`` for the free variable ``var``."""
    if universe is not None:
        universe.check(value)
    return substitute(f, {var: Value(value)})


def nnf(f: Formula, implication: str | None = None) -> Formula:
    """Negation normal form.

    ``implication='classical'`` rewrites ``A -> B`` as ``!A | B``; without it an
    implication raises :class:`CapabilityError`, since its meaning depends on the
    semiring.
    """
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(nnf(f.left, implication), nnf(f.right, implication))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, nnf(f.body, implication))
    if isinstance(f, Implies):
        _need_classical(implication)
        return Or(nnf(Not(f.left), implication), nnf(f.right, implication))
    g = f.body
    if isinstance(g, Rel):
        return f
    if isinstance(g, Eq):
        return Neq(g.left, g.right)
    if isinstance(g, Neq):
        return Eq(g.left, g.right)
    if isinstance(g, Not):
        return nnf(g.body, implication)
    if isinstance(g, And):
        return Or(nnf(Not(g.left), implication), nnf(Not(g.right), implication))
    if isinstance(g, Or):
        return And(nnf(Not(g.left), implication), nnf(Not(g.right), implication))
    if isinstance(g, Exists):
        return Forall(g.var, nnf(Not(g.body), implication))
    if isinstance(g, Forall):
        return Exists(g.var, nnf(Not(g.body), implication))
    _need_classical(implication)
    return And(nnf(g.left, implication), nnf(Not(g.right), implication))


def _need_classical(implication):
    if implication != "classical":
        raise CapabilityError("implication needs an implication semantics (use classical, goedel or general)")


# ---------------------------------------------------------------------------
# ground literals


class GroundLiteral(NamedTuple):
    relation: str
    args: tuple
    positive: bool = True

    def negate(self) -> "GroundLiteral":
        return GroundLiteral(self.relation, self.args, not self.positive)

    @property
    def fact(self) -> "GroundLiteral":
        return GroundLiteral(self.relation, self.args, True)

    def atom_text(self) -> str:
        return f"{self.relation}({','.join(self.args)})"

    def __str__(self) -> str:
        return self.atom_text() if self.positive else "!" + self.atom_text()


def fact(relation: str, *args: str) -> GroundLiteral:
    return GroundLiteral(relation, tuple(args), True)


def ground_facts(vocab: Vocabulary, universe: Universe) -> Iterator[GroundLiteral]:
    for name, arity in vocab:
        for args in itertools.product(universe, repeat=arity):
            yield GroundLiteral(name, args, True)


def ground_literals(vocab: Vocabulary, universe: Universe) -> list[GroundLiteral]:
    """Every ground literal, each fact followed by its negation."""
    out = []
    for f in ground_facts(vocab, universe):
        out.append(f)
        out.append(f.negate())
    return out


# ---------------------------------------------------------------------------
# printing


def _term(t: Term) -> str:
    return t.name


def to_text(f: Formula) -> str:
    """Render in the input grammar; ``parse_formula(to_text(f))`` gives back ``f``."""
    if isinstance(f, Rel):
        return f"{f.symbol}({','.join(_term(t) for t in f.args)})"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    if isinstance(f, Neq):
        return f"{_term(f.left)} != {_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.body, (Rel, Not)):
            return "!" + to_text(f.body)
        return f"!({to_text(f.body)})"
    if isinstance(f, QUANTIFIERS):
        word = "exists" if isinstance(f, Exists) else "forall"
        body = to_text(f.body)
        if isinstance(f.body, Implies):
            body = f"({body})"
        return f"{word} {f.var}. {body}"
    if isinstance(f, And):
        left = _wrap(f.left, (Or, Implies) + QUANTIFIERS)
        right = _wrap(f.right, BINARY + QUANTIFIERS)
        return f"{left} & {right}"
    if isinstance(f, Or):
        left = _wrap(f.left, (Implies,) + QUANTIFIERS)
        right = _wrap(f.right, (Or, Implies) + QUANTIFIERS)
        return f"{left} | {right}"
    left = _wrap(f.left, (Implies,) + QUANTIFIERS)
    right = _wrap(f.right, QUANTIFIERS)
    return f"{left} -> {right}"


def _wrap(f: Formula, kinds) -> str:
    text = to_text(f)
    return f"({text})" if isinstance(f, kinds) else text
