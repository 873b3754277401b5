"""Semiring interpretations of ground literals and the structures they describe."""

from __future__ import annotations

import enum
from typing import Any, Iterable, Iterator, Mapping

from .errors import ClassificationError, PreconditionError, VocabularyError
from .polynomial import QUOTIENT_TAGS, Poly, PolySemiring, Token
from .semirings import Semiring, get_semiring
from .syntax import GroundLiteral, Universe, Vocabulary, ground_facts


class Structure:
    """A finite relational structure: the set of true facts."""

    def __init__(self, universe: Universe, vocab: Vocabulary, facts: Iterable[GroundLiteral] = ()):
        self.universe = universe if isinstance(universe, Universe) else Universe(universe)
        self.vocab = vocab
        checked = set()
        for f in facts:
            if not f.positive:
                raise VocabularyError(f"structures hold facts, not negated facts: {f}")
            _check_literal(f, self.universe, vocab)
            checked.add(f)
        self.facts = frozenset(checked)

    def holds(self, lit: GroundLiteral) -> bool:
        return (lit.fact in self.facts) == lit.positive

    def updated(self, inserts: Iterable[GroundLiteral] = (), deletes: Iterable[GroundLiteral] = ()) -> "Structure":
        return Structure(self.universe, self.vocab, (self.facts - set(deletes)) | set(inserts))

    def sorted_facts(self) -> list[GroundLiteral]:
        key = literal_order(self.universe, self.vocab)
        return sorted(self.facts, key=key)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Structure)
            and self.universe == other.universe
            and self.vocab == other.vocab
            and self.facts == other.facts
        )

    def __hash__(self):
        return hash((tuple(self.universe), self.facts))

    def __repr__(self) -> str:
        return "Structure{" + ", ".join(str(f) for f in self.sorted_facts()) + "}"


def literal_order(universe: Universe, vocab: Vocabulary):
    """Sort key following relation declaration order, then universe order, positive first."""
    rel_index = {name: i for i, (name, _) in enumerate(vocab)}
    el_index = {e: i for i, e in enumerate(universe)}

    def key(lit: GroundLiteral):
        return (rel_index[lit.relation], tuple(el_index[a] for a in lit.args), not lit.positive)

    return key


def _check_literal(lit: GroundLiteral, universe: Universe, vocab: Vocabulary) -> None:
    if lit.relation not in vocab:
        raise VocabularyError(f"unknown relation {lit.relation}")
    if vocab.arity(lit.relation) != len(lit.args):
        raise VocabularyError(f"{lit.atom_text()} does not match arity {vocab.arity(lit.relation)}")
    for a in lit.args:
        universe.check(a)


class InterpretationClass(str, enum.Enum):
    MODEL_DEFINING = "model-defining"
    MODEL_COMPATIBLE = "model-compatible"
    NEITHER = "neither"

    def __str__(self) -> str:
        return self.value


class Interpretation:
    """A total map from ground literals to semiring values.

    Only the listed literals are stored; every other fact takes
    ``default_positive`` and every other negated fact ``default_negative``.
    ``relaxed`` permits one token to annotate several literals.
    """

    def __init__(
        self,
        semiring: Semiring | str,
        universe: Universe,
        vocab: Vocabulary,
        values: Mapping[GroundLiteral, Any] | None = None,
        default_positive: Any = None,
        default_negative: Any = None,
        *,
        relaxed: bool = False,
    ):
        self.semiring = get_semiring(semiring) if isinstance(semiring, str) else semiring
        self.universe = universe if isinstance(universe, Universe) else Universe(universe)
        self.vocab = vocab
        sr = self.semiring
        self.default_positive = sr.check(sr.zero if default_positive is None else default_positive)
        self.default_negative = sr.check(sr.one if default_negative is None else default_negative)
        self.values: dict[GroundLiteral, Any] = {}
        for lit, v in (values or {}).items():
            _check_literal(lit, self.universe, vocab)
            self.values[lit] = sr.check(v)
        self.relaxed = relaxed

    def __call__(self, lit: GroundLiteral):
        v = self.values.get(lit)
        if v is not None:
            return v
        return self.default_positive if lit.positive else self.default_negative

    value = __call__

    def facts(self) -> Iterator[GroundLiteral]:
        return ground_facts(self.vocab, self.universe)

    def with_values(self, values: Mapping[GroundLiteral, Any]) -> "Interpretation":
        merged = dict(self.values)
        merged.update(values)
        return Interpretation(
            self.semiring, self.universe, self.vocab, merged,
            self.default_positive, self.default_negative, relaxed=self.relaxed,
        )

    def map_values(self, fn, semiring: Semiring | str | None = None) -> "Interpretation":
        """Compose with ``fn`` (e.g. a homomorphism), applied to every stored value and both defaults."""
        sr = self.semiring if semiring is None else semiring
        return Interpretation(
            sr, self.universe, self.vocab, {k: fn(v) for k, v in self.values.items()},
            fn(self.default_positive), fn(self.default_negative), relaxed=self.relaxed,
        )

    @property
    def tag(self) -> str | None:
        return self.semiring.tag if isinstance(self.semiring, PolySemiring) else None

    def token_of(self, lit: GroundLiteral) -> Token | None:
        v = self(lit)
        return v.as_token() if isinstance(v, Poly) else None

    def literal_of(self) -> dict[Token, GroundLiteral]:
        """Decode tokens back to the literal they annotate (first in canonical order wins)."""
        out: dict[Token, GroundLiteral] = {}
        for fct in self.facts():
            for lit in (fct, fct.negate()):
                tok = self.token_of(lit)
                if tok is not None and tok not in out:
                    out[tok] = lit
        return out

    def tracked_facts(self) -> dict[GroundLiteral, Token]:
        """Facts annotated with a complementary token pair, mapped to the positive token."""
        out = {}
        for fct in self.facts():
            pos, neg = self.token_of(fct), self.token_of(fct.negate())
            if pos is not None and neg is not None and not pos.negative and neg == pos.twin():
                out[fct] = pos
        return out

    def __repr__(self) -> str:
        return f"Interpretation({self.semiring.name}, {len(self.values)} literals)"


# ---------------------------------------------------------------------------
# classification


def model_defining_violations(pi: Interpretation) -> list[GroundLiteral]:
    sr = pi.semiring
    bad = []
    for fct in pi.facts():
        if sr.is_zero(pi(fct)) == sr.is_zero(pi(fct.negate())):
            bad.append(fct)
    return bad


def classify(pi: Interpretation) -> InterpretationClass:
    if not model_defining_violations(pi):
        return InterpretationClass.MODEL_DEFINING
    if pi.tag not in QUOTIENT_TAGS:
        return InterpretationClass.NEITHER
    sr = pi.semiring
    seen: set[Token] = set()
    for fct in pi.facts():
        pos, neg = pi(fct), pi(fct.negate())
        if (sr.is_zero(pos) and sr.is_one(neg)) or (sr.is_one(pos) and sr.is_zero(neg)):
            continue
        a, b = pos.as_token(), neg.as_token()
        if a is None or b is None or a.negative or b != a.twin():
            return InterpretationClass.NEITHER
        if a in seen:
            return InterpretationClass.NEITHER
        seen.add(a)
    return InterpretationClass.MODEL_COMPATIBLE


def is_provenance_tracking(pi: Interpretation) -> bool:
    """Facts carry positive tokens or constants, negated facts negative tokens or constants."""
    if pi.tag is None:
        return False
    sr = pi.semiring
    used: set[Token] = set()
    for fct in pi.facts():
        for lit in (fct, fct.negate()):
            v = pi(lit)
            if sr.is_zero(v) or sr.is_one(v):
                continue
            tok = v.as_token()
            if tok is None or tok.negative == lit.positive:
                return False
            if tok in used and not pi.relaxed:
                return False
            used.add(tok)
    return True


def defined_model(pi: Interpretation) -> Structure:
    bad = model_defining_violations(pi)
    if bad:
        shown = ", ".join(str(f) for f in bad[:5]) + (" ..." if len(bad) > 5 else "")
        raise ClassificationError(f"interpretation is not model-defining; violating facts: {shown}")
    sr = pi.semiring
    return Structure(pi.universe, pi.vocab, (f for f in pi.facts() if not sr.is_zero(pi(f))))


def canonical_truth(A: Structure) -> Interpretation:
    return _canonical(A, "bool")


def canonical_counting(A: Structure) -> Interpretation:
    return _canonical(A, "nat")


def _canonical(A: Structure, name: str) -> Interpretation:
    sr = get_semiring(name)
    values = {}
    for f in A.facts:
        values[f] = sr.one
        values[f.negate()] = sr.zero
    return Interpretation(sr, A.universe, A.vocab, values, sr.zero, sr.one)


def _require_compatible_class(pi: Interpretation) -> None:
    cls = classify(pi)
    if cls is InterpretationClass.NEITHER:
        raise ClassificationError("interpretation is neither model-defining nor model-compatible")


def incompatibilities(pi: Interpretation, A: Structure) -> list[GroundLiteral]:
    sr = pi.semiring
    out = []
    for fct in pi.facts():
        for lit in (fct, fct.negate()):
            if sr.is_one(pi(lit)) and not A.holds(lit):
                out.append(lit)
    return out


def compatible(pi: Interpretation, A: Structure) -> bool:
    """Whether ``A`` satisfies every literal that ``pi`` maps to 1."""
    _require_compatible_class(pi)
    return not incompatibilities(pi, A)


def specialize(pi: Interpretation, A: Structure) -> Interpretation:
    """Zero every literal that is false in ``A``."""
    _require_compatible_class(pi)
    bad = incompatibilities(pi, A)
    if bad:
        raise PreconditionError(f"structure is not compatible with the interpretation: it violates {bad[0]}")
    sr = pi.semiring
    values = {}
    for fct in pi.facts():
        for lit in (fct, fct.negate()):
            v = pi(lit) if A.holds(lit) else sr.zero
            default = pi.default_positive if lit.positive else pi.default_negative
            if not sr.eq(v, default):
                values[lit] = v
    return Interpretation(sr, pi.universe, pi.vocab, values, pi.default_positive, pi.default_negative, relaxed=pi.relaxed)
