"""Semiring semantics of first-order sentences.

Disjunction and existential quantification are semiring sums; conjunction
and universal quantification are products; (in)equalities evaluate to 0 or 1
and are never tracked.  Negation is pushed to the atoms first, so a negated
atom is looked up as the annotation of the negated fact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import circuit as C
from .errors import CapabilityError, ClassificationError, ExpansionCapError, VocabularyError
from .interpretation import Interpretation, InterpretationClass, classify
from .polynomial import Poly, expansion_cap, gc_paused
from .syntax import (
    And, Eq, Exists, Forall, Formula, GroundLiteral, Implies, Neq, Not, Or, Rel, Var,
    free_vars, nnf,
)

IMPLICATION_MODES = (None, "classical", "goedel", "general")


def prepare(s: Formula, implication: str | None = None) -> Formula:
    """Push negations to the atoms.

    With ``goedel`` or ``general`` implication the ``->`` nodes are kept and
    evaluated through the semiring's implication; a negated implication has
    no compositional meaning there and is rejected.
    """
    if implication not in IMPLICATION_MODES:
        raise CapabilityError(f"unknown implication semantics {implication!r}")
    if implication in (None, "classical"):
        return nnf(s, implication)
    return _push(s)


def _push(f: Formula) -> Formula:
    if isinstance(f, Implies):
        return Implies(_push(f.left), _push(f.right))
    if isinstance(f, (And, Or)):
        return type(f)(_push(f.left), _push(f.right))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _push(f.body))
    if isinstance(f, Not) and _mentions_implies(f.body):
        raise CapabilityError("a negated implication has no meaning under residual implication")
    return nnf(f)


def _mentions_implies(f: Formula) -> bool:
    if isinstance(f, Implies):
        return True
    if isinstance(f, (And, Or)):
        return _mentions_implies(f.left) or _mentions_implies(f.right)
    if isinstance(f, (Not, Exists, Forall)):
        return _mentions_implies(f.body)
    return False


def _check_sentence(pi: Interpretation, s: Formula) -> None:
    free = free_vars(s)
    if free:
        raise VocabularyError(f"not a sentence: free variable {sorted(free)[0]}")
    _check_vocab(pi, s)


def _check_vocab(pi: Interpretation, f: Formula) -> None:
    if isinstance(f, Rel):
        if f.symbol not in pi.vocab or pi.vocab.arity(f.symbol) != len(f.args):
            raise VocabularyError(f"{f.symbol}/{len(f.args)} is not in the vocabulary")
        for t in f.args:
            if not isinstance(t, Var):
                pi.universe.check(t.name)
    elif isinstance(f, (Eq, Neq)):
        for t in (f.left, f.right):
            if not isinstance(t, Var):
                pi.universe.check(t.name)
    elif isinstance(f, (And, Or, Implies)):
        _check_vocab(pi, f.left)
        _check_vocab(pi, f.right)
    else:
        _check_vocab(pi, f.body)


def _resolve(t, env):
    return env[t.name] if isinstance(t, Var) else t.name


def literal_at(f: Formula, env: dict) -> GroundLiteral:
    """The ground literal of an atom or negated atom under ``env``."""
    if isinstance(f, Not):
        return literal_at(f.body, env).negate()
    return GroundLiteral(f.symbol, tuple(_resolve(t, env) for t in f.args), True)


@dataclass(frozen=True)
class _Algebra:
    leaf: Callable[[GroundLiteral], Any]
    zero: Any
    one: Any
    add: Callable[[list], Any]
    mul: Callable[[list], Any]
    implies: Callable[[Any, Any], Any] | None = None


def _fold(f: Formula, universe, alg: _Algebra, env: dict):
    if isinstance(f, Rel) or isinstance(f, Not):
        return alg.leaf(literal_at(f, env))
    if isinstance(f, Eq):
        return alg.one if _resolve(f.left, env) == _resolve(f.right, env) else alg.zero
    if isinstance(f, Neq):
        return alg.zero if _resolve(f.left, env) == _resolve(f.right, env) else alg.one
    if isinstance(f, And):
        return alg.mul([_fold(f.left, universe, alg, env), _fold(f.right, universe, alg, env)])
    if isinstance(f, Or):
        return alg.add([_fold(f.left, universe, alg, env), _fold(f.right, universe, alg, env)])
    if isinstance(f, Implies):
        if alg.implies is None:
            raise CapabilityError("implication needs an implication semantics")
        return alg.implies(_fold(f.left, universe, alg, env), _fold(f.right, universe, alg, env))
    vals = [_fold(f.body, universe, alg, {**env, f.var: a}) for a in universe]
    return alg.add(vals) if isinstance(f, Exists) else alg.mul(vals)


def evaluate(pi: Interpretation, s: Formula, implication: str | None = None, *, cap: int | None = None):
    """The value of the sentence ``s`` under ``pi``.

    Polynomial values are bounded by the expansion cap (``cap`` or the
    configured default); exceeding it raises :class:`ExpansionCapError`.
    """
    _check_sentence(pi, s)
    sr = pi.semiring
    implies = None
    if implication == "goedel":
        implies = sr.goedel_implies
    elif implication == "general":
        implies = sr.general_implies
    if implication in ("goedel", "general"):
        flag = "supports_goedel_implication" if implication == "goedel" else "supports_general_implication"
        if not getattr(sr.flags, flag):
            raise CapabilityError(f"{sr.name} does not support {implication} implication")
    add, mul = sr.sum, sr.prod
    if pi.tag is not None:
        add, mul = _capped(expansion_cap() if cap is None else cap)
    alg = _Algebra(pi, sr.zero, sr.one, add, mul, implies)
    with gc_paused():
        return _fold(prepare(s, implication), pi.universe, alg, {})


def _capped(cap: int):
    """Polynomial sum and product that refuse to grow past ``cap`` monomials."""

    def add(vals):
        acc = vals[0]
        for v in vals[1:]:
            acc = acc + v
        if len(acc) > cap:
            raise ExpansionCapError(cap, len(acc))
        return acc

    def mul(vals):
        acc = vals[0]
        for v in vals[1:]:
            acc = acc.mul(v, cap)
        return acc

    return add, mul


def value_circuit(v) -> C.Circuit:
    if not isinstance(v, Poly):
        raise CapabilityError("circuits need a polynomial-valued interpretation")
    if v.is_zero():
        return C.zero()
    if v.is_one():
        return C.one()
    tok = v.as_token()
    return C.leaf(tok) if tok is not None else C.from_poly(v)


def evaluate_circuit(pi: Interpretation, s: Formula, *, fold: bool = True, implication: str | None = None) -> C.Circuit:
    """The unexpanded provenance of ``s`` as a shared circuit.

    ``fold=False`` keeps constant leaves, giving the exact shape of the
    semantics (this is the form that dualizes to the negated sentence).
    """
    if pi.tag is None:
        raise CapabilityError(f"circuits need a polynomial semiring, not {pi.semiring.name}")
    if implication not in (None, "classical"):
        raise CapabilityError("circuits support only classical implication")
    _check_sentence(pi, s)
    cache: dict[GroundLiteral, C.Circuit] = {}

    def leaf(lit):
        c = cache.get(lit)
        if c is None:
            c = cache[lit] = value_circuit(pi(lit))
        return c

    alg = _Algebra(
        leaf, C.zero(), C.one(),
        lambda xs: C.add(*xs, fold=fold),
        lambda xs: C.mul(*xs, fold=fold),
    )
    return _fold(prepare(s, implication), pi.universe, alg, {})


@dataclass(frozen=True)
class DoubleValue:
    positive: Any
    negative: Any

    def swap(self) -> "DoubleValue":
        return DoubleValue(self.negative, self.positive)

    def __iter__(self):
        return iter((self.positive, self.negative))


def evaluate_double(pi: Interpretation, s: Formula, implication: str | None = None) -> DoubleValue:
    """The pair (value of ``s``, value of its negation), computed in one pass."""
    _check_sentence(pi, s)
    sr = pi.semiring
    if implication not in (None, "classical"):
        raise CapabilityError("double valuations support only classical implication")

    def go(f, env) -> DoubleValue:
        if isinstance(f, Rel):
            lit = literal_at(f, env)
            return DoubleValue(pi(lit), pi(lit.negate()))
        if isinstance(f, (Eq, Neq)):
            same = _resolve(f.left, env) == _resolve(f.right, env)
            if isinstance(f, Neq):
                same = not same
            return DoubleValue(sr.one, sr.zero) if same else DoubleValue(sr.zero, sr.one)
        if isinstance(f, Not):
            return go(f.body, env).swap()
        if isinstance(f, Implies):
            if implication != "classical":
                raise CapabilityError("implication needs an implication semantics")
            return go(Or(Not(f.left), f.right), env)
        if isinstance(f, And):
            a, b = go(f.left, env), go(f.right, env)
            return DoubleValue(sr.mul(a.positive, b.positive), sr.add(a.negative, b.negative))
        if isinstance(f, Or):
            a, b = go(f.left, env), go(f.right, env)
            return DoubleValue(sr.add(a.positive, b.positive), sr.mul(a.negative, b.negative))
        vals = [go(f.body, {**env, f.var: a}) for a in pi.universe]
        pos = [v.positive for v in vals]
        neg = [v.negative for v in vals]
        if isinstance(f, Exists):
            return DoubleValue(sr.sum(pos), sr.prod(neg))
        return DoubleValue(sr.prod(pos), sr.sum(neg))

    return go(s, {})


def evaluate_with_flattening(pi: Interpretation, s: Formula):
    """Compositional semantics in which a non-atomic negation maps 0 to 1 and everything else to 0."""
    _check_sentence(pi, s)
    sr = pi.semiring

    def go(f, env):
        if isinstance(f, Rel):
            return pi(literal_at(f, env))
        if isinstance(f, Not):
            if isinstance(f.body, Rel):
                return pi(literal_at(f, env))
            return sr.flatten_negate(go(f.body, env))
        if isinstance(f, Eq):
            return sr.one if _resolve(f.left, env) == _resolve(f.right, env) else sr.zero
        if isinstance(f, Neq):
            return sr.zero if _resolve(f.left, env) == _resolve(f.right, env) else sr.one
        if isinstance(f, Implies):
            raise CapabilityError("implication needs an implication semantics")
        if isinstance(f, And):
            return sr.mul(go(f.left, env), go(f.right, env))
        if isinstance(f, Or):
            return sr.add(go(f.left, env), go(f.right, env))
        vals = [go(f.body, {**env, f.var: a}) for a in pi.universe]
        return sr.sum(vals) if isinstance(f, Exists) else sr.prod(vals)

    return go(s, {})


def _require_model_compatible(pi: Interpretation) -> None:
    if classify(pi) is not InterpretationClass.MODEL_COMPATIBLE:
        raise ClassificationError("this question needs a model-compatible interpretation")


def sat_in_mod(pi: Interpretation, s: Formula, implication: str | None = None) -> bool:
    """Whether some structure compatible with ``pi`` satisfies ``s``."""
    _require_model_compatible(pi)
    return not pi.semiring.is_zero(evaluate(pi, s, implication))


def valid_in_mod(pi: Interpretation, s: Formula, implication: str | None = None) -> bool:
    """Whether every structure compatible with ``pi`` satisfies ``s``."""
    _require_model_compatible(pi)
    return pi.semiring.is_zero(evaluate(pi, Not(s), implication))
