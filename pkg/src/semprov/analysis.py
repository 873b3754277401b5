"""Applied provenance: explanations, scores, updates and repairs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from . import circuit as C
from .errors import ClassificationError, NoRepairError, PreconditionError
from .evaluator import evaluate, evaluate_circuit
from .files import CostModel
from .interpretation import (
    Interpretation, InterpretationClass, Structure, canonical_truth, classify, defined_model,
    is_provenance_tracking, literal_order, specialize,
)
from .polynomial import Monomial, Poly, Token, TokenAssignment, eval_hom, format_monomial, monomials_min
from .semirings import Semiring, get_semiring
from .syntax import Formula, GroundLiteral, Not


def _holds(A: Structure, s: Formula) -> bool:
    return bool(evaluate(canonical_truth(A), s))


def _resolve_structure(pi: Interpretation, A: Structure | None) -> Structure:
    if A is not None:
        return A
    if classify(pi) is InterpretationClass.MODEL_DEFINING:
        return defined_model(pi)
    raise PreconditionError("a structure is needed: the interpretation does not define one")


# ---------------------------------------------------------------------------
# explanations


@dataclass(frozen=True)
class Explanation:
    monomial: Monomial
    coefficient: int
    literals: tuple[GroundLiteral, ...]

    def monomial_text(self) -> str:
        return format_monomial(self.monomial, self.coefficient)

    def __str__(self) -> str:
        decoded = ", ".join(str(l) for l in self.literals)
        return f"{self.monomial_text()} : {{{decoded}}}"


def _decode(pi: Interpretation, value: Poly, minimal: bool) -> list[Explanation]:
    lookup = pi.literal_of()
    key = literal_order(pi.universe, pi.vocab)
    monos = monomials_min(value) if minimal else [m for m, _ in value.monomials()]
    out = []
    for m in monos:
        lits = sorted({lookup[t] for t in m if t in lookup}, key=key)
        out.append(Explanation(m, value.terms[m], tuple(lits)))
    return out


def explanations(pi: Interpretation, A: Structure | None, s: Formula, minimal: bool = False) -> list[Explanation]:
    """Monomials of the provenance of ``s`` in ``A``, each decoded to the literals it uses."""
    A = _resolve_structure(pi, A)
    value = evaluate(specialize(pi, A), s)
    if value.is_zero():
        raise PreconditionError("the sentence is false in the structure, so it has no explanation; ask why-not instead")
    return _decode(pi, value, minimal)


def why_not(pi: Interpretation, A: Structure | None, s: Formula, minimal: bool = False) -> list[Explanation]:
    """Explanations for the negation of a sentence that fails in ``A``."""
    A = _resolve_structure(pi, A)
    spec = specialize(pi, A)
    if not evaluate(spec, s).is_zero():
        raise PreconditionError("the sentence holds in the structure; ask for explanations instead")
    return _decode(pi, evaluate(spec, Not(s)), minimal)


# ---------------------------------------------------------------------------
# scoring


def score(value, sr: Semiring | str, assignment, *, check: bool | None = None):
    """Image of a provenance polynomial (or circuit) in another semiring."""
    sr = get_semiring(sr) if isinstance(sr, str) else sr
    return eval_hom(value, sr, assignment, check=check)


def score_monomials(value: Poly, sr: Semiring | str, assignment) -> list[tuple[Monomial, Any]]:
    """The score of every monomial on its own, in canonical order."""
    sr = get_semiring(sr) if isinstance(sr, str) else sr
    tag = value.tag
    return [(m, eval_hom(Poly(tag, {m: c}), sr, assignment)) for m, c in value.monomials()]


@dataclass(frozen=True)
class ConfidenceResult:
    monomial: Monomial
    confidence: Any
    asserted: tuple
    free: tuple[str, ...]
    inconsistent_aggregate: Any

    def monomial_text(self) -> str:
        return format_monomial(self.monomial)


def maximize_confidence(p: Poly, conf: Mapping[Token, Any], pi: Interpretation | None = None) -> ConfidenceResult:
    """The most confident single monomial.

    Summing over all monomials mixes models that assign a fact both ways, so
    that total is reported only as ``inconsistent_aggregate``.
    """
    if p.is_zero():
        raise PreconditionError("the polynomial is 0, so no model supports it")
    conf = {Token.parse(k) if isinstance(k, str) else k: v for k, v in conf.items()}
    missing = sorted(str(t) for t in p.tokens() if t not in conf)
    if missing:
        raise PreconditionError(f"no confidence for tokens: {', '.join(missing)}")
    best = None
    aggregate = 0
    for m, c in p.monomials():
        v = 1
        for t in m:
            v = v * conf[t]
        aggregate = aggregate + c * v
        if best is None or v > best[1]:
            best = (m, v)
    m, v = best
    used = {t.name for t in m}
    names = {t.name for t in p.tokens()}
    if pi is not None:
        names |= {t.name for t in pi.tracked_facts().values()}
        lookup = pi.literal_of()
        asserted = tuple(lookup.get(t, t) for t in m)
    else:
        asserted = tuple(m)
    return ConfidenceResult(m, v, asserted, tuple(sorted(names - used)), aggregate)


# ---------------------------------------------------------------------------
# updates


@dataclass(frozen=True)
class UpdatePlan:
    """Facts that may be inserted (absent now) or deleted (present now), and the chosen update."""

    insertable: frozenset = frozenset()
    deletable: frozenset = frozenset()
    chosen: frozenset = frozenset()

    def __post_init__(self):
        for name in ("insertable", "deletable", "chosen"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.insertable & self.deletable:
            raise PreconditionError("a fact cannot be both insertable and deletable")
        extra = self.chosen - self.insertable - self.deletable
        if extra:
            raise PreconditionError(f"update mentions facts outside the allowed changes: {', '.join(sorted(map(str, extra)))}")

    def choose(self, facts: Iterable[GroundLiteral]) -> "UpdatePlan":
        return UpdatePlan(self.insertable, self.deletable, frozenset(facts))

    @property
    def inserts(self) -> frozenset:
        return self.chosen & self.insertable

    @property
    def deletes(self) -> frozenset:
        return self.chosen & self.deletable


def plan_from_beta(beta: Interpretation) -> UpdatePlan:
    """Insertable facts carry (0, ~x); deletable ones carry (x, 0)."""
    sr = beta.semiring
    if classify(beta) is not InterpretationClass.MODEL_DEFINING or not is_provenance_tracking(beta):
        raise ClassificationError("updates need a model-defining, provenance-tracking interpretation")
    plus, minus = set(), set()
    for fct in beta.facts():
        pos, neg = beta(fct), beta(fct.negate())
        if sr.is_zero(pos) and neg.as_token() is not None:
            plus.add(fct)
        elif sr.is_zero(neg) and pos.as_token() is not None:
            minus.add(fct)
    return UpdatePlan(frozenset(plus), frozenset(minus))


def plan_from_structure(pi: Interpretation, A: Structure) -> UpdatePlan:
    """Tracked facts absent from ``A`` may be inserted, tracked facts present in it may be deleted."""
    tracked = pi.tracked_facts()
    return UpdatePlan(
        frozenset(f for f in tracked if f not in A.facts),
        frozenset(f for f in tracked if f in A.facts),
    )


def generalize(beta: Interpretation, plan: UpdatePlan | None = None) -> Interpretation:
    """Give every changeable fact both a positive and a negative token."""
    plan = plan_from_beta(beta) if plan is None else plan
    tag = beta.tag
    values = {}
    for fct in plan.insertable:
        neg = beta(fct.negate()).as_token()
        values[fct] = Poly.token(neg.twin(), tag)
    for fct in plan.deletable:
        pos = beta(fct).as_token()
        values[fct.negate()] = Poly.token(pos.twin(), tag)
    return beta.with_values(values)


def _zeroed_tokens(pi: Interpretation, plan: UpdatePlan) -> set[Token]:
    zero = set()
    for fct in plan.insertable:
        x = pi.token_of(fct)
        zero.add(x.twin() if fct in plan.chosen else x)
    for fct in plan.deletable:
        x = pi.token_of(fct)
        zero.add(x if fct in plan.chosen else x.twin())
    return zero


def rebuild_beta(beta: Interpretation, plan: UpdatePlan) -> Interpretation:
    """The tracking interpretation of the updated structure, written out directly."""
    tag, sr = beta.tag, beta.semiring
    pi = generalize(beta, plan)
    values = {}
    for fct in plan.insertable | plan.deletable:
        x = pi.token_of(fct)
        present = (fct in plan.deletable) != (fct in plan.chosen)
        if present:
            values[fct], values[fct.negate()] = Poly.token(x, tag), sr.zero
        else:
            values[fct], values[fct.negate()] = sr.zero, Poly.token(x.twin(), tag)
    return beta.with_values(values)


class IncrementalProvenance:
    """Provenance of one sentence, computed once and then specialized to any update."""

    def __init__(self, beta: Interpretation, s: Formula, plan: UpdatePlan | None = None):
        self.beta = beta
        self.sentence = s
        self.plan = plan_from_beta(beta) if plan is None else plan
        self.general = generalize(beta, self.plan)
        self.value: Poly = evaluate(self.general, s)

    def update(self, chosen: Iterable[GroundLiteral]) -> Poly:
        plan = self.plan.choose(chosen)
        return self.value.substitute_zero(_zeroed_tokens(self.general, plan))


def update_provenance(beta: Interpretation, plan: UpdatePlan, s: Formula) -> Poly:
    """Provenance of ``s`` after applying ``plan.chosen``, derived from the generalized provenance."""
    return IncrementalProvenance(beta, s, plan).update(plan.chosen)


# ---------------------------------------------------------------------------
# repairs


@dataclass(frozen=True)
class Repair:
    inserts: frozenset = frozenset()
    deletes: frozenset = frozenset()

    @property
    def facts(self) -> frozenset:
        return self.inserts | self.deletes

    def apply(self, A: Structure) -> Structure:
        return A.updated(self.inserts, self.deletes)

    def describe(self, key=None) -> str:
        ins = sorted(self.inserts, key=key)
        dels = sorted(self.deletes, key=key)
        parts = [f"insert {f.atom_text()}" for f in ins] + [f"delete {f.atom_text()}" for f in dels]
        return "; ".join(parts) if parts else "no change"

    def __str__(self) -> str:
        return self.describe()


def _sort_repairs(repairs: Iterable[Repair], key) -> list[Repair]:
    return sorted(set(repairs), key=lambda r: (len(r.facts), sorted(key(f) for f in r.facts)))


def minimal_repairs(repairs: Iterable[Repair]) -> list[Repair]:
    repairs = sorted(set(repairs), key=lambda r: len(r.facts))
    kept: list[Repair] = []
    for r in repairs:
        if not any(k.facts <= r.facts for k in kept):
            kept.append(r)
    return kept


def repair_context(pi: Interpretation, A: Structure | None, plan: UpdatePlan | None):
    """The model-compatible interpretation, base structure and plan that repairs work from."""
    if classify(pi) is InterpretationClass.MODEL_DEFINING and is_provenance_tracking(pi) and plan is None:
        base = defined_model(pi)
        if A is not None and A != base:
            raise PreconditionError("the structure differs from the one the interpretation defines")
        plan = plan_from_beta(pi)
        return generalize(pi, plan), base, plan
    if classify(pi) is not InterpretationClass.MODEL_COMPATIBLE:
        raise ClassificationError("repairs need a model-compatible interpretation or a tracking model-defining one")
    if A is None:
        raise PreconditionError("a structure is needed to compute repairs")
    return pi, A, plan_from_structure(pi, A) if plan is None else plan


def _verify(A: Structure, s: Formula, repairs: Iterable[Repair]) -> list[Repair]:
    return [r for r in repairs if _holds(r.apply(A), s)]


def repairs_from_monomials(
    pi: Interpretation,
    s: Formula,
    plan: UpdatePlan | None = None,
    A: Structure | None = None,
    *,
    minimal: bool = True,
) -> list[Repair]:
    """Read repairs off the monomials of the provenance of ``s``.

    A monomial asserts some changeable literals; the facts whose change it
    asserts form a repair.  ``pi`` is either model-compatible (then ``A`` is
    the structure to repair) or a tracking model-defining interpretation
    (then the structure is the one it defines).
    """
    pi, A, plan = repair_context(pi, A, plan)
    value = evaluate(pi, s)
    if value.is_zero():
        raise NoRepairError("no repair exists within the allowed insertions and deletions")
    changes: dict[Token, tuple[str, GroundLiteral]] = {}
    for fct in plan.insertable:
        changes[pi.token_of(fct)] = ("insert", fct)
    for fct in plan.deletable:
        changes[pi.token_of(fct).twin()] = ("delete", fct)
    found = set()
    for m in value.terms:
        ins, dels = set(), set()
        for t in m:
            if t in changes:
                kind, fct = changes[t]
                (ins if kind == "insert" else dels).add(fct)
        found.add(Repair(frozenset(ins), frozenset(dels)))
    key = literal_order(pi.universe, pi.vocab)
    repairs = minimal_repairs(found) if minimal else list(found)
    verified = _verify(A, s, repairs)
    if len(verified) != len(repairs):
        raise AssertionError("a monomial produced an update that does not satisfy the sentence")
    return _sort_repairs(verified, key)


@dataclass
class EquationRepairs:
    """Solutions of ``provenance(not s) = 0``: token sets to zero and the repairs they encode."""

    solutions: list[frozenset]
    repairs: list[Repair]
    fallback: bool = False
    notice: str = ""
    circuit: C.Circuit | None = None


def zeroing_sets(c: C.Circuit, limit: int = 10_000) -> list[frozenset] | None:
    """Inclusion-minimal token sets whose zeroing makes the circuit 0.

    A sum vanishes when every summand does, a product when one factor does.
    Returns ``None`` when an intermediate family grows past ``limit``.
    """

    class _TooMany(Exception):
        pass

    def minimize(family):
        ordered = sorted(set(family), key=len)
        kept: list[frozenset] = []
        for y in ordered:
            if not any(k <= y for k in kept):
                kept.append(y)
        if len(kept) > limit:
            raise _TooMany
        return kept

    def step(node, vals):
        if node.kind == C.ZERO:
            return [frozenset()]
        if node.kind == C.ONE:
            return []
        if node.kind == C.TOKEN:
            return [frozenset([node.token])]
        if node.kind == C.PROD:
            return minimize(y for fam in vals for y in fam)
        acc = [frozenset()]
        for fam in vals:
            if not fam:
                return []
            acc = minimize(a | b for a in acc for b in fam)
        return acc

    try:
        return c.fold(step)
    except _TooMany:
        return None


def repairs_by_equation(
    pi: Interpretation,
    A: Structure | None,
    s: Formula,
    plan: UpdatePlan | None = None,
    *,
    limit: int = 10_000,
) -> EquationRepairs:
    """Repairs from the minimal solutions of ``specialize(pi, A)[not s] = 0``.

    Every solution is checked by re-evaluating ``s`` on the repaired
    structure.  If the solution family grows past ``limit``, or a solution
    fails the check (an insertion can open a new way to falsify ``s``), the
    answer comes from :func:`repairs_from_monomials` instead and
    ``fallback`` is set.
    """
    pi, A, plan = repair_context(pi, A, plan)
    if _holds(A, s):
        raise PreconditionError("the sentence already holds; nothing to repair")
    spec = specialize(pi, A)
    circ = evaluate_circuit(spec, Not(s))
    sols = zeroing_sets(circ, limit)
    key = literal_order(pi.universe, pi.vocab)

    def fallback(reason):
        reps = repairs_from_monomials(pi, s, plan, A, minimal=True)
        return EquationRepairs(sols or [], reps, True, reason, circ)

    if sols is None:
        return fallback(f"more than {limit} partial solutions; used the monomial method")
    if not sols:
        raise NoRepairError("no repair exists within the allowed insertions and deletions")
    by_token: dict[Token, tuple[str, GroundLiteral]] = {}
    for fct in plan.insertable:
        by_token[pi.token_of(fct).twin()] = ("insert", fct)
    for fct in plan.deletable:
        by_token[pi.token_of(fct)] = ("delete", fct)
    candidates = set()
    for y in sols:
        if any(t not in by_token for t in y):
            continue
        ins = frozenset(by_token[t][1] for t in y if by_token[t][0] == "insert")
        dels = frozenset(by_token[t][1] for t in y if by_token[t][0] == "delete")
        candidates.add(Repair(ins, dels))
    if not candidates:
        raise NoRepairError("no repair exists within the allowed insertions and deletions")
    candidates = minimal_repairs(candidates)
    if len(_verify(A, s, candidates)) != len(candidates):
        return fallback("a solution did not verify; used the monomial method")
    ordered_sols = sorted(sols, key=lambda y: (len(y), sorted(y)))
    return EquationRepairs(ordered_sols, _sort_repairs(candidates, key), False, "", circ)


@dataclass(frozen=True)
class RankedRepair:
    repair: Repair
    provenance: Poly
    best_monomial: Monomial
    cost: float


def rank_repairs(
    repairs: Iterable[Repair],
    pi: Interpretation,
    A: Structure | None,
    s: Formula,
    cost: CostModel,
) -> list[RankedRepair]:
    """Cost every repair in the tropical semiring and sort, cheapest first.

    The provenance of ``s`` in the repaired structure is scored with inserted
    facts at the insertion cost, deleted facts (their negative tokens) at the
    deletion cost, and every other literal at its own token cost.
    """
    pi, A, plan = repair_context(pi, A, None)
    trop = get_semiring("tropical")
    key = literal_order(pi.universe, pi.vocab)
    out = []
    for rep in repairs:
        B = rep.apply(A)
        value = evaluate(specialize(pi, B), s)
        if value.is_zero():
            raise PreconditionError(f"'{rep.describe(key)}' does not satisfy the sentence")
        costs: dict[Token, float] = {}
        for fct, x in pi.tracked_facts().items():
            if fct in B.facts:
                costs[x.twin()] = math.inf
                costs[x] = cost.insert if fct in rep.inserts else cost.tokens.get(x)
            else:
                costs[x] = math.inf
                costs[x.twin()] = cost.delete if fct in rep.deletes else cost.tokens.get(x.twin())
        for tok in value.tokens():
            if costs.get(tok) is None and tok in cost.tokens:
                costs[tok] = cost.tokens[tok]
        missing = sorted(str(t) for t in value.tokens() if costs.get(t) is None)
        if missing:
            raise PreconditionError(f"no cost for tokens: {', '.join(missing)}")
        f = TokenAssignment({t: c for t, c in costs.items() if c is not None})
        total = eval_hom(value, trop, f)
        per = [(sum(costs[t] for t in m), m) for m, _ in value.monomials()]
        best = min(per, key=lambda x: x[0])[1]
        out.append(RankedRepair(rep, value, best, total))
    out.sort(key=lambda r: (r.cost, len(r.repair.facts), sorted(key(f) for f in r.repair.facts)))
    return out
