"""Seeded random instances: small universes, one binary relation E."""

from __future__ import annotations

import random

from semprov import Interpretation, Poly, Structure, Universe, Vocabulary
from semprov.syntax import And, Eq, Exists, Forall, GroundLiteral, Neq, Not, Or, Rel, Value, Var, quantifier_depth

VOCAB = Vocabulary({"E": 2})
NAMES = "abc"


def universe(rng: random.Random, low: int = 2, high: int = 3) -> Universe:
    return Universe(NAMES[: rng.randint(low, high)])


def facts(U: Universe) -> list[GroundLiteral]:
    return [GroundLiteral("E", (a, b), True) for a in U for b in U]


def sentence(rng: random.Random, U: Universe, depth: int = 4, max_q: int = 3, bound: tuple = ()):
    """A random sentence; quantifier depth stays at most ``max_q``."""
    terms = [Var(v) for v in bound] + [Value(a) for a in U]

    def atom():
        k = rng.random()
        if k < 0.7:
            return Rel("E", (rng.choice(terms), rng.choice(terms)))
        return (Eq if k < 0.85 else Neq)(rng.choice(terms), rng.choice(terms))

    if depth == 0:
        return atom()
    r = rng.random()
    if r < 0.15:
        return atom()
    if r < 0.3:
        return Not(sentence(rng, U, depth - 1, max_q, bound))
    if r < 0.5:
        return And(sentence(rng, U, depth - 1, max_q, bound), sentence(rng, U, depth - 1, max_q, bound))
    if r < 0.7 or len(bound) >= max_q:
        return Or(sentence(rng, U, depth - 1, max_q, bound), sentence(rng, U, depth - 1, max_q, bound))
    v = "xyz"[len(bound)]
    body = sentence(rng, U, depth - 1, max_q, bound + (v,))
    return (Exists if r < 0.85 else Forall)(v, body)


def compatible_pi(rng: random.Random, U: Universe, tracked: float = 0.6, tag: str = "ndualpoly") -> Interpretation:
    """Model-compatible: each fact gets a token pair or a fixed truth value."""
    values = {}
    for i, f in enumerate(facts(U)):
        r = rng.random()
        if r < tracked:
            name = f"x{i}"
            values[f] = Poly.token(name, tag)
            values[f.negate()] = Poly.token("~" + name, tag)
        elif r < tracked + (1 - tracked) / 2:
            values[f], values[f.negate()] = Poly.one(tag), Poly.zero(tag)
        else:
            values[f], values[f.negate()] = Poly.zero(tag), Poly.one(tag)
    return Interpretation(tag, U, VOCAB, values, Poly.zero(tag), Poly.one(tag))


def tracking_beta(rng: random.Random, U: Universe, tracked: float = 0.7) -> Interpretation:
    """Model-defining and provenance-tracking: present facts get (x, 0), absent ones (0, ~x)."""
    values = {}
    for i, f in enumerate(facts(U)):
        present = rng.random() < 0.5
        token = rng.random() < tracked
        pos, neg = (Poly.one(), Poly.zero()) if present else (Poly.zero(), Poly.one())
        if token:
            if present:
                pos = Poly.token(f"x{i}")
            else:
                neg = Poly.token(f"~x{i}")
        values[f], values[f.negate()] = pos, neg
    return Interpretation("ndualpoly", U, VOCAB, values)


def structure(rng: random.Random, U: Universe) -> Structure:
    return Structure(U, VOCAB, [f for f in facts(U) if rng.random() < 0.5])


def compatible_structure(rng: random.Random, pi: Interpretation) -> Structure:
    chosen = []
    for f in facts(pi.universe):
        v = pi(f)
        if pi.semiring.is_one(v) or (not pi.semiring.is_zero(v) and rng.random() < 0.5):
            chosen.append(f)
    return Structure(pi.universe, VOCAB, chosen)


__all__ = [
    "VOCAB", "universe", "facts", "sentence", "compatible_pi", "tracking_beta", "structure",
    "compatible_structure", "quantifier_depth",
]
