import random

import pytest

from semprov import (
    CapabilityError, ClassificationError, Interpretation, Structure, TokenAssignment, Universe, Vocabulary,
    canonical_counting, canonical_truth, eval_hom, evaluate, evaluate_circuit, evaluate_double,
    evaluate_with_flattening, get_semiring, parse_poly, sat_in_mod, valid_in_mod,
)
from semprov import circuit as C
from semprov.parser import parse_formula
from semprov.syntax import GroundLiteral, Not, nnf

import instances as inst

G_BETA = "p*q*~r + p*q*t + p*~r + p*~r*~s + p*~s*t + p*t"
PHI_NEG = "p*r*~t + ~p*q*~s*t"


@pytest.fixture
def pairs(load):
    doc = load("pairs5.txt")
    return doc, doc.parse_formula("forall x. !dominant(x)")


def test_dominant_vertex_provenance(load):
    doc = load("g_beta.txt")
    phi = doc.parse_formula("forall x. !dominant(x)")
    assert evaluate(doc.interpretation, phi) == parse_poly(G_BETA)
    assert evaluate(doc.interpretation, Not(phi)).is_zero()


def test_reverse_analysis(pairs):
    doc, phi = pairs
    value = evaluate(doc.interpretation, phi)
    assert len(value) == 30
    assert evaluate(doc.interpretation, Not(phi)) == parse_poly(PHI_NEG)


def test_nnf_invariance(pairs):
    doc, phi = pairs
    pi = doc.interpretation
    assert evaluate(pi, phi) == evaluate(pi, nnf(phi))
    assert evaluate(pi, Not(phi)) == evaluate(pi, nnf(Not(phi)))


def test_fundamental_property_random():
    rng = random.Random(3)
    nat = get_semiring("nat")
    for _ in range(60):
        U = inst.universe(rng)
        pi = inst.compatible_pi(rng, U)
        table = {}
        for t in sorted({t.name for f in inst.facts(U) for t in pi(f).tokens()}):
            v = rng.randint(0, 4)
            side = rng.random() < 0.5
            table["~" + t if side else t] = v
            table[t if side else "~" + t] = 0
        f = TokenAssignment(table, 0, 0)
        image = {}
        for lit in inst.facts(U):
            for l in (lit, lit.negate()):
                image[l] = eval_hom(pi(l), nat, f)
        h_pi = Interpretation(nat, U, inst.VOCAB, image)
        s = inst.sentence(rng, U)
        assert eval_hom(evaluate(pi, s), nat, f) == evaluate(h_pi, s)


def test_double_valuation_matches_pair():
    rng = random.Random(4)
    for _ in range(60):
        U = inst.universe(rng)
        pi = inst.compatible_pi(rng, U)
        s = inst.sentence(rng, U)
        d = evaluate_double(pi, s)
        assert d.positive == evaluate(pi, s)
        assert d.negative == evaluate(pi, Not(s))
        assert evaluate_double(pi, Not(s)) == d.swap()


def test_duality_of_circuits():
    rng = random.Random(6)
    for _ in range(60):
        U = inst.universe(rng)
        pi = inst.compatible_pi(rng, U)
        s = inst.sentence(rng, U)
        c = evaluate_circuit(pi, s, fold=False)
        assert C.dualize(c).expand() == evaluate(pi, Not(s))
        assert evaluate_circuit(pi, s).expand() == evaluate(pi, s)


def test_duality_on_worked_example(pairs):
    doc, phi = pairs
    c = evaluate_circuit(doc.interpretation, Not(phi), fold=False)
    assert len(C.dualize(c).expand()) == 30


def test_universe_order_does_not_matter():
    rng = random.Random(8)
    for _ in range(30):
        U = inst.universe(rng, 3, 3)
        pi = inst.compatible_pi(rng, U)
        s = inst.sentence(rng, U)
        shuffled = Universe(list(reversed(list(U))))
        other = Interpretation(pi.semiring, shuffled, inst.VOCAB,
                               {l: pi(l) for f in inst.facts(U) for l in (f, f.negate())},
                               pi.default_positive, pi.default_negative)
        assert evaluate(other, s) == evaluate(pi, s)


def test_flattening_examples(load):
    doc = load("g_beta.txt")
    pi = doc.interpretation
    f = doc.parse_formula
    assert evaluate_with_flattening(pi, f("!!E(a,b)")) == parse_poly("1")
    assert evaluate_with_flattening(pi, f("!(E(a,b) & E(b,c))")).is_zero()
    assert evaluate_with_flattening(pi, f("!E(a,c)")) == parse_poly("~r")


def test_sat_and_valid(pairs, load, data_dir):
    doc, phi = pairs
    pi = doc.interpretation
    assert sat_in_mod(pi, phi) and not valid_in_mod(pi, phi)
    taut = load("tautology.txt")
    psi = taut.parse_formula((data_dir / "tautology_formula.txt").read_text(), extended=True)
    assert valid_in_mod(taut.interpretation, psi, "classical")
    assert evaluate(taut.interpretation, Not(psi), "classical").is_zero()
    with pytest.raises(ClassificationError):
        sat_in_mod(load("g_beta.txt").interpretation, phi)


def test_counting_models(load):
    doc = load("pairs5.txt")
    phi = doc.parse_formula("forall x. !dominant(x)")
    empty = Structure(doc.universe, doc.vocab)
    assert evaluate(canonical_counting(empty), phi) == 8
    assert evaluate(canonical_counting(load("pairs5_f.txt").model), phi) == 6
    assert evaluate(canonical_truth(empty), phi) is True


def test_implication_semantics():
    fuzzy = get_semiring("fuzzy")
    U = Universe("a")
    p, q = GroundLiteral("P", ("a",)), GroundLiteral("Q", ("a",))
    V = Vocabulary({"P": 1, "Q": 1})
    pi = Interpretation(fuzzy, U, V, {p: 0.5, q: 0.3, p.negate(): 0.2, q.negate(): 0.4})
    s = parse_formula("P(a) -> Q(a)", V, U, extended=True)
    assert evaluate(pi, s, "goedel") == 0.3
    assert evaluate(pi, s, "general") == 0.3
    assert evaluate(pi, s, "classical") == 0.3  # max(~P, Q) = max(0.2, 0.3)
    with pytest.raises(CapabilityError):
        evaluate(pi, s)
    vit = Interpretation(get_semiring("viterbi"), U, V, {p: 0.5, q: 0.25, p.negate(): 0.0, q.negate(): 0.0})
    assert evaluate(vit, s, "general") == 0.5
    with pytest.raises(CapabilityError):
        evaluate(vit, s, "goedel")
    nat = Interpretation(get_semiring("nat"), U, V, {p: 1, q: 1})
    with pytest.raises(CapabilityError):
        evaluate(nat, s, "general")
