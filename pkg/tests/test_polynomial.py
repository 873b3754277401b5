import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semprov import (
    DualConsistencyError, ExpansionCapError, ParseError, Poly, TagMismatchError, Token, TokenAssignment,
    eval_hom, get_semiring, monomials_min, parse_poly,
)
from semprov import circuit as C
from semprov.polynomial import QUOTIENT_TAGS, TAGS, divides, format_monomial, poly_add, poly_mul, to_string
from strategies import TOKENS, polys

P = parse_poly
PHI_FACTORED = "(~p + ~r + t)*(p + ~q + s + ~t)*(1 + q + r + ~s)"
G_BETA = "p*q*~r + p*q*t + p*~r + p*~r*~s + p*~s*t + p*t"


def brute_expand(factors: list[list[tuple[str, ...]]]) -> Counter:
    """Multiply out sums of monomials by picking one summand per factor."""
    out: Counter = Counter()
    for pick in itertools.product(*factors):
        toks = [t for mono in pick for t in mono]
        names = {t.lstrip("~") for t in toks}
        if any(("~" + n) in toks and n in toks for n in names):
            continue
        out[tuple(sorted(toks))] += 1
    return out


def test_quotient_examples():
    assert P("p*~r") + P("p*t") == P("p*~r + p*t")
    assert (P("p + ~q") * P("~p*q")).is_zero()
    assert (P("p*~q + ~p*q") * P("p*q + ~p*~q")).is_zero()


def test_tag_congruences():
    assert P("p", "bpoly") + P("p", "bpoly") == P("p", "bpoly")
    assert P("p", "sorp") + P("p*q", "sorp") == P("p", "sorp")
    assert P("p^2*q", "why") == P("p*q", "why")
    assert str(P("3*p^2", "sorp")) == "p^2"
    assert str(P("p + p*q", "posbool")) == "p"
    assert str(P("p*~p + q", "posbool")) == "p*~p + q"
    assert P("p*~p + q", "posbool-dual") == P("q", "posbool-dual")
    assert str(P("p*~p", "npoly")) == "p*~p"


def test_npoly_before_quotient():
    value = P("(p + ~p)*(2*p + ~q + ~p)*(2 + q + ~p)", "npoly")
    assert value.coefficient("p^2") == 4
    assert value.coefficient("~p^3") == 1
    assert value.coefficient("~p*~q") == 2


def test_phi_expansion_against_brute_force():
    factors = [
        [("~p",), ("~r",), ("t",)],
        [("p",), ("~q",), ("s",), ("~t",)],
        [(), ("q",), ("r",), ("~s",)],
    ]
    oracle = brute_expand(factors)
    value = P(PHI_FACTORED)
    assert len(value) == len(oracle) == 30
    expected = {tuple(sorted(Token.parse(t) for t in m)): c for m, c in oracle.items()}
    assert value.terms == expected
    assert all(c == 1 for c in value.terms.values())
    # of the 48 picks, 18 pair a token with its twin (p~p, q~q, s~s, t~t and r~r)
    assert sum(oracle.values()) == 30
    assert len(list(itertools.product(*factors))) == 48


def test_canonical_rendering():
    assert str(P("p*t + p*~r + p*q*t + p*~r*~s + p*q*~r + p*~s*t")) == G_BETA
    assert str(P("~q*~p*2")) == "2*~p*~q"
    assert str(Poly.zero()) == "0"
    assert str(Poly.one()) == "1"
    assert str(P("q^2*p")) == "p*q^2"


def test_parse_with_constant_and_exponent():
    value = P("p^2*q + 1")
    assert len(value) == 2
    assert value.coefficient(()) == 1
    assert value.coefficient("p^2*q") == 1


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        P("p + * q")
    assert info.value.column is not None
    with pytest.raises(ParseError):
        P("p^")


def test_tag_mismatch():
    with pytest.raises(TagMismatchError):
        P("p") + P("p", "npoly")


@given(polys("ndualpoly"))
def test_print_parse_roundtrip(a):
    assert parse_poly(to_string(a)) == a


@pytest.mark.parametrize("tag", TAGS)
def test_ring_laws(tag):
    @given(polys(tag), polys(tag), polys(tag))
    def check(a, b, c):
        assert poly_mul(a, poly_add(b, c)) == poly_add(poly_mul(a, b), poly_mul(a, c))
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * Poly.one(tag) == a and (a * Poly.zero(tag)).is_zero()

    check()


@pytest.mark.parametrize("tag", sorted(QUOTIENT_TAGS))
def test_no_complementary_monomials(tag):
    @given(polys(tag), polys(tag))
    def check(a, b):
        for m in (a * b).terms:
            assert not any(t.twin() in m for t in m)

    check()


@pytest.mark.parametrize("tag", ("sorp", "posbool", "posbool-dual"))
def test_absorptive_tags_give_antichains(tag):
    @given(polys(tag), polys(tag))
    def check(a, b):
        for value in (a + b, a * b):
            monos = list(value.terms)
            for m1, m2 in itertools.permutations(monos, 2):
                assert not divides(m1, m2)

    check()


def consistent_assignments(sr_name):
    names = sorted({t.name for t in TOKENS})
    if sr_name == "nat":
        vals = st.integers(0, 5)
    elif sr_name == "tropical":
        vals = st.integers(0, 40).map(float)
    else:
        vals = st.integers(1, 16).map(lambda n: n / 16)

    sr = get_semiring(sr_name)

    @st.composite
    def build(draw):
        table = {}
        for n in names:
            v = draw(vals)
            side = draw(st.booleans())
            table[Token(n, not side)] = v
            table[Token(n, side)] = sr.zero
        return table

    return build()


@pytest.mark.parametrize("sr_name", ("nat", "tropical", "viterbi"))
def test_homomorphism_commutes_with_arithmetic(sr_name):
    sr = get_semiring(sr_name)

    @given(polys("ndualpoly"), polys("ndualpoly"), consistent_assignments(sr_name))
    def check(a, b, f):
        h = lambda x: eval_hom(x, sr, f)  # noqa: E731
        assert sr.eq(h(a * b), sr.mul(h(a), h(b)))
        assert sr.eq(h(a + b), sr.add(h(a), h(b)))
        assert sr.eq(h(C.from_poly(a)), h(a))

    check()


def test_confidence_example():
    f = {"p": 0.9, "q": 0.9, "t": 0.2, "~r": 0.6, "~s": 0.6}
    value = eval_hom(P("p*(~r + t)*(1 + q + ~s)"), get_semiring("viterbi"), f)
    assert abs(value - 0.54) <= 1e-12


def test_all_ones_counts_coefficients():
    value = P("2*p*q + ~r + 3*s")
    assert eval_hom(value, get_semiring("nat"), TokenAssignment({}, 1, 1)) == 6


def test_tropical_costs():
    trop = get_semiring("tropical")
    costs = {"p": 20, "r": 10, "~t": 15, "~p": 10, "q": 20, "~s": 15, "t": 5}
    value = P("p*r*~t + ~p*q*~s*t")
    assert eval_hom(P("p*r*~t"), trop, costs) == 45
    assert eval_hom(P("~p*q*~s*t"), trop, costs) == 50
    # p and ~p both costed finitely: the pair is not dual-consistent in the tropical semiring
    with pytest.raises(DualConsistencyError):
        eval_hom(value, trop, costs)
    assert eval_hom(value, trop, costs, check=False) == 45


def test_dual_consistency_names_the_pair():
    with pytest.raises(DualConsistencyError) as info:
        eval_hom(P("p + ~p"), get_semiring("nat"), {"p": 1, "~p": 2})
    assert "~p" in str(info.value)


def test_minimal_monomials():
    assert [format_monomial(m) for m in monomials_min(P(G_BETA))] == ["p*~r", "p*t"]
    value = P("~p*~q + ~p*s + t*~q + t*s + ~p*~q*r + ~p*s*r + t*~q*r + t*s*r")
    assert [format_monomial(m) for m in monomials_min(value)] == ["~p*~q", "~p*s", "~q*t", "s*t"]
    assert monomials_min(P("p*q")) == [tuple(sorted((Token("p"), Token("q"))))]


def test_expansion_cap():
    c = C.mul(*[C.add(C.leaf(Token(f"p{i}")), C.leaf(Token(f"p{i}", True))) for i in range(12)])
    assert len(c.expand()) == 4096
    with pytest.raises(ExpansionCapError) as info:
        c.expand(cap=1000)
    assert info.value.cap == 1000


def test_expansion_cap_from_environment(monkeypatch):
    c = C.mul(*[C.add(C.leaf(Token(f"p{i}")), C.leaf(Token(f"p{i}", True))) for i in range(6)])
    monkeypatch.setenv("PROV_EXPANSION_CAP", "10")
    with pytest.raises(ExpansionCapError):
        c.expand()
    monkeypatch.setenv("PROV_EXPANSION_CAP", "64")
    assert len(c.expand()) == 64
