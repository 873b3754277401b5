import pytest
from hypothesis import given
from hypothesis import strategies as st

from semprov import Poly, Token, parse_poly
from semprov import circuit as C
from strategies import TOKENS


def leaves():
    return st.sampled_from(TOKENS).map(C.leaf) | st.sampled_from([C.zero(), C.one()])


circuits = st.recursive(
    leaves(),
    lambda kids: st.one_of(
        st.lists(kids, min_size=2, max_size=3).map(lambda xs: C.add(*xs, fold=False)),
        st.lists(kids, min_size=2, max_size=3).map(lambda xs: C.mul(*xs, fold=False)),
    ),
    max_leaves=10,
)


def test_hash_consing_shares_nodes():
    a = C.mul(C.leaf("p"), C.add(C.leaf("q"), C.leaf("~r")))
    b = C.mul(C.leaf("p"), C.add(C.leaf("q"), C.leaf("~r")))
    assert a is b
    shared = C.add(C.leaf("q"), C.leaf("~r"))
    both = C.mul(shared, C.add(shared, C.leaf("s")))
    # the inner sum is counted once
    assert both.size() == len({id(n) for n in both.nodes()})
    with pytest.raises(AttributeError):
        a.kind = "sum"


def test_folding_rules():
    p = C.leaf("p")
    assert C.add(p, C.zero()) is p
    assert C.mul(p, C.one()) is p
    assert C.mul(p, C.zero()) is C.zero()
    assert C.mul(p, C.zero(), fold=False).kind == C.PROD
    assert C.const(3).expand() == Poly.const(3)


def test_dualize_small():
    d = C.dualize(C.add(C.leaf("p"), C.leaf("q")))
    assert d.expand() == parse_poly("~p*~q")
    assert C.dualize(C.zero()) is C.one()


@given(circuits)
def test_dualize_is_an_involution(c):
    assert C.dualize(C.dualize(c)) is c


@given(circuits)
def test_expansion_matches_from_poly(c):
    p = c.expand()
    assert C.from_poly(p).expand() == p


@given(circuits)
def test_substitute_zero_commutes_with_expansion(c):
    gone = [Token("p"), Token("q", True)]
    assert c.substitute_zero(gone).expand() == c.expand().substitute_zero(gone)


@pytest.mark.parametrize("n", range(2, 13))
def test_size_separation(n):
    c = C.mul(*[C.add(C.leaf(Token(f"x{i}")), C.leaf(Token(f"x{i}", True))) for i in range(n)])
    assert c.size() == 3 * n + 1
    assert len(c.expand()) == 2**n


def test_render_and_tokens():
    c = C.mul(C.leaf("p"), C.add(C.leaf("~r"), C.leaf("t")))
    assert c.tokens() == {Token("p"), Token("r", True), Token("t")}
    text = c.render()
    assert "p" in text and "~r" in text
    assert c.expand() == parse_poly("p*~r + p*t")
