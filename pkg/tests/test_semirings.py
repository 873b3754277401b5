import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semprov import Access, CapabilityError, CarrierError, FiniteSemiring, check_flags, get_semiring
from semprov.semirings import SEMIRING_NAMES, sample_values
from strategies import SCALARS, values, z4


def triples(name):
    v = values(name)
    return st.tuples(v, v, v)


@pytest.mark.parametrize("name", SCALARS)
def test_zero_differs_from_one(name):
    sr = get_semiring(name)
    assert not sr.eq(sr.zero, sr.one)


@pytest.mark.parametrize("name", SCALARS)
def test_semiring_axioms(name):
    sr = get_semiring(name)

    @given(triples(name))
    def check(t):
        a, b, c = t
        eq = sr.eq
        assert eq(sr.add(a, b), sr.add(b, a))
        assert eq(sr.mul(a, b), sr.mul(b, a))
        assert eq(sr.add(sr.add(a, b), c), sr.add(a, sr.add(b, c)))
        assert eq(sr.mul(sr.mul(a, b), c), sr.mul(a, sr.mul(b, c)))
        assert eq(sr.mul(a, sr.add(b, c)), sr.add(sr.mul(a, b), sr.mul(a, c)))
        assert eq(sr.add(a, sr.zero), a)
        assert eq(sr.mul(a, sr.one), a)
        assert sr.is_zero(sr.mul(a, sr.zero))

    check()


POSITIVE = ("bool", "nat", "tropical", "viterbi", "fuzzy", "access")


@pytest.mark.parametrize("name", POSITIVE)
def test_positive_semirings(name):
    sr = get_semiring(name)
    assert sr.flags.is_positive

    @given(values(name), values(name))
    def check(a, b):
        if sr.is_zero(sr.add(a, b)):
            assert sr.is_zero(a) and sr.is_zero(b)
        if sr.is_zero(sr.mul(a, b)):
            assert sr.is_zero(a) or sr.is_zero(b)

    check()


@pytest.mark.parametrize("name", SCALARS)
def test_declared_flags_hold_on_samples(name):
    sr = get_semiring(name)
    report = check_flags(sr, sample_values(sr, random.Random(7), 12))
    assert report.ok, report.mismatches


MONUS = ("bool", "nat", "tropical", "viterbi", "fuzzy", "lukasiewicz", "doubt", "access")


@pytest.mark.parametrize("name", MONUS)
def test_monus_galois(name):
    sr = get_semiring(name)

    @given(triples(name))
    def check(t):
        a, b, c = t
        assert sr.natural_leq(sr.monus(a, b), c) == sr.natural_leq(a, sr.add(b, c))

    check()


@pytest.mark.parametrize("name", SCALARS)
def test_triple_flattening_collapses(name):
    sr = get_semiring(name)

    @given(values(name))
    def check(a):
        f = sr.flatten_negate
        assert sr.eq(f(f(f(a))), f(a))

    check()


@pytest.mark.parametrize("name", ("fuzzy", "access"))
def test_modus_ponens_on_min_max(name):
    sr = get_semiring(name)

    @given(values(name), values(name))
    def check(a, b):
        assert sr.natural_leq(sr.mul(a, sr.goedel_implies(a, b)), b)
        assert sr.eq(sr.goedel_implies(a, b), sr.general_implies(a, b))

    check()


@pytest.mark.parametrize("name", ("viterbi", "lukasiewicz", "tropical", "doubt", "fuzzy"))
def test_general_implication_is_residual(name):
    # r <= (a -> b)  iff  r*a <= b, checked on a grid
    sr = get_semiring(name)
    grid = [sr.zero, sr.one] + ([0.0, 0.5, 1.0, 2.5, 7.0] if name == "tropical" else [0.25, 0.5, 0.75])

    @given(values(name), values(name))
    def check(a, b):
        imp = sr.general_implies(a, b)
        assert sr.natural_leq(sr.mul(imp, a), b)
        for r in grid:
            if sr.natural_leq(sr.mul(r, a), b):
                assert sr.natural_leq(r, imp)

    check()


def test_scalar_examples():
    trop, nat, acc = get_semiring("tropical"), get_semiring("nat"), get_semiring("access")
    luk, fuzzy = get_semiring("lukasiewicz"), get_semiring("fuzzy")
    assert trop.add(3.0, 5.0) == 3.0
    assert trop.mul(3.0, 5.0) == 8.0
    assert nat.add(2, 3) == 5
    assert acc.add(Access.S, Access.C) == Access.C
    assert luk.eq(luk.mul(0.7, 0.6), 0.3)
    for name in SCALARS:
        sr = get_semiring(name)
        x = sample_values(sr, random.Random(1), 3)[-1]
        assert sr.is_zero(sr.mul(sr.zero, x))


def test_order_examples():
    assert get_semiring("tropical").natural_leq(5.0, 3.0)
    assert not get_semiring("nat").natural_leq(3, 2)
    assert get_semiring("fuzzy").natural_leq(0.2, 0.9)


def test_monus_examples():
    nat = get_semiring("nat")
    assert nat.monus(3, 5) == 0
    assert nat.monus(5, 3) == 2
    assert get_semiring("fuzzy").monus(0.8, 0.3) == 0.8
    assert get_semiring("bool").monus(True, False) is True
    assert get_semiring("bool").monus(True, True) is False


def test_implication_examples():
    fuzzy, luk, trop = get_semiring("fuzzy"), get_semiring("lukasiewicz"), get_semiring("tropical")
    assert fuzzy.goedel_implies(0.3, 0.5) == 1.0
    assert fuzzy.goedel_implies(0.5, 0.3) == 0.3
    assert fuzzy.goedel_implies(0.6, 0.6) == 1.0
    assert luk.eq(luk.general_implies(0.7, 0.4), 0.7)
    assert luk.general_implies(0.4, 0.7) == 1.0
    assert trop.general_implies(3.0, 5.0) == 2.0


def test_tropical_implication_matches_grid_supremum():
    # the largest r (in the reversed order: the smallest cost) with r + 3 >= 5
    trop = get_semiring("tropical")
    grid = [k / 100 for k in range(0, 1001)]
    best = min(r for r in grid if r + 3.0 >= 5.0)
    assert trop.general_implies(3.0, 5.0) == pytest.approx(best)


def test_flattening_examples():
    nat, trop = get_semiring("nat"), get_semiring("tropical")
    assert nat.flatten_negate(0) == 1
    assert nat.flatten_negate(7) == 0
    assert trop.flatten_negate(math.inf) == 0.0


def test_check_flags_examples():
    trop = check_flags(get_semiring("tropical"), [0.0, 1.0, 2.0, math.inf])
    assert trop["is_absorptive"] and not trop["is_mul_idempotent"]
    luk = check_flags(get_semiring("lukasiewicz"), [0.3, 0.4])
    assert luk["has_zero_divisors"]
    assert get_semiring("lukasiewicz").mul(0.3, 0.4) == 0.0
    assert check_flags(get_semiring("bool"), [False, True])["is_positive"]


def test_capabilities_are_refused():
    with pytest.raises(CapabilityError):
        get_semiring("viterbi").goedel_implies(0.2, 0.3)
    with pytest.raises(CapabilityError):
        get_semiring("nat").general_implies(1, 2)
    with pytest.raises(CapabilityError):
        get_semiring("npoly").monus(get_semiring("npoly").one, get_semiring("npoly").zero)
    with pytest.raises(CapabilityError):
        get_semiring("no-such-semiring")
    with pytest.raises(CapabilityError):
        z4().natural_leq(1, 2)


def test_carrier_is_enforced():
    with pytest.raises(CarrierError):
        get_semiring("viterbi").add(1.5, 0.2)
    with pytest.raises(CarrierError):
        get_semiring("nat").mul(-1, 2)
    with pytest.raises(CarrierError):
        get_semiring("tropical").add(-1.0, 2.0)
    with pytest.raises(CarrierError):
        get_semiring("access").add(3, Access.P)


def test_every_name_resolves():
    for name in SEMIRING_NAMES:
        assert get_semiring(name).name == name


def test_z4_table_and_text_form(data_dir):
    loaded = FiniteSemiring.from_text((data_dir / "z4_table.txt").read_text())
    built = z4()
    for a in built.elements:
        for b in built.elements:
            assert loaded.add(a, b) == built.add(a, b)
            assert loaded.mul(a, b) == built.mul(a, b)
    assert not loaded.flags.is_plus_positive
    assert loaded.flags.has_zero_divisors
    assert loaded.add(2, 2) == 0 and loaded.mul(2, 2) == 0


def test_from_count():
    assert get_semiring("nat").from_count(5) == 5
    assert get_semiring("bool").from_count(5) is True
    assert get_semiring("tropical").from_count(3) == 0.0
    assert z4().from_count(6) == 2
