"""Provenance polynomials over positive and negative tokens.

A :class:`Poly` is a finite sum of monomials with natural coefficients.  A
monomial is a sorted tuple of :class:`Token` objects in which a repeated token
stands for a power, so ``p^2*~q`` is ``(p, p, ~q)``.  Each polynomial carries a
semiring tag that fixes which congruences are applied after every operation:

============  ============  ==============  ==========  ==========================
tag           coefficients  exponents       absorption  ``p*~p = 0``
============  ============  ==============  ==========  ==========================
npoly         kept          kept            no          no
ndualpoly     kept          kept            no          yes
bpoly         dropped       kept            no          yes
why           dropped       dropped         no          yes
sorp          dropped       kept            yes         yes
posbool       dropped       dropped         yes         no
posbool-dual  dropped       dropped         yes         yes
============  ============  ==============  ==========  ==========================
"""

from __future__ import annotations

import contextlib
import functools
import gc
import os
import re
from collections import Counter
from typing import Any, Callable, Iterable, Mapping, NamedTuple

from .errors import (
    CapabilityError,
    DualConsistencyError,
    ExpansionCapError,
    ParseError,
    TagMismatchError,
)
from .semirings import Flags, Semiring

TAGS = ("npoly", "ndualpoly", "bpoly", "why", "sorp", "posbool", "posbool-dual")
_DROP_COEFF = frozenset({"bpoly", "why", "sorp", "posbool", "posbool-dual"})
_DROP_EXP = frozenset({"why", "posbool", "posbool-dual"})
_ABSORB = frozenset({"sorp", "posbool", "posbool-dual"})
QUOTIENT_TAGS = frozenset(TAGS) - {"npoly", "posbool"}

DEFAULT_EXPANSION_CAP = 1_000_000
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def expansion_cap() -> int:
    """The monomial cap, overridable through ``PROV_EXPANSION_CAP``."""
    value = os.environ.get("PROV_EXPANSION_CAP")
    return int(value) if value else DEFAULT_EXPANSION_CAP


@contextlib.contextmanager
def gc_paused():
    """Suspend the cyclic collector; large expansions allocate millions of acyclic tuples."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


class Token(NamedTuple):
    """A provenance token; ``negative`` tokens render as ``~name``.

    Tuple order sorts by name first and puts the positive token before its
    negative twin, which is the canonical factor order inside monomials.
    """

    name: str
    negative: bool = False

    @classmethod
    def parse(cls, text: str) -> "Token":
        neg = text.startswith("~")
        name = text[1:] if neg else text
        if not NAME_RE.match(name):
            raise ParseError(f"bad token name {text!r}")
        return cls(name, neg)

    def twin(self) -> "Token":
        return Token(self.name, not self.negative)

    def __str__(self) -> str:
        return "~" + self.name if self.negative else self.name


Monomial = tuple  # sorted tuple of Token, repetition = exponent


def monomial_factors(m: Monomial) -> list[tuple[Token, int]]:
    return sorted(Counter(m).items())


def format_monomial(m: Monomial, coeff: int = 1) -> str:
    parts = [] if coeff == 1 and m else [str(coeff)]
    for tok, exp in monomial_factors(m):
        parts.append(f"{tok}^{exp}" if exp > 1 else str(tok))
    return "*".join(parts)


def divides(small: Monomial, big: Monomial) -> bool:
    """Multiset inclusion: ``small`` divides ``big``."""
    if len(small) > len(big):
        return False
    need = Counter(small)
    have = Counter(big)
    return all(have[t] >= k for t, k in need.items())


def _has_complementary(m: Monomial) -> bool:
    return len(set(m)) > len({t.name for t in m})


def _minimal(monos: Iterable[Monomial]) -> list[Monomial]:
    kept: list[Monomial] = []
    for m in sorted(set(monos), key=lambda m: (len(m), m)):
        if not any(divides(k, m) for k in kept):
            kept.append(m)
    return kept


class Poly:
    """An immutable polynomial in canonical form for its tag."""

    __slots__ = ("tag", "terms", "_hash")

    def __init__(self, tag: str, terms: Mapping[Monomial, int] | None = None, *, _canonical: bool = False):
        if tag not in TAGS:
            raise CapabilityError(f"unknown polynomial tag {tag!r}")
        self.tag = tag
        self._hash = None
        if _canonical:
            self.terms = dict(terms or {})
        else:
            self.terms = self._normalize(tag, terms or {})

    # -- construction --------------------------------------------------------
    @staticmethod
    def _normalize(tag: str, terms: Mapping[Monomial, int]) -> dict:
        out: dict[Monomial, int] = {}
        quotient = tag in QUOTIENT_TAGS
        drop_exp = tag in _DROP_EXP
        for m, c in terms.items():
            if c == 0:
                continue
            if c < 0:
                raise ValueError("coefficients must be natural numbers")
            m = tuple(sorted(set(m))) if drop_exp else tuple(sorted(m))
            if quotient and _has_complementary(m):
                continue
            out[m] = out.get(m, 0) + c
        if tag in _DROP_COEFF:
            out = {m: 1 for m in out}
        if tag in _ABSORB and len(out) > 1:
            out = {m: 1 for m in _minimal(out)}
        return out

    @classmethod
    def zero(cls, tag: str = "ndualpoly") -> "Poly":
        return cls(tag, {}, _canonical=True)

    @classmethod
    def one(cls, tag: str = "ndualpoly") -> "Poly":
        return cls(tag, {(): 1}, _canonical=True)

    @classmethod
    def const(cls, n: int, tag: str = "ndualpoly") -> "Poly":
        return cls(tag, {(): n})

    @classmethod
    def token(cls, tok: Token | str, tag: str = "ndualpoly") -> "Poly":
        if isinstance(tok, str):
            tok = Token.parse(tok)
        return cls(tag, {(tok,): 1}, _canonical=True)

    @classmethod
    def from_monomials(cls, monos: Iterable[Monomial], tag: str = "ndualpoly") -> "Poly":
        acc: dict = {}
        for m in monos:
            key = tuple(sorted(m))
            acc[key] = acc.get(key, 0) + 1
        return cls(tag, acc)

    def retag(self, tag: str) -> "Poly":
        """Image under the canonical surjection onto the quotient named by ``tag``."""
        return Poly(tag, self.terms)

    # -- arithmetic ----------------------------------------------------------
    def _same_tag(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"cannot combine a polynomial with {other!r}")
        if other.tag != self.tag:
            raise TagMismatchError(f"cannot combine {self.tag} with {other.tag}")

    def __add__(self, other: "Poly") -> "Poly":
        self._same_tag(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        if self.tag in _DROP_COEFF or self.tag in _ABSORB:
            return Poly(self.tag, acc)
        return Poly(self.tag, acc, _canonical=True)

    def __mul__(self, other: "Poly") -> "Poly":
        return self.mul(other)

    def mul(self, other: "Poly", cap: int | None = None) -> "Poly":
        """Product with eager quotienting; raises :class:`ExpansionCapError` past ``cap``."""
        self._same_tag(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.tag)
        if self.terms == {(): 1}:
            return other
        if other.terms == {(): 1}:
            return self
        quotient = self.tag in QUOTIENT_TAGS
        drop_exp = self.tag in _DROP_EXP
        acc: dict[Monomial, int] = {}
        left = [(m, c, frozenset(m)) for m, c in self.terms.items()]
        get = acc.get
        for m2, c2 in other.terms.items():
            twins = {t.twin() for t in m2} if quotient else ()
            set2 = frozenset(m2)
            for m1, c1, s1 in left:
                if twins and not s1.isdisjoint(twins):
                    continue
                if not m1:
                    m = m2
                elif not m2:
                    m = m1
                elif drop_exp:
                    m = tuple(sorted(s1 | set2))
                elif m1[-1] <= m2[0]:
                    m = m1 + m2
                elif m2[-1] <= m1[0]:
                    m = m2 + m1
                else:
                    m = tuple(sorted(m1 + m2))
                acc[m] = get(m, 0) + c1 * c2
            if cap is not None and len(acc) > cap:
                raise ExpansionCapError(cap, len(acc))
        if self.tag in _DROP_COEFF or self.tag in _ABSORB:
            return Poly(self.tag, acc)
        return Poly(self.tag, acc, _canonical=True)

    # -- inspection ----------------------------------------------------------
    def monomials(self) -> list[tuple[Monomial, int]]:
        """(monomial, coefficient) pairs in canonical order."""
        return sorted(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): 1}

    def tokens(self) -> set[Token]:
        return {t for m in self.terms for t in m}

    def coefficient(self, m: Monomial | str) -> int:
        if isinstance(m, str):
            (m, _), = parse_poly(m, "npoly").terms.items()
        return self.terms.get(tuple(sorted(m)), 0)

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def as_token(self) -> Token | None:
        """The token if this polynomial is a single token with coefficient 1."""
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if c == 1 and len(m) == 1:
                return m[0]
        return None

    def substitute_zero(self, tokens: Iterable[Token]) -> "Poly":
        """Set the given tokens to 0 (drop every monomial that mentions one)."""
        zeros = set(tokens)
        return Poly(self.tag, {m: c for m, c in self.terms.items() if not zeros.intersection(m)}, _canonical=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.tag == other.tag and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.tag, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"Poly({self.tag}, {to_string(self)!r})"


# ---------------------------------------------------------------------------
# module-level operations


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly, cap: int | None = None) -> Poly:
    return a.mul(b, cap)


def monomials_min(p: Poly) -> list[Monomial]:
    """Monomials of ``p`` not divisible by another monomial of ``p`` (canonical order)."""
    return sorted(_minimal(p.terms))


def to_string(p: Poly) -> str:
    if not p.terms:
        return "0"
    return " + ".join(format_monomial(m, c) for m, c in p.monomials())


_LEX = re.compile(r"\s*(?:(?P<int>\d+)|(?P<tok>~?[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[+*^()]))")


def _lex(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _LEX.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("eof", "", len(text) + 1))
    return out


def parse_poly(text: str, tag: str = "ndualpoly") -> Poly:
    """Parse the canonical text form (whitespace is tolerated anywhere).

    Parenthesized sums are accepted as factors, so factored expressions such
    as ``(~p + t)*p`` parse too; the result is always expanded.
    """
    toks = _lex(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        k, v, pos = toks[i]
        if (kind and k != kind) or (value and v != value):
            want = value or kind
            got = "end of input" if k == "eof" else repr(v)
            raise ParseError(f"expected {want}, found {got}", column=pos)
        i += 1
        return v

    def poly() -> Poly:
        acc = term()
        while peek()[1] == "+":
            take("op", "+")
            acc = acc + term()
        return acc

    def term() -> Poly:
        acc = factor()
        while peek()[1] == "*":
            take("op", "*")
            acc = acc * factor()
        return acc

    def factor() -> Poly:
        k, v, pos = peek()
        if k == "int":
            take()
            base = Poly.const(int(v), tag)
        elif k == "tok":
            take()
            base = Poly.token(Token.parse(v), tag)
        elif v == "(":
            take()
            base = poly()
            take("op", ")")
        else:
            got = "end of input" if k == "eof" else repr(v)
            raise ParseError(f"expected a coefficient, token or '(', found {got}", column=pos)
        if peek()[1] == "^":
            take("op", "^")
            exp = int(take("int"))
            result = Poly.one(tag)
            for _ in range(exp):
                result = result * base
            return result
        return base

    result = poly()
    if peek()[0] != "eof":
        k, v, pos = peek()
        raise ParseError(f"unexpected {v!r}", column=pos)
    return result


# ---------------------------------------------------------------------------
# homomorphisms


class TokenAssignment:
    """A map from tokens to semiring values with per-polarity defaults."""

    def __init__(self, values: Mapping[Token | str, Any] | None = None, default_positive=None, default_negative=None):
        self.values = {Token.parse(k) if isinstance(k, str) else k: v for k, v in (values or {}).items()}
        self.default_positive = default_positive
        self.default_negative = default_negative

    def __call__(self, tok: Token):
        if tok in self.values:
            return self.values[tok]
        default = self.default_negative if tok.negative else self.default_positive
        if default is None:
            raise KeyError(f"no value assigned to token {tok}")
        return default

    def __contains__(self, tok) -> bool:
        return tok in self.values or (self.default_negative if tok.negative else self.default_positive) is not None


def as_assignment(assignment) -> Callable[[Token], Any]:
    if isinstance(assignment, TokenAssignment) or callable(assignment) and not isinstance(assignment, Mapping):
        return assignment
    table = {Token.parse(k) if isinstance(k, str) else k: v for k, v in assignment.items()}

    def lookup(tok):
        try:
            return table[tok]
        except KeyError:
            raise KeyError(f"no value assigned to token {tok}") from None

    lookup.values = table
    return lookup


def check_dual_consistency(tokens: Iterable[Token], sr: Semiring, f) -> None:
    """Raise :class:`DualConsistencyError` when some pair has ``f(x)*f(~x) != 0``.

    Only pairs whose two tokens both occur are checked: the image does not
    depend on the others, and they can always be redefined consistently.
    """
    present = set(tokens)
    for pos in sorted(t for t in present if not t.negative):
        if pos.twin() not in present:
            continue
        try:
            a, b = f(pos), f(pos.twin())
        except KeyError:
            continue
        if not sr.is_zero(sr.mul(a, b)):
            raise DualConsistencyError(pos, a, b)


def eval_hom(p, sr: Semiring, assignment, *, check: bool | None = None):
    """Image of a polynomial (or circuit) under the homomorphism induced by ``assignment``.

    ``assignment`` is a mapping, a :class:`TokenAssignment`, or any callable
    ``Token -> value``.  For tags with the ``p*~p = 0`` congruence the
    assignment must be dual-consistent on the tokens that occur; this is
    checked unless ``check=False``.
    """
    from .circuit import Circuit

    f = as_assignment(assignment)
    if isinstance(p, Circuit):
        return p.eval_hom(sr, f, check=True if check is None else check)
    if check is None:
        check = p.tag in QUOTIENT_TAGS
    if check:
        check_dual_consistency(p.tokens(), sr, f)
    total = sr.zero
    cache: dict[Token, Any] = {}
    for m, c in p.terms.items():
        v = sr.from_count(c)
        for tok in m:
            if tok not in cache:
                cache[tok] = sr.check(f(tok))
            v = sr.mul(v, cache[tok])
        total = sr.add(total, v)
    return total


# ---------------------------------------------------------------------------
# polynomials as a semiring


class PolySemiring(Semiring):
    exact = True

    def __init__(self, tag: str):
        self.name = tag
        self.tag = tag
        self.description = f"provenance polynomials ({tag})"
        self.zero = Poly.zero(tag)
        self.one = Poly.one(tag)
        quotient = tag in QUOTIENT_TAGS
        idem = tag in _DROP_COEFF
        self.flags = Flags(
            has_zero_divisors=quotient,
            is_add_idempotent=idem,
            is_mul_idempotent=tag in ("posbool", "posbool-dual"),
            is_absorptive=tag in _ABSORB,
        )

    def contains(self, a):
        return isinstance(a, Poly) and a.tag == self.tag

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def from_count(self, n):
        return Poly.const(n, self.tag)

    def is_zero(self, a):
        return not a.terms

    def _leq(self, a, b):
        if self.flags.is_add_idempotent:
            return a + b == b
        return all(b.terms.get(m, 0) >= c for m, c in a.terms.items())

    def parse_value(self, text):
        return parse_poly(text, self.tag)

    def format_value(self, a):
        return to_string(a)


@functools.lru_cache(maxsize=None)
def poly_semiring(tag: str) -> PolySemiring:
    return PolySemiring(tag)
