"""Commutative semirings: the abstract interface and the concrete application semirings.

Every semiring is an immutable object exposing ``zero``, ``one``, ``add`` and
``mul`` plus a record of capability flags.  Optional operations (natural
order, monus, implications) raise :class:`CapabilityError` when a semiring
does not provide them.  The module-level functions mirror the methods and are
what most callers use::

    >>> sr = get_semiring("tropical")
    >>> add(sr, 3.0, 5.0), mul(sr, 3.0, 5.0)
    (3.0, 8.0)
"""

from __future__ import annotations

import enum
import itertools
import math
import numbers
from dataclasses import dataclass, fields
from typing import Any, Callable, Iterable, Sequence

from .errors import CapabilityError, CarrierError, ParseError

REAL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Flags:
    is_plus_positive: bool = True
    has_zero_divisors: bool = False
    is_add_idempotent: bool = False
    is_mul_idempotent: bool = False
    is_absorptive: bool = False
    is_min_max: bool = False
    supports_monus: bool = False
    supports_goedel_implication: bool = False
    supports_general_implication: bool = False
    supports_natural_order_decision: bool = True

    @property
    def is_positive(self) -> bool:
        return self.is_plus_positive and not self.has_zero_divisors


class Access(enum.IntEnum):
    """Clearance levels of the access-control semiring, ordered 0 < T < S < C < P."""

    ZERO = 0
    T = 1
    S = 2
    C = 3
    P = 4

    def __str__(self) -> str:
        return "0" if self is Access.ZERO else self.name


class Semiring:
    """Base class.  Subclasses implement ``contains``, ``_add`` and ``_mul``."""

    name: str = "abstract"
    description: str = ""
    zero: Any = None
    one: Any = None
    flags: Flags = Flags()
    exact: bool = True

    # -- carrier -----------------------------------------------------------
    def contains(self, a) -> bool:
        raise NotImplementedError

    def check(self, a):
        if not self.contains(a):
            raise CarrierError(f"{a!r} is not an element of the {self.name} semiring")
        return a

    # -- core operations ---------------------------------------------------
    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def add(self, a, b):
        return self._add(self.check(a), self.check(b))

    def mul(self, a, b):
        return self._mul(self.check(a), self.check(b))

    def sum(self, values: Iterable) -> Any:
        acc = self.zero
        for v in values:
            acc = self._add(acc, self.check(v))
        return acc

    def prod(self, values: Iterable) -> Any:
        acc = self.one
        for v in values:
            acc = self._mul(acc, self.check(v))
        return acc

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def is_one(self, a) -> bool:
        return self.eq(a, self.one)

    def from_count(self, n: int):
        """The element 1 + 1 + ... + 1 (``n`` times)."""
        if n < 0:
            raise ValueError("count must be nonnegative")
        if n == 0:
            return self.zero
        if self.flags.is_add_idempotent:
            return self.one
        result, base = self.zero, self.one
        while n:
            if n & 1:
                result = self._add(result, base)
            base = self._add(base, base)
            n >>= 1
        return result

    # -- optional operations -----------------------------------------------
    def _leq(self, a, b) -> bool:
        raise CapabilityError(f"{self.name} cannot decide its natural order")

    def natural_leq(self, a, b) -> bool:
        if not self.flags.supports_natural_order_decision:
            raise CapabilityError(f"{self.name} cannot decide its natural order")
        return self._leq(self.check(a), self.check(b))

    def _monus(self, a, b):
        # total orders with least element `zero`: a - b is zero when a <= b, a otherwise
        return self.zero if self._leq(a, b) else a

    def monus(self, a, b):
        if not self.flags.supports_monus:
            raise CapabilityError(f"{self.name} has no monus")
        return self._monus(self.check(a), self.check(b))

    def goedel_implies(self, a, b):
        if not self.flags.supports_goedel_implication:
            raise CapabilityError(f"{self.name} has no Goedel implication (not a min-max semiring)")
        a, b = self.check(a), self.check(b)
        return self.one if self._leq(a, b) else b

    def _general_implies(self, a, b):
        return self.one if self._leq(a, b) else b

    def general_implies(self, a, b):
        if not self.flags.supports_general_implication:
            raise CapabilityError(f"{self.name} has no residual implication")
        return self._general_implies(self.check(a), self.check(b))

    def flatten_negate(self, a):
        return self.one if self.is_zero(self.check(a)) else self.zero

    # -- text --------------------------------------------------------------
    def parse_value(self, text: str):
        raise NotImplementedError

    def format_value(self, a) -> str:
        return str(a)

    def __repr__(self) -> str:
        return f"<semiring {self.name}>"


# ---------------------------------------------------------------------------
# discrete carriers


class BooleanSemiring(Semiring):
    name = "bool"
    description = "truth values {false, true} with or/and"
    zero = False
    one = True
    flags = Flags(
        is_add_idempotent=True,
        is_mul_idempotent=True,
        is_absorptive=True,
        is_min_max=True,
        supports_monus=True,
        supports_goedel_implication=True,
        supports_general_implication=True,
    )

    def contains(self, a):
        return isinstance(a, bool)

    def _add(self, a, b):
        return a or b

    def _mul(self, a, b):
        return a and b

    def _leq(self, a, b):
        return (not a) or b

    def _monus(self, a, b):
        return a and not b

    def parse_value(self, text):
        t = text.strip().lower()
        if t in ("1", "true", "top", "t"):
            return True
        if t in ("0", "false", "bot", "f"):
            return False
        raise ParseError(f"not a Boolean value: {text!r}")

    def format_value(self, a):
        return "true" if a else "false"


class NaturalSemiring(Semiring):
    name = "nat"
    description = "natural numbers with + and *"
    zero = 0
    one = 1
    flags = Flags(supports_monus=True)

    def contains(self, a):
        return isinstance(a, int) and not isinstance(a, bool) and a >= 0

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def from_count(self, n):
        return n

    def _leq(self, a, b):
        return a <= b

    def _monus(self, a, b):
        return a - b if a > b else 0

    def parse_value(self, text):
        try:
            v = int(text.strip())
        except ValueError:
            raise ParseError(f"not a natural number: {text!r}") from None
        if v < 0:
            raise ParseError(f"not a natural number: {text!r}")
        return v


class AccessSemiring(Semiring):
    name = "access"
    description = "clearance levels 0 < T < S < C < P with max/min"
    zero = Access.ZERO
    one = Access.P
    flags = Flags(
        is_add_idempotent=True,
        is_mul_idempotent=True,
        is_absorptive=True,
        is_min_max=True,
        supports_monus=True,
        supports_goedel_implication=True,
        supports_general_implication=True,
    )

    def contains(self, a):
        return isinstance(a, Access)

    def _add(self, a, b):
        return max(a, b)

    def _mul(self, a, b):
        return min(a, b)

    def _leq(self, a, b):
        return a <= b

    def parse_value(self, text):
        t = text.strip().upper()
        if t == "0":
            return Access.ZERO
        try:
            return Access[t]
        except KeyError:
            raise ParseError(f"not an access level: {text!r}") from None


# ---------------------------------------------------------------------------
# real carriers


def _is_real(a) -> bool:
    return isinstance(a, numbers.Real) and not isinstance(a, bool)


def _format_real(a) -> str:
    if a == math.inf:
        return "inf"
    if float(a).is_integer():
        return str(int(a))
    return format(float(a), ".12g")


class _RealSemiring(Semiring):
    exact = False

    def eq(self, a, b):
        if a == b:
            return True
        if math.isinf(a) or math.isinf(b):
            return False
        return abs(a - b) <= REAL_TOLERANCE

    def parse_value(self, text):
        t = text.strip()
        try:
            v = math.inf if t.lower() in ("inf", "infinity") else float(t)
        except ValueError:
            raise ParseError(f"not a real number: {text!r}") from None
        if not self.contains(v):
            raise ParseError(f"{text!r} lies outside the carrier of {self.name}")
        return v

    def format_value(self, a):
        return _format_real(a)


class _UnitInterval(_RealSemiring):
    def contains(self, a):
        return _is_real(a) and 0 <= a <= 1


class TropicalSemiring(_RealSemiring):
    """Nonnegative reals with infinity under (min, +); the natural order is reversed."""

    name = "tropical"
    description = "costs in [0, inf] with min and +"
    zero = math.inf
    one = 0.0
    flags = Flags(
        is_add_idempotent=True,
        is_absorptive=True,
        supports_monus=True,
        supports_general_implication=True,
    )

    def contains(self, a):
        return _is_real(a) and (a >= 0 and not math.isnan(a))

    def _add(self, a, b):
        return min(a, b)

    def _mul(self, a, b):
        return a + b

    def _leq(self, a, b):
        return a >= b or self.eq(a, b)

    def _general_implies(self, a, b):
        # sup{r : r + a >= b} in the reversed order is the least such real: pay b - a if positive
        if math.isinf(b):
            return math.inf if not math.isinf(a) else 0.0
        return max(0.0, b - a)


class ViterbiSemiring(_UnitInterval):
    name = "viterbi"
    description = "confidences in [0, 1] with max and *"
    zero = 0.0
    one = 1.0
    flags = Flags(
        is_add_idempotent=True,
        is_absorptive=True,
        supports_monus=True,
        supports_general_implication=True,
    )

    def _add(self, a, b):
        return max(a, b)

    def _mul(self, a, b):
        return a * b

    def _leq(self, a, b):
        return a <= b or self.eq(a, b)

    def _general_implies(self, a, b):
        if a <= b:
            return 1.0
        return b / a


class FuzzySemiring(_UnitInterval):
    name = "fuzzy"
    description = "[0, 1] with max and min"
    zero = 0.0
    one = 1.0
    flags = Flags(
        is_add_idempotent=True,
        is_mul_idempotent=True,
        is_absorptive=True,
        is_min_max=True,
        supports_monus=True,
        supports_goedel_implication=True,
        supports_general_implication=True,
    )

    def _add(self, a, b):
        return max(a, b)

    def _mul(self, a, b):
        return min(a, b)

    def _leq(self, a, b):
        return a <= b or self.eq(a, b)


class LukasiewiczSemiring(_UnitInterval):
    name = "lukasiewicz"
    description = "[0, 1] with max and max(s + t - 1, 0)"
    zero = 0.0
    one = 1.0
    flags = Flags(
        has_zero_divisors=True,
        is_add_idempotent=True,
        is_absorptive=True,
        supports_monus=True,
        supports_general_implication=True,
    )

    def _add(self, a, b):
        return max(a, b)

    def _mul(self, a, b):
        v = a + b - 1
        return v if v > REAL_TOLERANCE else 0.0

    def _leq(self, a, b):
        return a <= b or self.eq(a, b)

    def _general_implies(self, a, b):
        return min(1.0 - a + b, 1.0)


class DoubtSemiring(_UnitInterval):
    """Isomorphic copy of the Lukasiewicz semiring via s -> 1 - s."""

    name = "doubt"
    description = "[0, 1] with min and min(s + t, 1)"
    zero = 1.0
    one = 0.0
    flags = Flags(
        has_zero_divisors=True,
        is_add_idempotent=True,
        is_absorptive=True,
        supports_monus=True,
        supports_general_implication=True,
    )

    def _add(self, a, b):
        return min(a, b)

    def _mul(self, a, b):
        v = a + b
        return v if v < 1 - REAL_TOLERANCE else 1.0

    def _leq(self, a, b):
        return a >= b or self.eq(a, b)

    def _general_implies(self, a, b):
        return max(0.0, b - a)


# ---------------------------------------------------------------------------
# finite semirings given by tables (for counterexamples such as Z_4)


class FiniteSemiring(Semiring):
    """A semiring on a finite carrier given by addition and multiplication tables.

    Used to reproduce counterexamples (for instance Z_4, which is not
    naturally ordered); no optional operations are offered.
    """

    def __init__(self, name, elements: Sequence, add_table, mul_table, zero, one):
        self.name = name
        self.description = f"finite semiring on {list(elements)}"
        self.elements = tuple(elements)
        self._plus = {(a, b): add_table[i][j] for i, a in enumerate(self.elements) for j, b in enumerate(self.elements)}
        self._times = {(a, b): mul_table[i][j] for i, a in enumerate(self.elements) for j, b in enumerate(self.elements)}
        self.zero = zero
        self.one = one
        nonzero = [a for a in self.elements if a != zero]
        self.flags = Flags(
            is_plus_positive=all(self._plus[a, b] != zero for a in nonzero for b in self.elements),
            has_zero_divisors=any(self._times[a, b] == zero for a in nonzero for b in nonzero),
            is_add_idempotent=all(self._plus[a, a] == a for a in self.elements),
            is_mul_idempotent=all(self._times[a, a] == a for a in self.elements),
            is_absorptive=all(self._plus[a, self._times[a, b]] == a for a in self.elements for b in self.elements),
            supports_natural_order_decision=False,
        )

    @classmethod
    def modular(cls, n: int) -> "FiniteSemiring":
        els = list(range(n))
        return cls(
            f"Z{n}",
            els,
            [[(a + b) % n for b in els] for a in els],
            [[(a * b) % n for b in els] for a in els],
            0,
            1 % n,
        )

    @classmethod
    def from_text(cls, text: str) -> "FiniteSemiring":
        """Load tables from ``name:``/``elements:``/``zero:``/``one:`` lines and ``add:``/``mul:`` blocks."""
        fields_: dict[str, str] = {}
        tables: dict[str, list[list[str]]] = {}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rest = line.partition(":")
            if sep and key.strip() in ("add", "mul"):
                current = key.strip()
                tables[current] = []
                if rest.strip():
                    raise ParseError(f"table rows for {current} start on the next line", lineno, 1)
            elif sep and key.strip() in ("name", "elements", "zero", "one"):
                fields_[key.strip()] = rest.strip()
                current = None
            elif current is not None:
                tables[current].append(line.split())
            else:
                raise ParseError(f"unexpected line {line!r}", lineno, 1)
        for need in ("elements", "zero", "one"):
            if need not in fields_:
                raise ParseError(f"finite semiring is missing {need}:")
        names = fields_["elements"].split()
        convert = int if all(n.isdigit() for n in names) else str
        els = [convert(n) for n in names]
        lookup = {n: e for n, e in zip(names, els)}
        for op in ("add", "mul"):
            rows = tables.get(op)
            if rows is None or len(rows) != len(els) or any(len(r) != len(els) for r in rows):
                raise ParseError(f"{op} table must be {len(els)}x{len(els)}")
            if any(c not in lookup for r in rows for c in r):
                raise ParseError(f"{op} table mentions an unknown element")
        conv = lambda rows: [[lookup[c] for c in r] for r in rows]  # noqa: E731
        return cls(
            fields_.get("name", "table"), els, conv(tables["add"]), conv(tables["mul"]),
            lookup[fields_["zero"]], lookup[fields_["one"]],
        )

    def contains(self, a):
        return a in self.elements and not isinstance(a, bool)

    def _add(self, a, b):
        return self._plus[a, b]

    def _mul(self, a, b):
        return self._times[a, b]

    def from_count(self, n):
        acc = self.zero
        for _ in range(n):
            acc = self._add(acc, self.one)
        return acc

    def parse_value(self, text):
        for e in self.elements:
            if str(e) == text.strip():
                return e
        raise ParseError(f"{text!r} is not an element of {self.name}")


# ---------------------------------------------------------------------------
# registry and module-level API

SEMIRING_NAMES = (
    "bool",
    "nat",
    "tropical",
    "viterbi",
    "fuzzy",
    "lukasiewicz",
    "doubt",
    "access",
    "npoly",
    "ndualpoly",
    "bpoly",
    "why",
    "sorp",
    "posbool",
    "posbool-dual",
)

_SCALAR = {
    cls.name: cls()
    for cls in (
        BooleanSemiring,
        NaturalSemiring,
        TropicalSemiring,
        ViterbiSemiring,
        FuzzySemiring,
        LukasiewiczSemiring,
        DoubtSemiring,
        AccessSemiring,
    )
}


def get_semiring(name: str) -> Semiring:
    """Look up a semiring by its canonical name."""
    if name in _SCALAR:
        return _SCALAR[name]
    from .polynomial import TAGS, poly_semiring

    if name in TAGS:
        return poly_semiring(name)
    raise CapabilityError(f"unknown semiring {name!r}; choose one of {', '.join(SEMIRING_NAMES)}")


def add(sr: Semiring, a, b):
    return sr.add(a, b)


def mul(sr: Semiring, a, b):
    return sr.mul(a, b)


def natural_leq(sr: Semiring, a, b) -> bool:
    return sr.natural_leq(a, b)


def monus(sr: Semiring, a, b):
    return sr.monus(a, b)


def goedel_implies(sr: Semiring, a, b):
    return sr.goedel_implies(a, b)


def general_implies(sr: Semiring, a, b):
    return sr.general_implies(a, b)


def flatten_negate(sr: Semiring, a):
    return sr.flatten_negate(a)


# ---------------------------------------------------------------------------
# flag checking


@dataclass
class FlagReport:
    semiring: str
    observed: dict
    declared: dict
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __getitem__(self, flag):
        return self.observed[flag]


def check_flags(sr: Semiring, samples: Sequence) -> FlagReport:
    """Test the algebraic flags of ``sr`` on all pairs drawn from ``samples``.

    Universal properties (idempotence, absorption, +-positivity) are observed
    as true when no sampled pair refutes them; ``has_zero_divisors`` is
    observed as true when a sampled pair witnesses it.  A mismatch is a
    declared universal property that a sample refutes, or an undeclared zero
    divisor that a sample exhibits.
    """
    if not samples:
        raise ValueError("need at least one sample")
    for s in samples:
        sr.check(s)
    pairs = list(itertools.product(samples, repeat=2))
    eq, add_, mul_ = sr.eq, sr._add, sr._mul
    z = sr.is_zero
    observed = {
        "is_plus_positive": all(not z(add_(a, b)) or (z(a) and z(b)) for a, b in pairs),
        "has_zero_divisors": any(not z(a) and not z(b) and z(mul_(a, b)) for a, b in pairs),
        "is_add_idempotent": all(eq(add_(a, a), a) for a in samples),
        "is_mul_idempotent": all(eq(mul_(a, a), a) for a in samples),
        "is_absorptive": all(eq(add_(a, mul_(a, b)), a) for a, b in pairs),
    }
    if sr.flags.supports_natural_order_decision:
        observed["is_min_max"] = all(
            (eq(add_(a, b), b) and eq(mul_(a, b), a)) if sr._leq(a, b) else (eq(add_(a, b), a) and eq(mul_(a, b), b))
            for a, b in pairs
        )
    observed["is_positive"] = observed["is_plus_positive"] and not observed["has_zero_divisors"]
    declared = {f.name: getattr(sr.flags, f.name) for f in fields(Flags)}
    declared["is_positive"] = sr.flags.is_positive
    mismatches = []
    for flag, value in observed.items():
        if flag == "has_zero_divisors":
            if value and not declared[flag]:
                mismatches.append(flag)
        elif flag == "is_positive":
            if declared[flag] and not value:
                mismatches.append(flag)
        elif declared.get(flag) and not value:
            mismatches.append(flag)
    return FlagReport(sr.name, observed, declared, mismatches)


def sample_values(sr: Semiring, rng, k: int = 8) -> list:
    """Random carrier elements for property checks (always includes 0 and 1)."""
    out = [sr.zero, sr.one]
    gen: Callable[[], Any]
    if isinstance(sr, BooleanSemiring):
        gen = lambda: rng.random() < 0.5  # noqa: E731
    elif isinstance(sr, NaturalSemiring):
        gen = lambda: rng.randrange(0, 12)  # noqa: E731
    elif isinstance(sr, AccessSemiring):
        gen = lambda: rng.choice(list(Access))  # noqa: E731
    elif isinstance(sr, TropicalSemiring):
        gen = lambda: rng.choice([math.inf, float(rng.randrange(0, 20)), round(rng.uniform(0, 10), 3)])  # noqa: E731
    elif isinstance(sr, FiniteSemiring):
        gen = lambda: rng.choice(sr.elements)  # noqa: E731
    elif isinstance(sr, _UnitInterval):
        gen = lambda: rng.choice([0.0, 1.0, round(rng.random(), 3), round(rng.random(), 1)])  # noqa: E731
    else:
        raise CapabilityError(f"no sampler for {sr.name}")
    out.extend(gen() for _ in range(k))
    return out
