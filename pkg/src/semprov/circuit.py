"""Provenance circuits: hash-consed expression DAGs over tokens.

Nodes are interned, so two structurally equal circuits are the same Python
object and equality is identity.  Sums and products are n-ary.  The builder
functions :func:`add` and :func:`mul` fold constants by default (``0`` drops
out of sums, ``1`` out of products, and a ``0`` factor annihilates a product);
pass ``fold=False`` to keep the literal shape, which is what dualization needs
because annihilation has no dual counterpart.
"""

from __future__ import annotations

import weakref
from typing import Any, Callable, Iterable, Iterator

from .errors import ExpansionCapError
from .polynomial import Poly, Token, check_dual_consistency, expansion_cap, gc_paused

ZERO, ONE, TOKEN, SUM, PROD = "zero", "one", "token", "sum", "prod"

_interned: "weakref.WeakValueDictionary[tuple, Circuit]" = weakref.WeakValueDictionary()


class Circuit:
    __slots__ = ("kind", "token", "children", "__weakref__")

    kind: str
    token: Token | None
    children: tuple["Circuit", ...]

    def __new__(cls, kind: str, token: Token | None = None, children: tuple = ()):
        key = (kind, token, tuple(id(c) for c in children))
        node = _interned.get(key)
        if node is not None and node.children == children:
            return node
        node = object.__new__(cls)
        object.__setattr__(node, "kind", kind)
        object.__setattr__(node, "token", token)
        object.__setattr__(node, "children", children)
        _interned[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("circuits are immutable")

    def __reduce__(self):
        return (Circuit, (self.kind, self.token, self.children))

    # -- traversal -----------------------------------------------------------
    def nodes(self) -> list["Circuit"]:
        """Reachable nodes in post-order, each once."""
        seen: set[int] = set()
        order: list[Circuit] = []
        stack: list[tuple[Circuit, bool]] = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for child in reversed(node.children):
                if id(child) not in seen:
                    stack.append((child, False))
        return order

    def size(self) -> int:
        return len(self.nodes())

    def tokens(self) -> set[Token]:
        return {n.token for n in self.nodes() if n.kind == TOKEN}

    def fold(self, fn: Callable[["Circuit", list], Any]) -> Any:
        """Bottom-up evaluation with sharing: ``fn(node, child_values)``."""
        memo: dict[int, Any] = {}
        for node in self.nodes():
            memo[id(node)] = fn(node, [memo[id(c)] for c in node.children])
        return memo[id(self)]

    # -- semantics -----------------------------------------------------------
    def expand(self, tag: str = "ndualpoly", cap: int | None = None) -> Poly:
        """Expand into a canonical polynomial, aborting once ``cap`` monomials are exceeded."""
        cap = expansion_cap() if cap is None else cap

        def step(node, vals):
            if node.kind == ZERO:
                return Poly.zero(tag)
            if node.kind == ONE:
                return Poly.one(tag)
            if node.kind == TOKEN:
                return Poly.token(node.token, tag)
            if node.kind == SUM:
                acc = Poly.zero(tag)
                for v in vals:
                    acc = acc + v
                if len(acc) > cap:
                    raise ExpansionCapError(cap, len(acc))
                return acc
            acc = Poly.one(tag)
            for v in vals:
                acc = acc.mul(v, cap)
            return acc

        with gc_paused():
            return self.fold(step)

    def eval_hom(self, sr, f: Callable[[Token], Any], check: bool = True):
        if check:
            check_dual_consistency(self.tokens(), sr, f)

        def step(node, vals):
            if node.kind == ZERO:
                return sr.zero
            if node.kind == ONE:
                return sr.one
            if node.kind == TOKEN:
                return sr.check(f(node.token))
            if node.kind == SUM:
                return sr.sum(vals)
            return sr.prod(vals)

        return self.fold(step)

    def substitute_zero(self, tokens: Iterable[Token]) -> "Circuit":
        zeros = set(tokens)

        def step(node, vals):
            if node.kind == TOKEN and node.token in zeros:
                return zero()
            if node.kind == SUM:
                return add(*vals)
            if node.kind == PROD:
                return mul(*vals)
            return node

        return self.fold(step)

    # -- text ----------------------------------------------------------------
    def render(self) -> str:
        """Infix text; shared subcircuits are printed at every use."""

        def step(node, vals):
            if node.kind == ZERO:
                return "0"
            if node.kind == ONE:
                return "1"
            if node.kind == TOKEN:
                return str(node.token)
            if node.kind == SUM:
                return " + ".join(vals)
            return "*".join(f"({v})" if c.kind == SUM else v for c, v in zip(node.children, vals))

        return self.fold(step)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Circuit({self.render()!r})"

    def __iter__(self) -> Iterator["Circuit"]:
        return iter(self.children)


# ---------------------------------------------------------------------------
# builders


def zero() -> Circuit:
    return Circuit(ZERO)


def one() -> Circuit:
    return Circuit(ONE)


def leaf(tok: Token | str) -> Circuit:
    if isinstance(tok, str):
        tok = Token.parse(tok)
    return Circuit(TOKEN, tok)


def const(n: int) -> Circuit:
    """The natural number ``n`` as ``1 + ... + 1``."""
    if n == 0:
        return zero()
    if n == 1:
        return one()
    return Circuit(SUM, None, (one(),) * n)


def add(*xs: Circuit, fold: bool = True) -> Circuit:
    if fold:
        flat: list[Circuit] = []
        for x in xs:
            if x.kind == SUM:
                flat.extend(x.children)
            elif x.kind != ZERO:
                flat.append(x)
        xs = tuple(flat)
    if not xs:
        return zero()
    if len(xs) == 1:
        return xs[0]
    return Circuit(SUM, None, tuple(xs))


def mul(*xs: Circuit, fold: bool = True) -> Circuit:
    if fold:
        flat: list[Circuit] = []
        for x in xs:
            if x.kind == ZERO:
                return zero()
            if x.kind == PROD:
                flat.extend(x.children)
            elif x.kind != ONE:
                flat.append(x)
        xs = tuple(flat)
    if not xs:
        return one()
    if len(xs) == 1:
        return xs[0]
    return Circuit(PROD, None, tuple(xs))


def from_poly(p: Poly) -> Circuit:
    """A sum-of-products circuit for an expanded polynomial."""
    terms = []
    for m, c in p.monomials():
        factors = [leaf(t) for t in m]
        terms.extend([mul(*factors)] * c)
    return add(*terms)


def dualize(c: Circuit) -> Circuit:
    """Swap sums with products, ``0`` with ``1`` and every token with its twin."""

    def step(node, vals):
        if node.kind == ZERO:
            return one()
        if node.kind == ONE:
            return zero()
        if node.kind == TOKEN:
            return leaf(node.token.twin())
        if node.kind == SUM:
            return Circuit(PROD, None, tuple(vals))
        return Circuit(SUM, None, tuple(vals))

    return c.fold(step)


def expand(c: Circuit, tag: str = "ndualpoly", cap: int | None = None) -> Poly:
    return c.expand(tag, cap)
