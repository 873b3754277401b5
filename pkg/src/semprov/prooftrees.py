"""Proof trees: evaluation trees with a nonzero valuation.

An evaluation tree picks one disjunct at every ``|`` and one witness at every
``exists``, keeps both conjuncts and every instance of a ``forall``, and ends
in literals or (in)equalities.  Its valuation is the product of its leaf
annotations.  Summing the valuations of all proof trees gives back the value
of the sentence, which makes enumeration a test oracle for the evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator

from .errors import CapabilityError, EnumerationLimitError
from .evaluator import _check_sentence, _resolve, evaluate, literal_at
from .interpretation import Interpretation
from .syntax import And, Eq, Exists, Formula, GroundLiteral, Neq, Not, Or, Rel, Value, nnf, substitute, to_text

DEFAULT_TREE_CAP = 100_000


@dataclass(frozen=True)
class ProofTree:
    label: str
    value: Any
    children: tuple["ProofTree", ...] = ()
    literal: GroundLiteral | None = None
    annotation: str | None = None

    def leaves(self) -> Iterator["ProofTree"]:
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def literal_counts(self) -> dict[GroundLiteral, int]:
        """How often each literal is used (equality leaves are not counted)."""
        out: dict[GroundLiteral, int] = {}
        for leaf in self.leaves():
            if leaf.literal is not None:
                out[leaf.literal] = out.get(leaf.literal, 0) + 1
        return out

    def render(self) -> str:
        lines: list[str] = []

        def walk(node, depth):
            text = node.label if node.annotation is None else f"{node.label} [{node.annotation}]"
            lines.append(text if depth == 0 else "   " * (depth - 1) + "|- " + text)
            for c in node.children:
                walk(c, depth + 1)

        walk(self, 0)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def _ground_text(f: Formula, env: dict) -> str:
    """Text of a subformula with its free variables replaced by their values."""
    mapping = {v: Value(a) for v, a in env.items()}
    return to_text(substitute(f, mapping))


class TreeEnumeration:
    """Iterator over proof trees; ``truncated`` is set once ``limit`` cut the stream short."""

    def __init__(self, pi: Interpretation, s: Formula, limit: int | None = None, cap: int = DEFAULT_TREE_CAP):
        _check_sentence(pi, s)
        self.pi = pi
        self.sentence = nnf(s)
        self.limit = limit
        self.cap = cap
        self.truncated = False
        self._it = self._run()

    def __iter__(self):
        return self

    def __next__(self) -> ProofTree:
        return next(self._it)

    def _run(self):
        count = 0
        for tree in self._gen(self.sentence, {}):
            if self.limit is not None and count >= self.limit:
                self.truncated = True
                return
            count += 1
            yield tree

    def _materialize(self, gen) -> list[ProofTree]:
        out = []
        for t in gen:
            out.append(t)
            if len(out) > self.cap:
                raise EnumerationLimitError(f"more than {self.cap} partial proof trees")
        return out

    def _gen(self, f: Formula, env: dict) -> Iterator[ProofTree]:
        pi, sr = self.pi, self.pi.semiring
        label = _ground_text(f, env)
        if isinstance(f, (Rel, Not)):
            lit = literal_at(f, env)
            v = pi(lit)
            if not sr.is_zero(v):
                yield ProofTree(label, v, (), lit, sr.format_value(v))
            return
        if isinstance(f, (Eq, Neq)):
            same = _resolve(f.left, env) == _resolve(f.right, env)
            if same == isinstance(f, Eq):
                yield ProofTree(label, sr.one, (), None, "1")
            return
        if isinstance(f, Or):
            for side in (f.left, f.right):
                for t in self._gen(side, env):
                    yield ProofTree(label, t.value, (t,))
            return
        if isinstance(f, Exists):
            for a in pi.universe:
                for t in self._gen(f.body, {**env, f.var: a}):
                    yield ProofTree(label, t.value, (t,))
            return
        if isinstance(f, And):
            parts = [(f.left, env), (f.right, env)]
        else:
            parts = [(f.body, {**env, f.var: a}) for a in pi.universe]
        options = []
        for sub, sub_env in parts:
            opts = self._materialize(self._gen(sub, sub_env))
            if not opts:
                return
            options.append(opts)
        yield from self._combine(label, options, 0, sr.one, ())

    def _combine(self, label, options, i, acc, chosen):
        sr = self.pi.semiring
        if i == len(options):
            yield ProofTree(label, acc, chosen)
            return
        for t in options[i]:
            v = sr.mul(acc, t.value)
            if sr.is_zero(v):
                continue
            yield from self._combine(label, options, i + 1, v, chosen + (t,))


def enumerate_proof_trees(pi: Interpretation, s: Formula, limit: int | None = None, cap: int = DEFAULT_TREE_CAP) -> TreeEnumeration:
    """Proof trees in depth-first choice order (left disjunct and first witness first)."""
    return TreeEnumeration(pi, s, limit, cap)


def sum_of_trees_oracle(pi: Interpretation, s: Formula, cap: int = 10_000):
    """Sum of the valuations of all proof trees; refuses instances with more than ``cap`` trees."""
    sr = pi.semiring
    total = sr.zero
    trees = enumerate_proof_trees(pi, s, limit=cap)
    for t in trees:
        total = sr.add(total, t.value)
    if trees.truncated:
        raise EnumerationLimitError(f"more than {cap} proof trees")
    return total


def count_proof_trees(pi: Interpretation, s: Formula) -> int:
    """Number of proof trees, read off the provenance polynomial (or the value itself over ℕ)."""
    if pi.semiring.name == "nat":
        return evaluate(pi, s)
    if pi.tag not in ("npoly", "ndualpoly"):
        raise CapabilityError(f"counting needs nat, npoly or ndualpoly, not {pi.semiring.name}")
    return evaluate(pi, s).coefficient_sum()
