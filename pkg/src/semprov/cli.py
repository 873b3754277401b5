"""The ``prov`` command.

Every subcommand reads a structure file and a sentence, then prints
``key: value`` lines in canonical order.  Errors go to stderr with exit
codes 1 (input), 2 (capability), 3 (limits) and 4 (preconditions).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import analysis as an
from . import circuit as C
from .errors import CapabilityError, PreconditionError, ProvenanceError
from .evaluator import evaluate, evaluate_circuit, evaluate_with_flattening
from .files import Document, load_assignment_file, load_cost_model_file, load_document_file, parse_atom, split_atoms
from .interpretation import InterpretationClass, classify, literal_order, specialize
from .polynomial import Poly, expansion_cap, format_monomial
from .prooftrees import count_proof_trees, enumerate_proof_trees
from .semirings import get_semiring
from .syntax import Formula, Implies, Not


class _Out:
    """Collects report lines; ``lines`` format drops the blank separators."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.rows: list[str] = []

    def kv(self, key: str, value) -> None:
        self.rows.append(f"{key}: {value}")

    def raw(self, text: str) -> None:
        self.rows.extend(text.splitlines())

    def gap(self) -> None:
        if self.fmt == "text" and self.rows and self.rows[-1] != "":
            self.rows.append("")

    def text(self) -> str:
        rows = self.rows[:-1] if self.rows and self.rows[-1] == "" else self.rows
        return "\n".join(rows) + "\n" if rows else ""


def _formula_text(arg: str) -> str:
    p = Path(arg)
    if "\n" not in arg and len(arg) < 4096 and p.is_file():
        return p.read_text()
    return arg


def _mentions_implies(f: Formula) -> bool:
    if isinstance(f, Implies):
        return True
    for attr in ("left", "right", "body"):
        sub = getattr(f, attr, None)
        if sub is not None and _mentions_implies(sub):
            return True
    return False


def _setup(args) -> tuple[Document, Formula, str | None]:
    doc = load_document_file(args.structure, args.semiring)
    s = doc.parse_formula(_formula_text(args.formula), extended=args.extended)
    implication = None
    if _mentions_implies(s):
        implication = args.implication or "classical"
    return doc, s, implication


def _working(doc: Document):
    """The interpretation to analyse: specialized to the file's model when it names one."""
    pi = doc.interpretation
    if doc.model is not None and classify(pi) is InterpretationClass.MODEL_COMPATIBLE:
        return specialize(pi, doc.model)
    return pi


def _fmt(sr, v) -> str:
    return str(v) if isinstance(v, Poly) else sr.format_value(v)


def cmd_eval(args, out: _Out) -> None:
    doc, s, implication = _setup(args)
    pi = _working(doc)
    sr = pi.semiring
    out.kv("class", classify(doc.interpretation))
    if args.flattening:
        out.kv("value", _fmt(sr, evaluate_with_flattening(pi, s)))
        return
    if pi.tag is None:
        out.kv("value", _fmt(sr, evaluate(pi, s, implication)))
        return
    if implication in (None, "classical"):
        circ = evaluate_circuit(pi, s, implication=implication)
        out.kv("circuit", circ.render())
        out.kv("circuit-size", circ.size())
        if args.circuit_only:
            return
        value = circ.expand(pi.tag, args.cap)
    else:
        value = evaluate(pi, s, implication)
    out.kv("expanded", value)
    out.kv("monomials", len(value))


def _explanations(args, out: _Out, why: bool) -> None:
    doc, s, _ = _setup(args)
    fn = an.why_not if why else an.explanations
    key = "why-not" if why else "explanation"
    for e in fn(doc.interpretation, doc.model, s, minimal=args.minimal):
        decoded = ", ".join(str(l) for l in e.literals)
        out.kv(key, f"{e.monomial_text()} {{{decoded}}}")


def cmd_explain(args, out: _Out) -> None:
    _explanations(args, out, why=False)


def cmd_whynot(args, out: _Out) -> None:
    _explanations(args, out, why=True)


def cmd_repairs(args, out: _Out) -> None:
    doc, s, _ = _setup(args)
    pi, A = doc.interpretation, doc.model
    key = literal_order(pi.universe, pi.vocab)
    if args.method == "equation":
        res = an.repairs_by_equation(pi, A, s)
        if res.fallback:
            print(f"notice: {res.notice}", file=sys.stderr)
        repairs = res.repairs
    else:
        repairs = an.repairs_from_monomials(pi, s, A=A, minimal=args.minimal)
    if args.cost_model:
        ranked = an.rank_repairs(repairs, pi, A, s, load_cost_model_file(args.cost_model))
        trop = get_semiring("tropical")
        for r in ranked:
            out.kv("repair", r.repair.describe(key))
            out.kv("provenance", format_monomial(r.best_monomial))
            out.kv("cost", trop.format_value(r.cost))
            out.gap()
        return
    base_pi, base, _ = an.repair_context(pi, A, None)
    for r in repairs:
        out.kv("repair", r.describe(key))
        out.kv("provenance", evaluate(specialize(base_pi, r.apply(base)), s))
        out.gap()


def _atoms(values: Sequence[str] | None):
    out = []
    for v in values or ():
        out.extend(parse_atom(a) for a in split_atoms(v))
    return out


def cmd_update(args, out: _Out) -> None:
    doc, s, _ = _setup(args)
    beta = doc.interpretation
    inserts, deletes = _atoms(args.insert), _atoms(args.delete)
    plan = an.plan_from_beta(beta)
    wrong = [f for f in inserts if f not in plan.insertable] + [f for f in deletes if f not in plan.deletable]
    if wrong:
        raise PreconditionError(f"{wrong[0].atom_text()} cannot be changed that way under this interpretation")
    plan = plan.choose(inserts + deletes)
    value = an.update_provenance(beta, plan, s)
    rebuilt = evaluate(an.rebuild_beta(beta, plan), s)
    key = literal_order(beta.universe, beta.vocab)
    out.kv("update", an.Repair(plan.inserts, plan.deletes).describe(key))
    out.kv("provenance", value)
    out.kv("monomials", len(value))
    out.kv("matches-rebuild", "yes" if value == rebuilt else "no")


def cmd_count(args, out: _Out) -> None:
    doc, s, _ = _setup(args)
    out.kv("proof-trees", count_proof_trees(_working(doc), s))


def cmd_score(args, out: _Out) -> None:
    doc, s, _ = _setup(args)
    pi = _working(doc)
    value = evaluate(pi, s)
    if not isinstance(value, Poly):
        raise CapabilityError("scoring needs a polynomial-valued interpretation")
    if args.maximize:
        _, conf = load_assignment_file(args.assignment, "viterbi", exact=True)
        conf_map = {t: conf(t) for t in value.tokens()}
        res = an.maximize_confidence(value, conf_map, pi)
        out.kv("best-monomial", res.monomial_text())
        out.kv("confidence", res.confidence)
        out.kv("free", " ".join(res.free) if res.free else "-")
        out.kv("inconsistent-aggregate", res.inconsistent_aggregate)
        return
    sr, f = load_assignment_file(args.assignment)
    out.kv("score", sr.format_value(an.score(value, sr, f)))
    if args.per_monomial:
        for m, v in an.score_monomials(value, sr, f):
            out.kv("monomial", f"{format_monomial(m)} = {sr.format_value(v)}")


def cmd_trees(args, out: _Out) -> None:
    doc, s, _ = _setup(args)
    trees = enumerate_proof_trees(_working(doc), s, limit=args.tree_limit)
    shown = 0
    for t in trees:
        out.raw(t.render())
        out.gap()
        shown += 1
    out.kv("trees-shown", shown)
    out.kv("truncated", "yes" if trees.truncated else "no")


COMMANDS: dict[str, tuple[Callable, str]] = {
    "eval": (cmd_eval, "provenance of a sentence (circuit and expanded polynomial)"),
    "explain": (cmd_explain, "monomials of a true sentence, decoded to literals"),
    "whynot": (cmd_whynot, "explanations for a false sentence"),
    "repairs": (cmd_repairs, "insertions and deletions that make the sentence true"),
    "update": (cmd_update, "provenance after inserting or deleting tracked facts"),
    "count": (cmd_count, "number of proof trees"),
    "score": (cmd_score, "map the provenance into another semiring"),
    "trees": (cmd_trees, "list proof trees"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prov", description="Semiring provenance for first-order sentences.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--structure", required=True, help="structure/interpretation file")
        p.add_argument("--formula", required=True, help="sentence text or a file holding it")
        p.add_argument("--semiring", help="override the file's semiring")
        p.add_argument("--extended", action="store_true", help="allow '->' in formulas")
        p.add_argument("--implication", choices=["classical", "goedel", "general"])
        p.add_argument("--format", choices=["text", "lines"], default="text")
        if name == "eval":
            p.add_argument("--flattening", action="store_true", help="flatten non-atomic negations")
            p.add_argument("--circuit-only", action="store_true")
            p.add_argument("--cap", type=int, default=None, help="expansion cap (default from PROV_EXPANSION_CAP)")
        if name in ("explain", "whynot", "repairs"):
            p.add_argument("--minimal", action="store_true", help="keep only minimal results")
        if name == "repairs":
            p.add_argument("--cost-model", help="rank repairs with this cost file")
            p.add_argument("--method", choices=["monomials", "equation"], default="monomials")
        if name == "update":
            p.add_argument("--insert", action="append", help="facts to insert, e.g. 'E(a,c) E(c,b)'")
            p.add_argument("--delete", action="append", help="facts to delete")
        if name == "score":
            p.add_argument("--assignment", required=True, help="token assignment file")
            p.add_argument("--per-monomial", action="store_true")
            p.add_argument("--maximize", action="store_true", help="most confident monomial, exact arithmetic")
        if name == "trees":
            p.add_argument("--tree-limit", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "cap", None) is None and args.command == "eval":
        args.cap = expansion_cap()
    out = _Out(args.format)
    try:
        if args.semiring is not None:
            get_semiring(args.semiring)
        COMMANDS[args.command][0](args, out)
    except ProvenanceError as e:
        sys.stdout.write(out.text())
        print(f"prov: error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"prov: error: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(out.text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
