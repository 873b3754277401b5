"""Semiring provenance for first-order sentences over finite structures.

Typical use::

    from semprov import load_document_file, evaluate
    doc = load_document_file("data/g_beta.txt")
    phi = doc.parse_formula("forall x. !dominant(x)")
    print(evaluate(doc.interpretation, phi))
"""

from .analysis import (
    ConfidenceResult, EquationRepairs, Explanation, IncrementalProvenance, RankedRepair, Repair, UpdatePlan,
    explanations, generalize, maximize_confidence, minimal_repairs, plan_from_beta, plan_from_structure,
    rank_repairs, rebuild_beta, repairs_by_equation, repairs_from_monomials, score, score_monomials,
    update_provenance, why_not, zeroing_sets,
)
from .circuit import Circuit, dualize
from .errors import (
    CapabilityError, CarrierError, ClassificationError, DualConsistencyError, EnumerationLimitError,
    ExpansionCapError, NoRepairError, ParseError, PreconditionError, ProvenanceError, TagMismatchError,
    VocabularyError,
)
from .evaluator import (
    DoubleValue, evaluate, evaluate_circuit, evaluate_double, evaluate_with_flattening, sat_in_mod, valid_in_mod,
)
from .files import (
    CostModel, Document, load_assignment, load_assignment_file, load_cost_model, load_cost_model_file, load_document,
    load_document_file,
)
from .interpretation import (
    Interpretation, InterpretationClass, Structure, canonical_counting, canonical_truth, classify, compatible,
    defined_model, is_provenance_tracking, specialize,
)
from .parser import FormulaParser, parse_formula
from .polynomial import Poly, Token, TokenAssignment, eval_hom, monomials_min, parse_poly, poly_semiring
from .prooftrees import ProofTree, count_proof_trees, enumerate_proof_trees, sum_of_trees_oracle
from .semirings import Access, FiniteSemiring, Semiring, check_flags, get_semiring
from .syntax import GroundLiteral, Universe, Vocabulary, nnf, to_text

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
