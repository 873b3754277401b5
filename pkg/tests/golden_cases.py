"""CLI invocations whose output is pinned under tests/golden/."""

CASES = {
    "eval_g_beta": ["eval", "--structure", "g_beta.txt", "--formula", "phi.txt"],
    "eval_pairs5": ["eval", "--structure", "pairs5.txt", "--formula", "phi.txt"],
    "eval_pairs5_not": ["eval", "--structure", "pairs5.txt", "--formula", "ic.txt"],
    "eval_pairs5_e": ["eval", "--structure", "pairs5_e.txt", "--formula", "phi.txt"],
    "eval_pairs5_f": ["eval", "--structure", "pairs5_f.txt", "--formula", "phi.txt"],
    "count_pairs5_e": ["count", "--structure", "pairs5_e.txt", "--formula", "phi.txt"],
    "count_pairs5_f": ["count", "--structure", "pairs5_f.txt", "--formula", "phi.txt"],
    "explain_g_beta_minimal": ["explain", "--structure", "g_beta.txt", "--formula", "phi.txt", "--minimal"],
    "explain_delta_m": ["explain", "--structure", "delta_m.txt", "--formula", "dominant(b)"],
    "whynot_delta_m": ["whynot", "--structure", "delta_m.txt", "--formula", "dominant(a)"],
    "whynot_c_minimal": ["whynot", "--structure", "pairs5_c.txt", "--formula", "ic.txt", "--minimal"],
    "score_confidence": ["score", "--structure", "g_beta.txt", "--formula", "phi.txt", "--assignment", "confidence.txt"],
    "score_clearance": [
        "score", "--structure", "g_beta.txt", "--formula", "phi.txt", "--assignment", "clearance.txt", "--per-monomial",
    ],
    "score_maximize": [
        "score", "--structure", "pairs5.txt", "--formula", "ic.txt", "--assignment", "third.txt", "--maximize",
    ],
    "eval_tautology": ["eval", "--structure", "tautology.txt", "--formula", "tautology_formula.txt", "--extended"],
    "eval_tautology_negated": [
        "eval", "--structure", "tautology.txt", "--formula", "!((exists x. forall y. E(x,y)) -> forall y. exists x. E(x,y))",
        "--extended",
    ],
    "update_delete": ["update", "--structure", "g_beta.txt", "--formula", "phi.txt", "--delete", "E(a,b) E(b,c)"],
    "update_insert": ["update", "--structure", "g_beta.txt", "--formula", "phi.txt", "--insert", "E(a,c) E(c,b)"],
    "repairs_delta_m": ["repairs", "--structure", "delta_m.txt", "--formula", "dominant(a)", "--minimal"],
    "repairs_c_ranked": ["repairs", "--structure", "pairs5_c.txt", "--formula", "ic.txt", "--cost-model", "costs_c.txt"],
    "repairs_c_equation": ["repairs", "--structure", "pairs5_c.txt", "--formula", "ic.txt", "--method", "equation"],
    "eval_z4": ["eval", "--structure", "z4.txt", "--formula", "R(a1) & R(a2)"],
    "eval_z4_negated": ["eval", "--structure", "z4.txt", "--formula", "!(R(a1) & R(a2))"],
    "count_intro_split": ["count", "--structure", "intro.txt", "--formula", "(exists x. P(x)) | Q(a)"],
    "count_intro_joint": ["count", "--structure", "intro.txt", "--formula", "exists x. P(x) | Q(a)"],
    "trees_intro_split": ["trees", "--structure", "intro.txt", "--formula", "(exists x. P(x)) | Q(a)"],
    "eval_g_beta_lines": [
        "eval", "--structure", "g_beta.txt", "--formula", "phi.txt", "--circuit-only", "--format", "lines",
    ],
}
