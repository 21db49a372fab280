"""Circular and extended circular nim: solver, verification harness, play service."""

from .core import (
    Face,
    IllegalMoveError,
    Move,
    Position,
    PositionError,
    Ruleset,
    RulesetError,
    apply_move,
    build_maximal_faces,
    canonical,
    check_move,
    dihedral_images,
    legal_moves,
)
from .formulas import (
    Predicate,
    PredicateError,
    Witness,
    eval_predicate,
    holds,
    predicate,
    predicate_for,
)
from .notation import format_position, format_ruleset, parse_position, parse_ruleset
from .reductions import (
    ByPredicate,
    ClassificationError,
    DisjointSum,
    Evaluation,
    IsomorphicTo,
    PileMerge,
    Unsolved,
    best_move,
    classify,
    evaluate,
    find_isomorphism,
    resolve_outcome,
    ruleset_catalog,
)
from .solver import (
    BudgetError,
    CapacityError,
    Outcome,
    build_grundy_table,
    build_outcome_table,
    build_tables,
    default_bound,
    disjunctive_outcome,
    dump_table,
    grundy,
    load_table,
    outcome,
    selective_outcome,
    table_to_csv,
    winning_move,
)
from .verify import (
    Mismatch,
    VerificationReport,
    export_report,
    verify_all,
    verify_mutation_kill,
    verify_predicate,
    verify_resolution,
)

__all__ = [
    "Face",
    "IllegalMoveError",
    "Move",
    "Position",
    "PositionError",
    "Ruleset",
    "RulesetError",
    "apply_move",
    "build_maximal_faces",
    "canonical",
    "check_move",
    "dihedral_images",
    "legal_moves",
    "format_position",
    "format_ruleset",
    "parse_position",
    "parse_ruleset",
    "Predicate",
    "PredicateError",
    "Witness",
    "eval_predicate",
    "holds",
    "predicate",
    "predicate_for",
    "ByPredicate",
    "ClassificationError",
    "DisjointSum",
    "Evaluation",
    "IsomorphicTo",
    "PileMerge",
    "Unsolved",
    "best_move",
    "classify",
    "evaluate",
    "find_isomorphism",
    "resolve_outcome",
    "ruleset_catalog",
    "BudgetError",
    "CapacityError",
    "Outcome",
    "build_grundy_table",
    "build_outcome_table",
    "build_tables",
    "default_bound",
    "disjunctive_outcome",
    "dump_table",
    "grundy",
    "load_table",
    "outcome",
    "selective_outcome",
    "table_to_csv",
    "winning_move",
    "Mismatch",
    "VerificationReport",
    "export_report",
    "verify_all",
    "verify_mutation_kill",
    "verify_predicate",
    "verify_resolution",
]
