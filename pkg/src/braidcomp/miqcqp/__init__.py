from .build import (
    assignment_with_binaries,
    build_frobenius_model,
    build_invariant_model,
    linearize_bilinear,
    program_assignment,
)
from .lpformat import export_model, parse_lp, parse_model, to_lp_string
from .model import (
    LinearConstraint,
    MiqcqpModel,
    Objective,
    QuadraticConstraint,
    VarKind,
    VarRef,
    constraint_violations,
    evaluate_assignment,
    load_assignment,
    save_assignment,
)

__all__ = [
    "LinearConstraint",
    "MiqcqpModel",
    "Objective",
    "QuadraticConstraint",
    "VarKind",
    "VarRef",
    "assignment_with_binaries",
    "build_frobenius_model",
    "build_invariant_model",
    "constraint_violations",
    "evaluate_assignment",
    "export_model",
    "linearize_bilinear",
    "load_assignment",
    "parse_lp",
    "parse_model",
    "program_assignment",
    "save_assignment",
    "to_lp_string",
]
