"""Closed-form steady-state and availability analysis for closed CTMCs.

The heavy lifting lives in the compiled extension ``ctmc._ctmc``; this
package re-exports its public surface.
"""

from ._ctmc import (
    Decomposition,
    Derivation,
    EvalError,
    GeneratorMatrix,
    Model,
    ModelError,
    RateExpr,
    SimEstimate,
    SingularSystemError,
    SteadyState,
    UnsupportedStructure,
    availability,
    build_generator,
    classify,
    derive,
    derive_cycle_rates,
    derive_cycle_sojourn,
    derive_hub,
    derive_tree,
    emit_json,
    equivalent,
    evaluate_states,
    exit_rate,
    express_state,
    parse_model,
    read_expr,
    residual,
    serialize_model,
    simulate,
    sojourn_time,
    solve_steady_state,
)

__all__ = [
    "Decomposition",
    "Derivation",
    "EvalError",
    "GeneratorMatrix",
    "Model",
    "ModelError",
    "RateExpr",
    "SimEstimate",
    "SingularSystemError",
    "SteadyState",
    "UnsupportedStructure",
    "availability",
    "build_generator",
    "classify",
    "derive",
    "derive_cycle_rates",
    "derive_cycle_sojourn",
    "derive_hub",
    "derive_tree",
    "emit_json",
    "equivalent",
    "evaluate_states",
    "exit_rate",
    "express_state",
    "parse_model",
    "read_expr",
    "residual",
    "serialize_model",
    "simulate",
    "sojourn_time",
    "solve_steady_state",
]
