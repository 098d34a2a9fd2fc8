"""Composite two-qubit Ising gates robust to coupling-strength errors."""

from .circuit import (
    LocalLayer,
    Pulse,
    PulseCircuit,
    coupling,
    evaluate,
    execution_time,
    is_physical,
    make_physical,
    rot,
)
from .matcore import TOL, dist_up_to_phase, kron, svd4
from .robustness import ErrorScan, FirstOrderReport, check_robust, delta_u, delta_u_oracle, scan
from .schmidt import SchmidtData, lu_invariant_equal, osn, schmidt_decompose
from .synth import (
    SingularParameters,
    SolutionN3,
    SynthesisError,
    UnreachableTarget,
    build_cnot,
    build_v_gate,
    general_solution,
    robust_s,
    simplify_to_minimal,
    solve_theta_star,
)

__all__ = [
    "ErrorScan",
    "FirstOrderReport",
    "LocalLayer",
    "Pulse",
    "PulseCircuit",
    "SchmidtData",
    "SingularParameters",
    "SolutionN3",
    "SynthesisError",
    "TOL",
    "UnreachableTarget",
    "build_cnot",
    "build_v_gate",
    "check_robust",
    "coupling",
    "delta_u",
    "delta_u_oracle",
    "dist_up_to_phase",
    "evaluate",
    "execution_time",
    "general_solution",
    "is_physical",
    "kron",
    "lu_invariant_equal",
    "make_physical",
    "osn",
    "robust_s",
    "rot",
    "scan",
    "schmidt_decompose",
    "simplify_to_minimal",
    "solve_theta_star",
    "svd4",
]
