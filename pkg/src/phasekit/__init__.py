"""Value-level quantum register simulator.

Registers are named segments of arbitrary integer sizes.  The central
operation multiplies each control value x by the phase w**(k*f(x)) for a
tabulated function f, using two calls to a translation oracle and an
ancilla segment that is borrowed in whatever state it happens to hold,
pure, mixed, or entangled, and handed back unchanged.  On top of that sit
the commutator gadget variants, a single-call variant for a prepared
ancilla, an optimality demonstration for the two-call count, and three demo
algorithms (constant-vs-balanced, iterated search, single-query search).
"""

__version__ = "0.1.0"

from . import backend
from .apps import (
    CKParams,
    DJVerdict,
    SearchResult,
    ck_single_query,
    deutsch_jozsa,
    grover,
    grover_success_probability,
)
from .gadget import (
    GadgetPlan,
    GadgetVariant,
    apply_gadget,
    eigen_ancilla,
    gadget_matrix,
    gadget_steps,
    optimality_check,
    phase_transform,
    phase_transform_initialized,
    phase_transform_mixed,
)
from .oracles import (
    FunctionTable,
    OracleCounter,
    RealFunctionTable,
    TableParseError,
    apply_oracle,
    constant_table,
    delta_table,
    load_table,
    oracle_matrix,
    parse_table,
    quantize,
    random_table,
)
from .state import (
    DensityOperator,
    Purification,
    RegisterLayout,
    StateVector,
    apply_on_segment,
    basis_state,
    equal_up_to_global_phase,
    fidelity,
    mutual_information,
    partial_trace,
    purify,
    random_density,
    random_state,
    tensor,
    von_neumann_entropy,
)
from .transforms import (
    PrimitiveOp,
    apply_primitive,
    build,
    fourier_matrix,
    omega,
    omega_powers,
    phase_by_value_matrix,
    reflect_phase_matrix,
    translate_matrix,
)

__all__ = [
    "__version__",
    "backend",
    "CKParams",
    "DJVerdict",
    "DensityOperator",
    "FunctionTable",
    "GadgetPlan",
    "GadgetVariant",
    "OracleCounter",
    "PrimitiveOp",
    "Purification",
    "RealFunctionTable",
    "RegisterLayout",
    "SearchResult",
    "StateVector",
    "TableParseError",
    "apply_gadget",
    "apply_on_segment",
    "apply_oracle",
    "apply_primitive",
    "basis_state",
    "build",
    "ck_single_query",
    "constant_table",
    "delta_table",
    "deutsch_jozsa",
    "eigen_ancilla",
    "equal_up_to_global_phase",
    "fidelity",
    "fourier_matrix",
    "gadget_matrix",
    "gadget_steps",
    "grover",
    "grover_success_probability",
    "load_table",
    "mutual_information",
    "omega",
    "omega_powers",
    "oracle_matrix",
    "optimality_check",
    "parse_table",
    "partial_trace",
    "phase_by_value_matrix",
    "phase_transform",
    "phase_transform_initialized",
    "phase_transform_mixed",
    "purify",
    "quantize",
    "random_density",
    "random_state",
    "random_table",
    "reflect_phase_matrix",
    "tensor",
    "translate_matrix",
    "von_neumann_entropy",
]
