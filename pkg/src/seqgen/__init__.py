"""Compile any qubit state into a sequence of ancilla-qubit isometries and simulate it."""

__version__ = "0.1.0"

from .compiler import (
    CompileError,
    CompilerTrace,
    Recipe,
    compile_mps,
    compile_state,
    dimension_schedule,
    embed_isometry,
    embed_recipe,
)
from .linalg import SVDResult, complete_to_unitary, exp_minus_iG, is_isometry, kron, svd
from .mps import (
    MPSState,
    StateVector,
    bond_dimensions,
    fidelity,
    mps_evaluate,
    random_mps,
    state_to_mps,
)
from .simulator import (
    DecouplingError,
    JointState,
    decouple,
    output_state,
    run_recipe,
    schmidt_spectrum,
    verify_recipe,
)
from .tagqubit import atomic_unitary_from_iso, d_standard_map, iso_from_atomic_unitary, sqrt_swap

__all__ = [name for name in dir() if not name.startswith("_")]
