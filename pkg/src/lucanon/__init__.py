"""HOSVD canonical forms and local-unitary equivalence of multipartite pure states."""

__version__ = "0.1.0"

from .equivalence import (  # noqa: E402
    DecideOptions,
    Tag,
    Verdict,
    Witness,
    decide_lu,
    solve_block_symmetry,
    verify_witness,
)
from .hosvd import HOSVDResult, hosvd, reduced_density, sorted_trace_spectrum, verify_core  # noqa: E402
from .linalg import svd  # noqa: E402
from .oracle import brute_force_lu_distance  # noqa: E402
from .phase import solve_phase_symmetry  # noqa: E402
from .rng import haar_random_unitary, random_local_unitaries, random_state  # noqa: E402
from .symmetry import (  # noqa: E402
    SymmetryStructure,
    degeneracy_partition,
    structures_compatible,
    symmetry_structure,
)
from .tensor import (  # noqa: E402
    StateTensor,
    fold,
    inner,
    mode_apply,
    multi_apply,
    new_state,
    normalize,
    subtensor,
    unfold,
)

__all__ = [
    "DecideOptions",
    "HOSVDResult",
    "StateTensor",
    "SymmetryStructure",
    "Tag",
    "Verdict",
    "Witness",
    "brute_force_lu_distance",
    "decide_lu",
    "degeneracy_partition",
    "fold",
    "haar_random_unitary",
    "hosvd",
    "inner",
    "mode_apply",
    "multi_apply",
    "new_state",
    "normalize",
    "random_local_unitaries",
    "random_state",
    "reduced_density",
    "solve_block_symmetry",
    "solve_phase_symmetry",
    "sorted_trace_spectrum",
    "structures_compatible",
    "subtensor",
    "svd",
    "symmetry_structure",
    "unfold",
    "verify_core",
    "verify_witness",
]
