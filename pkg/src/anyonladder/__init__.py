"""Creation and annihilation operators for multiplicity-free 2D anyon theories."""

from .algebra import (
    ClosureResult,
    Decomposition,
    RegionState,
    RelationReport,
    algebra_closure,
    apply_word,
    candidate_local_basis,
    decompose_observable,
    fock_word,
    fock_words,
    is_local_candidate,
    kernel_dimension,
    local_candidate_span,
    mode_relabel_unitary,
    o_operator,
    o_polynomial,
    observable_basis,
    region_states,
    vacuum_index,
    verify_relations,
)
from .basis import (
    FusionTreeBasis,
    SparseOperator,
    braid_adjacent,
    braid_word,
    recouple,
    total_charge_projector,
)
from .hubbard import (
    HubbardParams,
    LatticeSpec,
    Spectrum,
    build_hamiltonian,
    build_lattice,
    diagonalize,
    hamiltonian_polynomial,
    hubbard_hamiltonian,
    occupation_profile,
)
from .ladder import (
    CoefficientTable,
    FibonacciPair,
    LadderSet,
    annihilating_element,
    coefficient_tables,
    fermion_annihilator,
    fibonacci_pair,
    j_count,
    ladder_set,
    rest_charges,
    transport_to_mode,
)
from .model import (
    AnyonModel,
    ModelDataError,
    ValidationReport,
    builtin,
    dump_model,
    fuse,
    load_model,
    validate_model,
)
from .polynomial import GeneratorSymbol, LadderPolynomial

__version__ = "0.1.0"

__all__ = [
    "AnyonModel",
    "ClosureResult",
    "CoefficientTable",
    "Decomposition",
    "FibonacciPair",
    "FusionTreeBasis",
    "GeneratorSymbol",
    "HubbardParams",
    "LadderPolynomial",
    "LadderSet",
    "LatticeSpec",
    "ModelDataError",
    "RegionState",
    "RelationReport",
    "SparseOperator",
    "Spectrum",
    "ValidationReport",
    "algebra_closure",
    "annihilating_element",
    "apply_word",
    "braid_adjacent",
    "braid_word",
    "build_hamiltonian",
    "build_lattice",
    "builtin",
    "candidate_local_basis",
    "coefficient_tables",
    "decompose_observable",
    "diagonalize",
    "dump_model",
    "fermion_annihilator",
    "fibonacci_pair",
    "fock_word",
    "fock_words",
    "fuse",
    "hamiltonian_polynomial",
    "hubbard_hamiltonian",
    "is_local_candidate",
    "j_count",
    "kernel_dimension",
    "ladder_set",
    "load_model",
    "local_candidate_span",
    "mode_relabel_unitary",
    "o_operator",
    "o_polynomial",
    "observable_basis",
    "occupation_profile",
    "recouple",
    "region_states",
    "rest_charges",
    "total_charge_projector",
    "transport_to_mode",
    "vacuum_index",
    "validate_model",
    "verify_relations",
    "__version__",
]
