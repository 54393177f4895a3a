"""Decide free-fermion solvability of a Pauli Hamiltonian from its
frustration graph, and construct the solution when it exists."""

from .chains import (
    ChainSpec,
    RecursionMatrix,
    chain_polynomial,
    dispersion,
    elementary_symmetric,
    gap_scan,
    recursion_matrix,
    verify_boundary,
)
from .errors import (
    ComplexRootError,
    ConditioningError,
    DegenerateModeError,
    FFSolveError,
    ModelError,
    NotSimplicialError,
    ParseError,
    SearchBudgetError,
)
from .graphs import WeightedGraph, frustration_graph, maximal_cliques
from .indpoly import (
    IndependencePolynomial,
    SingleParticleEnergies,
    free_spectrum,
    independence_number,
    independent_sets,
    single_particle_energies,
    verify_clique_recurrence,
    weighted_independence_polynomial,
)
from .models import (
    Hamiltonian,
    back_to_back_model,
    chain_model,
    generate_model,
    h5_model,
    h6_model,
    junction_graph,
    junction_model,
    parse_graph,
    parse_hamiltonian,
    realize_graph,
    write_graph,
    write_hamiltonian,
)
from .paulis import (
    OperatorSum,
    PauliTerm,
    commutes,
    multiply,
    opsum_anticomm,
    opsum_comm,
    opsum_mul,
    to_dense,
)
from .recognition import (
    StructureReport,
    classify,
    find_claw,
    find_even_hole,
    find_simplicial_cliques,
)
from .solver import (
    IncognitoMode,
    TransferOperator,
    all_modes,
    charge,
    charges_commute_residual,
    check_fundamental_identity,
    higher_hamiltonian,
    incognito_mode,
    reconstruct,
    simplicial_extension,
    transfer,
    transfer_factorization_residual,
)
from .verify import (
    VerificationReport,
    brute_force_spectrum,
    verify_all,
    verify_free,
    verify_nonexample_equal_couplings,
)

__version__ = "0.1.0"
