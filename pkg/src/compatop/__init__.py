"""Binary quadratic operads, compatible structures and operadic partition posets."""

from .linalg import Matrix, Subspace, canonical_basis, homology_ranks, nullspace, orthogonal_complement
from .partitions import (
    EnrichedPartition,
    WeightedPartition,
    build_operadic_poset,
    build_partition_poset,
    build_weighted_poset,
    fiber_product,
)
from .permutations import Permutation
from .poset import FinitePoset, is_isomorphic, maximal_intervals
from .presentations import (
    QuadraticPresentation,
    black_product,
    build_linear_compatible,
    build_totally_compatible,
    catalogue,
    koszul_dual,
    white_product,
)
from .setoperads import builtin_operad, check_basic_set, check_operad_axioms
from .shelling import (
    check_cohen_macaulay,
    interval_homology,
    is_graded,
    is_semimodular,
    is_totally_semimodular,
    mobius,
    paper_atom_ordering,
    verify_recursive_atom_ordering,
)

__version__ = "0.1.0"
