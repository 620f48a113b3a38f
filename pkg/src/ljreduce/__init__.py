"""Numerical engine for Lie-Jordan algebras realized by Hermitian matrices.

Subspace arithmetic (`matspace`), the two compatible products and their
axiom verifiers (`core`), reduction by Jordan ideals and Lie-Jordan
subalgebras (`reduction`), quantum-constraint T-reduction with its
equivalence certificates (`constraints`), state spaces and their
reduction/extension (`states`), GNS representations (`gns`), deterministic
instance generation (`genrand`), and a batch CLI (`cli`).
"""

from .config import TOL, Tolerances, set_scale
from .core import (
    CStarAlgebra,
    LJBAlgebra,
    LJBParams,
    associative_product,
    complexify,
    jordan_product,
    lie_bracket,
    ljb_algebra,
    operator_norm,
    verify_dynamical_correspondence,
    verify_jordan_automorphism,
    verify_ljb_axioms,
)
from .constraints import (
    ConstrainedSystem,
    TReductionResult,
    complexified_ideal_reduction,
    constrained_ideal,
    dirac_states,
    multiplier_algebra,
    t_reduce,
    verify_equivalence,
    weak_commutant,
)
from .gns import (
    GNSRep,
    gelfand_ideal,
    gns,
    is_irreducible,
    is_pure,
    purity_obstruction,
    reduced_gns_equivalence,
)
from .matspace import (
    AmbientSpace,
    MatrixSubspace,
    complement_within,
    coset_decompose,
    intersect,
    span,
    subspace_sum,
    subspaces_equal,
)
from .reduction import (
    ReductionResult,
    is_jordan_ideal,
    is_lj_subalgebra,
    is_unital_subalgebra,
    normalizer,
    quotient_norm,
    quotient_norm_infimum,
    reduce_by_ideal,
    reduce_by_subalgebra,
    support_projection,
)
from .states import (
    StateClass,
    StateFunctional,
    extend_state,
    is_state,
    nj0_equivalent,
    reduce_state,
    vanishes_on,
    verify_state_correspondence,
)
from .genrand import GenSpec, gen_algebra, gen_constraints, gen_state, gen_system

__version__ = "0.1.0"
