"""Mobius functions of stabilizer ideals in finite linear groups, verified
against alternating subset sums and reduced Euler characteristics on
exhaustively enumerable instances."""

from .gfq import FqField, FieldElement
from .linalg import (
    Matrix,
    Subspace,
    SubspaceLattice,
    enumerate_subspaces,
    gaussian_binomial,
    invariant_subspaces,
    rref,
)
from .group import (
    GroupAction,
    GroupSet,
    SubgroupRef,
    action_from_subspaces,
    as_groupset,
    closure,
    is_irreducible,
    overgroup_interval,
    stabilizer,
    verify_action_subset_sums,
)
from .poset import (
    BoundedPoset,
    FinitePoset,
    MobiusTable,
    adjoin_bounds,
    crosscut_sum,
    mobius,
    mobius_by_zeta_inversion,
    mobius_row,
    order_ideal_generated,
)
from .simplicial import (
    EulerReport,
    SimplicialComplex,
    complex_from_faces,
    euler,
    face_alternating_sum,
    order_complex,
)
from .identities import (
    AlternatingSums,
    IdentityReport,
    ReducibleIdeal,
    StabilizerFamily,
    alternating_sums,
    build_complexes,
    build_ideal,
    decomposition_residual,
    mobius_between,
    mu_ideal,
    stabilizer_family,
    verify_identities,
)

__version__ = "0.1.0"
