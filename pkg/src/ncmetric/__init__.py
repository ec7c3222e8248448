"""Spectral distances on finite noncommutative geometries.

The supremum distance d(s, t) = sup { |s(a) - t(a)| : ||[D, pi(a)]|| <= 1 }
is evaluated two ways — published closed forms for the classic finite
geometries and a certified convex oracle for everything else — and the two
lanes cross-validate each other throughout the test suite.
"""

from .commutative import (
    DiracGraph,
    FourPointCoeffs,
    FourPointResult,
    commutative_triple,
    four_point_general,
    four_point_special,
    four_point_triple,
    geodesic_length,
    graph_from_dirac,
    metric_to_triple,
    n_alpha_beta,
    regular_distance,
    regular_triple,
    three_point_distance,
    three_point_inverse,
)
from .linalg import commutator, hermitian, hermitian_eigenvalues, operator_norm
from .matrixgeo import (
    SpherePoint,
    hopf,
    m2_distance,
    matrix_state,
    one_point_triple,
    two_point_distance,
    two_point_space_triple,
)
from .oracle import DimensionCapError, OracleOptions, distance_matrix, distance_numeric
from .polynomials import (
    BivariatePolynomial,
    RealPolynomial,
    dis_in_variable,
    discriminant,
    real_roots,
    resultant,
)
from .products import (
    ProductTriple,
    ScalarFluctuation,
    factor_distance_check,
    fluctuate,
    one_form_residual,
    product_state,
    pythagoras_cross,
    reduce_pair,
    tensor_product_triple,
    warped_geodesic,
)
from .standardmodel import (
    FermionMasses,
    HiggsDoublet,
    build_mass_matrix,
    sm_fiber_distance,
    sm_gtt,
    sm_infinite_sector_check,
    sm_internal_triple,
)
from .triple import (
    AlgebraBlock,
    BlockKind,
    DistanceValue,
    FiniteAlgebra,
    KernelVerdict,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    commutant_kernel_test,
    complex_line,
    evaluate_state,
    matrix_block,
    quaternion,
    quaternions,
    real_line,
    represent,
    selfadjoint_basis_coords,
    represented_selfadjoint_basis,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
