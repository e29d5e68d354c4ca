"""Anticoherent spin states as symmetric multiqubit states.

Construction, analysis, search and certification of states whose low-order
spin moments are direction independent: Dicke-basis state algebra, four
anticoherence characterizations, Majorana point configurations with
point-group machinery, balanced SLOCC representatives, an exact-rational
linear-programming search over cyclic supports, and the Legendre-node
existence construction.
"""

from .anticoherence import (
    AnticoherenceReport,
    MultipoleTable,
    anticoherence_report,
    check_dicke,
    check_multipole,
    check_operator,
    check_reduced,
    clebsch_gordan,
    multipole_coeffs,
    order_of_anticoherence,
)
from .errors import (
    AclabError,
    BadShapeError,
    NoRepresentativeError,
    NumericalError,
    ZeroStateError,
)
from .majorana import (
    MajoranaConfig,
    SymmetryOp,
    SymmetryReport,
    apply_symmetry,
    barycenter,
    canonical_group_form,
    check_coefficient_constraint,
    configs_match,
    detect_symmetry,
    majorana_points,
    majorana_polynomial,
    state_from_points,
)
from .search import (
    GLFailure,
    GLPlan,
    Infeasible,
    LPInstance,
    LPSolution,
    ScanRecord,
    family_state,
    first_feasible,
    gauss_legendre_construct,
    gauss_legendre_symmetric,
    gl_plan,
    gl_symmetric_plan,
    legendre_nodes_weights,
    lp_feasible,
    scan,
    solve_rational_feasibility,
)
from .slocc import (
    DegeneracyConfig,
    anticoherent_representative,
    apply_diagonal_ilo,
    degeneracy_configuration,
    positive_root,
    slocc_equivalent,
)
from .sphere import (
    Direction,
    HusimiGrid,
    HusimiMultipoles,
    coherent_overlap,
    husimi,
    husimi_grid,
    husimi_multipoles,
)
from .symstate import (
    DensityMatrix,
    SymmetricState,
    abs_isotropic_moment,
    apply_one_qubit_operator,
    dicke_basis_state,
    entanglement_entropy,
    isotropic_moment,
    ladder_element,
    ladder_z_expectation,
    new_state,
    reduced_density,
    rotate,
    rotation_matrix_2x2,
)

__version__ = "0.1.0"
