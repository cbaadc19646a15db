"""Correlated selection, its sphere geometrization, and qubit checks."""

from .errors import *  # noqa: F401,F403
from .mhs import (
    MHSVerdict,
    Witness,
    affine_span_dimension,
    equal_mean_witness,
    mhs_check,
    pure_manifold_dimension,
    response_probability,
    tomography_fit,
)
from .qubit import (
    BlochVector,
    CDPRecord,
    DensityMatrix,
    Ensemble,
    PureQubit,
    TwoQubitState,
    alice_marginal,
    bloch_vector,
    born_probability,
    cdp_report,
    density_from_ensemble,
    measure_and_entangle,
    mixed_probability,
    pure_from_sphere,
    reverse_measurement,
)
from .selection import (
    CSEstimate,
    JointDistribution,
    UnitSquarePoint,
    classical_measure,
    cs_contour_grid,
    cs_probability,
    joint_distribution,
    postselect,
    simulate_correlated_selection,
)
from .sphere import (
    COS4_LAW,
    QM_LAW,
    ProbabilityLaw,
    SpherePoint,
    great_circle_distance,
    qm_inverse,
    qm_probability,
    semicircle_height,
    sphere_to_square,
    square_to_sphere,
)

__version__ = "0.1.0"
