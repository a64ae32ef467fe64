"""swsync: synchronisation prediction for small-world oscillator networks.

The package couples three ingredients:

* closed-form Laplacian spectral moments of a shortcut small-world model,
* a moment-matched triangular reconstruction of the spectral support,
* transverse-stability exponents of a periodic orbit (master stability
  function),

and verifies the resulting coupling-strength predictions by direct
simulation of the coupled network.
"""

__version__ = "0.1.0"

from .dynamics import (
    ROSSLER_ANCHOR_GUESS,
    LimitCycle,
    OscillatorModel,
    find_limit_cycle,
    integrate_fixed_step,
    rossler_field,
    rossler_jacobian,
    rossler_model,
)
from .errors import (
    CubicComplexRootsError,
    EdgeListFormatError,
    FitError,
    IntegrationError,
    LimitCycleError,
    ParameterError,
    PredictionError,
    SpectralError,
    StabilityIntervalError,
    SwsyncError,
)
from .graphs import (
    Graph,
    SmallWorldParams,
    count_triangles,
    degree_sequence,
    generate_small_world,
    laplacian,
    load_edge_list,
    ring_lattice,
    save_edge_list,
)
from .msf import (
    LyapunovEstimate,
    MSFCurve,
    StabilityInterval,
    floquet_exponents,
    max_lyapunov,
    msf_sweep,
    stability_interval,
)
from .netsim import (
    SimTrace,
    SyncVerdict,
    perturbed_initials,
    simulate_network,
    sync_verdict,
)
from .predictor import (
    Prediction,
    ValidationReport,
    ValidationRow,
    predict_sync,
    validate_prediction,
)
from .spectral import (
    EsdHistogram,
    SpectralMoments,
    eigenvalues,
    esd_histogram,
    exact_moments,
    expected_degree_moments,
    expected_moments,
    moments_from_eigenvalues,
)
from .trifit import (
    TriangularFit,
    fit_triangle,
    solve_cubic_real,
    triangle_density,
    triangle_moments,
)

__all__ = [
    "__version__",
    # graphs
    "Graph",
    "SmallWorldParams",
    "ring_lattice",
    "generate_small_world",
    "degree_sequence",
    "count_triangles",
    "laplacian",
    "save_edge_list",
    "load_edge_list",
    # spectral
    "SpectralMoments",
    "EsdHistogram",
    "exact_moments",
    "expected_moments",
    "expected_degree_moments",
    "eigenvalues",
    "esd_histogram",
    "moments_from_eigenvalues",
    # triangular fit
    "TriangularFit",
    "fit_triangle",
    "triangle_moments",
    "triangle_density",
    "solve_cubic_real",
    # dynamics
    "OscillatorModel",
    "LimitCycle",
    "rossler_field",
    "rossler_jacobian",
    "rossler_model",
    "ROSSLER_ANCHOR_GUESS",
    "integrate_fixed_step",
    "find_limit_cycle",
    # msf
    "MSFCurve",
    "StabilityInterval",
    "LyapunovEstimate",
    "floquet_exponents",
    "msf_sweep",
    "stability_interval",
    "max_lyapunov",
    # netsim
    "SimTrace",
    "SyncVerdict",
    "simulate_network",
    "perturbed_initials",
    "sync_verdict",
    # predictor
    "Prediction",
    "ValidationRow",
    "ValidationReport",
    "predict_sync",
    "validate_prediction",
    # errors
    "SwsyncError",
    "ParameterError",
    "EdgeListFormatError",
    "SpectralError",
    "FitError",
    "CubicComplexRootsError",
    "IntegrationError",
    "LimitCycleError",
    "StabilityIntervalError",
    "PredictionError",
]
