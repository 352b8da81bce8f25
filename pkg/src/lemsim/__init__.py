"""lemsim: exact-diagonalization study of decoherence suppression for
quantum information stored in the ground state and a local energy minimum
of a small interacting pseudo-spin cluster."""

from ._version import __version__
from .cluster import (
    ClusterParams,
    MAX_SPINS,
    apply_sigma_x,
    apply_sigma_z,
    bits_to_config,
    build_hamiltonian,
    classical_energies,
    classical_energy,
    config_to_bits,
    hamming_distance,
    uniform_couplings,
)
from .config import RunConfig, parse_config, render_config
from .csvout import emit_csv
from .dynamics import (
    CoherenceTrace,
    RateComparison,
    TrajectoryConfig,
    calibrate_rate_constant,
    default_time_step,
    default_total_time,
    evolve_superposition,
    rate_vs_prediction,
)
from .errors import (
    CapacityError,
    ConfigError,
    DegeneracyError,
    InsufficientDataError,
    IntegrationError,
    NumericalError,
    SimulationError,
    StrongMixingError,
    ValidationError,
)
from .perturbation import (
    PathSumResult,
    first_order_amplitude,
    multiphoton_path_sum,
    scaling_exponent,
)
from .spectrum import (
    DressedState,
    EigenSystem,
    LandscapeReport,
    LocalMinimum,
    OverlapDecay,
    degeneracy_tolerance,
    diagonalize,
    dress,
    find_local_minima,
    overlap_decay,
    typical_level_spacing,
)
from .sweep import (
    FamilyPoint,
    ScalingFit,
    SweepGrid,
    SweepRow,
    fit_size_scaling,
    run_sweep,
    uniform_ferromagnet,
)
from .transition import (
    CouplingSpec,
    RateReport,
    check_bound,
    lifetime_extension,
    matrix_element,
)

__all__ = [name for name in dir() if not name.startswith("_")]
