"""Two-qubit quantum correlation toolkit.

Computes entanglement (concurrence, entanglement of formation) and quantum
discord for arbitrary and Bell-diagonal density matrices, classifies
Bell-diagonal states within the tetrahedron geometry, sweeps parametrized
trajectories and detects sudden death, branch fractures and freezing, and
simulates the coincidence-count tomography pipeline. The functionality is
also exposed as an HTTP service (``qcorr.service``) with a thin CLI client
(``qcorr.cli``).
"""

__version__ = "0.1.0"

from .bell_geometry import (
    BellDiagonalState,
    DiscordBranch,
    EntanglementRegion,
    RegionLabel,
    classical_correlation_bd,
    classify_region,
    concurrence_bd,
    discord_bd,
    eof_bd,
    from_probabilities,
    to_density_matrix,
    to_probabilities,
)
from .channels import MixtureSpec, NoiseSpec, apply_white_noise, bell_diagonal_scaling, mix_statistical
from .correlations import (
    CorrelationReport,
    MeasurementBasis,
    OptimizerConfig,
    concurrence,
    conditional_entropy_after_measurement,
    discord_numeric,
    entanglement_of_formation,
    fidelity,
    full_report,
    mutual_information,
)
from .tomography import ProjectorSet, TomographyRun, projector_set, reconstruct, run_tomography, simulate_counts
from .trajectories import (
    EventKind,
    SweepResult,
    Trajectory,
    TransitionEvent,
    detect_events,
    excess_statistics,
    refine_event,
    sweep,
)

__all__ = [
    "__version__",
    "BellDiagonalState",
    "DiscordBranch",
    "EntanglementRegion",
    "RegionLabel",
    "classical_correlation_bd",
    "classify_region",
    "concurrence_bd",
    "discord_bd",
    "eof_bd",
    "from_probabilities",
    "to_density_matrix",
    "to_probabilities",
    "MixtureSpec",
    "NoiseSpec",
    "apply_white_noise",
    "bell_diagonal_scaling",
    "mix_statistical",
    "CorrelationReport",
    "MeasurementBasis",
    "OptimizerConfig",
    "concurrence",
    "conditional_entropy_after_measurement",
    "discord_numeric",
    "entanglement_of_formation",
    "fidelity",
    "full_report",
    "mutual_information",
    "ProjectorSet",
    "TomographyRun",
    "projector_set",
    "reconstruct",
    "run_tomography",
    "simulate_counts",
    "EventKind",
    "SweepResult",
    "Trajectory",
    "TransitionEvent",
    "detect_events",
    "excess_statistics",
    "refine_event",
    "sweep",
]
