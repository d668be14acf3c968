"""Lindblad dynamics and quantum correlations for two Förster-coupled
quantum dots in a lossy single-mode cavity.

User-facing rates are nu = rate/2pi in GHz and times are picoseconds;
internal computations use angular rad/ps.
"""

__version__ = "0.1.0"

from .errors import (
    DiagnosticsError,
    ShapeError,
    SimulationError,
    StiffnessError,
    TruncationError,
)
from .hilbert import (
    HilbertSpace,
    annihilation,
    creation,
    excitation_number,
    make_space,
    sigma_minus,
    sigma_plus,
)
from .model import (
    ANGULAR_PER_GHZ,
    PulseParams,
    SpectrumTable,
    SystemParams,
    hamiltonian,
    manifold_block,
    spectrum_sweep,
)
from .dynamics import (
    ObservableTable,
    Trajectory,
    integrate,
    lindblad_rhs,
    observables,
    pump_profile,
    validate_density_matrix,
)
from .correlations import (
    CorrelationRecord,
    classical_correlation,
    concurrence,
    discord,
    eof,
    evaluate_trajectory,
    max_non_x_magnitude,
    mutual_information,
    reduce_to_dots,
    von_neumann_entropy,
)
from .scenarios import (
    CSV_COLUMNS,
    INITIAL_STATE_TAGS,
    PRESET_NAMES,
    ScenarioConfig,
    SweepSpec,
    config_from_dict,
    config_to_dict,
    initial_state,
    load_config,
    preset,
    run,
    run_spectrum,
)

__all__ = [
    "__version__",
    "SimulationError", "TruncationError", "StiffnessError", "DiagnosticsError",
    "ShapeError",
    "HilbertSpace", "make_space", "annihilation", "creation", "sigma_minus",
    "sigma_plus", "excitation_number",
    "ANGULAR_PER_GHZ", "PulseParams", "SystemParams", "hamiltonian",
    "manifold_block", "SpectrumTable", "spectrum_sweep",
    "Trajectory", "ObservableTable", "integrate", "lindblad_rhs", "observables",
    "pump_profile", "validate_density_matrix",
    "CorrelationRecord", "reduce_to_dots", "concurrence", "eof",
    "von_neumann_entropy", "mutual_information", "classical_correlation",
    "discord", "evaluate_trajectory", "max_non_x_magnitude",
    "PRESET_NAMES", "INITIAL_STATE_TAGS", "CSV_COLUMNS", "ScenarioConfig",
    "SweepSpec", "preset", "initial_state", "run", "run_spectrum",
    "load_config", "config_to_dict", "config_from_dict",
]
