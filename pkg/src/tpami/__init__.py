"""tpami: two-photon-absorption Michelson interferometer simulator.

Simulates the pair-detection signal of broadband chaotic light in a
Michelson interferometer with up to four polarizers, via a closed-form
vector two-photon model cross-validated by a Monte-Carlo photon
ensemble.
"""

__version__ = "0.1.0"

from .config import (
    InterferometerConfig,
    PRESET_NAMES,
    PolarizerBank,
    ScanSpec,
    SourceSpec,
    load_config,
    make_config,
)
from .decomposition import (
    ComponentBreakdown,
    OscillationReport,
    classify,
    dominant_oscillation,
    eraser_extremum,
)
from .engine import (
    AMPLITUDES,
    AmplitudeIndex,
    PairingLedger,
    TermMatrix,
    TwoPhotonCovariance,
    assemble_vtpa,
    blocked_arm_rate,
    coefficient_matrix,
    g2_direct,
    input_covariance,
    pair_amplitude,
    path_probabilities,
    scalar_matrix,
    transform_covariance,
)
from .errors import (
    DegenerateChain,
    DegenerateNormalization,
    InsufficientSpan,
    ParseError,
    ValidationError,
)
from .oracle import CompareReport, OracleRun, compare_trace, mc_g2, mc_trace
from .polarization import (
    ArmChain,
    InputPolarization,
    PolarizationTransform,
    beamsplitter_port,
    build_arm_chain,
    effective_axes,
    polarizer,
)
from .scan import ScanTrace, emit, run_scan
from .spectrum import (
    CoherenceSample,
    SpectralModel,
    coherence_sample,
    coherence_time,
    gamma,
    sample_frequency,
)

__all__ = [
    "AMPLITUDES",
    "AmplitudeIndex",
    "ArmChain",
    "CoherenceSample",
    "CompareReport",
    "ComponentBreakdown",
    "DegenerateChain",
    "DegenerateNormalization",
    "InputPolarization",
    "InsufficientSpan",
    "InterferometerConfig",
    "OracleRun",
    "OscillationReport",
    "PRESET_NAMES",
    "PairingLedger",
    "ParseError",
    "PolarizationTransform",
    "PolarizerBank",
    "ScanSpec",
    "ScanTrace",
    "SourceSpec",
    "SpectralModel",
    "TermMatrix",
    "TwoPhotonCovariance",
    "ValidationError",
    "assemble_vtpa",
    "beamsplitter_port",
    "blocked_arm_rate",
    "build_arm_chain",
    "classify",
    "coefficient_matrix",
    "coherence_sample",
    "coherence_time",
    "compare_trace",
    "dominant_oscillation",
    "effective_axes",
    "emit",
    "eraser_extremum",
    "g2_direct",
    "gamma",
    "input_covariance",
    "load_config",
    "make_config",
    "mc_g2",
    "mc_trace",
    "pair_amplitude",
    "path_probabilities",
    "polarizer",
    "run_scan",
    "sample_frequency",
    "scalar_matrix",
    "transform_covariance",
]
