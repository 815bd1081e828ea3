"""Near-field array signal-processing toolkit.

Models large-aperture arrays where the spherical curvature of the wavefront
matters: field-boundary calculators, spherical/planar steering, polar-domain
codebooks, compressed channel estimation, wideband beam focusing, and
near-field DoF / multi-user capacity studies.
"""
__version__ = "0.1.0"

from .beamforming import (
    DesignKind,
    NarrowbandBeamformer,
    WidebandBeamformer,
    focal_point_map,
    focus_weights,
    gain,
    gain_map,
    gain_vs_frequency,
    min_band_gain,
    ps_wideband,
    steer_weights,
    ttd_pdf,
)
from .boundaries import (
    PI_OVER_8,
    UNBOUNDED,
    BoundaryCriterion,
    BoundaryReport,
    effective_rayleigh_distance,
    erd_report,
    mimo_rayleigh_distance,
    numeric_phase_boundary,
    phase_boundary_report,
    rayleigh_distance,
    ris_boundary_d2,
    ris_effective_distance,
)
from .capacity import (
    DofReport,
    dof_upper_bound,
    dof_vs_distance,
    effective_dof,
    recommend_rf_chains,
    sdma_compare,
    sum_rate,
    waterfilling,
    zf_precoder,
)
from .carrier import SPEED_OF_LIGHT, CarrierConfig, subcarrier_frequencies, wavelength
from .codebook import (
    Codebook,
    CodebookKind,
    angular_codebook,
    codebook_coherence_profile,
    coherence,
    load_codebook,
    polar_codebook,
    save_codebook,
)
from .errors import (
    ConfigError,
    DomainError,
    InvalidArgumentError,
    NearFieldError,
    NumericError,
    UnsupportedModelError,
)
from .estimation import (
    COMPARE_HEADER,
    NMSE_FLOOR_DB,
    EstimationResult,
    PilotSystem,
    compare_codebooks,
    nmse,
    omp,
    simulate_pilots,
)
from .geometry import (
    FAR_FIELD,
    ArrayGeometry,
    PolarPoint,
    build_ula,
    build_upa,
    polar_to_cartesian,
)
from .propagation import (
    ChannelMatrix,
    SteeringVector,
    WaveModel,
    cascaded_ris_channel,
    element_distances,
    los_mimo_channel,
    multipath_channel,
    phase_discrepancy,
    planar_steering,
    spherical_steering,
    wideband_steering,
)
from .scenario import (
    AmplitudeModel,
    PathSpec,
    ScenarioConfig,
    derive_rng,
    load_scenario,
    save_scenario,
)

__all__ = [
    "__version__",
    # geometry
    "FAR_FIELD", "ArrayGeometry", "PolarPoint", "build_ula", "build_upa",
    "polar_to_cartesian",
    # carrier
    "SPEED_OF_LIGHT", "CarrierConfig", "subcarrier_frequencies", "wavelength",
    # scenario
    "AmplitudeModel", "PathSpec", "ScenarioConfig", "derive_rng",
    "load_scenario", "save_scenario",
    # propagation
    "ChannelMatrix", "SteeringVector", "WaveModel", "cascaded_ris_channel",
    "element_distances", "los_mimo_channel", "multipath_channel",
    "phase_discrepancy", "planar_steering", "spherical_steering",
    "wideband_steering",
    # boundaries
    "PI_OVER_8", "UNBOUNDED", "BoundaryCriterion", "BoundaryReport",
    "effective_rayleigh_distance", "erd_report", "mimo_rayleigh_distance",
    "numeric_phase_boundary", "phase_boundary_report", "rayleigh_distance",
    "ris_boundary_d2", "ris_effective_distance",
    # codebook
    "Codebook", "CodebookKind", "angular_codebook",
    "codebook_coherence_profile", "coherence", "load_codebook",
    "polar_codebook", "save_codebook",
    # estimation
    "COMPARE_HEADER", "NMSE_FLOOR_DB", "EstimationResult", "PilotSystem",
    "compare_codebooks", "nmse", "omp", "simulate_pilots",
    # beamforming
    "DesignKind", "NarrowbandBeamformer", "WidebandBeamformer",
    "focal_point_map", "focus_weights", "gain", "gain_map",
    "gain_vs_frequency", "min_band_gain", "ps_wideband", "steer_weights", "ttd_pdf",
    # capacity
    "DofReport", "dof_upper_bound", "dof_vs_distance", "effective_dof",
    "recommend_rf_chains", "sdma_compare", "sum_rate", "waterfilling",
    "zf_precoder",
    # errors
    "ConfigError", "DomainError", "InvalidArgumentError", "NearFieldError",
    "NumericError", "UnsupportedModelError",
]
