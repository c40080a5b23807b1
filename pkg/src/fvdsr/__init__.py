"""Two-component relativistic quantum mechanics under Planck-scale deformed kinematics.

Bound-state spectra (infinite well, relativistic oscillator) and step/barrier
scattering coefficients from the conserved pseudo-Hermitian current, for the
undeformed, rational, polynomial and generic leading-order dispersion maps,
with independent brute-force oracles validating every closed form.
"""

from .deformation import (
    DeformationModel,
    EffectiveEnergy,
    LocalWavenumber,
    MapKind,
    Regime,
    effective_energy,
    invert_effective_energy,
    local_wavenumber,
    mdr_residual,
)
from .errors import (
    ConflictError,
    FvdsrError,
    GridTooCoarse,
    GridTooNarrow,
    InsufficientRange,
    NoBracket,
    NonpositiveFrequency,
    NonpositiveMass,
    NoRealBranch,
    PerturbativeWindowWarning,
    StepSizeTooLarge,
    UsageError,
    WrongModelKind,
)
from .fvcore import (
    Branch,
    FvMatrix,
    FvSpinor,
    PlaneWaveMode,
    delta_h,
    fv_current,
    fv_density,
    fv_from_kg,
    fv_plane_wave_current,
    h_fv_deformed,
    h_fv_free,
    h_fv_oscillator_effective,
    is_sigma3_pseudo_hermitian,
    kg_from_fv,
    plane_wave_mode,
)
from .oracle import (
    GridSpec,
    OrderFitResult,
    barrier_t_ode,
    oscillator_eigen_fd,
    perturbation_order_check,
    well_eigen_fd,
)
from .scattering import (
    BarrierConfig,
    RegimeFlag,
    ScatteringPoint,
    StepConfig,
    barrier_transmission,
    resonance_energies,
    rt_scan,
    step_coefficients,
    supercritical_threshold,
)
from .spectra import (
    OscillatorConfig,
    SpectrumResult,
    SpectrumRow,
    WellConfig,
    oscillator_effective_scales,
    oscillator_exact_deformed,
    oscillator_shift_first_order,
    oscillator_spectrum,
    oscillator_spectrum_undeformed,
    well_asymptotics,
    well_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BarrierConfig",
    "ConflictError",
    "DeformationModel",
    "EffectiveEnergy",
    "FvMatrix",
    "FvSpinor",
    "FvdsrError",
    "GridSpec",
    "GridTooCoarse",
    "GridTooNarrow",
    "InsufficientRange",
    "LocalWavenumber",
    "MapKind",
    "NoBracket",
    "NoRealBranch",
    "NonpositiveFrequency",
    "NonpositiveMass",
    "OrderFitResult",
    "OscillatorConfig",
    "PerturbativeWindowWarning",
    "PlaneWaveMode",
    "Regime",
    "RegimeFlag",
    "ScatteringPoint",
    "SpectrumResult",
    "SpectrumRow",
    "StepConfig",
    "StepSizeTooLarge",
    "UsageError",
    "WellConfig",
    "WrongModelKind",
    "barrier_t_ode",
    "barrier_transmission",
    "delta_h",
    "effective_energy",
    "fv_current",
    "fv_density",
    "fv_from_kg",
    "fv_plane_wave_current",
    "h_fv_deformed",
    "h_fv_free",
    "h_fv_oscillator_effective",
    "invert_effective_energy",
    "is_sigma3_pseudo_hermitian",
    "kg_from_fv",
    "local_wavenumber",
    "mdr_residual",
    "oscillator_effective_scales",
    "oscillator_eigen_fd",
    "oscillator_exact_deformed",
    "oscillator_shift_first_order",
    "oscillator_spectrum",
    "oscillator_spectrum_undeformed",
    "perturbation_order_check",
    "plane_wave_mode",
    "resonance_energies",
    "rt_scan",
    "step_coefficients",
    "supercritical_threshold",
    "well_asymptotics",
    "well_eigen_fd",
    "well_spectrum",
]
