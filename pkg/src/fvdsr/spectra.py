"""Closed-form bound-state spectra: infinite well and the relativistic oscillator.

Confinement fixes the spatial quantization independently of the deformation
model, so every model shares k_n = n pi / L (well) or the Hermite ladder
lambda_n = m omega (2n + 1) (oscillator) and differs only in the map linking
the quantized scale to the stationary energy.  Branch pairing E_- = -E_+ is
enforced by construction in every emitted table.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .deformation import DeformationModel, MapKind, invert_effective_energy
from .errors import InsufficientRange, PerturbativeWindowWarning, WrongModelKind
from .fvcore import Branch

# Rows with l_p |E| at or above this are marked outside the trusted window.
PERTURBATIVE_WINDOW = 0.1


@dataclass(frozen=True)
class WellConfig:
    mass: float
    width: float
    n_max: int

    def __post_init__(self):
        if not self.mass >= 0.0:
            raise ValueError(f"mass must be >= 0, got {self.mass!r}")
        if not self.width > 0.0:
            raise ValueError(f"width must be positive, got {self.width!r}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max!r}")

    def k(self, n: int) -> float:
        return n * math.pi / self.width

    def omega_n(self, n: int) -> float:
        """Undeformed shell value sqrt(m^2 + k_n^2)."""
        return math.hypot(self.mass, self.k(n))


@dataclass(frozen=True)
class OscillatorConfig:
    mass: float
    omega: float
    n_max: int

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max!r}")

    def lambda_n(self, n: int) -> float:
        """Ordered-product eigenvalue m omega (2n + 1) including the ordering shift."""
        return self.mass * self.omega * (2 * n + 1)


class SpectrumRow(NamedTuple):
    n: int
    e_plus: float
    e_minus: float
    spacing_plus: float
    valid: bool


@dataclass
class SpectrumResult:
    model: DeformationModel
    rows: list[SpectrumRow]
    validity_truncated_at: Optional[int] = None


def _assemble_rows(model: DeformationModel, ns: list[int], e_plus: list[float]) -> SpectrumResult:
    """Build branch-paired rows; e_plus must carry one extra level for spacing."""
    rows = []
    truncated_at = None
    for i, n in enumerate(ns):
        ep = e_plus[i]
        spacing = e_plus[i + 1] - ep
        ok = model.l_p * abs(ep) < PERTURBATIVE_WINDOW
        if not ok and truncated_at is None:
            truncated_at = n
        rows.append(SpectrumRow(n, ep, -ep, spacing, ok))
    return SpectrumResult(model, rows, truncated_at)


def well_spectrum(cfg: WellConfig, model: DeformationModel) -> SpectrumResult:
    """Branch-resolved well spectrum for any map kind.

    E_{n,+} = invert(model, Omega_n) with Omega_n = sqrt(m^2 + (n pi / L)^2):
    the identity for SR, Omega/(1 + l_p Omega) for the rational map and the
    SR-connected quadratic root for the polynomial maps.  The n = 0 mode is
    excluded; spacing of the last row uses an internally computed extra level.
    """
    ns = list(range(1, cfg.n_max + 1))
    e_plus = [invert_effective_energy(model, cfg.omega_n(n)) for n in ns + [cfg.n_max + 1]]
    return _assemble_rows(model, ns, e_plus)


def well_asymptotics(
    cfg: WellConfig, model: DeformationModel
) -> tuple[Optional[float], float]:
    """Large-n diagnostics: saturation plateau (if any) and growth exponent.

    The exponent is a least-squares slope of log E vs log n over the top
    decade of available levels.  The rational map saturates at 1/l_p
    (plateau returned, approach from below); the polynomial and SR maps are
    unbounded with exponents near 1/2 and 1.
    """
    if not cfg.k(cfg.n_max) >= 50.0 * cfg.mass:
        raise InsufficientRange(
            f"need k_n_max >= 50 m; got k={cfg.k(cfg.n_max)!r} for m={cfg.mass!r}"
        )
    ns = np.arange(max(1, cfg.n_max // 10), cfg.n_max + 1)
    e_plus = np.array([invert_effective_energy(model, cfg.omega_n(int(n))) for n in ns])
    exponent = float(np.polyfit(np.log(ns), np.log(e_plus), 1)[0])
    plateau = None
    if model.kind is MapKind.DSR_RATIONAL and model.l_p > 0.0:
        plateau = 1.0 / model.l_p
    return plateau, exponent


def oscillator_spectrum_undeformed(cfg: OscillatorConfig) -> SpectrumResult:
    """Undeformed oscillator branches E_{n,+-} = +-sqrt(m^2 + m omega (2n+1))."""
    ns = list(range(0, cfg.n_max + 1))
    e_plus = [math.sqrt(cfg.mass**2 + cfg.lambda_n(n)) for n in ns + [cfg.n_max + 1]]
    return _assemble_rows(DeformationModel.sr(), ns, e_plus)


def oscillator_shift_first_order(
    cfg: OscillatorConfig, model: DeformationModel, n: int, branch: Branch
) -> float:
    """First-order branch shift l_p [alpha2 (E0)^2 - delta_alpha lambda_n] E0 / m.

    AC-type (alpha2=0, delta_alpha=1) reduces to -l_p lambda_n E0 / m; MS-type
    (alpha2=1, delta_alpha=1) to l_p [(E0)^2 - lambda_n] E0 / m.  The shift is
    exactly antisymmetric between branches.  Outside the window l_p |E0| < 1 a
    PerturbativeWindowWarning is emitted and the value still returned.
    """
    if model.kind is not MapKind.GENERIC_LEADING_ORDER:
        raise WrongModelKind(
            f"first-order shift requires the generic kind, got {model.kind}"
        )
    lam = cfg.lambda_n(n)
    e0 = branch.value * math.sqrt(cfg.mass**2 + lam)
    if model.l_p * abs(e0) >= 1.0:
        warnings.warn(
            f"l_p |E0| = {model.l_p * abs(e0):.3g} >= 1 at n={n}",
            PerturbativeWindowWarning,
            stacklevel=2,
        )
    return model.l_p * (model.alpha2 * e0 * e0 - model.delta_alpha * lam) * e0 / cfg.mass


def oscillator_effective_scales(
    model: DeformationModel, e: float, m: float, omega: float
) -> tuple[float, float]:
    """Semiclassical reading of the shift: (omega_eff, m_eff).

    Kinetic deformation lowers the oscillator scale, omega(1 - delta_alpha l_p E);
    the mass-shell sector renormalizes inertia, m(1 + alpha2 l_p E).  The named
    AC/MS realizations keep their customary single-parameter forms.  The pure
    energy maps (rational, polynomial) act through the mass-shell sector with
    unit and chi weights.
    """
    lp = model.l_p
    if model.kind is MapKind.SR or lp == 0.0:
        return omega, m
    if model.kind is MapKind.DSR_RATIONAL:
        return omega, m * (1.0 + lp * e)
    if model.kind is MapKind.GDSR_POLYNOMIAL:
        return omega, m * (1.0 + model.chi * lp * e)
    if (model.alpha2, model.delta_alpha) == (0.0, 1.0):
        return omega * (1.0 - lp * e), m
    if (model.alpha2, model.delta_alpha) == (1.0, 1.0):
        return omega, m * (1.0 + lp * e)
    return omega * (1.0 - model.delta_alpha * lp * e), m * (1.0 + model.alpha2 * lp * e)


def oscillator_exact_deformed(
    cfg: OscillatorConfig, model: DeformationModel, n: int, branch: Branch
) -> float:
    """Nonperturbative cross-check: invert the deformed shell E_eff^2 = m^2 + lambda_n.

    Meaningful for the pure energy-map kinds, where the deformed shell is
    unambiguous; used to bound the first-order truncation error.
    """
    target = branch.value * math.sqrt(cfg.mass**2 + cfg.lambda_n(n))
    return invert_effective_energy(model, target)


def oscillator_spectrum(cfg: OscillatorConfig, model: DeformationModel) -> SpectrumResult:
    """Branch-resolved oscillator table for any map kind.

    SR (or l_p = 0) gives the undeformed branches; the generic leading-order
    family gets the first-order shift added to each branch; the pure energy
    maps are inverted exactly on the deformed shell.
    """
    ns = list(range(0, cfg.n_max + 1))
    if model.kind is MapKind.SR or model.l_p == 0.0:
        e_plus = [math.sqrt(cfg.mass**2 + cfg.lambda_n(n)) for n in ns + [cfg.n_max + 1]]
    elif model.kind is MapKind.GENERIC_LEADING_ORDER:
        e_plus = [
            math.sqrt(cfg.mass**2 + cfg.lambda_n(n))
            + oscillator_shift_first_order(cfg, model, n, Branch.POSITIVE)
            for n in ns + [cfg.n_max + 1]
        ]
    else:
        e_plus = [
            oscillator_exact_deformed(cfg, model, n, Branch.POSITIVE)
            for n in ns + [cfg.n_max + 1]
        ]
    return _assemble_rows(model, ns, e_plus)


SPECTRUM_CSV_HEADER = (
    "model",
    "l_p",
    "chi",
    "alpha2",
    "delta_alpha",
    "n",
    "E_plus",
    "E_minus",
    "spacing_plus",
    "valid",
)


def spectrum_csv_rows(result: SpectrumResult) -> list[tuple]:
    """Rows in the fixed golden-file column order of SPECTRUM_CSV_HEADER."""
    m = result.model
    return [
        (m.kind.value, m.l_p, m.chi, m.alpha2, m.delta_alpha,
         r.n, r.e_plus, r.e_minus, r.spacing_plus, r.valid)
        for r in result.rows
    ]
