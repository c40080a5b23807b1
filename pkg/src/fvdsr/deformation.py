"""Momentum-space maps, modified dispersion relations and local wave numbers.

All quantities are in natural units (hbar = c = 1), so ``l_p`` carries
inverse-energy units.  Four map kinds are supported:

* ``SR``               -- identity (no deformation),
* ``DSR_RATIONAL``     -- rational map  e -> e / (1 - l_p e),
* ``GDSR_POLYNOMIAL``  -- polynomial map  e -> e (1 + chi l_p e),
* ``GENERIC``          -- leading-order family  e -> e (1 + alpha2 l_p e),
                          with the kinetic coefficient ``delta_alpha``
                          entering only through the two-component
                          Hamiltonian (see :mod:`fvdsr.fvcore`) and through
                          the dispersion residual below.

Domain violations (the rational-map pole) are reported through validity
flags rather than exceptions so that dense energy scans can mark excluded
points and keep going.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import NoBracket, NoRealBranch, WrongModelKind


class MapKind(enum.Enum):
    SR = "sr"
    DSR_RATIONAL = "dsr"
    GDSR_POLYNOMIAL = "gdsr"
    GENERIC_LEADING_ORDER = "generic"


class Regime(enum.Enum):
    PROPAGATING = "propagating"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class DeformationModel:
    """Kinematic layer: which map is active and with which parameters.

    ``delta_alpha`` is the difference alpha3 - alpha1 of the momentum-sector
    map coefficients; the individual alpha1, alpha3 are never needed
    downstream and are not represented.
    """

    kind: MapKind
    l_p: float = 0.0
    alpha2: float = 0.0
    delta_alpha: float = 0.0
    chi: float = 1.0

    def __post_init__(self):
        if not (self.l_p >= 0.0):
            raise ValueError(f"l_p must be >= 0, got {self.l_p!r}")

    # -- convenience constructors -------------------------------------------------

    @staticmethod
    def sr() -> "DeformationModel":
        return DeformationModel(MapKind.SR)

    @staticmethod
    def dsr(l_p: float) -> "DeformationModel":
        return DeformationModel(MapKind.DSR_RATIONAL, l_p=l_p)

    @staticmethod
    def gdsr(l_p: float, chi: float = 1.0) -> "DeformationModel":
        return DeformationModel(MapKind.GDSR_POLYNOMIAL, l_p=l_p, chi=chi)

    @staticmethod
    def generic(l_p: float, alpha2: float, delta_alpha: float) -> "DeformationModel":
        return DeformationModel(
            MapKind.GENERIC_LEADING_ORDER, l_p=l_p, alpha2=alpha2, delta_alpha=delta_alpha
        )

    @staticmethod
    def ac(l_p: float) -> "DeformationModel":
        """Amelino-Camelia-type realization: pure kinetic deformation."""
        return DeformationModel.generic(l_p, alpha2=0.0, delta_alpha=1.0)

    @staticmethod
    def ms(l_p: float) -> "DeformationModel":
        """Magueijo-Smolin-type realization: mass-shell plus kinetic deformation."""
        return DeformationModel.generic(l_p, alpha2=1.0, delta_alpha=1.0)

    @property
    def is_deformed(self) -> bool:
        return self.kind is not MapKind.SR and self.l_p > 0.0


class EffectiveEnergy(NamedTuple):
    raw: float
    deformed: float
    valid: bool


class LocalWavenumber(NamedTuple):
    regime: Optional[Regime]
    value: float
    valid: bool


def _energy_quadratic_coefficient(model: DeformationModel) -> float:
    """Coefficient c in the polynomial energy-sector map e -> e(1 + c e)."""
    if model.kind is MapKind.GDSR_POLYNOMIAL:
        return model.chi * model.l_p
    if model.kind is MapKind.GENERIC_LEADING_ORDER:
        return model.alpha2 * model.l_p
    raise WrongModelKind(f"no polynomial energy map for kind {model.kind}")


def effective_energy(model: DeformationModel, e: float) -> EffectiveEnergy:
    """Apply the energy-sector map of the model to the scalar energy ``e``.

    The rational map is well defined only when 1 - l_p e > 0; outside that
    domain the result carries ``valid=False`` and a NaN value.
    """
    if model.kind is MapKind.SR or model.l_p == 0.0:
        return EffectiveEnergy(e, e, True)
    if model.kind is MapKind.DSR_RATIONAL:
        denom = 1.0 - model.l_p * e
        if denom <= 0.0:
            return EffectiveEnergy(e, math.nan, False)
        return EffectiveEnergy(e, e / denom, True)
    c = _energy_quadratic_coefficient(model)
    return EffectiveEnergy(e, e * (1.0 + c * e), True)


def invert_effective_energy(model: DeformationModel, target: float) -> float:
    """Energy whose deformed value equals ``target``, on the SR-connected branch.

    The branch is the one continuous with E = target as l_p -> 0, and the
    inversion is taken sign-antisymmetric, invert(-t) = -invert(t), so that
    the particle/antiparticle pairing E_- = -E_+ of the deformed spectra is
    preserved by construction.

    Raises :class:`NoRealBranch` when the polynomial map's discriminant
    1 + 4 c |target| is negative.
    """
    if model.kind is MapKind.SR or model.l_p == 0.0:
        return target
    if target == 0.0:
        return 0.0
    if target < 0.0:
        return -invert_effective_energy(model, -target)
    if model.kind is MapKind.DSR_RATIONAL:
        return target / (1.0 + model.l_p * target)
    c = _energy_quadratic_coefficient(model)
    if c == 0.0:
        return target
    disc = 1.0 + 4.0 * c * target
    if disc < 0.0:
        raise NoRealBranch(target, f"discriminant {disc!r} < 0")
    # algebraically (-1 + sqrt(disc)) / (2 c); this form is stable as c -> 0
    return 2.0 * target / (1.0 + math.sqrt(disc))


def invert_by_bisection(
    model: DeformationModel, target: float, tol: float = 1e-12
) -> float:
    """Generic fallback inversion by geometrically expanded bracketing.

    Kept independent of the closed forms above so it can serve as a
    cross-check; closed forms remain the primary route.
    """
    if target == 0.0:
        return 0.0
    if target < 0.0:
        return -invert_by_bisection(model, -target, tol)

    def f(e: float) -> float:
        w = effective_energy(model, e)
        if not w.valid:
            return math.inf
        return w.deformed - target

    lo, hi = 0.0, target
    f_hi = f(hi)
    for _ in range(200):
        if f_hi >= 0.0:
            break
        hi *= 2.0
        f_hi = f(hi)
    else:
        raise NoBracket(f"no bracket for inversion target {target!r}")
    if not math.isfinite(f_hi):
        raise NoBracket(f"inversion target {target!r} outside the map's range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def mdr_residual(model: DeformationModel, e: float, p: float, m: float) -> float:
    """Residual of the leading-order deformed dispersion relation.

    Returns E^2 - p^2 - 2 alpha2 l_p E^3 + 2 delta_alpha l_p E p^2 - m^2,
    which vanishes on the deformed mass shell to first order in l_p.
    Only the generic leading-order kind carries alpha2 and delta_alpha
    explicitly.
    """
    if model.kind is not MapKind.GENERIC_LEADING_ORDER:
        raise WrongModelKind(f"mdr_residual requires the generic kind, got {model.kind}")
    lp = model.l_p
    return (
        e * e
        - p * p
        - 2.0 * model.alpha2 * lp * e**3
        + 2.0 * model.delta_alpha * lp * e * p * p
        - m * m
    )


def local_wavenumber(
    model: DeformationModel, e: float, v: float, m: float
) -> LocalWavenumber:
    """Region-local wave number for a piecewise-constant potential ``v``.

    Deforms the shifted energy e - v as a unit, then classifies against the
    mass shell: propagating when (e - v)_eff^2 >= m^2 with value
    sqrt(w^2 - m^2), evanescent otherwise with value sqrt(m^2 - w^2).
    The map validity flag is propagated; invalid points carry NaN.
    """
    w = effective_energy(model, e - v)
    if not w.valid:
        return LocalWavenumber(None, math.nan, False)
    gap = w.deformed * w.deformed - m * m
    if gap >= 0.0:
        return LocalWavenumber(Regime.PROPAGATING, math.sqrt(gap), True)
    return LocalWavenumber(Regime.EVANESCENT, math.sqrt(-gap), True)
