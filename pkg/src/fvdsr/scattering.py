"""Stationary step and barrier scattering with current-based R and T.

Deformation enters through the region-local wave numbers only; the matching
conditions at the interfaces stay undeformed.  Reflection and transmission
are ratios of the conserved two-component current, which for a global
stationary energy reduces to R = |r|^2 and T = q |t|^2 / k, guaranteeing
R + T = 1 at every valid point (including the supercritical zone, where the
transmitted channel carries negative flux and T <= 0).

Invalid points (map poles, non-propagating incidence) are flagged, not
raised, so dense scans degrade gracefully.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from scipy.optimize import brentq

from .deformation import (
    DeformationModel,
    MapKind,
    Regime,
    effective_energy,
    invert_effective_energy,
    local_wavenumber,
)
from .errors import NoBracket


@dataclass(frozen=True)
class BarrierConfig:
    mass: float
    height: float
    width: float

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not self.width > 0.0:
            raise ValueError(f"width must be positive, got {self.width!r}")


@dataclass(frozen=True)
class StepConfig:
    mass: float
    height: float

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not self.height > 0.0:
            raise ValueError(f"height must be positive, got {self.height!r}")


class RegimeFlag(enum.Enum):
    TUNNELING = "tunneling"
    ABOVE_BARRIER = "above_barrier"
    SUPERCRITICAL = "supercritical"
    NON_PROPAGATING_INCIDENCE = "non_propagating_incidence"
    MAP_INVALID = "map_invalid"


@dataclass(frozen=True)
class ScatteringPoint:
    energy: float
    k_out: float
    inner_regime: Optional[Regime]
    inner_value: float
    r_coef: float
    t_coef: float
    flag: RegimeFlag


def _invalid_point(e: float, k_out: float, flag: RegimeFlag) -> ScatteringPoint:
    return ScatteringPoint(e, k_out, None, math.nan, math.nan, math.nan, flag)


def _incident(model: DeformationModel, e: float, m: float):
    """Incident wave number, or an invalid/non-propagating sentinel point."""
    out = local_wavenumber(model, e, 0.0, m)
    if not out.valid:
        return None, _invalid_point(e, math.nan, RegimeFlag.MAP_INVALID)
    if out.regime is not Regime.PROPAGATING or out.value == 0.0:
        return None, _invalid_point(e, 0.0, RegimeFlag.NON_PROPAGATING_INCIDENCE)
    return out.value, None


def barrier_transmission(
    cfg: BarrierConfig, model: DeformationModel, e: float
) -> ScatteringPoint:
    """Transfer-matrix transmission through the rectangular barrier.

    Tunneling (interior evanescent, kappa):
        T = 1 / [1 + (k^2 + kappa^2)^2 / (4 k^2 kappa^2) * sinh^2(kappa a)]
    Above the barrier the analytic continuation q = i kappa turns sinh^2
    into sin^2 with (k^2 - q^2)^2, producing unit-transmission resonances at
    q a = j pi.  R = 1 - T always.
    """
    k, bad = _incident(model, e, cfg.mass)
    if bad is not None:
        return bad
    inner = local_wavenumber(model, e, cfg.height, cfg.mass)
    if not inner.valid:
        return _invalid_point(e, k, RegimeFlag.MAP_INVALID)
    a = cfg.width
    w = inner.value
    if inner.regime is Regime.EVANESCENT:
        factor = (k * k + w * w) ** 2 / (4.0 * k * k * w * w) * math.sinh(w * a) ** 2
        flag = RegimeFlag.TUNNELING
    elif w == 0.0:
        # common limit of both branches: sinh^2/sin^2 -> (w a)^2 as w -> 0
        factor = 0.25 * k * k * a * a
        flag = RegimeFlag.ABOVE_BARRIER
    else:
        factor = (k * k - w * w) ** 2 / (4.0 * k * k * w * w) * math.sin(w * a) ** 2
        flag = RegimeFlag.ABOVE_BARRIER
    t = 1.0 / (1.0 + factor)
    return ScatteringPoint(e, k, inner.regime, w, 1.0 - t, t, flag)


def step_coefficients(
    cfg: StepConfig, model: DeformationModel, e: float
) -> ScatteringPoint:
    """Single-interface matching of the mode and its derivative at x = 0.

    Subcritical propagating right side:  R = ((k-q)/(k+q))^2, T = 4kq/(k+q)^2.
    Evanescent right side: total reflection, R = 1, T = 0.
    Supercritical zone (deformed E - V0 below -m): the transmitted wave
    number is taken with the sign that points the transmitted group velocity
    away from the interface (q -> -|q|), giving R >= 1 and negative
    transmitted flux with R + T = 1 preserved.  At the measure-zero
    degeneracy k = |q| the coefficients diverge and are reported non-finite.
    """
    k, bad = _incident(model, e, cfg.mass)
    if bad is not None:
        return bad
    w = effective_energy(model, e - cfg.height)
    if not w.valid:
        return _invalid_point(e, k, RegimeFlag.MAP_INVALID)
    m = cfg.mass
    gap = w.deformed * w.deformed - m * m
    if gap < 0.0:
        return ScatteringPoint(
            e, k, Regime.EVANESCENT, math.sqrt(-gap), 1.0, 0.0, RegimeFlag.TUNNELING
        )
    q_abs = math.sqrt(gap)
    if w.deformed >= m:
        r = (k - q_abs) / (k + q_abs)
        t_amp = 2.0 * k / (k + q_abs)
        return ScatteringPoint(
            e, k, Regime.PROPAGATING, q_abs,
            r * r, q_abs * t_amp * t_amp / k, RegimeFlag.ABOVE_BARRIER,
        )
    # Klein zone: outgoing group velocity selects q = -|q|
    q = -q_abs
    denom = k + q
    if denom == 0.0:
        return ScatteringPoint(
            e, k, Regime.PROPAGATING, q_abs, math.inf, -math.inf,
            RegimeFlag.SUPERCRITICAL,
        )
    r = (k - q) / denom
    t_amp = 2.0 * k / denom
    return ScatteringPoint(
        e, k, Regime.PROPAGATING, q_abs,
        r * r, q * t_amp * t_amp / k, RegimeFlag.SUPERCRITICAL,
    )


def supercritical_threshold(cfg: StepConfig, model: DeformationModel) -> float:
    """Energy E* where the deformed (E - V0) crosses -m.

    SR gives V0 - m exactly; deformed maps are solved by bracketed root
    finding on the SR-connected branch to 1e-10.  Raises NoBracket when the
    deformation caps the effective energy above -m everywhere.
    """
    m, v0 = cfg.mass, cfg.height
    if model.kind is MapKind.SR or model.l_p == 0.0:
        return v0 - m

    def g(u: float) -> float:
        w = effective_energy(model, u)
        if not w.valid:
            return math.inf
        return w.deformed + m

    # expand downward from u = -m until the deformed value drops below -m
    hi = -m
    if g(hi) <= 0.0:
        lo, hi = hi, -0.5 * m
        if g(hi) < 0.0:
            raise NoBracket("no sign change above u = -m")
    else:
        step = 0.1 * m
        lo = hi - step
        for _ in range(200):
            if g(lo) < 0.0:
                break
            step *= 2.0
            lo = hi - step
        else:
            raise NoBracket("deformed effective energy never reaches -m")
        if not math.isfinite(g(lo)):
            raise NoBracket("map validity ends before the threshold")
    u_star = brentq(g, lo, hi, xtol=1e-12, rtol=1e-15)
    return v0 + u_star


def resonance_energies(
    cfg: BarrierConfig, model: DeformationModel, count: int
) -> list[float]:
    """First ``count`` unit-transmission energies, solving q(E) a = j pi.

    The interior wave number grows monotonically above the barrier top, so
    each resonance is bracketed by geometric expansion and solved to 1e-10.
    NoBracket is raised when map validity truncates the requested count.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")
    m, v0, a = cfg.mass, cfg.height, cfg.width
    e_top = v0 + invert_effective_energy(model, m)

    def q_of(e: float) -> float:
        # restricted to the above-barrier band (deformed E - V0 at or above
        # +m); deformed maps can close the band, ending the search domain
        w = effective_energy(model, e - v0)
        if not w.valid or w.deformed < m:
            return math.nan
        return math.sqrt(w.deformed * w.deformed - m * m)

    energies = []
    for j in range(1, count + 1):
        target = j * math.pi / a

        def h(e: float, target=target) -> float:
            return q_of(e) - target

        lo = e_top + 1e-9 * max(1.0, abs(e_top))
        hi = lo
        step = 0.25 * max(1.0, v0)
        found = False
        for _ in range(200):
            hi = hi + step
            val = h(hi)
            if math.isnan(val):
                raise NoBracket(
                    f"map validity truncates resonance search at j={j} (E~{hi:.4g})"
                )
            if val > 0.0:
                found = True
                break
            step *= 2.0
        if not found:
            raise NoBracket(f"no bracket for resonance j={j}")
        energies.append(float(brentq(h, lo, hi, xtol=1e-12, rtol=1e-15)))
    return energies


def rt_scan(
    cfg: Union[BarrierConfig, StepConfig],
    model: DeformationModel,
    e_grid: Sequence[float],
) -> list[ScatteringPoint]:
    """Map the per-point solver over an energy grid, preserving order.

    Invalid points are flagged, never dropped, so plots can segment curves.
    """
    if isinstance(cfg, BarrierConfig):
        return [barrier_transmission(cfg, model, float(e)) for e in e_grid]
    return [step_coefficients(cfg, model, float(e)) for e in e_grid]


SCAN_CSV_HEADER = (
    "model",
    "l_p",
    "chi",
    "E",
    "k",
    "inner_regime",
    "inner_value",
    "R",
    "T",
    "flag",
)


def scan_csv_rows(model: DeformationModel, points: Sequence[ScatteringPoint]) -> list[tuple]:
    """Rows in the fixed column order of SCAN_CSV_HEADER."""
    return [
        (
            model.kind.value,
            model.l_p,
            model.chi,
            p.energy,
            p.k_out,
            p.inner_regime.value if p.inner_regime is not None else "",
            p.inner_value,
            p.r_coef,
            p.t_coef,
            p.flag.value,
        )
        for p in points
    ]
