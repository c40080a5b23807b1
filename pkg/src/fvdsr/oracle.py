"""Independent brute-force validators for the closed-form results.

These deliberately avoid the analytic routes they check: bound states come
from direct finite-difference diagonalization, scattering from fixed-step
Runge-Kutta integration with asymptotic matching, and perturbative claims
from log-log order fits.  Only the kinematic layer (wave numbers from
:mod:`fvdsr.deformation`) is shared, since that is definitional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .deformation import DeformationModel, Regime, local_wavenumber
from .errors import GridTooCoarse, GridTooNarrow, StepSizeTooLarge
from .scattering import BarrierConfig
from .spectra import OscillatorConfig, WellConfig

# Richardson-estimated discretization error allowed on requested eigenvalues.
FD_ERROR_BUDGET = 1e-4


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if self.points < 64:
            raise ValueError(f"need at least 64 points, got {self.points!r}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)


def _dirichlet_eigen(diag_potential: np.ndarray, h: float, count: int) -> np.ndarray:
    """Lowest eigenvalues of -d2/dx2 + V with central differences, Dirichlet ends."""
    n = diag_potential.size
    d = 2.0 / h**2 + diag_potential
    e = np.full(n - 1, -1.0 / h**2)
    return eigvalsh_tridiagonal(d, e, select="i", select_range=(0, count - 1))


def well_eigen_fd(cfg: WellConfig, grid: GridSpec, count: int) -> list[float]:
    """Lowest positive well energies sqrt(m^2 + kappa_j) by diagonalization.

    kappa_j are eigenvalues of the discrete -d2/dx2 on [0, L] with Dirichlet
    boundary conditions; convergence is O(h^2).  A coarsened solve provides a
    Richardson error estimate; beyond the budget GridTooCoarse is raised.
    """
    if abs(grid.x_min) > 1e-12 or abs(grid.x_max - cfg.width) > 1e-12:
        raise ValueError(f"grid must span exactly [0, {cfg.width}]")
    if count == 0:
        return []

    def solve(points: int) -> np.ndarray:
        h = cfg.width / (points - 1)
        kappas = _dirichlet_eigen(np.zeros(points - 2), h, count)
        return np.sqrt(cfg.mass**2 + kappas)

    fine = solve(grid.points)
    coarse = solve((grid.points - 1) // 2 + 1)
    est = np.max(np.abs(fine - coarse)) / 3.0
    if est > FD_ERROR_BUDGET:
        raise GridTooCoarse(f"Richardson error estimate {est:.3g} > {FD_ERROR_BUDGET}")
    return [float(v) for v in fine]


def oscillator_eigen_fd(cfg: OscillatorConfig, grid: GridSpec, count: int) -> list[float]:
    """Lowest oscillator energies sqrt(m^2 + eig) from -d2/dx2 + m^2 w^2 x^2.

    The operator's eigenvalues approximate lambda_n = m omega (2n + 1), the
    ordered-product values including the ordering shift.  The grid must hold
    the highest requested Hermite mode with negligible boundary amplitude.
    """
    if count == 0:
        return []
    needed = math.sqrt((2.0 * count + 1.0) / (cfg.mass * cfg.omega)) + 5.0 / math.sqrt(
        cfg.mass * cfg.omega
    )
    if grid.x_max < needed or grid.x_min > -needed:
        raise GridTooNarrow(f"grid must reach +-{needed:.3g} for {count} modes")

    def solve(points: int) -> np.ndarray:
        x = np.linspace(grid.x_min, grid.x_max, points)
        h = x[1] - x[0]
        v = (cfg.mass * cfg.omega * x[1:-1]) ** 2
        lam = _dirichlet_eigen(v, h, count)
        return np.sqrt(cfg.mass**2 + lam)

    fine = solve(grid.points)
    coarse = solve((grid.points - 1) // 2 + 1)
    est = np.max(np.abs(fine - coarse)) / 3.0
    if est > FD_ERROR_BUDGET:
        raise GridTooCoarse(f"Richardson error estimate {est:.3g} > {FD_ERROR_BUDGET}")
    return [float(v) for v in fine]


def _rk4_transmission(k: float, w2_signed, a: float, h_target: float):
    """Integrate psi'' + w2(x) psi = 0 backward across [0, a], return T.

    Starts from a pure outgoing wave at x = a and decomposes the x = 0 state
    into incident/reflected parts.  w2_signed is the (possibly array-valued
    over an energy batch) squared wave number inside, negative when
    evanescent.  Vectorized over the trailing batch axis.
    """
    w2 = np.asarray(w2_signed, dtype=float)
    steps = max(16, int(math.ceil(a / h_target)))
    h = -a / steps  # backward
    psi = np.exp(1j * np.asarray(k) * a).astype(complex)
    dpsi = 1j * np.asarray(k) * psi

    def f(y0, y1):
        return y1, -w2 * y0

    for _ in range(steps):
        k1a, k1b = f(psi, dpsi)
        k2a, k2b = f(psi + 0.5 * h * k1a, dpsi + 0.5 * h * k1b)
        k3a, k3b = f(psi + 0.5 * h * k2a, dpsi + 0.5 * h * k2b)
        k4a, k4b = f(psi + h * k3a, dpsi + h * k3b)
        psi = psi + (h / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a)
        dpsi = dpsi + (h / 6.0) * (k1b + 2 * k2b + 2 * k3b + k4b)

    amp_inc = 0.5 * (psi + dpsi / (1j * np.asarray(k)))
    return 1.0 / np.abs(amp_inc) ** 2


def barrier_t_ode(cfg: BarrierConfig, model: DeformationModel, e) -> float | np.ndarray:
    """Transmission through the rectangular barrier by direct ODE integration.

    Accepts a scalar energy or an array (batch-integrated).  The interior
    squared wave number comes from the same kinematics as the closed form;
    the dynamics (fixed-step RK4 with kappa_max h <= 0.01, asymptotic
    matching) is independent.  An internal step-halving pass guards accuracy;
    disagreement raises StepSizeTooLarge.
    """
    e_arr = np.atleast_1d(np.asarray(e, dtype=float))
    k = np.empty_like(e_arr)
    w2 = np.empty_like(e_arr)
    for i, ei in enumerate(e_arr):
        out = local_wavenumber(model, float(ei), 0.0, cfg.mass)
        inner = local_wavenumber(model, float(ei), cfg.height, cfg.mass)
        if not (out.valid and inner.valid):
            raise ValueError(f"map invalid at E={ei!r}; oracle needs valid points")
        if out.regime is not Regime.PROPAGATING or out.value == 0.0:
            raise ValueError(f"non-propagating incidence at E={ei!r}")
        k[i] = out.value
        sign = 1.0 if inner.regime is Regime.PROPAGATING else -1.0
        w2[i] = sign * inner.value**2
    w_max = max(float(np.max(np.sqrt(np.abs(w2)))), float(np.max(k)), 1e-6)
    h_target = 0.01 / w_max
    t_coarse = _rk4_transmission(k, w2, cfg.width, h_target)
    t_fine = _rk4_transmission(k, w2, cfg.width, 0.5 * h_target)
    rel = np.max(np.abs(t_fine - t_coarse) / np.maximum(np.abs(t_fine), 1e-300))
    if rel > 1e-7:
        raise StepSizeTooLarge(f"step-halving disagreement {rel:.3g}")
    if np.isscalar(e) or np.asarray(e).ndim == 0:
        return float(t_fine[0])
    return t_fine


class OrderFitResult(NamedTuple):
    exponent: float
    degenerate: bool


def perturbation_order_check(
    f_exact: Callable[[float], float],
    f_first_order: Callable[[float], float],
    l_p_list: Sequence[float],
) -> OrderFitResult:
    """Fit |f_exact - f_first_order| ~ l_p^s by log-log least squares.

    The list must be geometric with at least 3 entries.  When the residuals
    sit at the double-precision noise floor the fit is meaningless and the
    degenerate flag is set instead of failing.
    """
    lps = [float(l) for l in l_p_list]
    if len(lps) < 3:
        raise ValueError("need at least 3 l_p values")
    ratios = [lps[i] / lps[i + 1] for i in range(len(lps) - 1)]
    if any(abs(r - ratios[0]) > 1e-9 * abs(ratios[0]) for r in ratios):
        raise ValueError(f"l_p list must be geometric, got {lps!r}")
    exact = np.array([f_exact(l) for l in lps])
    first = np.array([f_first_order(l) for l in lps])
    diffs = np.abs(exact - first)
    scale = max(1.0, float(np.max(np.abs(exact))))
    if np.all(diffs < 1e-12 * scale):
        return OrderFitResult(math.nan, True)
    s = float(np.polyfit(np.log(lps), np.log(diffs), 1)[0])
    return OrderFitResult(s, False)
