"""Two-component algebra for the first-order form of the Klein-Gordon equation.

The spin-0 wave function is split into a pair (upper, lower) whose dynamics
is Schroedinger-like with the non-Hermitian Hamiltonian

    H = (sigma3 + i sigma2) p^2 / (2 m) + m sigma3 ,

pseudo-Hermitian with respect to sigma3: H^dag = sigma3 H sigma3.  The
indefinite metric yields the conserved density |upper|^2 - |lower|^2 and the
conserved current used to define reflection and transmission coefficients.

Energies are treated as c-number parameters throughout (stationary
problems), so the deformation operator's anticommutator {E, p^2} reduces to
2 E p^2 here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .deformation import DeformationModel, MapKind
from .errors import NonpositiveFrequency, NonpositiveMass, WrongModelKind

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# sigma3 + i sigma2 = [[1, 1], [-1, -1]]; nilpotent, (sigma3+i sigma2)^2 = 0
SIGMA_RAISE = SIGMA3 + 1.0j * SIGMA2


class Branch(enum.Enum):
    POSITIVE = +1
    NEGATIVE = -1


@dataclass(frozen=True)
class FvSpinor:
    """Two-component state: particle-like upper and lower components."""

    upper: complex
    lower: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.upper, self.lower], dtype=complex)


@dataclass(frozen=True)
class FvMatrix:
    """2x2 complex operator matrix in the momentum representation."""

    array: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.array, dtype=complex)
        if a.shape != (2, 2):
            raise ValueError(f"FvMatrix needs a 2x2 array, got shape {a.shape}")
        object.__setattr__(self, "array", a)

    def dagger(self) -> "FvMatrix":
        return FvMatrix(self.array.conj().T)

    def __add__(self, other: "FvMatrix") -> "FvMatrix":
        return FvMatrix(self.array + other.array)

    def __sub__(self, other: "FvMatrix") -> "FvMatrix":
        return FvMatrix(self.array - other.array)

    def __mul__(self, scalar: complex) -> "FvMatrix":
        return FvMatrix(self.array * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "FvMatrix") -> "FvMatrix":
        return FvMatrix(self.array @ other.array)

    def apply(self, s: FvSpinor) -> FvSpinor:
        out = self.array @ s.as_array()
        return FvSpinor(out[0], out[1])

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues sorted by real part, ascending."""
        vals = np.linalg.eigvals(self.array)
        return vals[np.argsort(vals.real)]

    def pauli_coefficients(self) -> tuple[complex, complex, complex, complex]:
        """Coefficients (a, b, c, d) of a*I + b*sigma1 + c*sigma2 + d*sigma3.

        The decomposition is exact for any 2x2 complex matrix:
        a = tr(M)/2 and similarly with the Pauli matrices.
        """
        m = self.array
        a = 0.5 * np.trace(m)
        b = 0.5 * np.trace(SIGMA1 @ m)
        c = 0.5 * np.trace(SIGMA2 @ m)
        d = 0.5 * np.trace(SIGMA3 @ m)
        return complex(a), complex(b), complex(c), complex(d)


def h_fv_free(p: float, m: float) -> FvMatrix:
    """Free Hamiltonian at c-number momentum p; eigenvalues +-sqrt(m^2+p^2)."""
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    return FvMatrix(SIGMA_RAISE * (p * p / (2.0 * m)) + m * SIGMA3)


def h_fv_oscillator_effective(n: int, m: float, omega: float) -> FvMatrix:
    """Oscillator Hamiltonian on the n-th Hermite mode.

    The non-minimal coupling replaces p^2 by the ordered quadratic operator,
    whose eigenvalue on mode n is Xi_n = m omega (2n + 1); the resulting
    branches are +-sqrt(m^2 + m omega (2n+1)).
    """
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    if not omega > 0.0:
        raise NonpositiveFrequency(f"omega must be positive, got {omega!r}")
    if n < 0 or int(n) != n:
        raise ValueError(f"mode index must be a nonnegative integer, got {n!r}")
    xi_n = m * omega * (2 * n + 1)
    return FvMatrix(SIGMA_RAISE * (xi_n / (2.0 * m)) + m * SIGMA3)


def delta_h(model: DeformationModel, e: float, p2_effective: float, m: float) -> FvMatrix:
    """Leading deformation operator in the stationary c-number representation.

    Returns alpha2 E^2 sigma3 - delta_alpha (E p2 / m)(sigma3 + i sigma2);
    the full deformed Hamiltonian is h_fv + l_p * delta_h.  For the
    oscillator, p2_effective is the ordered-product eigenvalue Xi_n.
    """
    if model.kind is not MapKind.GENERIC_LEADING_ORDER:
        raise WrongModelKind(f"delta_h requires the generic kind, got {model.kind}")
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    return FvMatrix(
        model.alpha2 * e * e * SIGMA3
        - model.delta_alpha * (e * p2_effective / m) * SIGMA_RAISE
    )


def h_fv_deformed(model: DeformationModel, e: float, p2_effective: float, m: float) -> FvMatrix:
    """h_fv_free + l_p * delta_h with p^2 evaluated at p2_effective."""
    p = math.sqrt(p2_effective)
    return h_fv_free(p, m) + model.l_p * delta_h(model, e, p2_effective, m)


def is_sigma3_pseudo_hermitian(h: FvMatrix, tol: float) -> bool:
    """True iff max-entry |H^dag - sigma3 H sigma3| <= tol."""
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    lhs = h.array.conj().T
    rhs = SIGMA3 @ h.array @ SIGMA3
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def fv_density(s: FvSpinor) -> float:
    """Conserved indefinite density |upper|^2 - |lower|^2; its sign labels the branch."""
    return (abs(s.upper) ** 2 - abs(s.lower) ** 2).real


def fv_current(s: FvSpinor, ds_dx: FvSpinor, m: float) -> float:
    """Conserved current evaluated pointwise from the state and its x-derivative.

    j = (1 / 2 m i) [ Psi^dag (sigma3 + i sigma2) Psi' - Psi'^dag (sigma3 + i sigma2) Psi ].
    """
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    psi = s.as_array()
    dpsi = ds_dx.as_array()
    val = (psi.conj() @ (SIGMA_RAISE @ dpsi) - dpsi.conj() @ (SIGMA_RAISE @ psi)) / (2.0j * m)
    return float(val.real)


def fv_from_kg(phi: complex, dphi_dt: complex, m: float) -> FvSpinor:
    """Split a one-component state into the two-component pair.

    upper = (Phi + (i/m) dPhi/dt) / 2,  lower = (Phi - (i/m) dPhi/dt) / 2;
    the inverse identities Phi = upper + lower and
    i dPhi/dt = m (upper - lower) hold exactly.
    """
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    half_idot = 0.5j * dphi_dt / m
    return FvSpinor(0.5 * phi + half_idot, 0.5 * phi - half_idot)


def kg_from_fv(s: FvSpinor, m: float) -> tuple[complex, complex]:
    """Inverse of :func:`fv_from_kg`: returns (Phi, dPhi/dt)."""
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    phi = s.upper + s.lower
    dphi_dt = -1.0j * m * (s.upper - s.lower)
    return phi, dphi_dt


@dataclass(frozen=True)
class PlaneWaveMode:
    """Free stationary mode e^{ipx} with its branch-resolved spinor amplitude."""

    energy: float
    momentum: float
    mass: float
    spinor: FvSpinor
    branch: Branch


def plane_wave_mode(p: float, m: float, branch: Branch) -> PlaneWaveMode:
    """Free mode at momentum p, normalized to unit |density| per mode.

    The spinor solves H(p) s = E s with E = branch * sqrt(m^2 + p^2); with the
    indefinite-metric unit normalization the carried current is exactly
    branch * p / m, which makes reflection/transmission direct current ratios.
    """
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    e = branch.value * math.sqrt(m * m + p * p)
    upper = 0.5 * (1.0 + e / m)
    lower = 0.5 * (1.0 - e / m)
    rho = upper * upper - lower * lower
    scale = 1.0 / math.sqrt(abs(rho))
    return PlaneWaveMode(e, p, m, FvSpinor(upper * scale, lower * scale), branch)


def fv_plane_wave_current(
    e: float, p: float, m: float, amplitude: complex, branch: Branch
) -> float:
    """Current carried by amplitude * (plane-wave spinor) e^{ipx}.

    Antisymmetric under p -> -p; zero at rest.  With the unit-density
    normalization of :func:`plane_wave_mode` the value is
    |amplitude|^2 * (p / m) * sign(branch).
    """
    if not m > 0.0:
        raise NonpositiveMass(f"mass must be positive, got {m!r}")
    e_signed = branch.value * abs(e)
    upper = 0.5 * (1.0 + e_signed / m)
    lower = 0.5 * (1.0 - e_signed / m)
    rho = upper * upper - lower * lower
    scale = amplitude / math.sqrt(abs(rho))
    s = FvSpinor(upper * scale, lower * scale)
    ds = FvSpinor(1.0j * p * s.upper, 1.0j * p * s.lower)
    return fv_current(s, ds, m)
