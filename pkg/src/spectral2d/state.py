"""
Spectral state of a 2D periodic flow in vorticity form.

Vorticity coefficients are stored in numpy's rfft2 layout, shape (M, M//2 + 1),
normalized so that

    omega(x) = sum_kappa omega_hat(kappa) exp(i theta_kappa(x)),
    theta_kappa(x) = 2 pi (kappa_1 x_1 / L_1 + kappa_2 x_2 / L_2),

with axis 0 the x_1 wavenumber and axis 1 the non-negative x_2 wavenumber.
The grid point (i, j) sits at (i L_1 / M, j L_2 / M).
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from ..core.errors import InvalidInputError

MAX_GRID = 64


@dataclass(frozen=True)
class SpectralGrid:
    """Wavenumber tables for an M x M grid on the box L_1 x L_2"""
    M: int
    periods: Tuple[float, float]
    kappa1: np.ndarray = field(repr=False)
    kappa2: np.ndarray = field(repr=False)
    k1: np.ndarray = field(repr=False)
    k2: np.ndarray = field(repr=False)
    ksq: np.ndarray = field(repr=False)
    inv_ksq: np.ndarray = field(repr=False)
    dealias: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.M, self.M // 2 + 1)

    @property
    def dx(self) -> float:
        return min(self.periods) / self.M

    def to_physical(self, coeffs: np.ndarray) -> np.ndarray:
        return np.fft.irfft2(coeffs * (self.M * self.M), s=(self.M, self.M))

    def to_spectral(self, values: np.ndarray) -> np.ndarray:
        return np.fft.rfft2(values) / (self.M * self.M)

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        x1 = np.arange(self.M) * self.periods[0] / self.M
        x2 = np.arange(self.M) * self.periods[1] / self.M
        return np.meshgrid(x1, x2, indexing="ij")


@lru_cache(maxsize=8)
def spectral_grid(M: int, periods: Tuple[float, float]) -> SpectralGrid:
    if M < 4 or M % 2 or M > MAX_GRID:
        raise InvalidInputError(f"Grid size must be even and in 4..{MAX_GRID}, got {M}")
    if len(periods) != 2 or any(p <= 0 for p in periods):
        raise InvalidInputError(f"Need two positive periods, got {periods!r}")
    kappa1 = np.fft.fftfreq(M, 1.0 / M)[:, None] * np.ones((1, M // 2 + 1))
    kappa2 = np.ones((M, 1)) * np.fft.rfftfreq(M, 1.0 / M)[None, :]
    k1 = 2.0 * np.pi * kappa1 / periods[0]
    k2 = 2.0 * np.pi * kappa2 / periods[1]
    ksq = k1 ** 2 + k2 ** 2
    inv_ksq = np.zeros_like(ksq)
    inv_ksq[ksq > 0] = 1.0 / ksq[ksq > 0]
    # max-norm 2/3 rule: keep |kappa_i| < M/3
    dealias = (np.abs(kappa1) < M / 3.0) & (np.abs(kappa2) < M / 3.0)
    weights = np.where(kappa2 == 0, 1.0, 2.0)
    for array in (kappa1, kappa2, k1, k2, ksq, inv_ksq, dealias, weights):
        array.flags.writeable = False
    return SpectralGrid(M=M, periods=tuple(periods), kappa1=kappa1, kappa2=kappa2, k1=k1, k2=k2,
                        ksq=ksq, inv_ksq=inv_ksq, dealias=dealias, weights=weights)


@dataclass(frozen=True)
class SpectralState:
    """
    Snapshot of the zero-mean vorticity at time t.

    ``mean_flow`` is the conserved mean velocity U0; the stepped field is the
    zero-mean part in the frame moving with U0. ``rhs_hat`` is the time
    derivative of ``omega_hat`` at t when known.
    """
    M: int
    periods: Tuple[float, float]
    nu: float
    t: float
    omega_hat: np.ndarray = field(repr=False)
    mean_flow: Tuple[float, float] = (0.0, 0.0)
    rhs_hat: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.omega_hat.shape != self.grid.shape:
            raise InvalidInputError(
                f"Coefficient array has shape {self.omega_hat.shape}, expected {self.grid.shape}"
            )
        if self.nu <= 0:
            raise InvalidInputError(f"Viscosity must be positive, got {self.nu}")

    @property
    def grid(self) -> SpectralGrid:
        return spectral_grid(self.M, tuple(float(p) for p in self.periods))

    def psi_hat(self) -> np.ndarray:
        return self.omega_hat * self.grid.inv_ksq

    def velocity_hat(self) -> Tuple[np.ndarray, np.ndarray]:
        """(u_hat, v_hat) of the zero-mean part: u = psi_x2, v = -psi_x1"""
        psi = self.psi_hat()
        return 1j * self.grid.k2 * psi, -1j * self.grid.k1 * psi

    def velocity_grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Velocity on the grid including the mean flow"""
        u_hat, v_hat = self.velocity_hat()
        return (self.grid.to_physical(u_hat) + self.mean_flow[0],
                self.grid.to_physical(v_hat) + self.mean_flow[1])

    def vorticity_grid(self) -> np.ndarray:
        return self.grid.to_physical(self.omega_hat)

    def energy(self) -> float:
        """Kinetic energy per unit area of the zero-mean part, (1/2) mean |u|^2"""
        u_hat, v_hat = self.velocity_hat()
        return 0.5 * float(np.sum(self.grid.weights * (np.abs(u_hat) ** 2 + np.abs(v_hat) ** 2)))

    def max_speed(self) -> float:
        u, v = self.velocity_grid()
        return float(np.max(np.hypot(u - self.mean_flow[0], v - self.mean_flow[1])))

    def divergence_max(self) -> float:
        """Largest spectral divergence coefficient; zero up to rounding"""
        u_hat, v_hat = self.velocity_hat()
        return float(np.max(np.abs(1j * self.grid.k1 * u_hat + 1j * self.grid.k2 * v_hat)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.omega_hat)))

    def with_time(self, t: float, omega_hat: np.ndarray, rhs_hat: Optional[np.ndarray] = None) -> "SpectralState":
        return replace(self, t=float(t), omega_hat=omega_hat, rhs_hat=rhs_hat)


def enforce_constraints(grid: SpectralGrid, omega_hat: np.ndarray) -> np.ndarray:
    """Zero mean, dealiased, and Hermitian on the kappa_2 = 0 column"""
    coeffs = np.where(grid.dealias, omega_hat, 0.0).astype(complex)
    coeffs[0, 0] = 0.0
    # column kappa_2 = 0 holds both kappa and -kappa; average with the conjugate partner
    column = coeffs[:, 0]
    partner = np.conj(column[(-np.arange(grid.M)) % grid.M])
    coeffs[:, 0] = 0.5 * (column + partner)
    return coeffs
