"""Periodic grid on (-L, L) and the Fourier multipliers used by the integrators.

Fields are plain complex numpy arrays of length ``N`` sampled at the grid
nodes ``x_j = -L + j*h``.  Spectra are stored in FFT-natural order
(``l = 0, 1, ..., N/2-1, -N/2, ..., -1``) with the normalisation

    f_hat[l] = (1/N) * sum_j exp(-i mu_l (x_j + L)) f(x_j),   mu_l = pi*l/L,

so that ``f(x_j) = sum_l f_hat[l] exp(i mu_l (x_j + L))``.  Because
``mu_l (x_j + L) = 2*pi*l*j/N`` this is ``numpy.fft.fft(f) / N``.

Odd multipliers (``(i mu)^-m`` with odd ``m``, the sine filter) vanish on
the Nyquist mode ``l = -N/2`` so that real data stays real.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "TorusGrid",
    "to_spectrum",
    "from_spectrum",
    "spectrum_view",
    "apply_multiplier",
    "apply_free_flow",
    "apply_inverse_derivative",
    "apply_derivative",
    "apply_sin_filter",
    "zero_mode",
    "l2_norm",
]


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid with ``n_points`` nodes on the torus (-half_length, half_length)."""

    half_length: float
    n_points: int

    def __post_init__(self) -> None:
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 2 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 2, got {n!r}")
        if not self.half_length > 0:
            raise ValueError(f"half_length must be positive, got {self.half_length!r}")
        object.__setattr__(self, "n_points", int(n))
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def L(self) -> float:
        return self.half_length

    @property
    def N(self) -> int:
        return self.n_points

    @property
    def h(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        return -self.half_length + self.h * np.arange(self.n_points)

    @cached_property
    def l(self) -> np.ndarray:
        """Integer mode numbers in FFT order."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points).astype(np.int64)

    @cached_property
    def mu(self) -> np.ndarray:
        """Frequencies ``pi*l/L`` in FFT order."""
        return np.pi * self.l / self.half_length

    @property
    def nyquist(self) -> int:
        """FFT-order index of the mode ``l = -N/2``."""
        return self.n_points // 2

    def plane_wave(self, l: int) -> np.ndarray:
        """Samples of ``exp(i mu_l (x + L))``."""
        return np.exp(1j * np.pi * l / self.half_length * (self.x + self.half_length))


def to_spectrum(grid: TorusGrid, f: np.ndarray) -> np.ndarray:
    return np.fft.fft(f) / grid.N


def from_spectrum(grid: TorusGrid, fhat: np.ndarray) -> np.ndarray:
    return np.fft.ifft(fhat) * grid.N


def spectrum_view(grid: TorusGrid, fhat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder an FFT-order spectrum to ``l = -N/2, ..., N/2-1``."""
    return np.fft.fftshift(grid.l), np.fft.fftshift(fhat)


def apply_multiplier(grid: TorusGrid, f: np.ndarray, mult: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(f) * mult)


def free_flow_multiplier(grid: TorusGrid, t: float) -> np.ndarray:
    # exp(i t d_xx) acts on mode l as exp(-i t mu_l^2)
    return np.exp(-1j * t * grid.mu**2)


def inverse_derivative_multiplier(grid: TorusGrid, m: int) -> np.ndarray:
    if m < 1:
        raise ValueError(f"order must be a positive integer, got {m!r}")
    mult = np.zeros(grid.N, dtype=complex)
    nz = grid.l != 0
    mult[nz] = (1j * grid.mu[nz]) ** (-m)
    if m % 2:
        mult[grid.nyquist] = 0.0
    return mult


def derivative_multiplier(grid: TorusGrid, m: int = 1) -> np.ndarray:
    mult = (1j * grid.mu) ** m
    if m % 2:
        mult[grid.nyquist] = 0.0
    return mult


def sin_filter_multiplier(grid: TorusGrid, tau: float) -> np.ndarray:
    # sin(-i tau d_x) acts on mode l as sin(tau mu_l)
    mult = np.sin(tau * grid.mu)
    mult[grid.nyquist] = 0.0
    return mult


def apply_free_flow(grid: TorusGrid, f: np.ndarray, t: float) -> np.ndarray:
    """Exact solution operator ``exp(i t d_xx)`` of ``i v_t = -v_xx``."""
    return apply_multiplier(grid, f, free_flow_multiplier(grid, t))


def apply_inverse_derivative(grid: TorusGrid, f: np.ndarray, m: int = 1) -> np.ndarray:
    """``d_x^{-m}``: divide mode ``l != 0`` by ``(i mu_l)^m``, drop the mean."""
    return apply_multiplier(grid, f, inverse_derivative_multiplier(grid, m))


def apply_derivative(grid: TorusGrid, f: np.ndarray, m: int = 1) -> np.ndarray:
    return apply_multiplier(grid, f, derivative_multiplier(grid, m))


def apply_sin_filter(grid: TorusGrid, f: np.ndarray, tau: float) -> np.ndarray:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    return apply_multiplier(grid, f, sin_filter_multiplier(grid, tau))


def zero_mode(f: np.ndarray) -> complex:
    return complex(np.mean(f))


def l2_norm(grid: TorusGrid, f: np.ndarray) -> float:
    """Discrete L2 norm ``sqrt(h * sum |f_j|^2)``."""
    return float(np.sqrt(grid.h) * np.linalg.norm(f))
