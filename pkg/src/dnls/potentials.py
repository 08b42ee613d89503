"""Random potentials on the torus and the regularised potentials used by LRI."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import TorusGrid, from_spectrum, to_spectrum

__all__ = [
    "PotentialKind",
    "DisorderPotential",
    "RegularizedPotential",
    "sample_rng",
    "gen_fourier_potential",
    "gen_pointwise_potential",
    "gen_localization_potential",
    "restrict_potential",
    "regularizing_multipliers",
    "precompute_regularized",
    "write_potential_csv",
    "read_potential_csv",
]


class PotentialKind(str, enum.Enum):
    FOURIER_UNIFORM = "fourier-uniform"
    FOURIER_NORMAL = "fourier-normal"
    POINTWISE_UNIFORM = "pointwise"
    LOCALIZATION_BAND = "localization"
    EXTERNAL = "external"


@dataclass(frozen=True)
class DisorderPotential:
    grid: TorusGrid
    xi: np.ndarray
    kind: PotentialKind
    theta: float | None = None
    seed: tuple[int, ...] | None = None

    @property
    def xi0_hat(self) -> complex:
        return complex(np.mean(self.xi))


@dataclass(frozen=True)
class RegularizedPotential:
    """``xi1``, ``xi2`` and the mean of ``xi``, valid for one step size ``tau``."""

    xi1: np.ndarray
    xi2: np.ndarray
    xi0_hat: complex
    tau: float


def sample_rng(master_seed: int, sample_index: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one ensemble member.

    The stream depends only on ``(master_seed, sample_index, stream)`` so an
    ensemble can be evaluated in any order or in parallel.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, sample_index, stream])))


def _draw(rng: np.random.Generator, dist: str, n: int) -> np.ndarray:
    if dist == "uniform":
        return rng.uniform(-1.0, 1.0, n)
    if dist == "normal":
        return rng.standard_normal(n)
    raise ValueError(f"unknown distribution {dist!r} (expected 'uniform' or 'normal')")


def _seed_of(rng: np.random.Generator) -> tuple[int, ...] | None:
    seq = getattr(rng.bit_generator, "seed_seq", None)
    entropy = getattr(seq, "entropy", None)
    if entropy is None:
        return None
    if isinstance(entropy, (int, np.integer)):
        return (int(entropy),)
    return tuple(int(e) for e in entropy)


def gen_fourier_potential(
    grid: TorusGrid,
    theta: float,
    dist: str,
    rng: np.random.Generator,
    normalize: bool = True,
) -> DisorderPotential:
    """Random Fourier series ``(1/N) sum_l |l|^-theta (w1 + i w2)_l e^{i mu_l (x+L)} + c.c.``.

    With ``normalize`` the result is rescaled to ``2 xi0 / max|xi0|``.
    The Nyquist coefficient is dropped.
    """
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta!r}")
    n = grid.N
    coeff = _draw(rng, dist, n) + 1j * _draw(rng, dist, n)
    weight = np.ones(n)
    nz = grid.l != 0
    weight[nz] = np.abs(grid.l[nz]).astype(float) ** (-theta)
    coeff *= weight
    coeff[grid.nyquist] = 0.0
    # scale 1/C0 with C0 = N cancels the N in from_spectrum
    field = from_spectrum(grid, coeff) / n
    xi = 2.0 * field.real
    if normalize:
        peak = np.max(np.abs(xi))
        if peak == 0.0:
            raise ValueError("cannot normalise an identically zero potential draw")
        xi = 2.0 * xi / peak
    kind = PotentialKind.FOURIER_UNIFORM if dist == "uniform" else PotentialKind.FOURIER_NORMAL
    return DisorderPotential(grid, xi, kind, float(theta), _seed_of(rng))


def gen_pointwise_potential(grid: TorusGrid, rng: np.random.Generator) -> DisorderPotential:
    """i.i.d. uniform values in [-1, 1] at the grid nodes."""
    xi = rng.uniform(-1.0, 1.0, grid.N)
    return DisorderPotential(grid, xi, PotentialKind.POINTWISE_UNIFORM, None, _seed_of(rng))


def gen_localization_potential(grid: TorusGrid, n0: int, rng: np.random.Generator) -> DisorderPotential:
    """Band-limited potential ``(13/sqrt(N0)) sum_{|l| <= N0/2} (r1 + i r2)_l e^{i mu_l (x+L)} + c.c.``

    ``r1``, ``r2`` are uniform on [0, 1]; modes run over ``l = -N0/2 .. N0/2-1``.
    """
    if n0 < 2 or n0 % 2:
        raise ValueError(f"N0 must be a positive even integer, got {n0!r}")
    if n0 > grid.N:
        raise ValueError(f"N0 = {n0} exceeds the number of grid points {grid.N}")
    modes = np.arange(-n0 // 2, n0 // 2)
    coeff = np.zeros(grid.N, dtype=complex)
    coeff[modes % grid.N] = rng.random(n0) + 1j * rng.random(n0)
    field = (13.0 / np.sqrt(n0)) * from_spectrum(grid, coeff)
    xi = 2.0 * field.real
    return DisorderPotential(grid, xi, PotentialKind.LOCALIZATION_BAND, None, _seed_of(rng))


def restrict_potential(pot: DisorderPotential, grid: TorusGrid) -> DisorderPotential:
    """Sample a fine-grid potential at the nodes of a coarser grid on the same torus."""
    fine = pot.grid
    if grid.L != fine.L or fine.N % grid.N:
        raise ValueError("target grid must share the torus and divide the fine grid")
    xi = pot.xi[:: fine.N // grid.N].copy()
    return DisorderPotential(grid, xi, pot.kind, pot.theta, pot.seed)


def _m2_series(y: np.ndarray) -> np.ndarray:
    # int_0^1 s e^{i y s} ds = sum_k (i y)^k / (k! (k + 2))
    z = 1j * y
    term = np.ones_like(z)
    total = term / 2.0
    for k in range(1, 14):
        term = term * z / k
        total = total + term / (k + 2)
    return total


def regularizing_multipliers(mu: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-mode factors producing ``xi1`` and ``xi2`` from the spectrum of ``xi``.

    ``m1 = (1 - e^{i tau mu^2}) / mu^2`` and
    ``m2 = (i - i e^{i tau mu^2} - tau mu^2 e^{i tau mu^2}) / (i tau mu^3)``,
    both zero at ``mu = 0``.  Evaluated in forms free of cancellation for
    small ``tau mu^2``.
    """
    mu = np.asarray(mu, dtype=float)
    m1 = np.zeros(mu.shape, dtype=complex)
    m2 = np.zeros(mu.shape, dtype=complex)
    nz = mu != 0
    mz = mu[nz]
    y = tau * mz**2
    half = 0.5 * y
    # 1 - e^{iy} = -2i sin(y/2) e^{iy/2}
    m1[nz] = -1j * tau * np.sinc(half / np.pi) * np.exp(1j * half)
    # m2 = -tau mu int_0^1 s e^{i y s} ds
    small = y < 0.1
    integral = np.empty(y.shape, dtype=complex)
    integral[small] = _m2_series(y[small])
    ys = y[~small]
    e = np.exp(1j * ys)
    integral[~small] = e / (1j * ys) + (e - 1.0) / ys**2
    m2[nz] = -tau * mz * integral
    return m1, m2


def precompute_regularized(grid: TorusGrid, xi: np.ndarray, tau: float) -> RegularizedPotential:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    m1, m2 = regularizing_multipliers(grid.mu, tau)
    # m2 is odd in mu
    m2[grid.nyquist] = 0.0
    xi_hat = to_spectrum(grid, np.asarray(xi, dtype=complex))
    return RegularizedPotential(
        xi1=from_spectrum(grid, m1 * xi_hat),
        xi2=from_spectrum(grid, m2 * xi_hat),
        xi0_hat=complex(xi_hat[0]),
        tau=float(tau),
    )


def write_potential_csv(path: str | Path, pot: DisorderPotential) -> None:
    data = np.column_stack([pot.grid.x, np.real(pot.xi)])
    np.savetxt(path, data, delimiter=",", header="x,xi", comments="", fmt="%.17g")


def read_potential_csv(path: str | Path, half_length: float) -> DisorderPotential:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns x,xi")
    grid = TorusGrid(half_length, data.shape[0])
    if not np.allclose(data[:, 0], grid.x, rtol=0, atol=1e-9 * half_length):
        raise ValueError(f"{path}: x column does not match a uniform grid on (-{half_length}, {half_length})")
    return DisorderPotential(grid, data[:, 1].copy(), PotentialKind.EXTERNAL)
