"""Time steppers for ``i u_t = -u_xx + xi u + lam |u|^2 u`` on the torus.

Three schemes share one calling convention ``step(grid, u, xi, cfg, ...)``:

* Strang splitting ``Phi_V^{tau/2} o Phi_T^tau o Phi_V^{tau/2}``;
* the semi-implicit leapfrog finite difference scheme (FD), whose implicit
  part is diagonal in Fourier space;
* the second order low-regularity Fourier integrator (LRI).

Nonlinear products are formed pointwise on the grid without dealiasing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable

import numpy as np

from .potentials import RegularizedPotential, precompute_regularized
from .spectral import (
    TorusGrid,
    free_flow_multiplier,
    inverse_derivative_multiplier,
    sin_filter_multiplier,
)

__all__ = [
    "Scheme",
    "IntegratorConfig",
    "SolverState",
    "StaleRegularizationError",
    "phi_v_flow",
    "strang_step",
    "fd_first_step",
    "fd_step",
    "j1_term",
    "j2_term",
    "lri_step",
    "step",
    "evolve",
    "evolve_with_snapshots",
]

fft = np.fft.fft
ifft = np.fft.ifft


class Scheme(str, enum.Enum):
    LRI = "lri"
    STRANG = "strang"
    FD = "fd"


@dataclass(frozen=True)
class IntegratorConfig:
    tau: float
    lam: float
    scheme: Scheme

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))


class StaleRegularizationError(ValueError):
    """LRI was handed regularised potentials built for a different step size."""


@dataclass
class SolverState:
    u: np.ndarray
    u_prev: np.ndarray | None = None
    n: int = 0
    reg: RegularizedPotential | None = field(default=None, repr=False)


@lru_cache(maxsize=64)
def _multipliers(grid: TorusGrid, tau: float) -> dict[str, np.ndarray]:
    mu2 = grid.mu**2
    dinv = inverse_derivative_multiplier(grid, 1)
    out = {
        "fwd": free_flow_multiplier(grid, tau),  # exp(i tau d_xx)
        "bwd": free_flow_multiplier(grid, -tau),  # exp(-i tau d_xx)
        "dinv": dinv,
        "sin": sin_filter_multiplier(grid, tau),
        "fd1": 1.0 / (1.0 + 1j * tau * mu2),
        "fd_num": 1j / (2 * tau) + mu2 / 2,
        "fd_den": 1.0 / (1j / (2 * tau) - mu2 / 2),
    }
    out["bwd_dinv"] = out["bwd"] * dinv
    out["dinv_fwd"] = dinv * out["fwd"]
    for arr in out.values():
        arr.setflags(write=False)
    return out


def phi_v_flow(w: np.ndarray, xi: np.ndarray, t: float, lam: float) -> np.ndarray:
    """Exact flow of ``i w_t = (xi + lam |w|^2) w``."""
    return np.exp(-1j * t * (xi + lam * np.abs(w) ** 2)) * w


def strang_step(grid: TorusGrid, u: np.ndarray, xi: np.ndarray, cfg: IntegratorConfig) -> np.ndarray:
    m = _multipliers(grid, cfg.tau)
    w = phi_v_flow(u, xi, cfg.tau / 2, cfg.lam)
    w = ifft(fft(w) * m["fwd"])
    return phi_v_flow(w, xi, cfg.tau / 2, cfg.lam)


def _fd_rhs(u: np.ndarray, xi: np.ndarray, lam: float) -> np.ndarray:
    return (xi + lam * np.abs(u) ** 2) * u


def fd_first_step(grid: TorusGrid, u0: np.ndarray, xi: np.ndarray, cfg: IntegratorConfig) -> np.ndarray:
    """First order start ``i(u1 - u0)/tau = -u1_xx + xi u0 + lam|u0|^2 u0``."""
    m = _multipliers(grid, cfg.tau)
    rhs = fft(u0) - 1j * cfg.tau * fft(_fd_rhs(u0, xi, cfg.lam))
    return ifft(rhs * m["fd1"])


def fd_step(
    grid: TorusGrid,
    u_n: np.ndarray,
    u_nm1: np.ndarray,
    xi: np.ndarray,
    cfg: IntegratorConfig,
) -> np.ndarray:
    m = _multipliers(grid, cfg.tau)
    rhs = m["fd_num"] * fft(u_nm1) + fft(_fd_rhs(u_n, xi, cfg.lam))
    return ifft(rhs * m["fd_den"])


def _conj_spectrum(v_hat: np.ndarray) -> np.ndarray:
    # fft(conj(v))[l] = conj(fft(v)[-l])
    return np.conj(np.roll(v_hat[::-1], 1))


def _j1_parts(grid: TorusGrid, v: np.ndarray, v_hat: np.ndarray, tau: float, lam: float):
    """J1 split into a spectrum (bracket) and a physical-space correction."""
    m = _multipliers(grid, tau)
    vbar_hat = _conj_spectrum(v_hat)
    v2 = v * v
    v2_hat = fft(v2)
    a = ifft(vbar_hat * m["bwd_dinv"])  # e^{-i tau d_xx} d_x^{-1} conj(v)
    b = ifft(v2_hat * m["fwd"])  # e^{i tau d_xx} v^2
    c = ifft(vbar_hat * m["dinv"])  # d_x^{-1} conj(v)
    bracket_hat = 0.5 * lam * (fft(a * b) * m["bwd_dinv"] - fft(c * v2) * m["dinv"])
    n = grid.N
    vbar0 = vbar_hat[0] / n
    v2_0 = v2_hat[0] / n
    cubic0 = np.mean(np.abs(v) ** 2 * v)
    correction = -1j * lam * tau * (vbar0 * (v2 - v2_0) + cubic0)
    return bracket_hat, correction


def j1_term(grid: TorusGrid, v: np.ndarray, tau: float, lam: float) -> np.ndarray:
    """Physical-space form of the ``e^{2i mu_{l1} mu_l rho}`` part of the cubic Duhamel term.

    The zero-mode corrections collect the resonant index sets ``l1 = 0`` and
    ``l = 0`` where the phase integral degenerates to ``tau``; they carry the
    same ``-i lam`` prefactor as the Duhamel integral they come from.
    """
    bracket_hat, correction = _j1_parts(grid, v, fft(v), tau, lam)
    return ifft(bracket_hat) + correction


def _j2(grid: TorusGrid, v: np.ndarray, v_hat: np.ndarray, tau: float, lam: float) -> np.ndarray:
    m = _multipliers(grid, tau)
    p = ifft(v_hat * m["dinv_fwd"])  # d_x^{-1} e^{i tau d_xx} v
    q = ifft(v_hat * m["dinv"])  # d_x^{-1} v
    bracket = ifft(fft(p * p) * m["bwd"]) - q * q
    v0 = v_hat[0] / grid.N
    correction = -1j * lam * tau * v0 * (2.0 * v - v0)
    return (0.5 * lam * bracket + correction) * np.conj(v)


def j2_term(grid: TorusGrid, v: np.ndarray, tau: float, lam: float) -> np.ndarray:
    """Physical-space form of the ``e^{2i mu_{l2} mu_{l3} rho}`` part of the cubic Duhamel term."""
    return _j2(grid, v, fft(v), tau, lam)


def lri_step(
    grid: TorusGrid,
    u: np.ndarray,
    xi: np.ndarray,
    reg: RegularizedPotential,
    cfg: IntegratorConfig,
) -> np.ndarray:
    """One step of the low-regularity Fourier integrator (fully explicit).

    ``u+ = e^{i tau d_xx} [ e^{i lam tau |u|^2} u + J1(u) + J2(u)
    - lam tau^2 xi |u|^2 u - tau^2/2 xi^2 u + xi1 u - 2 xi2 sin(-i tau d_x) u
    - i tau xi0_hat u ]``
    """
    tau, lam = cfg.tau, cfg.lam
    if reg.tau != tau:
        raise StaleRegularizationError(f"regularised potential built for tau={reg.tau}, stepping with tau={tau}")
    m = _multipliers(grid, tau)
    u_hat = fft(u)
    mod2 = np.abs(u) ** 2
    j1_hat, j1_corr = _j1_parts(grid, u, u_hat, tau, lam)
    u_sin = ifft(u_hat * m["sin"])
    physical = (
        np.exp(1j * lam * tau * mod2) * u
        + j1_corr
        + _j2(grid, u, u_hat, tau, lam)
        - lam * tau**2 * xi * mod2 * u
        - 0.5 * tau**2 * xi**2 * u
        + reg.xi1 * u
        - 2.0 * reg.xi2 * u_sin
        - 1j * tau * reg.xi0_hat * u
    )
    return ifft((fft(physical) + j1_hat) * m["fwd"])


def step(
    grid: TorusGrid,
    state: SolverState,
    xi: np.ndarray,
    cfg: IntegratorConfig,
) -> SolverState:
    """Advance ``state`` by one step of ``cfg.scheme``."""
    if cfg.scheme is Scheme.STRANG:
        return SolverState(strang_step(grid, state.u, xi, cfg), None, state.n + 1)
    if cfg.scheme is Scheme.FD:
        if state.n == 0 or state.u_prev is None:
            u_new = fd_first_step(grid, state.u, xi, cfg)
        else:
            u_new = fd_step(grid, state.u, state.u_prev, xi, cfg)
        return SolverState(u_new, state.u, state.n + 1)
    reg = state.reg
    if reg is None or reg.tau != cfg.tau:
        reg = precompute_regularized(grid, xi, cfg.tau)
    return SolverState(lri_step(grid, state.u, xi, reg, cfg), None, state.n + 1, reg)


def evolve(
    grid: TorusGrid,
    state: SolverState,
    xi: np.ndarray,
    cfg: IntegratorConfig,
    n_steps: int,
) -> SolverState:
    """Apply ``n_steps`` steps of the configured scheme."""
    state, _ = evolve_with_snapshots(grid, state, xi, cfg, n_steps, ())
    return state


def evolve_with_snapshots(
    grid: TorusGrid,
    state: SolverState,
    xi: np.ndarray,
    cfg: IntegratorConfig,
    n_steps: int,
    snapshot_steps: Iterable[int],
) -> tuple[SolverState, dict[int, np.ndarray]]:
    """Like :func:`evolve`, also returning copies of ``u`` at the absolute step indices requested."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    wanted = set(int(k) for k in snapshot_steps)
    snaps: dict[int, np.ndarray] = {}
    if state.n in wanted:
        snaps[state.n] = state.u.copy()
    if cfg.scheme is Scheme.LRI and (state.reg is None or state.reg.tau != cfg.tau):
        state = replace(state, reg=precompute_regularized(grid, xi, cfg.tau))
    for _ in range(n_steps):
        state = step(grid, state, xi, cfg)
        if state.n in wanted:
            snaps[state.n] = state.u.copy()
    return state, snaps
