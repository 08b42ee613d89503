"""Named initial data for the continuous experiments."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .spectral import TorusGrid, apply_multiplier

__all__ = ["INITIAL_DATA", "initial_data", "random_h2_data"]


def example1_smooth(x: np.ndarray) -> np.ndarray:
    return (np.cos(x) + 1j * np.sin(2 * x)) / (1 + np.sin(x) ** 2)


def example2_smooth(x: np.ndarray) -> np.ndarray:
    return 2 * np.cos(x) / (2 + np.sin(2 * x)) + 1j * np.cos(x)


def sech_profile(x: np.ndarray) -> np.ndarray:
    return 2.0 / np.cosh(x**2)


def gaussian(x: np.ndarray) -> np.ndarray:
    return np.exp(-(x**2)) / np.sqrt(np.pi) + 0j


def random_h2_data(grid: TorusGrid, rng: np.random.Generator) -> np.ndarray:
    """``|d_x|^{-2} U / max| |d_x|^{-2} U |`` with ``U = rand + i rand`` on [0, 1].

    ``U`` holds grid values; ``|d_x|^{-2}`` divides mode ``l != 0`` by
    ``l^2`` and keeps the mean.
    """
    n = grid.N
    values = rng.random(n) + 1j * rng.random(n)
    weight = np.ones(n)
    nz = grid.l != 0
    weight[nz] = np.abs(grid.l[nz]).astype(float) ** -2.0
    u = apply_multiplier(grid, values, weight)
    return u / np.max(np.abs(u))


INITIAL_DATA: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "example1-smooth": example1_smooth,
    "example2-smooth": example2_smooth,
    "sech": sech_profile,
    "gaussian": gaussian,
}

RANDOM_INITIAL_DATA = {"example1-h2": random_h2_data}


def initial_data(name: str, grid: TorusGrid, rng: np.random.Generator | None = None) -> np.ndarray:
    """Evaluate the selector ``name`` on ``grid``; random data needs ``rng``."""
    if name in INITIAL_DATA:
        return np.asarray(INITIAL_DATA[name](grid.x), dtype=complex)
    if name in RANDOM_INITIAL_DATA:
        if rng is None:
            raise ValueError(f"initial data {name!r} is random and needs a generator")
        return RANDOM_INITIAL_DATA[name](grid, rng)
    known = sorted(INITIAL_DATA) + sorted(RANDOM_INITIAL_DATA)
    raise ValueError(f"unknown initial data {name!r}; expected one of {known}")
