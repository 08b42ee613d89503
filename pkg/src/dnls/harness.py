"""Ensemble experiments: sampled-expectation error curves, mode decay, localization.

Each ensemble member ``k`` draws its potential (and random initial data, if
any) from :func:`dnls.potentials.sample_rng` with ``(master_seed, k)``, so
every sweep value and every scheme sees the same sample, and the result does
not depend on the order in which samples are processed.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Sequence

import numpy as np

from .initial_data import initial_data
from .integrators import IntegratorConfig, Scheme, SolverState, evolve, evolve_with_snapshots
from .lattice import LatticeState, lattice_fd_first_step, lattice_fd_step, lattice_strang_step, three_site_data
from .potentials import (
    DisorderPotential,
    PotentialKind,
    gen_fourier_potential,
    gen_localization_potential,
    gen_pointwise_potential,
    restrict_potential,
    sample_rng,
)
from .spectral import TorusGrid

log = logging.getLogger(__name__)

__all__ = [
    "PotentialSpec",
    "ContinuousProblem",
    "LatticeProblem",
    "ReferenceSpec",
    "ExperimentSpec",
    "ReportRow",
    "ConvergenceReport",
    "relative_l2_error",
    "relative_linf_error",
    "fit_order",
    "snap_steps",
    "make_potential",
    "reference_solution",
    "run_convergence",
    "DecaySpec",
    "DecayCurves",
    "fourier_decay_diagnostic",
    "decay_slope",
    "LocalizationParams",
    "LocalizationResult",
    "simulate_localization",
    "mass_fraction",
]


# ---------------------------------------------------------------------------
# experiment description


@dataclass(frozen=True)
class PotentialSpec:
    """``kind`` is ``fourier``, ``pointwise``, ``localization`` or ``zero``."""

    kind: str = "fourier"
    theta: float = 2.0
    dist: str = "uniform"
    normalize: bool = True
    n0: int | None = None


@dataclass(frozen=True)
class ContinuousProblem:
    half_length: float
    n_points: int
    initial_data: str
    potential: PotentialSpec
    lam: float = 1.0


@dataclass(frozen=True)
class LatticeProblem:
    half_size: int
    J: float = 1.0
    lam: float = 1.0
    disorder: str = "uniform"


@dataclass(frozen=True)
class ReferenceSpec:
    """How the per-sample reference is computed.

    ``scheme="self"`` makes every scheme its own reference at ``n_points``
    with the run's step size (spatial sweeps).
    """

    scheme: str = "strang"
    tau: float | None = None
    n_points: int | None = None


@dataclass(frozen=True)
class ExperimentSpec:
    problem: ContinuousProblem | LatticeProblem
    sweep_kind: str
    sweep: tuple
    final_time: float
    n_samples: int
    master_seed: int
    reference: ReferenceSpec
    schemes: tuple[str, ...] = ("lri", "strang", "fd")
    fixed_tau: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "sweep", tuple(self.sweep))
        object.__setattr__(self, "schemes", tuple(Scheme(s).value for s in self.schemes))
        self.validate()

    @property
    def is_lattice(self) -> bool:
        return isinstance(self.problem, LatticeProblem)

    def validate(self) -> None:
        T = self.final_time
        if not T > 0:
            raise ValueError("final_time must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if not self.sweep:
            raise ValueError("sweep must not be empty")
        if self.is_lattice and "lri" in self.schemes:
            raise ValueError("the lattice problem supports only strang and fd")
        ref = self.reference
        if self.sweep_kind == "tau":
            for tau in self.sweep:
                snap_steps(T, tau)
            if ref.tau is None:
                raise ValueError("a time sweep needs reference.tau")
            snap_steps(T, ref.tau)
            if ref.tau > min(self.sweep) / 10 * (1 + 1e-12):
                raise ValueError("reference.tau must be <= min(swept tau)/10")
            if ref.scheme == "self":
                raise ValueError("reference.scheme 'self' is only meaningful for spatial sweeps")
        elif self.sweep_kind == "N":
            if self.is_lattice:
                raise ValueError("spatial sweeps are defined for the continuous problem only")
            if self.fixed_tau is None:
                raise ValueError("a spatial sweep needs fixed_tau")
            snap_steps(T, self.fixed_tau)
            n_ref = ref.n_points or max(self.sweep)
            if n_ref < max(self.sweep) or any(n_ref % n for n in self.sweep):
                raise ValueError("reference.n_points must be a multiple of every swept N")
            if ref.scheme != "self":
                if ref.tau is None:
                    raise ValueError("reference.tau required unless reference.scheme is 'self'")
                snap_steps(T, ref.tau)
        else:
            raise ValueError(f"sweep_kind must be 'tau' or 'N', got {self.sweep_kind!r}")
        if ref.scheme != "self":
            Scheme(ref.scheme)

    def fine_points(self) -> int:
        if self.is_lattice:
            return 2 * self.problem.half_size
        if self.sweep_kind == "N":
            return self.reference.n_points or max(self.sweep)
        return max(self.problem.n_points, self.reference.n_points or 0)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["problem_type"] = "lattice" if self.is_lattice else "continuous"
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()


def snap_steps(T: float, tau: float) -> int:
    """Number of steps of size ``tau`` in ``T``; fails unless ``tau`` divides ``T``."""
    if not tau > 0:
        raise ValueError(f"step size must be positive, got {tau!r}")
    n = round(T / tau)
    if n < 1 or abs(n * tau - T) > 1e-12 * T:
        raise ValueError(f"tau={tau!r} does not divide T={T!r}")
    return n


def divisor_steps(T: float, taus: Sequence[float]) -> tuple[float, ...]:
    """Replace each nominal step by the nearest ``T/n``."""
    return tuple(T / max(1, round(T / t)) for t in taus)


# ---------------------------------------------------------------------------
# error metrics and fits


def _restrict(u_ref: np.ndarray, n: int) -> np.ndarray:
    if u_ref.size == n:
        return u_ref
    if u_ref.size % n:
        raise ValueError(f"reference with {u_ref.size} nodes cannot be restricted to {n} nodes")
    return u_ref[:: u_ref.size // n]


def relative_l2_error(u_num: np.ndarray, u_ref: np.ndarray) -> float:
    """``||u_num - u_ref|| / ||u_ref||`` in the discrete L2 norm.

    A reference on a finer grid is restricted to the coarse nodes.  The mesh
    weight ``h`` cancels in the ratio.
    """
    ref = _restrict(np.asarray(u_ref), np.asarray(u_num).size)
    denom = np.linalg.norm(ref)
    if denom == 0:
        raise ValueError("reference solution has zero norm")
    return float(np.linalg.norm(u_num - ref) / denom)


def relative_linf_error(u_num: np.ndarray, u_ref: np.ndarray) -> float:
    denom = np.max(np.abs(u_ref))
    if denom == 0:
        raise ValueError("reference solution has zero norm")
    return float(np.max(np.abs(u_num - u_ref)) / denom)


def fit_order(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(step)``."""
    if len(points) < 2:
        raise ValueError("need at least two points to fit an order")
    steps = np.array([p[0] for p in points], dtype=float)
    errs = np.array([p[1] for p in points], dtype=float)
    if np.any(~(steps > 0)) or np.any(~(errs > 0)):
        raise ValueError("steps and errors must be positive")
    slope, _ = np.polyfit(np.log(steps), np.log(errs), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# samples and solves


def make_potential(spec: PotentialSpec, grid: TorusGrid, rng: np.random.Generator) -> DisorderPotential:
    if spec.kind == "fourier":
        return gen_fourier_potential(grid, spec.theta, spec.dist, rng, spec.normalize)
    if spec.kind == "pointwise":
        return gen_pointwise_potential(grid, rng)
    if spec.kind == "localization":
        return gen_localization_potential(grid, spec.n0 or grid.N // 64, rng)
    if spec.kind == "zero":
        return DisorderPotential(grid, np.zeros(grid.N), PotentialKind.EXTERNAL)
    raise ValueError(f"unknown potential kind {spec.kind!r}")


def _continuous_sample(problem: ContinuousProblem, n_fine: int, seed: int, index: int):
    fine = TorusGrid(problem.half_length, n_fine)
    pot = make_potential(problem.potential, fine, sample_rng(seed, index, 0))
    u0 = initial_data(problem.initial_data, fine, sample_rng(seed, index, 1))
    return pot, u0


def _on_grid(pot: DisorderPotential, u0_fine: np.ndarray, n: int) -> tuple[TorusGrid, np.ndarray, np.ndarray]:
    grid = TorusGrid(pot.grid.L, n)
    coarse = restrict_potential(pot, grid)
    return grid, coarse.xi, _restrict(u0_fine, n).copy()


def solve(
    grid: TorusGrid,
    u0: np.ndarray,
    xi: np.ndarray,
    scheme: str,
    tau: float,
    lam: float,
    final_time: float,
) -> np.ndarray:
    cfg = IntegratorConfig(tau, lam, Scheme(scheme))
    n = snap_steps(final_time, tau)
    with np.errstate(all="ignore"):
        return evolve(grid, SolverState(u0.astype(complex)), xi, cfg, n).u


def _lattice_sample(problem: LatticeProblem, seed: int, index: int) -> LatticeState:
    rng = sample_rng(seed, index, 0)
    size = 2 * problem.half_size
    if problem.disorder == "uniform":
        xi = rng.uniform(-1.0, 1.0, size)
    elif problem.disorder == "normal":
        xi = rng.standard_normal(size)
    else:
        raise ValueError(f"unknown lattice disorder {problem.disorder!r}")
    return LatticeState(three_site_data(problem.half_size), problem.J, xi, problem.lam)


def solve_lattice(state: LatticeState, scheme: str, tau: float, final_time: float) -> np.ndarray:
    n = snap_steps(final_time, tau)
    with np.errstate(all="ignore"):
        if scheme == "strang":
            for _ in range(n):
                state = lattice_strang_step(state, tau)
            return state.u
        if scheme == "fd":
            prev, cur = state, lattice_fd_first_step(state, tau)
            for _ in range(n - 1):
                prev, cur = cur, lattice_fd_step(cur, prev, tau)
            return cur.u
    raise ValueError(f"scheme {scheme!r} is not defined on the lattice")


def _cache_key(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()


def _atomic_save(path: Path, arr: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.save(fh, arr)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def reference_solution(
    spec: ExperimentSpec,
    index: int,
    scheme: str | None = None,
    tau: float | None = None,
    cache_dir: str | Path | None = None,
) -> np.ndarray:
    """Reference solution at ``final_time`` for ensemble member ``index``.

    Defaults to ``spec.reference``; ``scheme``/``tau`` override it (used for
    self-referenced spatial sweeps).  Results are cached under
    ``cache_dir`` keyed by a content hash of everything they depend on.
    """
    ref = spec.reference
    scheme = scheme or ref.scheme
    tau = tau or ref.tau
    n_fine = spec.fine_points()
    payload = {
        "problem": dataclasses.asdict(spec.problem),
        "lattice": spec.is_lattice,
        "seed": spec.master_seed,
        "index": index,
        "scheme": scheme,
        "tau": repr(tau),
        "n": n_fine,
        "T": repr(spec.final_time),
    }
    path = Path(cache_dir) / f"ref-{_cache_key(payload)}.npy" if cache_dir else None
    if path is not None and path.exists():
        return np.load(path)
    if spec.is_lattice:
        u = solve_lattice(_lattice_sample(spec.problem, spec.master_seed, index), scheme, tau, spec.final_time)
    else:
        pot, u0 = _continuous_sample(spec.problem, n_fine, spec.master_seed, index)
        u = solve(pot.grid, u0, pot.xi, scheme, tau, spec.problem.lam, spec.final_time)
    if path is not None:
        _atomic_save(path, u)
    return u


def _sample_errors(spec: ExperimentSpec, cache_dir: str | None, index: int) -> dict:
    """Errors of every scheme at every sweep value for one ensemble member."""
    out: dict = {"index": index, "errors": {}, "failure": None}
    try:
        if spec.is_lattice:
            state = _lattice_sample(spec.problem, spec.master_seed, index)
            u_ref = reference_solution(spec, index, cache_dir=cache_dir)
            for s in spec.schemes:
                out["errors"][s] = [
                    relative_linf_error(solve_lattice(state, s, tau, spec.final_time), u_ref) for tau in spec.sweep
                ]
            return out
        prob = spec.problem
        pot, u0 = _continuous_sample(prob, spec.fine_points(), spec.master_seed, index)
        if spec.sweep_kind == "tau":
            u_ref = reference_solution(spec, index, cache_dir=cache_dir)
            grid, xi, u0c = _on_grid(pot, u0, prob.n_points)
            for s in spec.schemes:
                out["errors"][s] = [
                    relative_l2_error(solve(grid, u0c, xi, s, tau, prob.lam, spec.final_time), u_ref)
                    for tau in spec.sweep
                ]
            return out
        tau = spec.fixed_tau
        shared = None if spec.reference.scheme == "self" else reference_solution(spec, index, cache_dir=cache_dir)
        for s in spec.schemes:
            u_ref = shared if shared is not None else reference_solution(spec, index, s, tau, cache_dir)
            errs = []
            for n in spec.sweep:
                grid, xi, u0c = _on_grid(pot, u0, n)
                errs.append(relative_l2_error(solve(grid, u0c, xi, s, tau, prob.lam, spec.final_time), u_ref))
            out["errors"][s] = errs
    except Exception as exc:  # one bad sample must not sink the ensemble
        log.warning("sample %d failed: %s", index, exc)
        out["failure"] = f"{type(exc).__name__}: {exc}"
        out["errors"] = {}
    return out


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class ReportRow:
    scheme: str
    sweep_value: float
    mean_error: float
    std_error: float
    n_ok: int
    n_failed: int


@dataclass
class ConvergenceReport:
    sweep_kind: str
    rows: list[ReportRow]
    orders: dict[str, float | None]
    metadata: dict = field(default_factory=dict)
    samples: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    CSV_COLUMNS = ("scheme", "sweep_value", "mean_error", "std_error", "n_ok", "n_failed")

    def rows_for(self, scheme: str) -> list[ReportRow]:
        return [r for r in self.rows if r.scheme == scheme]

    def means(self, scheme: str) -> np.ndarray:
        return np.array([r.mean_error for r in self.rows_for(scheme)])

    def to_csv(self, path: str | Path) -> None:
        lines = [",".join(self.CSV_COLUMNS)]
        for r in self.rows:
            lines.append(f"{r.scheme},{r.sweep_value!r},{r.mean_error!r},{r.std_error!r},{r.n_ok},{r.n_failed}")
        Path(path).write_text("\n".join(lines) + "\n")

    def to_json(self, path: str | Path) -> None:
        doc = {
            "sweep_kind": self.sweep_kind,
            "rows": [dataclasses.asdict(r) for r in self.rows],
            "orders": self.orders,
            "metadata": self.metadata,
        }
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")

    def summary(self) -> str:
        label = "tau" if self.sweep_kind == "tau" else "N"
        out = [f"{'scheme':<8}{label:>14}{'mean error':>14}{'std':>12}{'ok':>5}{'fail':>5}"]
        for r in self.rows:
            value = f"{r.sweep_value:.4e}" if self.sweep_kind == "tau" else f"{int(r.sweep_value)}"
            out.append(
                f"{r.scheme:<8}{value:>14}{r.mean_error:>14.4e}{r.std_error:>12.3e}{r.n_ok:>5}{r.n_failed:>5}"
            )
        for s, p in self.orders.items():
            out.append(f"fitted order {s}: {'n/a' if p is None else f'{p:.3f}'}")
        return "\n".join(out)


def _mean_std(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var)


def _step_of(spec: ExperimentSpec, value) -> float:
    if spec.sweep_kind == "tau":
        return float(value)
    return 2.0 * spec.problem.half_length / int(value)


def run_convergence(
    spec: ExperimentSpec,
    workers: int = 1,
    cache_dir: str | Path | None = None,
) -> ConvergenceReport:
    """Run every scheme over the sweep for ``spec.n_samples`` potential samples."""
    start = time.perf_counter()
    task = partial(_sample_errors, spec, str(cache_dir) if cache_dir else None)
    indices = range(spec.n_samples)
    if workers > 1 and spec.n_samples > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, indices))
    else:
        results = [task(i) for i in indices]
    results.sort(key=lambda r: r["index"])

    failures = [(r["index"], r["failure"]) for r in results if r["failure"]]
    rows: list[ReportRow] = []
    orders: dict[str, float | None] = {}
    samples: dict[str, np.ndarray] = {}
    for s in spec.schemes:
        table = np.full((spec.n_samples, len(spec.sweep)), np.nan)
        for r in results:
            if s in r["errors"]:
                table[r["index"]] = r["errors"][s]
        samples[s] = table
        points = []
        for k, value in enumerate(spec.sweep):
            col = table[:, k]
            ok = col[np.isfinite(col)]
            mean, std = _mean_std(ok)
            rows.append(ReportRow(s, float(value), mean, std, int(ok.size), int(spec.n_samples - ok.size)))
            if np.isfinite(mean) and mean > 0:
                points.append((_step_of(spec, value), mean))
        orders[s] = fit_order(points) if len(points) >= 3 else None
    metadata = {
        "master_seed": spec.master_seed,
        "spec_hash": spec.digest(),
        "spec": spec.to_dict(),
        "wall_time_s": time.perf_counter() - start,
        "n_failed_samples": len(failures),
        "failures": failures,
    }
    return ConvergenceReport(spec.sweep_kind, rows, orders, metadata, samples)


# ---------------------------------------------------------------------------
# Fourier mode decay


@dataclass(frozen=True)
class DecaySpec:
    problem: ContinuousProblem
    tau: float
    times: tuple[float, ...]
    n_samples: int
    master_seed: int
    scheme: str = "lri"


@dataclass
class DecayCurves:
    modes: np.ndarray
    times: tuple[float, ...]
    values: np.ndarray  # shape (len(times), len(modes))
    weight_power: float

    def to_csv(self, path: str | Path) -> None:
        lines = ["l,value,time"]
        for t, row in zip(self.times, self.values):
            lines.extend(f"{l},{v!r},{t!r}" for l, v in zip(self.modes, row))
        Path(path).write_text("\n".join(lines) + "\n")


def _decay_sample(spec: DecaySpec, weight: float, index: int) -> np.ndarray:
    prob = spec.problem
    pot, u0 = _continuous_sample(prob, prob.n_points, spec.master_seed, index)
    grid = pot.grid
    steps = [snap_steps(t, spec.tau) for t in spec.times]
    cfg = IntegratorConfig(spec.tau, prob.lam, Scheme(spec.scheme))
    with np.errstate(all="ignore"):
        _, snaps = evolve_with_snapshots(grid, SolverState(u0), pot.xi, cfg, max(steps), steps)
    modes = np.arange(1, grid.N // 2)
    return np.array([np.abs(np.fft.fft(snaps[k])[modes] / grid.N) * modes**weight for k in steps])


def fourier_decay_diagnostic(spec: DecaySpec, weight_power: float, workers: int = 1) -> DecayCurves:
    """Ensemble mean of ``|u_hat_l(t)| l^w`` for ``0 < l < N/2`` at the requested times."""
    if not weight_power > 0:
        raise ValueError("weight_power must be positive")
    task = partial(_decay_sample, spec, weight_power)
    if workers > 1 and spec.n_samples > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_sample = list(pool.map(task, range(spec.n_samples)))
    else:
        per_sample = [task(i) for i in range(spec.n_samples)]
    values = np.mean(np.stack(per_sample), axis=0)
    return DecayCurves(np.arange(1, spec.problem.n_points // 2), tuple(spec.times), values, weight_power)


def decay_slope(curves: DecayCurves, time_index: int = -1, l_min: int = 8, l_max: int | None = None) -> float:
    """Log-log slope of one decay curve over ``l_min <= l <= l_max`` (default ``N/4``)."""
    l_max = l_max or (2 * len(curves.modes) + 2) // 4
    sel = (curves.modes >= l_min) & (curves.modes <= l_max)
    return fit_order(list(zip(curves.modes[sel], curves.values[time_index][sel])))


# ---------------------------------------------------------------------------
# localization


@dataclass(frozen=True)
class LocalizationParams:
    half_length: float = 256 * math.pi
    n_points: int = 2**15
    tau: float = 0.0025
    final_time: float = 20.0
    lam: float = 0.0
    n0: int | None = None
    snapshot_times: tuple[float, ...] = (10.0, 20.0)
    radius: float | None = None
    master_seed: int = 0
    sample_index: int = 0
    potential: str = "localization"
    record_every: int = 100
    scheme: str = "lri"


@dataclass
class LocalizationResult:
    x: np.ndarray
    snapshots: dict[float, np.ndarray]
    times: np.ndarray
    mass_fraction: np.ndarray
    radius: float
    xi: np.ndarray

    def snapshots_csv(self, path: str | Path) -> None:
        lines = ["x,value,time"]
        for t, amp in self.snapshots.items():
            lines.extend(f"{x!r},{a!r},{t!r}" for x, a in zip(self.x, amp))
        Path(path).write_text("\n".join(lines) + "\n")

    def mass_csv(self, path: str | Path) -> None:
        lines = ["time,mass_fraction"]
        lines.extend(f"{t!r},{m!r}" for t, m in zip(self.times, self.mass_fraction))
        Path(path).write_text("\n".join(lines) + "\n")


def mass_fraction(x: np.ndarray, u: np.ndarray, radius: float) -> float:
    w = np.abs(u) ** 2
    return float(math.fsum(w[np.abs(x) <= radius]) / math.fsum(w))


def simulate_localization(params: LocalizationParams = LocalizationParams()) -> LocalizationResult:
    """Run of a Gaussian wave packet in one band-limited potential sample.

    Snapshot times beyond ``final_time`` are rejected.
    """
    grid = TorusGrid(params.half_length, params.n_points)
    rng = sample_rng(params.master_seed, params.sample_index, 0)
    pot = make_potential(PotentialSpec(kind=params.potential, n0=params.n0), grid, rng)
    radius = params.radius if params.radius is not None else params.half_length / 2
    u = initial_data("gaussian", grid)
    cfg = IntegratorConfig(params.tau, params.lam, Scheme(params.scheme))
    n_total = snap_steps(params.final_time, params.tau)
    snap_steps_at = {snap_steps(t, params.tau): t for t in params.snapshot_times}
    if any(k > n_total for k in snap_steps_at):
        raise ValueError("snapshot times must not exceed final_time")
    state = SolverState(u)
    times = [0.0]
    fractions = [mass_fraction(grid.x, u, radius)]
    snapshots: dict[float, np.ndarray] = {}
    done = 0
    checkpoints = sorted(set(range(params.record_every, n_total + 1, params.record_every)) | set(snap_steps_at) | {n_total})
    for target in checkpoints:
        state = evolve(grid, state, pot.xi, cfg, target - done)
        done = target
        times.append(done * params.tau)
        fractions.append(mass_fraction(grid.x, state.u, radius))
        if done in snap_steps_at:
            snapshots[snap_steps_at[done]] = np.abs(state.u)
    return LocalizationResult(grid.x, snapshots, np.array(times), np.array(fractions), radius, pot.xi)
