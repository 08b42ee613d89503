"""Command-line front end.

Every subcommand resolves a flat set of ``key = value`` settings from, in
increasing priority: built-in defaults, a preset, an INI config file,
``--set key=value`` overrides and the dedicated flags.  Unknown keys are
rejected.  The resolved settings are written next to the outputs.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 IO error.
Failures print a single JSON line ``{"error": <category>, "detail": ...}``
to standard error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .harness import (
    ContinuousProblem,
    DecaySpec,
    ExperimentSpec,
    LatticeProblem,
    LocalizationParams,
    PotentialSpec,
    ReferenceSpec,
    decay_slope,
    divisor_steps,
    fourier_decay_diagnostic,
    run_convergence,
    simulate_localization,
)
from .potentials import (
    gen_fourier_potential,
    gen_localization_potential,
    gen_pointwise_potential,
    sample_rng,
    write_potential_csv,
)
from .spectral import TorusGrid

OUTPUT_ENV = "DNLS_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# value parsing


_PI_RE = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*$")


def _float(text: str) -> float:
    """Float, also accepting ``pi``, ``7pi`` and ``7*pi``."""
    text = text.strip()
    m = _PI_RE.match(text)
    try:
        if m:
            coef = m.group(1)
            return (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def _int(text: str) -> int:
    text = text.strip()
    m = re.fullmatch(r"2\s*\^\s*(\d+)", text) or re.fullmatch(r"2\*\*(\d+)", text)
    if m:
        return 2 ** int(m.group(1))
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _str(text: str) -> str:
    return text.strip()


def _list(item: Callable[[str], Any]) -> Callable[[str], tuple]:
    def parse(text: str) -> tuple:
        parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
        if not parts:
            raise ConfigError("empty list")
        return tuple(item(p) for p in parts)

    return parse


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


# ---------------------------------------------------------------------------
# schemas: key -> (parser, default)

_CONTINUOUS = {
    "half_length": (_float, math.pi),
    "n_points": (_int, 2**10),
    "initial_data": (_str, "example1-smooth"),
    "potential": (_str, "fourier"),
    "theta": (_float, 2.0),
    "dist": (_str, "uniform"),
    "normalize": (_bool, True),
    "n0": (_int, 0),
    "lam": (_float, 1.0),
    "final_time": (_float, 0.5),
}

SCHEMAS: dict[str, dict[str, tuple[Callable[[str], Any], Any]]] = {
    "converge-time": {
        **_CONTINUOUS,
        "taus": (_list(_float), (1e-2, 10**-2.5, 1e-3, 10**-3.5)),
        "n_samples": (_int, 20),
        "seed": (_int, 0),
        "schemes": (_list(_str), ("lri", "strang", "fd")),
        "reference_scheme": (_str, "strang"),
        "reference_tau": (_float, 2.5e-5),
        "reference_n": (_int, 0),
        "cache_dir": (_str, ""),
    },
    "converge-space": {
        **_CONTINUOUS,
        "sweep_n": (_list(_int), (2**7, 2**8, 2**9, 2**10)),
        "fixed_tau": (_float, 5e-4),
        "n_samples": (_int, 20),
        "seed": (_int, 0),
        "schemes": (_list(_str), ("lri", "strang", "fd")),
        "reference_scheme": (_str, "self"),
        "reference_tau": (_float, 0.0),
        "reference_n": (_int, 2**12),
        "cache_dir": (_str, ""),
    },
    "discrete": {
        "half_size": (_int, 128),
        "J": (_float, 1.0),
        "lam": (_float, 1.0),
        "disorder": (_str, "uniform"),
        "final_time": (_float, 1.0),
        "taus": (_list(_float), (1e-1, 10**-1.5, 1e-2, 10**-2.5)),
        "n_samples": (_int, 20),
        "seed": (_int, 0),
        "schemes": (_list(_str), ("strang", "fd")),
        "reference_tau": (_float, 1e-4),
        "cache_dir": (_str, ""),
    },
    "decay": {
        **_CONTINUOUS,
        "tau": (_float, 5e-4),
        "times": (_list(_float), (0.5, 1.0, 2.0)),
        "weight_powers": (_list(_float), (2.0, 4.0)),
        "scheme": (_str, "lri"),
        "n_samples": (_int, 10),
        "seed": (_int, 0),
    },
    "simulate": {
        "half_length": (_float, 64 * math.pi),
        "n_points": (_int, 2**13),
        "tau": (_float, 0.0025),
        "final_time": (_float, 20.0),
        "lam": (_float, 0.0),
        "n0": (_int, 0),
        "snapshot_times": (_list(_float), (10.0, 20.0)),
        "radius": (_float, 0.0),
        "seed": (_int, 0),
        "record_every": (_int, 100),
        "scheme": (_str, "lri"),
    },
    "potential": {
        "kind": (_str, "pointwise"),
        "half_length": (_float, math.pi),
        "n_points": (_int, 2**10),
        "theta": (_float, 2.0),
        "normalize": (_bool, True),
        "n0": (_int, 0),
        "seed": (_int, 0),
    },
}

# ---------------------------------------------------------------------------
# presets: values as strings, parsed through the schema like any other input.
# "published" holds published parameters; "desk" overrides resolution and ensemble
# size only.


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    settings: dict[str, dict[str, str]]  # subcommand -> published-scale values
    desk: dict[str, dict[str, str]]  # subcommand -> desk-scale overrides


_TAU_EX1 = "1e-2, 3.16227766e-3, 1e-3, 3.16227766e-4"
_TAU_EX2 = "1e-1, 3.16227766e-2, 1e-2, 3.16227766e-3"


def _example1(initial: str, ref_desk: dict[str, str]) -> tuple[dict, dict]:
    common = {
        "half_length": "pi",
        "initial_data": initial,
        "potential": "fourier",
        "theta": "2",
        "dist": "uniform",
        "normalize": "true",
        "lam": "1",
        "final_time": "0.5",
    }
    published = {
        "converge-time": {
            **common,
            "n_points": "2^13",
            "n_samples": "100",
            "taus": _TAU_EX1,
            "reference_scheme": "strang",
            "reference_tau": "1e-5",
            "reference_n": "2^13",
        },
        "converge-space": {
            **common,
            "sweep_n": "2^7, 2^8, 2^9, 2^10, 2^11, 2^12",
            "fixed_tau": "1e-5",
            "n_samples": "100",
            "reference_scheme": "strang",
            "reference_tau": "1e-5",
            "reference_n": "2^13",
        },
        "decay": {**common, "dist": "normal", "n_points": "2^10", "tau": "5e-5", "n_samples": "100", "weight_powers": "4"},
    }
    desk = {
        "converge-time": {"n_points": "2^10", "n_samples": "20", "reference_n": "0", **ref_desk},
        "converge-space": {
            "sweep_n": "2^7, 2^8, 2^9, 2^10",
            "fixed_tau": "5e-4",
            "n_samples": "20",
            "reference_scheme": "self",
            "reference_tau": "0",
            "reference_n": "2^12",
        },
        "decay": {"tau": "5e-4", "n_samples": "10"},
    }
    return published, desk


def _example2(potential: dict[str, str], half_length: str, initial: str, final_time: str, ref: dict[str, str]):
    common = {"half_length": half_length, "initial_data": initial, "lam": "1", "final_time": final_time, **potential}
    published = {
        "converge-time": {
            **common,
            "n_points": ref["n"],
            "n_samples": "100",
            "taus": _TAU_EX2,
            "reference_scheme": "lri",
            "reference_tau": "1e-4",
            "reference_n": ref["n"],
        },
        "converge-space": {
            **common,
            "sweep_n": "2^8, 2^9, 2^10, 2^11, 2^12, 2^13",
            "fixed_tau": "1e-4",
            "n_samples": "100",
            "reference_scheme": "lri",
            "reference_tau": "1e-4",
            "reference_n": ref["n"],
        },
    }
    desk = {
        "converge-time": {"n_points": "2^12", "n_samples": "20", "reference_tau": "2.5e-4", "reference_n": "0"},
        "converge-space": {
            "sweep_n": "2^7, 2^8, 2^9, 2^10",
            "fixed_tau": "1e-3",
            "n_samples": "20",
            "reference_scheme": "self",
            "reference_tau": "0",
            "reference_n": "2^12",
        },
    }
    return published, desk


def _build_presets() -> dict[str, Preset]:
    out: dict[str, Preset] = {}

    def add(name: str, description: str, pair: tuple[dict, dict]) -> None:
        out[name] = Preset(name, description, pair[0], pair[1])

    add("example1-smooth", "H2 potential (theta=2), smooth data, T=0.5", _example1("example1-smooth", {}))
    p, d = _example1("example1-h2", {"reference_scheme": "lri", "reference_tau": "2.5e-5"})
    del p["decay"], d["decay"]
    add("example1-h2", "H2 potential (theta=2), random H2 data, T=0.5", (p, d))

    pointwise = {"potential": "pointwise"}
    p, d = _example2(pointwise, "pi", "example2-smooth", "2", {"n": "2^16"})
    p["decay"] = {
        "half_length": "pi",
        "initial_data": "example2-smooth",
        "lam": "1",
        "final_time": "2",
        **pointwise,
        "n_points": "2^12",
        "tau": "5e-4",
        "n_samples": "50",
        "weight_powers": "2, 4",
    }
    d["decay"] = {"n_samples": "5"}
    add("example2-pointwise", "pointwise uniform L2 potential, smooth data, T=2", (p, d))

    theta0 = {"potential": "fourier", "theta": "0", "dist": "normal", "normalize": "true"}
    add("example2-theta0", "theta=0 normal Fourier potential, smooth data, T=2", _example2(theta0, "pi", "example2-smooth", "2", {"n": "2^16"}))

    p, d = _example2(pointwise, "7pi", "sech", "1", {"n": "2^18"})
    for sub in p.values():
        sub["schemes"] = "lri"
    d["converge-time"].update(n_samples="5", reference_tau="1e-4")
    d["converge-space"].update(n_samples="5")
    add("example3-whole-space", "pointwise potential on (-7pi, 7pi), 2 sech(x^2) data, T=1", (p, d))

    add(
        "localization",
        "Gaussian packet in a band-limited potential, T=20",
        (
            {
                "simulate": {
                    "half_length": "256pi",
                    "n_points": "2^15",
                    "tau": "0.0025",
                    "final_time": "20",
                    "lam": "0",
                    "n0": "0",
                    "snapshot_times": "10, 20",
                }
            },
            {"simulate": {"half_length": "64pi", "n_points": "2^13"}},
        ),
    )
    for dist in ("uniform", "normal"):
        add(
            f"discrete-{dist}",
            f"lattice N=128, J=1, lambda=1, {dist} disorder, T=1",
            (
                {
                    "discrete": {
                        "half_size": "128",
                        "J": "1",
                        "lam": "1",
                        "disorder": dist,
                        "final_time": "1",
                        "taus": _TAU_EX2,
                        "n_samples": "100",
                        "reference_tau": "1e-4",
                    }
                },
                {"discrete": {"n_samples": "20"}},
            ),
        )
    return out


PRESETS = _build_presets()


# ---------------------------------------------------------------------------
# resolution


def _apply(target: dict[str, Any], schema: dict, items: dict[str, str], source: str) -> None:
    for key, text in items.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in {source}; allowed: {', '.join(sorted(schema))}")
        try:
            target[key] = schema[key][0](text)
        except ConfigError as exc:
            raise ConfigError(f"{source}: {key}: {exc}") from None


def _read_config_file(path: str, command: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str  # keep key case (J)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}".replace("\n", " ")) from None
    for section in parser.sections():
        if section != command:
            raise ConfigError(f"{path}: unexpected section [{section}] (expected [{command}])")
    return dict(parser[command]) if parser.has_section(command) else {}


def resolve_config(command: str, args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, str]]:
    """Resolved settings plus provenance metadata (preset, scale)."""
    schema = SCHEMAS[command]
    cfg = {key: default for key, (_, default) in schema.items()}
    meta = {"command": command, "preset": args.preset or "", "scale": "full" if args.full_scale else "desk"}
    if args.preset:
        preset = PRESETS.get(args.preset)
        if preset is None:
            raise ConfigError(f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}")
        if command not in preset.settings:
            raise ConfigError(f"preset {args.preset!r} does not define a {command} run")
        _apply(cfg, schema, preset.settings[command], f"preset {args.preset}")
        if not args.full_scale:
            _apply(cfg, schema, preset.desk.get(command, {}), f"preset {args.preset}")
    if args.config:
        _apply(cfg, schema, _read_config_file(args.config, command), args.config)
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    _apply(cfg, schema, overrides, "--set")
    flags = {
        "n_samples": args.samples,
        "seed": args.seed,
        "lam": getattr(args, "lam", None),
    }
    if args.n is not None:
        flags["half_size" if command == "discrete" else "n_points"] = args.n
    if args.kind is not None:
        flags["kind" if command == "potential" else "potential"] = args.kind
    for key, value in flags.items():
        if value is None:
            continue
        if key not in schema:
            raise ConfigError(f"option for {key!r} does not apply to {command}")
        cfg[key] = schema[key][0](str(value))
    return cfg, meta


def write_config_echo(path: Path, command: str, cfg: dict[str, Any], meta: dict[str, str]) -> None:
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    lines.append(f"[{command}]")
    lines.extend(f"{key} = {_fmt(cfg[key])}" for key in sorted(cfg))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# builders


def _potential_spec(cfg: dict[str, Any]) -> PotentialSpec:
    return PotentialSpec(
        kind=cfg["potential"],
        theta=cfg["theta"],
        dist=cfg["dist"],
        normalize=cfg["normalize"],
        n0=cfg["n0"] or None,
    )


def _continuous_problem(cfg: dict[str, Any]) -> ContinuousProblem:
    if cfg["potential"] not in ("fourier", "pointwise", "localization", "zero"):
        raise ConfigError(f"potential must be fourier, pointwise, localization or zero; got {cfg['potential']!r}")
    try:
        TorusGrid(cfg["half_length"], cfg["n_points"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ContinuousProblem(cfg["half_length"], cfg["n_points"], cfg["initial_data"], _potential_spec(cfg), cfg["lam"])


def build_experiment(command: str, cfg: dict[str, Any]) -> ExperimentSpec:
    """Turn resolved settings into a validated :class:`ExperimentSpec`.

    Swept and reference step sizes are snapped to the nearest ``T/n``.
    """
    T = cfg["final_time"]
    if not T > 0:
        raise ConfigError("final_time must be positive")
    try:
        if command == "discrete":
            problem = LatticeProblem(cfg["half_size"], cfg["J"], cfg["lam"], cfg["disorder"])
            if cfg["disorder"] not in ("uniform", "normal"):
                raise ConfigError(f"disorder must be uniform or normal, got {cfg['disorder']!r}")
            taus = divisor_steps(T, cfg["taus"])
            ref = ReferenceSpec("strang", divisor_steps(T, [cfg["reference_tau"]])[0], None)
            return ExperimentSpec(problem, "tau", taus, T, cfg["n_samples"], cfg["seed"], ref, cfg["schemes"])
        problem = _continuous_problem(cfg)
        ref_tau = divisor_steps(T, [cfg["reference_tau"]])[0] if cfg["reference_tau"] > 0 else None
        ref = ReferenceSpec(cfg["reference_scheme"], ref_tau, cfg["reference_n"] or None)
        if command == "converge-time":
            taus = divisor_steps(T, cfg["taus"])
            return ExperimentSpec(problem, "tau", taus, T, cfg["n_samples"], cfg["seed"], ref, cfg["schemes"])
        tau = divisor_steps(T, [cfg["fixed_tau"]])[0]
        return ExperimentSpec(
            problem, "N", cfg["sweep_n"], T, cfg["n_samples"], cfg["seed"], ref, cfg["schemes"], fixed_tau=tau
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def _run_convergence(command: str, cfg: dict, out: Path, workers: int) -> str:
    spec = build_experiment(command, cfg)
    report = run_convergence(spec, workers=workers, cache_dir=cfg.get("cache_dir") or None)
    report.to_csv(out / f"{command}.csv")
    report.to_json(out / f"{command}.json")
    for s in spec.schemes:
        np.savetxt(
            out / f"{command}-samples-{s}.csv",
            report.samples[s],
            delimiter=",",
            header=",".join(_fmt(float(v)) for v in spec.sweep),
            comments="",
            fmt="%.17g",
        )
    if report.metadata["n_failed_samples"]:
        first = report.metadata["failures"][0]
        raise NumericalError(f"{report.metadata['n_failed_samples']} sample(s) failed; first: #{first[0]} {first[1]}")
    bad = [r for r in report.rows if not math.isfinite(r.mean_error)]
    if bad:
        raise NumericalError(f"non-finite mean error for {bad[0].scheme} at {bad[0].sweep_value}")
    return report.summary()


def _run_decay(cfg: dict, out: Path, workers: int) -> str:
    problem = _continuous_problem(cfg)
    try:
        spec = DecaySpec(problem, cfg["tau"], tuple(cfg["times"]), cfg["n_samples"], cfg["seed"], cfg["scheme"])
        lines = []
        for w in cfg["weight_powers"]:
            curves = fourier_decay_diagnostic(spec, w, workers=workers)
            curves.to_csv(out / f"decay-w{_fmt(w)}.csv")
            if not np.all(np.isfinite(curves.values)):
                raise NumericalError(f"non-finite mode amplitudes for weight {w}")
            for k, t in enumerate(curves.times):
                lines.append(f"weight {_fmt(w)}  t={_fmt(t)}  slope over l in [8, N/4]: {decay_slope(curves, k):+.3f}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return "\n".join(lines)


def _run_simulate(cfg: dict, out: Path) -> str:
    try:
        params = LocalizationParams(
            half_length=cfg["half_length"],
            n_points=cfg["n_points"],
            tau=cfg["tau"],
            final_time=cfg["final_time"],
            lam=cfg["lam"],
            n0=cfg["n0"] or None,
            snapshot_times=tuple(cfg["snapshot_times"]),
            radius=cfg["radius"] or None,
            master_seed=cfg["seed"],
            record_every=cfg["record_every"],
            scheme=cfg["scheme"],
        )
        TorusGrid(params.half_length, params.n_points)
        result = simulate_localization(params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not np.all(np.isfinite(result.mass_fraction)):
        raise NumericalError("non-finite solution during the simulation")
    for t, amp in result.snapshots.items():
        lines = ["x,value,time"]
        lines.extend(f"{x!r},{a!r},{t!r}" for x, a in zip(result.x, amp))
        (out / f"snapshot-t{_fmt(t)}.csv").write_text("\n".join(lines) + "\n")
    result.mass_csv(out / "mass-fraction.csv")
    return (
        f"radius {result.radius:.6g}: mass fraction min {result.mass_fraction.min():.6f}, "
        f"final {result.mass_fraction[-1]:.6f}; snapshots at t = {', '.join(_fmt(t) for t in result.snapshots)}"
    )


def _run_potential(cfg: dict, out: Path) -> str:
    try:
        grid = TorusGrid(cfg["half_length"], cfg["n_points"])
        rng = sample_rng(cfg["seed"], 0, 0)
        kind = cfg["kind"]
        if kind == "pointwise":
            pot = gen_pointwise_potential(grid, rng)
        elif kind in ("fourier-uniform", "fourier-normal"):
            pot = gen_fourier_potential(grid, cfg["theta"], kind.split("-")[1], rng, cfg["normalize"])
        elif kind == "localization":
            pot = gen_localization_potential(grid, cfg["n0"] or grid.N // 64, rng)
        else:
            raise ConfigError(f"kind must be pointwise, fourier-uniform, fourier-normal or localization; got {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    write_potential_csv(out / "potential.csv", pot)
    return f"{kind} potential on {grid.N} nodes: min {pot.xi.min():+.6f}, max {pot.xi.max():+.6f}"


# ---------------------------------------------------------------------------
# entry point


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route usage errors to the config category
        raise _ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dnls", description="Disordered NLS solvers and convergence experiments.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "converge-time": "temporal convergence over a tau sweep",
        "converge-space": "spatial convergence over an N sweep",
        "discrete": "lattice convergence over a tau sweep",
        "decay": "ensemble-averaged scaled Fourier modes",
        "simulate": "localization run with snapshots and mass fraction",
        "potential": "draw one random potential and write it as CSV",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--preset", help=f"one of: {', '.join(sorted(PRESETS))}")
        p.add_argument("--full-scale", action="store_true", help="use published resolutions and sample counts")
        p.add_argument("--config", help="INI file with a [%s] section" % name)
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one setting (repeatable)")
        p.add_argument("--samples", type=int, help="ensemble size")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--n", type=int, help="grid points (lattice: half size)")
        p.add_argument("--kind", help="potential kind")
        p.add_argument("--lambda", dest="lam", type=float, help="nonlinearity strength")
        p.add_argument("--threads", type=int, default=1, help="worker processes for ensembles")
        p.add_argument("--output-dir", help=f"output directory (default ${OUTPUT_ENV} or ./dnls-output)")
    return parser


def _fail(category: str, detail: str, code: int) -> int:
    print(json.dumps({"error": category, "detail": " ".join(str(detail).split())}), file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    command = args.command
    try:
        cfg, meta = resolve_config(command, args)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        out = Path(args.output_dir or os.environ.get(OUTPUT_ENV) or "dnls-output")
        out.mkdir(parents=True, exist_ok=True)
        write_config_echo(out / f"{command}.config.ini", command, cfg, meta)
        if command in ("converge-time", "converge-space", "discrete"):
            summary = _run_convergence(command, cfg, out, args.threads)
        elif command == "decay":
            summary = _run_decay(cfg, out, args.threads)
        elif command == "simulate":
            summary = _run_simulate(cfg, out)
        else:
            summary = _run_potential(cfg, out)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except (NumericalError, FloatingPointError, ArithmeticError) as exc:
        return _fail("numerical", exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    header = f"{command}" + (f" [{meta['preset']}, {meta['scale']} scale]" if meta["preset"] else "")
    print(header)
    print(summary)
    print(f"outputs written to {out}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
