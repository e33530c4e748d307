"""Command-line interface: config parsing, subcommands, CSV/summary export.

Subcommands
    analyze    run the analytical fixed-point engine, export KPIs and curves
    simulate   run the Monte Carlo engine, export empirical statistics
    validate   run both engines and report their agreement
    sweep      run either engine over a one-dimensional parameter grid

Every output file carries a header block echoing the fully resolved
configuration (defaults included) and the package version, and contains no
timestamps, so re-running a command with the same inputs reproduces the
files byte for byte.

Exit codes: 0 success, 2 validation tolerances exceeded, 3 fixed point did
not converge, 4 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .config import (
    DeadlinePmf,
    NetworkParams,
    SimConfig,
    SolverConfig,
    TrafficParams,
    uniform_deadline_pmf,
    validate,
)
from .coupler import ConvergenceError, Equilibrium, NetworkKpis, network_kpis, solve_fixed_point
from .metadist import meta_ccdf
from .simulator import SimStats, empirical_meta_ccdf, realize_network, run_simulation

ANALYZE_GRID = np.round(np.linspace(0.01, 0.99, 99), 6)
VALIDATE_GRID = np.round(np.linspace(0.05, 0.95, 19), 6)

SWEEP_VARS = {
    "p_A": "traffic.aloha_p",
    "pA": "traffic.aloha_p",
    "aloha_p": "traffic.aloha_p",
    "tau_min": "traffic.deadline_min",
    "deadline_min": "traffic.deadline_min",
    "lambda": "network.intensity",
    "intensity": "network.intensity",
    "theta": "network.theta",
    "T": "traffic.cycle_slots",
    "cycle_slots": "traffic.cycle_slots",
}
INT_SWEEP_TARGETS = {"traffic.deadline_min", "traffic.cycle_slots"}


class ConfigError(Exception):
    """Unusable run configuration (bad file, unknown key, invalid value)."""


@dataclass(frozen=True)
class Tolerances:
    """Pass/fail thresholds for the validate subcommand."""

    meta_ccdf: float = 0.05
    absorption: float = 0.05
    latency: float = 0.5


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration."""

    network: NetworkParams
    traffic: TrafficParams
    solver: SolverConfig
    sim: SimConfig
    tolerances: Tolerances
    out_dir: Path
    summary_format: str = "yaml"


_SECTION_FIELDS = {
    "network": ("intensity", "link_distance", "eta", "theta", "tx_power_mw"),
    "traffic": ("cycle_slots", "aloha_p", "deadline_min", "deadline_probs"),
    "solver": ("n_classes", "epsilon", "max_iters", "beta_tol"),
    "sim": (
        "side",
        "n_cycles",
        "warmup_cycles",
        "seed",
        "replications",
        "min_attempts",
        "cutoff_radius",
    ),
    "tolerances": ("meta_ccdf", "absorption", "latency"),
    "output": ("dir", "summary_format"),
}


def _coerce_numbers(data: dict) -> None:
    """Turn numeric-looking strings into floats (YAML reads 1e-8 as a string)."""
    for section, content in data.items():
        if section == "output" or not isinstance(content, dict):
            continue
        for key, value in content.items():
            if isinstance(value, str):
                try:
                    content[key] = int(value)
                except ValueError:
                    try:
                        content[key] = float(value)
                    except ValueError:
                        pass


def _check_sections(data: dict) -> None:
    for section, content in data.items():
        if section not in _SECTION_FIELDS:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(content, dict):
            raise ConfigError(f"config section {section!r} must be a mapping")
        for key in content:
            if key not in _SECTION_FIELDS[section]:
                raise ConfigError(f"unknown config key {section}.{key}")


def _apply_overrides(data: dict, sets: list[str]) -> None:
    for item in sets:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(
                f"override {item!r} must look like section.key=value"
            )
        key, raw = item.split("=", 1)
        section, field = key.split(".", 1)
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as err:
            raise ConfigError(f"cannot parse override value {raw!r}: {err}") from err
        data.setdefault(section, {})[field] = value


def _build_traffic(section: dict) -> TrafficParams:
    if "cycle_slots" not in section or "aloha_p" not in section:
        raise ConfigError("traffic section needs cycle_slots and aloha_p")
    cycle_slots = int(section["cycle_slots"])
    deadline_min = int(section.get("deadline_min", 1))
    probs = section.get("deadline_probs")
    if probs is None:
        deadline = uniform_deadline_pmf(deadline_min, cycle_slots)
    else:
        deadline = DeadlinePmf(tau_min=deadline_min, probs=tuple(probs))
    return TrafficParams(
        cycle_slots=cycle_slots,
        aloha_p=float(section["aloha_p"]),
        deadline=deadline,
    )


def load_config(
    path: str | Path,
    sets: list[str] | None = None,
    seed: int | None = None,
    out: str | Path | None = None,
) -> RunConfig:
    """Parse a YAML config file and apply CLI overrides."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except FileNotFoundError as err:
        raise ConfigError(f"config file not found: {path}") from err
    except yaml.YAMLError as err:
        raise ConfigError(f"cannot parse {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping of sections")

    _apply_overrides(data, sets or [])
    if seed is not None:
        data.setdefault("sim", {})["seed"] = int(seed)
    if out is not None:
        data.setdefault("output", {})["dir"] = str(out)
    _check_sections(data)
    _coerce_numbers(data)

    try:
        if "network" not in data:
            raise ConfigError("config needs a network section")
        network = NetworkParams(**data["network"])
        traffic = _build_traffic(data.get("traffic", {}))
        solver = SolverConfig(**data.get("solver", {}))
        sim = SimConfig(**data.get("sim", {}))
        tolerances = Tolerances(**data.get("tolerances", {}))
        validate(network, traffic, solver, sim)
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err

    output = data.get("output", {})
    summary_format = output.get("summary_format", "yaml")
    if summary_format not in ("yaml", "json"):
        raise ConfigError(f"summary_format must be yaml or json, got {summary_format!r}")
    return RunConfig(
        network=network,
        traffic=traffic,
        solver=solver,
        sim=sim,
        tolerances=tolerances,
        out_dir=Path(output.get("dir", "out")),
        summary_format=summary_format,
    )


# ---------------------------------------------------------------------------
# output helpers


def _to_builtin(obj):
    """Recursively convert numpy containers/scalars to plain Python."""
    if isinstance(obj, np.ndarray):
        return [_to_builtin(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def resolved_config_dict(cfg: RunConfig) -> dict:
    """Full configuration echo, defaults included, no filesystem paths."""
    traffic = {
        "cycle_slots": cfg.traffic.cycle_slots,
        "aloha_p": cfg.traffic.aloha_p,
        "deadline_min": cfg.traffic.deadline.tau_min,
        "deadline_probs": list(cfg.traffic.deadline.probs),
    }
    return _to_builtin(
        {
            "version": __version__,
            "network": dataclasses.asdict(cfg.network),
            "traffic": traffic,
            "solver": dataclasses.asdict(cfg.solver),
            "sim": dataclasses.asdict(cfg.sim),
            "tolerances": dataclasses.asdict(cfg.tolerances),
        }
    )


def _flat_config_lines(cfg: RunConfig) -> list[str]:
    lines = [f"deadline-aloha {__version__}"]
    echo = resolved_config_dict(cfg)
    for section, content in echo.items():
        if section == "version":
            continue
        for key, value in content.items():
            lines.append(f"{section}.{key} = {value}")
    return lines


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, columns: dict, cfg: RunConfig, notes: dict | None = None) -> None:
    """CSV with a '#'-prefixed header block echoing the resolved config."""
    names = list(columns)
    series = [list(columns[n]) for n in names]
    n_rows = len(series[0]) if series else 0
    with path.open("w", newline="") as fh:
        for line in _flat_config_lines(cfg):
            fh.write(f"# {line}\n")
        for key, value in (notes or {}).items():
            fh.write(f"# {key} = {_fmt(value)}\n")
        fh.write(",".join(names) + "\n")
        for i in range(n_rows):
            fh.write(",".join(_fmt(col[i]) for col in series) + "\n")


def write_summary(path: Path, payload: dict, fmt: str) -> None:
    payload = _to_builtin(payload)
    if fmt == "json":
        path.write_text(json.dumps(payload, indent=2) + "\n")
    else:
        path.write_text(yaml.safe_dump(payload, sort_keys=False))


def _summary_path(cfg: RunConfig, stem: str) -> Path:
    ext = "json" if cfg.summary_format == "json" else "yaml"
    return cfg.out_dir / f"{stem}.{ext}"


# ---------------------------------------------------------------------------
# engines


def analytic_ccdf_curve(eq: Equilibrium, grid: np.ndarray) -> np.ndarray:
    """Model CCDF on a grid; point-mass distributions yield a step curve."""
    if eq.meta.degenerate:
        return (np.asarray(grid) < eq.meta.m1).astype(float)
    return np.asarray(meta_ccdf(grid, eq.meta.m1, eq.meta.m2))


def run_analysis(cfg: RunConfig) -> tuple[Equilibrium, NetworkKpis]:
    eq = solve_fixed_point(cfg.network, cfg.traffic, cfg.solver)
    return eq, network_kpis(eq)


def run_replications(cfg: RunConfig) -> tuple[SimStats, list[dict]]:
    """Simulate all replications on independent spawned RNG streams."""
    children = np.random.SeedSequence(cfg.sim.seed).spawn(cfg.sim.replications)
    parts = []
    meta = []
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        realization = realize_network(cfg.network, cfg.traffic, cfg.sim, rng)
        stats = run_simulation(realization, cfg.network, cfg.traffic, cfg.sim, rng)
        parts.append(stats)
        meta.append(
            {
                "replication": k,
                "devices": stats.n_devices,
                "packets": stats.packets_generated,
                "successes": stats.packet_successes,
                "timeouts": stats.packet_timeouts,
            }
        )
    return SimStats.merge(parts), meta


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(cfg: RunConfig) -> dict:
    """Analytical pipeline: equilibrium, KPIs, curves."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    eq, kpis = run_analysis(cfg)
    curve = analytic_ccdf_curve(eq, ANALYZE_GRID)
    write_csv(
        cfg.out_dir / "meta_ccdf.csv",
        {"gamma": ANALYZE_GRID, "ccdf_analytical": curve},
        cfg,
    )
    n_classes = len(eq.per_class)
    if eq.meta.degenerate:
        omega_lo = [""] * n_classes
        omega_hi = [""] * n_classes
    else:
        omega_lo = eq.meta.omegas[:-1]
        omega_hi = eq.meta.omegas[1:]
    write_csv(
        cfg.out_dir / "class_medians.csv",
        {
            "class": np.arange(1, n_classes + 1),
            "omega_lo": omega_lo,
            "omega_hi": omega_hi,
            "median_tsp": [cs.median for cs in eq.per_class],
            "success_prob": [cs.summary.success_prob for cs in eq.per_class],
            "mean_success_latency": [cs.summary.mean_success_time for cs in eq.per_class],
        },
        cfg,
    )
    lat = kpis.latency_pmf
    write_csv(
        cfg.out_dir / "latency_pmf.csv",
        {
            "latency_slots": np.arange(1, cfg.traffic.cycle_slots),
            "probability": lat if lat is not None else np.zeros(cfg.traffic.window),
        },
        cfg,
        notes={"conditional_on_success": lat is not None},
    )
    summary = {
        "config": resolved_config_dict(cfg),
        "equilibrium": {
            "iterations": eq.iterations,
            "residual": eq.residual,
            "macro": dataclasses.asdict(eq.macro),
            "m1": eq.meta.m1,
            "m2": eq.meta.m2,
            "beta_shape_a": eq.meta.a,
            "beta_shape_b": eq.meta.b,
            "degenerate": eq.meta.degenerate,
        },
        "kpis": {
            "success_prob": kpis.success_prob,
            "timeout_prob": kpis.timeout_prob,
            "mean_success_latency": kpis.mean_success_latency,
            "mean_timeout_latency": kpis.mean_timeout_latency,
        },
    }
    write_summary(_summary_path(cfg, "analysis_summary"), summary, cfg.summary_format)
    return summary


def cmd_simulate(cfg: RunConfig) -> dict:
    """Monte Carlo pipeline: replications, empirical curves, tallies."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    merged, rep_meta = run_replications(cfg)
    qualifying = merged.link_tsp(cfg.sim.min_attempts)
    if qualifying.size:
        curve = empirical_meta_ccdf(merged, ANALYZE_GRID, cfg.sim.min_attempts)
        ccdf_cols = {
            "gamma": ANALYZE_GRID,
            "ccdf_empirical": curve,
            "n_links": np.full(ANALYZE_GRID.size, qualifying.size, dtype=int),
        }
    else:
        ccdf_cols = {"gamma": [], "ccdf_empirical": [], "n_links": []}
    write_csv(
        cfg.out_dir / "empirical_meta_ccdf.csv",
        ccdf_cols,
        cfg,
        notes={"min_attempts": cfg.sim.min_attempts, "qualifying_links": qualifying.size},
    )
    write_csv(
        cfg.out_dir / "latency_hist.csv",
        {
            "latency_slots": np.arange(1, cfg.traffic.cycle_slots),
            "success_count": merged.success_latency[1:],
            "timeout_count": merged.timeout_latency[1:],
        },
        cfg,
    )
    summary = {
        "config": resolved_config_dict(cfg),
        "replications": rep_meta,
        "aggregate": {
            "devices": merged.n_devices,
            "packets_generated": merged.packets_generated,
            "packet_successes": merged.packet_successes,
            "packet_timeouts": merged.packet_timeouts,
            "success_prob": merged.success_fraction(),
            "timeout_prob": 1.0 - merged.success_fraction()
            if merged.packets_generated
            else float("nan"),
            "mean_success_latency": merged.mean_success_latency(),
            "mean_timeout_latency": merged.mean_timeout_latency(),
            "qualifying_links": int(qualifying.size),
            "empirical_macro": dataclasses.asdict(merged.empirical_macro()),
            "interference_cutoff_radius": cfg.sim.cutoff_radius,
        },
    }
    write_summary(_summary_path(cfg, "sim_summary"), summary, cfg.summary_format)
    return summary


@dataclass(frozen=True)
class ValidationReport:
    """Deviation metrics between the two engines."""

    meta_ccdf_gap: float
    absorption_gap: float
    latency_gap: float
    n_links: int
    passed_ccdf: bool
    passed_absorption: bool
    passed_latency: bool

    @property
    def passed(self) -> bool:
        return self.passed_ccdf and self.passed_absorption and self.passed_latency


def build_validation_report(
    eq: Equilibrium,
    kpis: NetworkKpis,
    merged: SimStats,
    tolerances: Tolerances,
    grid: np.ndarray = VALIDATE_GRID,
    min_attempts: int = 50,
) -> ValidationReport:
    """Compare analytical and empirical results on a common grid."""
    analytic = analytic_ccdf_curve(eq, grid)
    empirical = empirical_meta_ccdf(merged, grid, min_attempts)
    ccdf_gap = float(np.max(np.abs(analytic - empirical)))
    absorption_gap = abs(kpis.success_prob - merged.success_fraction())
    latency_gap = abs(kpis.mean_success_latency - merged.mean_success_latency())
    return ValidationReport(
        meta_ccdf_gap=ccdf_gap,
        absorption_gap=float(absorption_gap),
        latency_gap=float(latency_gap),
        n_links=int(merged.link_tsp(min_attempts).size),
        passed_ccdf=ccdf_gap <= tolerances.meta_ccdf,
        passed_absorption=absorption_gap <= tolerances.absorption,
        passed_latency=latency_gap <= tolerances.latency,
    )


def cmd_validate(cfg: RunConfig) -> ValidationReport:
    """Run both engines and score their agreement."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    eq, kpis = run_analysis(cfg)
    merged, rep_meta = run_replications(cfg)
    report = build_validation_report(
        eq, kpis, merged, cfg.tolerances, VALIDATE_GRID, cfg.sim.min_attempts
    )
    write_csv(
        cfg.out_dir / "meta_ccdf.csv",
        {
            "gamma": VALIDATE_GRID,
            "ccdf_analytical": analytic_ccdf_curve(eq, VALIDATE_GRID),
            "ccdf_empirical": empirical_meta_ccdf(
                merged, VALIDATE_GRID, cfg.sim.min_attempts
            ),
            "n_links": np.full(VALIDATE_GRID.size, report.n_links, dtype=int),
        },
        cfg,
    )
    payload = {
        "config": resolved_config_dict(cfg),
        "replications": rep_meta,
        "analytical": {
            "success_prob": kpis.success_prob,
            "mean_success_latency": kpis.mean_success_latency,
            "iterations": eq.iterations,
            "residual": eq.residual,
        },
        "empirical": {
            "success_prob": merged.success_fraction(),
            "mean_success_latency": merged.mean_success_latency(),
            "empirical_macro": dataclasses.asdict(merged.empirical_macro()),
        },
        "gaps": {
            "meta_ccdf": report.meta_ccdf_gap,
            "absorption": report.absorption_gap,
            "latency": report.latency_gap,
        },
        "tolerances": dataclasses.asdict(cfg.tolerances),
        "passed": report.passed,
    }
    write_summary(_summary_path(cfg, "validation_report"), payload, cfg.summary_format)
    return report


def _with_value(cfg: RunConfig, target: str, value) -> RunConfig:
    """A copy of the config with one swept field replaced."""
    if target == "traffic.aloha_p":
        traffic = dataclasses.replace(cfg.traffic, aloha_p=float(value))
    elif target == "traffic.deadline_min":
        traffic = dataclasses.replace(
            cfg.traffic,
            deadline=uniform_deadline_pmf(int(value), cfg.traffic.cycle_slots),
        )
    elif target == "traffic.cycle_slots":
        traffic = TrafficParams(
            cycle_slots=int(value),
            aloha_p=cfg.traffic.aloha_p,
            deadline=uniform_deadline_pmf(cfg.traffic.deadline.tau_min, int(value)),
        )
    elif target == "network.intensity":
        return dataclasses.replace(
            cfg, network=dataclasses.replace(cfg.network, intensity=float(value))
        )
    elif target == "network.theta":
        return dataclasses.replace(
            cfg, network=dataclasses.replace(cfg.network, theta=float(value))
        )
    else:
        raise ConfigError(f"invalid sweep variable target {target!r}")
    return dataclasses.replace(cfg, traffic=traffic)


def _sweep_point(args: tuple) -> dict:
    cfg, target, value, engine, index = args
    point = _with_value(cfg, target, value)
    if engine == "analytical":
        eq, kpis = run_analysis(point)
        return {
            "success_prob": kpis.success_prob,
            "timeout_prob": kpis.timeout_prob,
            "mean_success_latency": kpis.mean_success_latency,
            "mean_timeout_latency": kpis.mean_timeout_latency,
            "iterations": eq.iterations,
            "residual": eq.residual,
        }
    point_seed = int(
        np.random.SeedSequence((cfg.sim.seed, index)).generate_state(1, np.uint64)[0]
    )
    point = dataclasses.replace(point, sim=dataclasses.replace(point.sim, seed=point_seed))
    merged, _ = run_replications(point)
    return {
        "success_prob": merged.success_fraction(),
        "timeout_prob": 1.0 - merged.success_fraction(),
        "mean_success_latency": merged.mean_success_latency(),
        "mean_timeout_latency": merged.mean_timeout_latency(),
        "devices": merged.n_devices,
        "packets": merged.packets_generated,
    }


def cmd_sweep(
    cfg: RunConfig,
    var: str,
    values: list,
    engine: str = "analytical",
    workers: int = 1,
) -> list[dict]:
    """One KPI row per grid value, written in grid order."""
    if var not in SWEEP_VARS:
        raise ConfigError(
            f"invalid sweep variable {var!r}; choose from {sorted(set(SWEEP_VARS))}"
        )
    if engine not in ("analytical", "simulation"):
        raise ConfigError(f"engine must be analytical or simulation, got {engine!r}")
    target = SWEEP_VARS[var]
    if target in INT_SWEEP_TARGETS:
        values = [int(v) for v in values]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, target, v, engine, i) for i, v in enumerate(values)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    columns: dict = {target: values}
    for key in rows[0]:
        columns[key] = [row[key] for row in rows]
    write_csv(
        cfg.out_dir / "sweep.csv",
        columns,
        cfg,
        notes={"sweep_variable": target, "engine": engine},
    )
    return rows


# ---------------------------------------------------------------------------
# argument parsing


def _parse_values(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range spec must be start:stop:count, got {spec!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as err:
        raise ConfigError(f"cannot parse sweep values {spec!r}") from err


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="YAML configuration file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override sim.seed")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a config entry (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deadline-aloha",
        description="Slotted-Aloha network performance under hard packet deadlines",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("analyze", "analytical fixed-point engine"),
        ("simulate", "Monte Carlo engine"),
        ("validate", "run both engines and compare"),
        ("sweep", "parameter sweep"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--var", required=True, help="swept variable")
            p.add_argument(
                "--values", required=True, help="comma list or start:stop:count"
            )
            p.add_argument(
                "--engine",
                default="analytical",
                choices=("analytical", "simulation"),
            )
            p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, sets=args.set, seed=args.seed, out=args.out)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 4
    for line in _flat_config_lines(cfg):
        print(line)
    try:
        if args.command == "analyze":
            summary = cmd_analyze(cfg)
            kpis = summary["kpis"]
            print(
                f"success_prob={kpis['success_prob']:.6f} "
                f"timeout_prob={kpis['timeout_prob']:.6f} "
                f"mean_success_latency={kpis['mean_success_latency']:.4f}"
            )
        elif args.command == "simulate":
            summary = cmd_simulate(cfg)
            agg = summary["aggregate"]
            print(
                f"packets={agg['packets_generated']} "
                f"success_prob={agg['success_prob']:.6f} "
                f"qualifying_links={agg['qualifying_links']}"
            )
        elif args.command == "validate":
            report = cmd_validate(cfg)
            print(
                f"meta_ccdf_gap={report.meta_ccdf_gap:.4f} "
                f"absorption_gap={report.absorption_gap:.4f} "
                f"latency_gap={report.latency_gap:.4f} "
                f"passed={report.passed}"
            )
            if not report.passed:
                return 2
        elif args.command == "sweep":
            try:
                values = _parse_values(args.values)
                cmd_sweep(cfg, args.var, values, args.engine, args.workers)
            except ConfigError as err:
                print(f"config error: {err}", file=sys.stderr)
                return 4
            print(f"wrote {len(values)} sweep rows to {cfg.out_dir / 'sweep.csv'}")
    except ConvergenceError as err:
        print(f"non-convergence: {err}", file=sys.stderr)
        tail = ", ".join(f"{r:.2e}" for r in err.history[-5:])
        print(f"residual trace (last 5): {tail}", file=sys.stderr)
        return 3
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
