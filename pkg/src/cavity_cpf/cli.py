"""Command-line front end.

Subcommands ``reflect``, ``fidelity-sweep``, ``two-atom-gate`` and ``params``
write CSV/JSON results.  Settings come from an optional JSON config file,
overridden by flags; the merged configuration is written next to the
results as ``config.json`` so every output can be regenerated from it.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import REFERENCE_DURATION, REFERENCE_PARAMS, PhysicalParams, PulseSpec, default_grid
from .errors import ConfigError, DomainError, NumericalError
from .fidelity import spontaneous_loss
from .gate import beta_grid_fidelities, operator_identity_errors
from .params import REFERENCE_CAVITY, REFERENCE_ION, CavitySpec, IonSpec, cavity_decay, coupling_rate, operation_count
from .pipeline import simulate
from .scattering import ScatteringProfile, valid_mask

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
SWEEP_DURATIONS = [0.5e-6, 1.0e-6, 1.5e-6, 2.0e-6, 2.5e-6, 3.0e-6]
BETA_POINTS = 9
IDENTITY_TRIALS = 100


@dataclass
class RunConfig:
    g: float = REFERENCE_PARAMS.g
    kappa: float = REFERENCE_PARAMS.kappa
    gamma: float = REFERENCE_PARAMS.gamma
    delta: float = REFERENCE_PARAMS.delta
    T: list | None = None
    omega_b: float | None = None
    grid_n: int | None = None
    method: str = "exact"
    jobs: int = 1
    seed: int = 0
    out: str = "cpf_out"
    ideal: bool = False
    format: str = "json"
    cavity: dict = field(default_factory=lambda: dataclasses.asdict(REFERENCE_CAVITY))
    ion: dict = field(default_factory=lambda: dataclasses.asdict(REFERENCE_ION))

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = cls()
        for key, value in data.items():
            if key in ("cavity", "ion"):
                merged = dict(getattr(cfg, key))
                if not isinstance(value, dict):
                    raise ConfigError(f"'{key}' must be an object")
                merged.update(value)
                value = merged
            setattr(cfg, key, value)
        return cfg

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def physical_params(self) -> PhysicalParams:
        try:
            return PhysicalParams(float(self.g), float(self.kappa), float(self.gamma), float(self.delta))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid physical parameters: {exc}") from exc

    def durations(self, default=(REFERENCE_DURATION,)) -> list[float]:
        if self.T is None:
            return list(default)
        try:
            values = [float(t) for t in (self.T if isinstance(self.T, list) else [self.T])]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid pulse durations: {self.T!r}") from exc
        if not values or any(not (math.isfinite(t) and t > 0) for t in values):
            raise ConfigError(f"pulse durations must be positive, got {self.T!r}")
        return values

    def validate(self) -> None:
        if self.method not in ("exact", "stepped"):
            raise ConfigError(f"method must be 'exact' or 'stepped', got {self.method!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError(f"jobs must be a positive integer, got {self.jobs!r}")
        if self.grid_n is not None and (not isinstance(self.grid_n, int) or self.grid_n < 2):
            raise ConfigError(f"grid_n must be an integer >= 2, got {self.grid_n!r}")
        if self.omega_b is not None and not (isinstance(self.omega_b, (int, float)) and self.omega_b > 0):
            raise ConfigError(f"omega_b must be positive, got {self.omega_b!r}")
        self.physical_params()
        self.durations()
        if self.ideal not in (True, False):
            raise ConfigError(f"ideal must be true or false, got {self.ideal!r}")


def _num(x) -> str:
    """Shortest round-trip decimal for a float (stable across runs)."""
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) for v in row])
    path.write_text(buf.getvalue())


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _dump_json(value) -> str:
    return json.dumps(_jsonable(value), indent=2, sort_keys=True) + "\n"


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    (path / "config.json").write_text(_dump_json(cfg.to_dict()))
    return path


def _eta_or_none(params: PhysicalParams):
    try:
        return spontaneous_loss(params)
    except ZeroDivisionError:
        return None


def _simulate(cfg: RunConfig, T: float):
    params = cfg.physical_params()
    pulse = PulseSpec(T)
    grid = default_grid(params, pulse, cfg.omega_b, cfg.grid_n)
    return simulate(params, pulse, grid, cfg.method)


def cmd_reflect(cfg: RunConfig) -> dict:
    T = cfg.durations()[0]
    cfg.T = [T]
    run = _simulate(cfg, T)
    out = _out_dir(cfg)
    prof = run.phase_profile()
    _write_csv(
        out / "phase_profile.csv",
        ["omega_rad_s", "dtheta0_rad", "dtheta1_rad", "weight"],
        zip(prof.omegas, prof.dtheta0, prof.dtheta1, prof.weights),
    )
    band = valid_mask(run.c0) & (np.abs(prof.omegas) <= run.pulse.sigma_omega)
    summary = {
        "T_s": T,
        "n_modes": run.grid.n_modes,
        "omega_b_rad_s": run.grid.omega_b,
        "delta_omega_rad_s": run.grid.delta_omega,
        "method": cfg.method,
        "xi1": run.xi.xi1,
        "xi2": run.xi.xi2,
        "s0": run.curve.s0,
        "s1": run.curve.s1,
        "s2": run.curve.s2,
        "F_min": run.curve.f_min,
        "x_min": run.curve.x_min,
        "eta": _eta_or_none(run.params),
        "uncoupled": {
            "norm_leak": run.uncoupled.norm_leak,
            "cavity_residual": run.uncoupled.cavity_residual,
        },
        "coupled": {
            "norm_leak": run.coupled.norm_leak,
            "cavity_residual": run.coupled.cavity_residual,
            "excited_residual": run.coupled.excited_residual,
        },
        "max_abs_dtheta0_minus_pi_within_sigma": float(np.max(np.abs(np.angle(-np.exp(1j * prof.dtheta0[band]))))),
        "max_abs_dtheta1_within_sigma": float(np.max(np.abs(prof.dtheta1[band]))),
    }
    (out / "reflect_summary.json").write_text(_dump_json(summary))
    return summary


def _sweep_point(args):
    cfg, T = args
    run = _simulate(cfg, T)
    return [T, cfg.physical_params().kappa * T, run.curve.f_min, run.curve.x_min, _eta_or_none(run.params)]


def cmd_fidelity_sweep(cfg: RunConfig) -> list:
    durations = cfg.durations(default=SWEEP_DURATIONS)
    if len(durations) < 2:
        raise ConfigError("a sweep needs at least two pulse durations")
    cfg.T = durations
    out = _out_dir(cfg)
    tasks = [(cfg, T) for T in durations]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))  # map keeps input order
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows = [[math.nan if v is None else v for v in row] for row in rows]
    _write_csv(out / "fidelity_vs_T.csv", ["T_s", "kappa_T", "F_min", "x_min", "eta"], rows)
    return rows


def cmd_two_atom_gate(cfg: RunConfig) -> dict:
    T = cfg.durations()[0]
    cfg.T = [T]
    params = cfg.physical_params()
    pulse = PulseSpec(T)
    if cfg.ideal:
        from .pulse import spectral_amplitudes

        grid = default_grid(params, pulse, cfg.omega_b, cfg.grid_n)
        c0 = spectral_amplitudes(pulse, grid)
        profile = ScatteringProfile.ideal(grid)
    else:
        run = _simulate(cfg, T)
        grid, c0 = run.grid, run.c0
        profile = run.scattering_profile()
    out = _out_dir(cfg)
    xs, F = beta_grid_fidelities(profile, profile, c0, grid, T, BETA_POINTS)
    _write_csv(
        out / "gate_fidelity.csv",
        ["beta1_sq", "beta2_sq", "F12"],
        [(x1, x2, F[i, j]) for i, x1 in enumerate(xs) for j, x2 in enumerate(xs)],
    )
    i, j = np.unravel_index(np.argmin(F), F.shape)
    gate_err, photon_err = operator_identity_errors(np.random.default_rng(cfg.seed), IDENTITY_TRIALS)
    summary = {
        "T_s": T,
        "ideal_profiles": bool(cfg.ideal),
        "worst_F12": float(F[i, j]),
        "worst_beta1_sq": float(xs[i]),
        "worst_beta2_sq": float(xs[j]),
        "eq3_identity_max_error": gate_err,
        "photon_restore_max_error": photon_err,
        "seed": cfg.seed,
    }
    (out / "gate_summary.json").write_text(_dump_json(summary))
    return summary


def _specs(cfg: RunConfig) -> tuple[CavitySpec, IonSpec]:
    cav, ion = dict(cfg.cavity), dict(cfg.ion)
    try:
        cavity = CavitySpec(cav.get("wavelength"), cav.get("quality"), cav.get("mode_volume"))
        if ion.get("dipole_c_nm") is not None:
            spec = IonSpec.from_c_nm(ion["dipole_c_nm"], ion.get("coherence_time"))
        else:
            spec = IonSpec(ion.get("dipole"), ion.get("coherence_time"))
    except DomainError as exc:
        raise ConfigError(f"cavity/ion specification: {exc}") from exc
    return cavity, spec


def cmd_params(cfg: RunConfig, stream=None) -> dict:
    stream = stream or sys.stdout
    T = cfg.durations()[0]
    cfg.T = [T]
    cavity, ion = _specs(cfg)
    g0 = coupling_rate(ion, cavity)
    result = {
        "g0_rad_s": g0.value,
        "g0_claimed_rad_s": g0.claimed,
        "g0_ratio_to_claim": g0.ratio,
        "kappa_rad_s": cavity_decay(cavity),
        "eta": _eta_or_none(cfg.physical_params()),
        "n_op": operation_count(ion, PulseSpec(T)),
        "T_s": T,
    }
    if cfg.format == "csv":
        keys = sorted(result)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        writer.writerow(["" if result[k] is None else _num(result[k]) for k in keys])
        stream.write(buf.getvalue())
    else:
        stream.write(_dump_json(result))
    return result


COMMANDS = {
    "reflect": cmd_reflect,
    "fidelity-sweep": cmd_fidelity_sweep,
    "two-atom-gate": cmd_two_atom_gate,
    "params": cmd_params,
}

# flag name -> RunConfig attribute
_FLAG_FIELDS = ["g", "kappa", "gamma", "delta", "T", "grid_n", "omega_b", "method", "jobs", "seed", "out", "ideal", "format"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    common.add_argument("--g", type=float, help="ion-cavity coupling (rad/s)")
    common.add_argument("--kappa", type=float, help="cavity decay rate (rad/s)")
    common.add_argument("--gamma", type=float, help="spontaneous emission rate (rad/s)")
    common.add_argument("--delta", type=float, help="transition detuning (rad/s)")
    common.add_argument("--T", type=float, nargs="+", help="pulse duration(s) in seconds")
    common.add_argument("--grid-n", dest="grid_n", type=int, help="number of free-space modes")
    common.add_argument("--omega-b", dest="omega_b", type=float, help="grid half-bandwidth (rad/s)")
    common.add_argument("--method", choices=["exact", "stepped"])
    common.add_argument("--jobs", type=int, help="parallel sweep workers")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--out", help="output directory")
    common.add_argument("--ideal", action="store_true", default=None, help="use perfect reflections (two-atom-gate)")
    common.add_argument("--format", choices=["csv", "json"], help="stdout format (params)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cavity-cpf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reflect", parents=[common], help="phase profile of one reflection")
    sub.add_parser("fidelity-sweep", parents=[common], help="F_min versus pulse duration")
    sub.add_parser("two-atom-gate", parents=[common], help="three-reflection two-ion gate")
    sub.add_parser("params", parents=[common], help="derived experimental quantities")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for name in _FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    cfg = RunConfig.from_dict(data)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        COMMANDS[args.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
