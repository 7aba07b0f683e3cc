"""Command-line front end: JSON config in, JSON or CSV results out.

All frequencies in config files are ordinary frequencies in Hz (the "/2pi"
values of a device table), never angular frequencies.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import analysis, gaussian, scattering
from .capacity import extract_k_coefficients
from .errors import NumericalError, ValidationError
from .params import ConventionFlags, SystemParams, derive, required_pump_detunings

CONFIG_KEYS = {
    "g_o_hz": "g_o",
    "g_e_hz": "g_e",
    "gamma_o_hz": "gamma_o",
    "gamma_e_hz": "gamma_e",
    "gamma_o_int_hz": "gamma_o_int",
    "gamma_e_int_hz": "gamma_e_int",
    "gamma_m_hz": "gamma_m",
    "omega_o_hz": "omega_o",
    "omega_e_hz": "omega_e",
    "omega_m_hz": "omega_m",
    "temperature_k": "temperature",
    "n_pump_o": "n_pump_o",
    "n_pump_e": "n_pump_e",
}
OUTPUT_KEYS = ("format", "precision", "path")
COMMANDS = (
    "info", "coeffs", "efficiency", "ln", "capacity",
    "sweep-ns", "sweep-loss", "optimize-efficiency", "optimize-ln",
)
SWEEPS = {"sweep-ns", "sweep-loss"}


@dataclass(frozen=True)
class OutputOptions:
    format: str | None = None
    precision: int = 17
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams)
    output: OutputOptions = field(default_factory=OutputOptions)

    def to_dict(self) -> dict:
        out = {key: getattr(self.params, attr) for key, attr in CONFIG_KEYS.items()}
        out["conventions"] = asdict(self.params.conventions)
        out["output"] = asdict(self.output)
        return out


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"expected a number, got {value!r}")
    return float(value)


def parse_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ValidationError("<root>", "config must be a JSON object")
    kwargs = {}
    conventions = ConventionFlags()
    output = OutputOptions()
    for key, value in data.items():
        if key in CONFIG_KEYS:
            kwargs[CONFIG_KEYS[key]] = _number(key, value)
        elif key == "conventions":
            if not isinstance(value, dict):
                raise ValidationError(key, "expected an object")
            known = {f.name for f in fields(ConventionFlags)}
            for flag, on in value.items():
                if flag not in known:
                    raise ValidationError(f"conventions.{flag}", "unknown key")
                if not isinstance(on, bool):
                    raise ValidationError(f"conventions.{flag}", f"expected true/false, got {on!r}")
            conventions = ConventionFlags(**value)
        elif key == "output":
            if not isinstance(value, dict):
                raise ValidationError(key, "expected an object")
            for opt in value:
                if opt not in OUTPUT_KEYS:
                    raise ValidationError(f"output.{opt}", "unknown key")
            output = OutputOptions(**value)
            if output.format not in (None, "json", "csv"):
                raise ValidationError("output.format", f"expected json or csv, got {output.format!r}")
            if isinstance(output.precision, bool) or not isinstance(output.precision, int) \
                    or not 1 <= output.precision <= 17:
                raise ValidationError("output.precision", "expected an integer in 1..17")
        else:
            raise ValidationError(key, "unknown key")
    try:
        params = SystemParams(conventions=conventions, **kwargs)
    except ValidationError as exc:
        inverse = {v: k for k, v in CONFIG_KEYS.items()}
        raise ValidationError(inverse.get(exc.field, exc.field), str(exc).split(": ", 1)[-1]) from None
    return RunConfig(params, output)


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError("config", f"invalid JSON in {path}: {exc}") from None
    return parse_config(data)


def _fmt(x: float, precision: int) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, f".{precision}g")


def to_json(obj, precision: int = 17) -> str:
    """Serialize with a fixed number of significant digits for every float."""

    def enc(o):
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _fmt(o, precision)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {enc(v)}" for k, v in o.items()) + "}"
        if isinstance(o, (list, tuple)):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        if hasattr(o, "item"):
            return enc(o.item())
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj) + "\n"


def to_csv(columns, rows, precision: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(float(v), precision) for v in row])
    return buf.getvalue()


def _complex(c: complex) -> dict:
    return {"re": c.real, "im": c.imag}


def run_command(command: str, cfg: RunConfig, args) -> dict | analysis.SweepResult:
    """Evaluate one command; returns a JSON-able dict or a sweep."""
    params = cfg.params
    dp = derive(params)
    omega = args.omega_hz
    if command == "info":
        return {
            "params": cfg.to_dict(),
            "derived": dp.as_dict(),
            "pump_detunings_hz": list(required_pump_detunings(params)),
        }
    if command == "coeffs":
        sol = scattering.coefficients(dp, omega)
        return {
            "omega_hz": omega,
            **{f"c{i}": _complex(c) for i, c in enumerate(sol.coefficients, 1)},
            "efficiency": sol.efficiency,
            "total_weight": sol.total_weight,
        }
    if command == "efficiency":
        go, ge = scattering.optimal_input_loss_rates(dp)
        out = {
            "r0": scattering.efficiency_closed_form(dp),
            "omega_hz": omega,
            "r_omega": float(scattering.efficiency(dp, omega)),
            "optimal_gamma_o_hz": go,
            "optimal_gamma_e_hz": ge,
            "r_max": scattering.efficiency_closed_form(dp.with_input_losses(go, ge)),
        }
        if args.ns is not None:
            out["ns"] = args.ns
            out["amplitude_ratio"] = scattering.amplitude_ratio(dp, args.ns, omega)
        return out
    if command == "ln":
        n_s = 1.0 if args.ns is None else args.ns
        rep = gaussian.log_negativity(gaussian.ctmg_covariance(dp, n_s, omega))
        ln_in = gaussian.ln_tmsv_closed_form(n_s)
        return {
            "ns": n_s,
            "omega_hz": omega,
            "xi_minus": rep.xi_minus,
            "xi_plus": rep.xi_plus,
            "ln_ctmg": rep.ln_value,
            "ln_tmsv": ln_in,
            "ratio": rep.ln_value / ln_in if ln_in > 0 else 0.0,
        }
    if command == "capacity":
        k = extract_k_coefficients(dp)
        return {**asdict(k), "r0": scattering.efficiency_closed_form(dp)}
    if command == "sweep-ns":
        grid = analysis.log_grid(args.min or 1e-3, args.max or 1e3, args.points or 241)
        return analysis.sweep_ln_vs_ns(dp, grid, omega)
    if command == "sweep-loss":
        grid = analysis.log_grid(args.min or 1e5, args.max or 1e9, args.points or 101)
        n_s = 1.0 if args.ns is None else args.ns
        return analysis.sweep_loss_rates(dp, grid, grid, args.objective, n_s, omega)
    if command == "optimize-efficiency":
        bounds = ((args.min or 1e4, args.max or 1e10),) * 2
        rep = analysis.maximize_efficiency_numeric(dp, bounds)
        go, ge = scattering.optimal_input_loss_rates(dp)
        return {
            "gamma_o_hz": rep.argmax[0],
            "gamma_e_hz": rep.argmax[1],
            "r_max": rep.value,
            "closed_form_gamma_o_hz": go,
            "closed_form_gamma_e_hz": ge,
            "closed_form_r_max": scattering.efficiency_closed_form(dp.with_input_losses(go, ge)),
            "iterations": rep.iterations,
            "converged": rep.converged,
        }
    if command == "optimize-ln":
        bounds = ((args.min or 1e4, args.max or 1e10),) * 2
        n_s = 1.0 if args.ns is None else args.ns
        rep = analysis.maximize_ln_over_loss_rates(dp, n_s, bounds, omega)
        return {
            "ns": n_s,
            "gamma_o_hz": rep.argmax[0],
            "gamma_e_hz": rep.argmax[1],
            "ln_max": rep.value,
            "efficiency_at_argmax": rep.auxiliary["efficiency"],
            "iterations": rep.iterations,
            "converged": rep.converged,
        }
    raise ValidationError("command", f"unknown command {command!r}")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flatten(v, f"{prefix}{k}."))
        else:
            out[f"{prefix}{k}"] = v
    return out


def render(result, fmt: str, precision: int) -> str:
    if isinstance(result, analysis.SweepResult):
        if fmt == "json":
            return to_json(
                {"columns": result.columns, "rows": [list(r) for r in result.rows()],
                 "metadata": result.metadata},
                precision,
            )
        return to_csv(result.columns, result.rows(), precision)
    if fmt == "csv":
        flat = {k: v for k, v in _flatten(result).items() if isinstance(v, (int, float))}
        return to_csv(list(flat), [list(flat.values())], precision)
    return to_json(result, precision)


def dispatch(command: str, cfg: RunConfig, args) -> str:
    result = run_command(command, cfg, args)
    fmt = args.format or cfg.output.format or ("csv" if command in SWEEPS else "json")
    return render(result, fmt, cfg.output.precision)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eotransduce",
        description="Optic-to-microwave conversion and surviving entanglement. "
                    "All frequencies are ordinary frequencies in Hz.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file (missing keys take device defaults)")
    parser.add_argument("--omega-hz", type=float, default=0.0, help="sideband offset from resonance")
    parser.add_argument("--ns", type=float, help="signal mean photon number")
    parser.add_argument("--min", type=float, help="lower end of log grid / search box")
    parser.add_argument("--max", type=float, help="upper end of log grid / search box")
    parser.add_argument("--points", type=int, help="number of log grid points")
    parser.add_argument("--objective", choices=analysis.OBJECTIVES, default="efficiency")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        text = dispatch(args.command, cfg, args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    dest = args.out or cfg.output.path
    if dest:
        with open(dest, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
