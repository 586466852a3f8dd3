"""Command-line interface.

Subcommands: model, probs, k1, sweep, threshold, verify.

Values come from, in decreasing priority: command-line flags, an optional
``--config`` file of ``key = value`` lines (keys are long flag names without
the leading dashes), and built-in defaults.

Exit codes: 0 success, 1 usage or domain error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from . import kernel, lgi, oracle
from .errors import DomainError, UsageError
from .spectral import ModelParams, TwoLevelSpectrum, derive_spectrum

DEFAULTS = {
    "sin2theta": 0.2,
    "htilde": 0.1,
    "eta": 0.0,
    "f00": 0.0,
    "f01": 1.0,
    "f11": 0.0,
    "tau": lgi.TAU_DEFAULT,
    "convention": "paper",
    "method": "both",
    "format": "csv",
    "precision": 12,
}

FLOAT_KEYS = ("delta", "tunneling", "sin2theta", "htilde", "eta", "f00", "f01", "f11", "omega_c", "tau", "z", "gamma")
CONFIG_KEYS = FLOAT_KEYS + ("method", "convention", "grid", "format", "precision", "output", "axis", "figure")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    spectrum: TwoLevelSpectrum
    params: Optional[ModelParams]
    rates: Optional[kernel.DecoherenceRates]
    tau: float
    gamma: float
    gamma_source: str
    method: str
    convention: str
    fmt: str
    precision: int
    grid: Optional[list[float]]
    output: Optional[str]

    @property
    def z(self) -> float:
        return lgi.z_from_gamma(self.gamma, self.tau)


def parse_grid(text: str) -> list[float]:
    try:
        start, stop, count = text.split(":")
        start, stop, n = float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(f"grid must look like start:stop:count, got {text!r}") from None
    if n < 1:
        raise UsageError("grid count must be at least 1")
    if n == 1:
        return [start]
    step = (stop - start) / (n - 1)
    return [start + k * step for k in range(n - 1)] + [stop]


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _merged(args: argparse.Namespace) -> dict[str, Any]:
    merged: dict[str, Any] = {}
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if key in FLOAT_KEYS:
                try:
                    merged[key] = float(value)
                except ValueError:
                    raise UsageError(f"config value for {key!r} is not a number: {value!r}") from None
            elif key in ("precision", "figure"):
                merged[key] = int(value)
            else:
                merged[key] = value
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command", "func"):
            merged[key] = value
    return merged


def build_config(args: argparse.Namespace) -> RunConfig:
    v = _merged(args)
    has_wells = "delta" in v or "tunneling" in v
    if has_wells and "sin2theta" in v:
        raise UsageError("give either --tunneling/--delta or --sin2theta, not both")
    if "z" in v and "gamma" in v:
        raise UsageError("give either --z or --gamma, not both")

    tau = v.get("tau", DEFAULTS["tau"])
    if not tau >= 0:
        raise DomainError(f"tau must be non-negative, got {tau}")

    params = rates = None
    if has_wells:
        if "tunneling" not in v:
            raise UsageError("--delta needs --tunneling")
        params = ModelParams(
            tunneling=v["tunneling"],
            tilt=v.get("delta", 0.0),
            htilde=v.get("htilde", DEFAULTS["htilde"]),
            eta=v.get("eta", DEFAULTS["eta"]),
            f00=v.get("f00", DEFAULTS["f00"]),
            f01=v.get("f01", DEFAULTS["f01"]),
            f11=v.get("f11", DEFAULTS["f11"]),
            omega_c=v.get("omega_c"),
        )
        spectrum = derive_spectrum(params)
        rates = kernel.decoherence_rates(params, spectrum)
    else:
        spectrum = TwoLevelSpectrum.from_sin2theta(v.get("sin2theta", DEFAULTS["sin2theta"]))

    if "z" in v:
        gamma, source = lgi.gamma_from_z(v["z"], tau) if tau > 0 else 0.0, "z"
    elif "gamma" in v:
        gamma, source = v["gamma"], "gamma"
        if gamma < 0:
            raise DomainError(f"gamma must be non-negative, got {gamma}")
    elif rates is not None:
        gamma, source = rates.gamma, "model"
    else:
        gamma, source = 0.0, "default"

    method = v.get("method", DEFAULTS["method"])
    if method not in lgi.METHODS + ("both",):
        raise UsageError(f"unknown method {method!r}")
    convention = v.get("convention", DEFAULTS["convention"])
    if convention not in kernel.CONVENTIONS:
        raise UsageError(f"unknown convention {convention!r}")
    fmt = v.get("format", DEFAULTS["format"])
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    precision = int(v.get("precision", DEFAULTS["precision"]))
    if precision < 1:
        raise UsageError("precision must be at least 1")
    grid = parse_grid(v["grid"]) if "grid" in v else None
    return RunConfig(spectrum, params, rates, tau, gamma, source, method, convention, fmt, precision, grid, v.get("output"))


def _fmt_value(value: Any, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return str(value)


def _json_value(value: Any, precision: int) -> Any:
    if isinstance(value, float) and not isinstance(value, bool):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{precision}g}")
    return value


def render(rows: list[dict[str, Any]], columns: Sequence[str], fmt: str, precision: int, single: bool = False) -> str:
    if fmt == "json":
        data = [{c: _json_value(r.get(c), precision) for c in columns} for r in rows]
        return json.dumps(data[0] if single else data, indent=2) + "\n"
    lines = [",".join(columns)]
    lines += [",".join(_fmt_value(r.get(c), precision) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


MODEL_COLUMNS = ("omega10", "sin2theta", "cos2theta", "gamma1", "dE0", "dE1", "omega10_bar", "gamma")


def cmd_model(cfg: RunConfig) -> int:
    rec = {"sin2theta": cfg.spectrum.sin2theta_sq, "cos2theta": cfg.spectrum.cos_2theta}
    if cfg.rates is not None:
        rec.update(
            omega10=cfg.spectrum.Omega10,
            gamma1=cfg.rates.Gamma1,
            dE0=cfg.rates.dE0,
            dE1=cfg.rates.dE1,
            omega10_bar=cfg.rates.Omega10_bar,
            gamma=cfg.rates.gamma,
        )
    else:
        rec["gamma"] = cfg.gamma if cfg.gamma_source != "default" else None
    emit(render([rec], MODEL_COLUMNS, cfg.fmt, cfg.precision, single=True), cfg.output)
    return 0


PROBS_COLUMNS = ("t", "p_mp", "p_mm", "p_pm", "p_pp", "warning_principal_domain")


def cmd_probs(cfg: RunConfig) -> int:
    """Time is in model units when rates come from the model, otherwise in units of 1/Ω̄₁₀."""
    grid = cfg.grid if cfg.grid is not None else [0.0]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise UsageError("time grid must be nondecreasing")
    if cfg.rates is not None and cfg.gamma_source == "model":
        Gamma1, omega_bar = cfg.rates.Gamma1, cfg.rates.Omega10_bar
    elif cfg.rates is not None:
        Gamma1, omega_bar = cfg.gamma * cfg.rates.Omega10_bar, cfg.rates.Omega10_bar
    else:
        Gamma1, omega_bar = cfg.gamma, 1.0
    rows = []
    for t in grid:
        tm = kernel.transition_matrix_paper(cfg.spectrum, Gamma1, omega_bar, t, cfg.convention)
        rows.append(
            dict(t=t, p_mp=tm.p_mp, p_mm=tm.p_mm, p_pm=tm.p_pm, p_pp=tm.p_pp, warning_principal_domain=tm.principal_domain_exceeded)
        )
    emit(render(rows, PROBS_COLUMNS, cfg.fmt, cfg.precision), cfg.output)
    return 0


K1_COLUMNS = (
    "sin2theta", "tau", "z", "gamma", "convention", "c21", "c31", "c32",
    "k1_assembly", "k1_paper", "violated_assembly", "violated_paper",
)


def _closed_form_ok(tau: float) -> bool:
    return math.isclose(tau, lgi.TAU_DEFAULT, rel_tol=0, abs_tol=1e-12)


def cmd_k1(cfg: RunConfig) -> int:
    s = cfg.spectrum.sin2theta_sq
    a = lgi.k1_assembly(lgi.Schedule(cfg.tau, cfg.gamma), s, cfg.convention)
    p = lgi.k1_paper_closed_form(cfg.z, s) if _closed_form_ok(cfg.tau) and cfg.z > 0 else None
    rec = dict(
        sin2theta=s, tau=cfg.tau, z=cfg.z, gamma=cfg.gamma, convention=cfg.convention,
        c21=a.correlators.c21, c31=a.correlators.c31, c32=a.correlators.c32,
        k1_assembly=a.k1, violated_assembly=a.violated,
        k1_paper=None if p is None else p.k1, violated_paper=None if p is None else p.violated,
    )
    emit(render([rec], K1_COLUMNS, cfg.fmt, cfg.precision, single=True), cfg.output)
    return 0


FIGURES = {
    1: ("z", (lgi.FIG1_SIN2THETA,), "0.01:1:100"),
    2: ("sin2theta", lgi.FIG2_Z_VALUES, "0:1:101"),
}

GNUPLOT_TEMPLATE = """\
set datafile separator ","
set key autotitle columnhead
set xlabel "{xlabel}"
set ylabel "K1"
set arrow from graph 0, first 1 to graph 1, first 1 nohead dashtype 2
plot for [f in "{fixed}"] "{data}" using ($1 == f+0 ? $2 : 1/0):3 with lines title "closed form, {fixed_name}=".f, \\
     for [f in "{fixed}"] "{data}" using ($1 == f+0 ? $2 : 1/0):4 with lines dashtype 3 title "assembly, {fixed_name}=".f
"""


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    v = _merged(args)
    figure = v.get("figure")
    axis = v.get("axis")
    if figure is not None:
        if figure not in FIGURES:
            raise UsageError(f"figure must be 1 or 2, got {figure}")
        fig_axis, fixed, grid_text = FIGURES[figure]
        if axis is not None and axis != fig_axis:
            raise UsageError(f"figure {figure} sweeps {fig_axis}, not {axis}")
        axis = fig_axis
        grid = cfg.grid if cfg.grid is not None else parse_grid(grid_text)
        explicit = ("z" if axis == "sin2theta" else "sin2theta") in v
        if explicit:
            fixed = (cfg.z,) if axis == "sin2theta" else (cfg.spectrum.sin2theta_sq,)
    else:
        axis = axis or "z"
        grid = cfg.grid if cfg.grid is not None else parse_grid(FIGURES[1 if axis == "z" else 2][2])
        fixed = (cfg.spectrum.sin2theta_sq,) if axis == "z" else (cfg.z,)

    rows = lgi.sweep(axis, fixed, grid, cfg.convention, cfg.tau)
    fixed_name = "sin2theta" if axis == "z" else "z"
    columns = (f"fixed_{fixed_name}", axis, "k1_paper", "k1_assembly", "violated_paper", "violated_assembly")
    records = [
        {columns[0]: r.fixed, axis: r.value, "k1_paper": r.k1_paper, "k1_assembly": r.k1_assembly,
         "violated_paper": r.violated_paper, "violated_assembly": r.violated_assembly}
        for r in rows
    ]
    emit(render(records, columns, cfg.fmt, cfg.precision), cfg.output)
    if v.get("gnuplot"):
        script = GNUPLOT_TEMPLATE.format(
            xlabel=axis, fixed=" ".join(f"{f:g}" for f in fixed), fixed_name=fixed_name, data=cfg.output or "sweep.csv"
        )
        with open(v["gnuplot"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(script)
    return 0


THRESHOLD_COLUMNS = ("method", "convention", "sin2theta", "tau", "z_star", "gamma_star", "k1_at_z_star", "iterations", "note")


def cmd_threshold(cfg: RunConfig) -> int:
    methods = lgi.METHODS if cfg.method == "both" else (cfg.method,)
    rows = []
    for m in methods:
        if m == "paper_closed_form" and not _closed_form_ok(cfg.tau):
            if cfg.method == "both":
                continue
            raise DomainError("the expanded closed form is only defined for tau = pi/3")
        r = lgi.violation_threshold(cfg.spectrum.sin2theta_sq, m, cfg.convention, cfg.tau)
        rows.append(dict(r.__dict__, sin2theta=r.sin2theta_sq))
    emit(render(rows, THRESHOLD_COLUMNS, cfg.fmt, cfg.precision), cfg.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = oracle.run_verification()
    text = "\n".join(report.lines())
    text += f"\n{'ALL PASS' if report.passed else 'FAILURES'}: {sum(c.passed for c in report.checks)}/{len(report.checks)} checks\n"
    emit(text, getattr(args, "output", None))
    return 0 if report.passed else 2


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--delta", type=float, help="tilt δ (needs --tunneling)")
    g.add_argument("--tunneling", type=float, help="tunneling strength Δ > 0")
    g.add_argument("--sin2theta", type=float, help="mixing sin²θ, entered directly (default 0.2)")
    g.add_argument("--htilde", type=float, help="dimensionless action (default 0.1)")
    g.add_argument("--eta", type=float, help="ohmic coupling strength (default 0)")
    g.add_argument("--f00", type=float)
    g.add_argument("--f01", type=float)
    g.add_argument("--f11", type=float)
    g.add_argument("--omega-c", dest="omega_c", type=float, help="spectral cutoff (default 100 Ω₁₀)")
    g = p.add_argument_group("schedule")
    g.add_argument("--tau", type=float, help="interval in units of 1/Ω̄₁₀ (default π/3)")
    g.add_argument("--z", type=float, help="decay factor per interval, e^{-γτ}")
    g.add_argument("--gamma", type=float, help="Γ₁/Ω̄₁₀")
    g = p.add_argument_group("evaluation and output")
    g.add_argument("--method", choices=lgi.METHODS + ("both",))
    g.add_argument("--convention", choices=kernel.CONVENTIONS)
    g.add_argument("--grid", help="start:stop:count")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--precision", type=int, help="significant digits (default 12)")
    g.add_argument("--config", help="key = value file")
    g.add_argument("--output", help="write to PATH instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lgtilt", description="Leggett-Garg K1 for a decohered tilted double well.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("model", "derived spectrum and bath quantities"),
        ("probs", "transition probabilities on a time grid"),
        ("k1", "correlators and K1 by both methods"),
        ("sweep", "K1 tables along z or sin²θ"),
        ("threshold", "decoherence threshold z* where K1 = 1"),
        ("verify", "run the oracle cross-checks"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--axis", choices=("z", "sin2theta"))
            p.add_argument("--figure", type=int, choices=(1, 2), help="preset tables for the two reference figures")
            p.add_argument("--gnuplot", help="also write a gnuplot script to PATH")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        cfg = build_config(args)
        if args.command == "model":
            return cmd_model(cfg)
        if args.command == "probs":
            return cmd_probs(cfg)
        if args.command == "k1":
            return cmd_k1(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args)
        return cmd_threshold(cfg)
    except (DomainError, UsageError) as exc:
        print(f"lgtilt {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"lgtilt {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
