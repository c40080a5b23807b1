"""Batch command-line front end.

Commands emit the fixed-column CSV (or a 1:1 JSON mirror) behind the level
and scan figures, plus a rendered PNG alongside each table unless --no-plot
is given.  `check` runs the brute-force oracle battery and exits nonzero on
any violation.

Exit codes: 0 success, 1 usage error, 2 domain/IO error, 3 check failure.
The FVDSR_THREADS environment variable (positive integer) caps scan
parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import oracle, scattering, spectra
from .deformation import (
    DeformationModel,
    MapKind,
    effective_energy,
    invert_effective_energy,
)
from .errors import ConflictError, FvdsrError, UsageError
from .fvcore import (
    Branch,
    h_fv_deformed,
    is_sigma3_pseudo_hermitian,
)
from .scattering import (
    SCAN_CSV_HEADER,
    BarrierConfig,
    StepConfig,
    scan_csv_rows,
)
from .spectra import (
    SPECTRUM_CSV_HEADER,
    OscillatorConfig,
    WellConfig,
    spectrum_csv_rows,
)

COMMANDS = (
    "spectrum-well",
    "spectrum-oscillator",
    "scatter-barrier",
    "scatter-step",
    "threshold",
    "resonances",
    "check",
)

# figure-reproduction defaults
WELL_LP_SET = (0.0, 0.02, 0.2)
SCAN_LP_SET = (0.0, 0.02, 0.06)
OSC_LP_DEFAULT = 0.02

MODEL_KEYS = ("kind", "l_p", "alpha2", "delta_alpha", "chi")
GEOMETRY_KEYS = {
    "spectrum-well": ("mass", "width", "n_max"),
    "spectrum-oscillator": ("mass", "omega", "n_max"),
    "scatter-barrier": ("mass", "height", "barrier_width", "e_min", "e_max", "points"),
    "scatter-step": ("mass", "height", "e_min", "e_max", "points"),
    "threshold": ("mass", "height"),
    "resonances": ("mass", "height", "barrier_width", "count"),
    "check": (),
}
ALL_KEYS = MODEL_KEYS + tuple(sorted({k for v in GEOMETRY_KEYS.values() for k in v}))

Geometry = Union[WellConfig, OscillatorConfig, BarrierConfig, StepConfig, None]


@dataclass
class RunConfig:
    command: str
    datasets: list[tuple[str, list[tuple[str, DeformationModel]]]] = field(default_factory=list)
    geometry: Geometry = None
    e_grid: Optional[np.ndarray] = None
    count: int = 3
    outdir: Path = Path(".")
    fmt: str = "csv"
    plot: bool = True


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit; surface as UsageError
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="fvdsr", add_help=True)
    sub = p.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}")

    def add_common(sp, scan=False):
        sp.add_argument("--model", choices=("sr", "dsr", "gdsr", "generic", "ac", "ms"))
        sp.add_argument("--lp", type=float, dest="l_p")
        sp.add_argument("--alpha2", type=float)
        sp.add_argument("--delta-alpha", type=float, dest="delta_alpha")
        sp.add_argument("--chi", type=float)
        sp.add_argument("--mass", type=float)
        sp.add_argument("--config", type=Path)
        sp.add_argument("--outdir", type=Path)
        sp.add_argument("--format", choices=("csv", "json"), dest="fmt")
        sp.add_argument("--no-plot", action="store_true")
        if scan:
            sp.add_argument("--emin", type=float, dest="e_min")
            sp.add_argument("--emax", type=float, dest="e_max")
            sp.add_argument("--points", type=int)

    sp = sub.add_parser("spectrum-well", description="infinite-well level tables")
    add_common(sp)
    sp.add_argument("--width", type=float)
    sp.add_argument("--nmax", type=int, dest="n_max")

    sp = sub.add_parser("spectrum-oscillator", description="oscillator level tables")
    add_common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--nmax", type=int, dest="n_max")

    sp = sub.add_parser("scatter-barrier", description="barrier R/T energy scan")
    add_common(sp, scan=True)
    sp.add_argument("--v0", type=float, dest="height")
    sp.add_argument("--a", type=float, dest="barrier_width")

    sp = sub.add_parser("scatter-step", description="step R/T energy scan")
    add_common(sp, scan=True)
    sp.add_argument("--v0", type=float, dest="height")

    sp = sub.add_parser("threshold", description="supercritical threshold energy")
    add_common(sp)
    sp.add_argument("--v0", type=float, dest="height")

    sp = sub.add_parser("resonances", description="unit-transmission energies")
    add_common(sp)
    sp.add_argument("--v0", type=float, dest="height")
    sp.add_argument("--a", type=float, dest="barrier_width")
    sp.add_argument("--count", type=int)

    sp = sub.add_parser("check", description="run the oracle battery")
    sp.add_argument("--config", type=Path)

    return p


def _parse_config_text(text: str) -> dict[str, str]:
    """key = value lines; '#' comments; unknown keys are hard errors."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in ALL_KEYS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        if key in out:
            raise UsageError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


_KIND_DEFAULTS = {
    # kind string -> (MapKind, default alpha2, default delta_alpha)
    "sr": (MapKind.SR, 0.0, 0.0),
    "dsr": (MapKind.DSR_RATIONAL, 0.0, 0.0),
    "gdsr": (MapKind.GDSR_POLYNOMIAL, 0.0, 0.0),
    "generic": (MapKind.GENERIC_LEADING_ORDER, 0.0, 1.0),
    "ac": (MapKind.GENERIC_LEADING_ORDER, 0.0, 1.0),
    "ms": (MapKind.GENERIC_LEADING_ORDER, 1.0, 1.0),
}


def _resolve_model(kind: str, values: dict[str, float]) -> DeformationModel:
    map_kind, d_alpha2, d_dalpha = _KIND_DEFAULTS[kind]
    default_lp = 0.0 if map_kind is MapKind.SR else 0.02
    return DeformationModel(
        map_kind,
        l_p=values.get("l_p", default_lp),
        alpha2=values.get("alpha2", d_alpha2),
        delta_alpha=values.get("delta_alpha", d_dalpha),
        chi=values.get("chi", 1.0),
    )


def _default_datasets(command: str, values: dict[str, float]):
    """Figure-reproduction model sets used when --model is omitted."""
    if command in ("scatter-barrier", "scatter-step"):
        lps = SCAN_LP_SET
        return [
            (kind, [(f"lp={lp:g}", _resolve_model(kind, {**values, "l_p": lp})) for lp in lps])
            for kind in ("sr", "dsr", "gdsr")
        ]
    if command == "spectrum-well":
        return [
            (kind, [(f"lp={lp:g}", _resolve_model(kind, {**values, "l_p": lp})) for lp in WELL_LP_SET])
            for kind in ("sr", "dsr", "gdsr")
        ]
    if command == "spectrum-oscillator":
        lp = values.get("l_p", OSC_LP_DEFAULT)
        return [
            ("undeformed", [("lp=0", _resolve_model("sr", {**values, "l_p": 0.0}))]),
            ("ac", [(f"lp={lp:g}", _resolve_model("ac", {**values, "l_p": lp}))]),
            ("ms", [(f"lp={lp:g}", _resolve_model("ms", {**values, "l_p": lp}))]),
        ]
    # threshold / resonances fall back to the undeformed model
    return [("sr", [("lp=0", _resolve_model("sr", {**values, "l_p": 0.0}))])]


def parse_config(argv: Sequence[str], file: Optional[str] = None) -> RunConfig:
    """Parse flags (and an optional key=value config text) into a RunConfig.

    Flags override file values; unknown keys are hard errors and keys
    incompatible with the command raise ConflictError.
    """
    argv = list(argv)
    if not argv:
        raise UsageError("missing command; available: " + ", ".join(COMMANDS))
    ns = _build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("missing command; available: " + ", ".join(COMMANDS))

    file_values = _parse_config_text(file) if file else {}
    if getattr(ns, "config", None) is not None:
        file_values = {**_parse_config_text(ns.config.read_text()), **file_values}

    allowed = set(MODEL_KEYS) | set(GEOMETRY_KEYS[ns.command])
    for key in file_values:
        if key not in allowed:
            raise ConflictError(f"key {key!r} does not apply to command {ns.command!r}")

    def pick(key: str, default=None, cast=float):
        flag = getattr(ns, key, None)
        if flag is not None:
            return flag
        if key in file_values:
            try:
                return cast(file_values[key])
            except ValueError as exc:
                raise UsageError(f"config value for {key!r}: {exc}") from exc
        return default

    values: dict[str, float] = {}
    for key in ("l_p", "alpha2", "delta_alpha", "chi"):
        v = pick(key)
        if v is not None:
            values[key] = v

    mass = pick("mass", 1.0)
    cfg = RunConfig(command=ns.command)
    cfg.outdir = getattr(ns, "outdir", None) or Path(".")
    cfg.fmt = getattr(ns, "fmt", None) or "csv"
    cfg.plot = not getattr(ns, "no_plot", False)

    kind = pick("kind", None, cast=str) if "kind" in file_values else None
    if getattr(ns, "model", None) is not None:
        kind = ns.model
    if kind is not None and kind not in _KIND_DEFAULTS:
        raise UsageError(f"unknown model kind {kind!r}")

    if ns.command == "spectrum-well":
        cfg.geometry = WellConfig(mass, pick("width", 1.0), int(pick("n_max", 50, cast=int)))
    elif ns.command == "spectrum-oscillator":
        cfg.geometry = OscillatorConfig(mass, pick("omega", 1.0), int(pick("n_max", 20, cast=int)))
    elif ns.command in ("scatter-barrier", "resonances"):
        cfg.geometry = BarrierConfig(mass, pick("height", 2.0), pick("barrier_width", 4.0))
    elif ns.command in ("scatter-step", "threshold"):
        cfg.geometry = StepConfig(mass, pick("height", 2.0))

    if ns.command in ("scatter-barrier", "scatter-step"):
        e_min = pick("e_min", 0.0)
        e_max = pick("e_max", 10.0)
        points = int(pick("points", 500, cast=int))
        if points < 2 or not e_max > e_min:
            raise UsageError(f"bad energy grid: [{e_min}, {e_max}] with {points} points")
        cfg.e_grid = np.linspace(e_min, e_max, points)
    if ns.command == "resonances":
        cfg.count = int(pick("count", 3, cast=int))

    if ns.command == "check":
        cfg.datasets = []
    elif kind is None:
        cfg.datasets = _default_datasets(ns.command, values)
    else:
        model = _resolve_model(kind, values)
        cfg.datasets = [(kind, [(f"lp={model.l_p:g}", model)])]
    return cfg


# ---------------------------------------------------------------------------
# output helpers


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _write_table(path: Path, header: Sequence[str], rows: list[tuple], fmt: str) -> Path:
    path = path.with_suffix("." + fmt)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_cell(v) for v in row])
    else:
        objs = []
        for row in rows:
            obj = {}
            for key, v in zip(header, row):
                if isinstance(v, float) and not math.isfinite(v):
                    v = None
                obj[key] = v
            objs.append(obj)
        with path.open("w") as fh:
            json.dump(objs, fh, indent=2)
            fh.write("\n")
    return path


def _thread_count() -> int:
    raw = os.environ.get("FVDSR_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FVDSR_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"FVDSR_THREADS must be a positive integer, got {raw!r}")
    return n


def _scan(cfg_geom, model, e_grid) -> list[scattering.ScatteringPoint]:
    threads = _thread_count()
    if threads == 1:
        return scattering.rt_scan(cfg_geom, model, e_grid)
    chunks = np.array_split(np.asarray(e_grid, dtype=float), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda ch: scattering.rt_scan(cfg_geom, model, ch), chunks)
    out: list[scattering.ScatteringPoint] = []
    for part in parts:
        out.extend(part)
    return out


# ---------------------------------------------------------------------------
# command runners


def _run_spectrum(config: RunConfig) -> list[Path]:
    written = []
    well = isinstance(config.geometry, WellConfig)
    stem = "well" if well else "oscillator"
    for name, models in config.datasets:
        rows: list[tuple] = []
        groups = []
        for label, model in models:
            result = (
                spectra.well_spectrum(config.geometry, model)
                if well
                else spectra.oscillator_spectrum(config.geometry, model)
            )
            rows.extend(spectrum_csv_rows(result))
            groups.append((label, result))
        path = _write_table(
            config.outdir / f"{stem}_{name}", SPECTRUM_CSV_HEADER, rows, config.fmt
        )
        written.append(path)
        if config.plot:
            from . import report

            png = path.with_suffix(".png")
            report.render_spectrum_figure(png, f"{stem} levels, {name}", groups)
            written.append(png)
    return written


def _run_scan(config: RunConfig) -> list[Path]:
    written = []
    stem = "barrier" if isinstance(config.geometry, BarrierConfig) else "step"
    for name, models in config.datasets:
        rows: list[tuple] = []
        groups = []
        for label, model in models:
            points = _scan(config.geometry, model, config.e_grid)
            rows.extend(scan_csv_rows(model, points))
            groups.append((label, points))
        path = _write_table(
            config.outdir / f"{stem}_{name}", SCAN_CSV_HEADER, rows, config.fmt
        )
        written.append(path)
        if config.plot:
            from . import report

            png = path.with_suffix(".png")
            report.render_scan_figure(png, f"{stem} R/T, {name}", groups)
            written.append(png)
    return written


def _run_threshold(config: RunConfig) -> int:
    for _, models in config.datasets:
        for _, model in models:
            e_star = scattering.supercritical_threshold(config.geometry, model)
            print(
                f"model={model.kind.value} l_p={model.l_p:g} "
                f"V0={config.geometry.height:g} mass={config.geometry.mass:g} "
                f"E_star={e_star:.17g}"
            )
    return 0


def _run_resonances(config: RunConfig) -> int:
    for _, models in config.datasets:
        for _, model in models:
            energies = scattering.resonance_energies(config.geometry, model, config.count)
            for j, e in enumerate(energies, 1):
                print(f"model={model.kind.value} l_p={model.l_p:g} j={j} E={e:.17g}")
    return 0


# ---------------------------------------------------------------------------
# check battery


def _check_battery() -> list[tuple[str, bool, str]]:
    results = []

    def record(name: str, ok: bool, detail: str):
        results.append((name, bool(ok), detail))

    # finite-difference spectra vs closed forms, with convergence order
    well_cfg = WellConfig(1.0, 1.0, 10)
    grid = oracle.GridSpec(0.0, 1.0, 2001)
    fd = oracle.well_eigen_fd(well_cfg, grid, 5)
    exact = [well_cfg.omega_n(n) for n in range(1, 6)]
    err = max(abs(a - b) for a, b in zip(fd, exact))
    record("well_fd_matches_closed_form", err <= 1e-4, f"max err {err:.3g}")
    coarse = oracle.well_eigen_fd(well_cfg, oracle.GridSpec(0.0, 1.0, 1001), 1)
    ratio = abs(coarse[0] - exact[0]) / abs(fd[0] - exact[0])
    record("well_fd_h2_convergence", 3.5 <= ratio <= 4.5, f"ratio {ratio:.3f}")

    osc_cfg = OscillatorConfig(1.0, 1.0, 10)
    half_width = math.sqrt(11.0) + 5.0
    fd = oracle.oscillator_eigen_fd(osc_cfg, oracle.GridSpec(-half_width, half_width, 2001), 5)
    exact = [math.sqrt(1.0 + osc_cfg.lambda_n(n)) for n in range(5)]
    err = max(abs(a - b) for a, b in zip(fd, exact))
    record("oscillator_fd_matches_closed_form", err <= 1e-4, f"max err {err:.3g}")

    # barrier: transfer matrix vs ODE integration
    barrier = BarrierConfig(1.0, 2.0, 4.0)
    for model in (DeformationModel.sr(), DeformationModel.dsr(0.02), DeformationModel.gdsr(0.02)):
        es = np.linspace(1.2, 9.5, 12)
        t_closed = np.array(
            [scattering.barrier_transmission(barrier, model, float(e)).t_coef for e in es]
        )
        t_ode = oracle.barrier_t_ode(barrier, model, es)
        rel = np.max(np.abs(t_closed - t_ode) / np.abs(t_ode))
        record(
            f"barrier_ode_agreement_{model.kind.value}", rel <= 1e-6, f"max rel {rel:.3g}"
        )

    # pseudo-Hermiticity of the deformed Hamiltonian
    rng = np.random.default_rng(20260808)
    worst_ok = True
    for _ in range(10_000):
        e, p2, m = rng.uniform(-5, 5), rng.uniform(0, 25), rng.uniform(0.1, 3)
        model = DeformationModel.generic(rng.uniform(0, 0.1), rng.uniform(-2, 2), rng.uniform(-2, 2))
        h = h_fv_deformed(model, e, p2, m)
        if not is_sigma3_pseudo_hermitian(h, 1e-14):
            worst_ok = False
            break
    record("pseudo_hermiticity_random_draws", worst_ok, "10000 draws at tol 1e-14")

    # flux conservation on dense scans
    worst = 0.0
    step = StepConfig(1.0, 2.0)
    for model in (DeformationModel.sr(), DeformationModel.dsr(0.02), DeformationModel.gdsr(0.06)):
        for geom in (barrier, step):
            for pt in scattering.rt_scan(geom, model, np.linspace(1.05, 9.95, 200)):
                if math.isfinite(pt.r_coef):
                    worst = max(worst, abs(pt.r_coef + pt.t_coef - 1.0))
    record("flux_conservation_scans", worst <= 1e-12, f"max |R+T-1| {worst:.3g}")

    # inversion round trip
    worst = 0.0
    for model in (DeformationModel.dsr(0.05), DeformationModel.gdsr(0.05, 1.3),
                  DeformationModel.generic(0.05, 0.7, 0.2)):
        for e in np.linspace(0.1, 8.0, 40):
            deformed = effective_energy(model, float(e))
            if not deformed.valid:
                continue
            back = invert_effective_energy(model, deformed.deformed)
            worst = max(worst, abs(back - e) / e)
    record("inversion_round_trip", worst <= 1e-12, f"max rel {worst:.3g}")

    # branch pairing on emitted spectra
    ok = True
    for model in (DeformationModel.sr(), DeformationModel.dsr(0.2), DeformationModel.gdsr(0.2)):
        result = spectra.well_spectrum(WellConfig(1.0, 1.0, 30), model)
        ok &= all(r.e_minus == -r.e_plus for r in result.rows)
    record("branch_pairing_exact", ok, "E- == -E+ on all rows")

    # supercritical thresholds
    sr_star = scattering.supercritical_threshold(step, DeformationModel.sr())
    record("threshold_sr_exact", sr_star == 1.0, f"E*={sr_star!r}")
    worst = 0.0
    for model in (DeformationModel.dsr(0.02), DeformationModel.gdsr(0.02)):
        e_star = scattering.supercritical_threshold(step, model)
        resid = abs(effective_energy(model, e_star - step.height).deformed + step.mass)
        worst = max(worst, resid)
    record("threshold_residuals", worst <= 1e-10, f"max residual {worst:.3g}")

    # perturbative order of the first-order truncations
    lps = (0.04, 0.02, 0.01, 0.005)
    omega1 = WellConfig(1.0, 1.0, 1).omega_n(1)
    fit = oracle.perturbation_order_check(
        lambda l: omega1 / (1.0 + l * omega1),
        lambda l: omega1 * (1.0 - l * omega1),
        lps,
    )
    record("order_check_well_rational", not fit.degenerate and 1.8 <= fit.exponent <= 2.2,
           f"s={fit.exponent:.3f}")
    e0 = math.sqrt(2.0)
    fit = oracle.perturbation_order_check(
        lambda l: spectra.oscillator_exact_deformed(
            OscillatorConfig(1.0, 1.0, 0), DeformationModel.gdsr(l), 0, Branch.POSITIVE
        ),
        lambda l: e0 * (1.0 - l * e0),
        lps,
    )
    record("order_check_oscillator_polynomial",
           not fit.degenerate and 1.8 <= fit.exponent <= 2.2, f"s={fit.exponent:.3f}")

    # saturation and growth diagnostics
    sat_cfg = WellConfig(1.0, 1.0, 500)
    plateau, _ = spectra.well_asymptotics(sat_cfg, DeformationModel.dsr(0.2))
    e_plus = [r.e_plus for r in spectra.well_spectrum(sat_cfg, DeformationModel.dsr(0.2)).rows]
    record("dsr_saturation_bound", plateau == 5.0 and max(e_plus) < 5.0,
           f"max E+ {max(e_plus):.4f} < 5")
    _, exponent = spectra.well_asymptotics(WellConfig(1.0, 1.0, 10_000), DeformationModel.gdsr(0.02))
    record("gdsr_growth_exponent_top_decade", 0.45 <= exponent <= 0.55, f"s={exponent:.3f}")

    return results


def _run_check() -> int:
    results = _check_battery()
    width = max(len(name) for name, _, _ in results)
    failures = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"{status}  {name:<{width}}  {detail}")
        if not ok:
            failures += 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 3


def run(config: RunConfig) -> int:
    """Dispatch a parsed RunConfig; returns the process exit status."""
    if config.command == "check":
        return _run_check()
    if config.command in ("spectrum-well", "spectrum-oscillator"):
        written = _run_spectrum(config)
    elif config.command in ("scatter-barrier", "scatter-step"):
        written = _run_scan(config)
    elif config.command == "threshold":
        return _run_threshold(config)
    elif config.command == "resonances":
        return _run_resonances(config)
    else:  # pragma: no cover - parser restricts commands
        raise UsageError(f"unknown command {config.command!r}")
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
        if config.command != "check" and not config.outdir.exists():
            config.outdir.mkdir(parents=True, exist_ok=True)
        return run(config)
    except UsageError as exc:  # includes ConflictError
        print(f"fvdsr-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (FvdsrError, OSError) as exc:
        print(f"fvdsr-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
