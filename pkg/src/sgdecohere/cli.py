"""Command line scenario runner writing CSV datasets and a JSON manifest."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import fields, oracle
from .config import ScenarioConfig, build_config, load_config, parse_text
from .density import DecoherenceModel, DensityGrid, DensitySlice, cut_partner
from .dressed import QubitState
from .errors import ConfigError, RegimeWarning, SGDecohereError
from .params import PhysicalParams, derive_params
from .presets import PRESETS, list_presets


def build_field(cfg: ScenarioConfig, params: PhysicalParams) -> fields.FieldState:
    f = cfg.field
    kind = f["kind"]

    def need(*keys):
        for key in keys:
            if key in f:
                return f[key]
        raise ConfigError(f"field.kind={kind} needs one of: "
                          + ", ".join(f"field.{k}" for k in keys))

    def abs_alpha():
        if "abs_alpha" in f:
            return float(f["abs_alpha"])
        return math.sqrt(need("abs_alpha2"))

    if kind == "thermal":
        if "temperature" in f:
            return fields.thermal_from_temperature(f["temperature"], params.omega)
        if "q" in f:
            return fields.thermal(f["q"])
        return fields.thermal_from_mean(need("mean_n"))
    if kind == "coherent":
        return fields.coherent(abs_alpha(), f.get("theta", 0.0))
    if kind == "random_phase_coherent":
        return fields.random_phase_coherent(abs_alpha())
    if kind == "fock":
        return fields.fock(need("n0"))
    if kind == "sg_phase":
        if f.get("trapping", False):
            theta = f.get("theta", -cfg.phi)
            return fields.sg_phase_from_trapping(cfg.gamma, theta)
        if "abs_z" in f:
            return fields.sg_phase(f["abs_z"], f.get("theta", 0.0))
        mean = need("mean_n")
        return fields.sg_phase(math.sqrt(mean / (1.0 + mean)), f.get("theta", 0.0))
    if kind == "generic":
        path = Path(need("csv"))
        if not path.is_absolute() and cfg.base_dir is not None:
            path = cfg.base_dir / path
        return fields.load_generic_csv(path)
    raise ConfigError(f"unknown field.kind {kind!r}")


def build_model(cfg: ScenarioConfig, strict: bool = False) -> DecoherenceModel:
    p = cfg.params
    params = derive_params(m=p["m"], epsilon=p["epsilon"], lam=p["lambda"], dx0=p["dx0"],
                           x01=p["x01"], x02=p["x02"], strict=strict)
    return DecoherenceModel(params, build_field(cfg, params), QubitState(cfg.gamma, cfg.phi),
                            tail_mass=cfg.tail_mass)


def _oracle_axis(cfg: ScenarioConfig, grid: oracle.OracleGrid) -> np.ndarray:
    per = grid.per_unit
    stride = max(1, round(2 * cfg.extent * per / max(cfg.points - 1, 1)))
    half = int(math.floor(cfg.extent * per / stride))
    return np.arange(-half, half + 1) * stride / per


def evaluate(model: DecoherenceModel, cfg: ScenarioConfig, t: float):
    """DensityGrid or DensitySlice for one time (units of 1/Omega)."""
    if cfg.mode != "oracle":
        xs = np.linspace(-cfg.extent, cfg.extent, cfg.points)
        if cfg.cut == "grid":
            return model.grid(t, xs, mode=cfg.mode)
        return model.slice(cfg.cut, t, xs, mode=cfg.mode)
    params = model.params
    grid = oracle.OracleGrid.build(params, points=cfg.oracle_points)
    xs = _oracle_axis(cfg, grid)
    t_s = model.seconds(t)
    if cfg.cut == "grid":
        g = oracle.assemble_reduced(params, model.coeffs, t_s, grid, dt=cfg.oracle_dt,
                                    xs=xs, t_omega=t)
        return DensityGrid(xs=g.xs, values=g.values, t=t, t_seconds=t_s, mode="oracle",
                           scenario=model.describe())
    unit = params.unit
    xps = cut_partner(cfg.cut, xs, params.x01 / unit, params.x02 / unit)
    keep = np.abs(xps) <= grid.x[-1] / unit
    xs, xps = xs[keep], xps[keep]
    vals = oracle.reduced_pairs(params, model.coeffs, t_s,
                                oracle.grid_indices(grid, xs * unit),
                                oracle.grid_indices(grid, xps * unit), grid, cfg.oracle_dt)
    return DensitySlice(xs=xs, values=vals, cut=cfg.cut, t=t, t_seconds=t_s, mode="oracle",
                        scenario=model.describe())


def residuals(model: DecoherenceModel, result) -> dict:
    unit = model.params.unit
    X = result.xs * unit
    out = {"diag_D_residual": float(np.max(np.abs(
        model.decoherence_factor(X, X, result.t) - 1.0)))}
    vals = result.values
    if isinstance(result, DensityGrid):
        out["hermiticity_residual"] = float(np.max(np.abs(vals - vals.conj().T)))
    if model.field.is_incoherent:
        out["max_abs_imag"] = float(np.max(np.abs(vals.imag)))
    return out


def _fmt_time(t: float) -> str:
    return f"{t:g}"


def write_csv(path: Path, result, cfg: ScenarioConfig, unit: float) -> None:
    is_grid = isinstance(result, DensityGrid)
    cut = "grid" if is_grid else result.cut
    scale = unit  # rho per |x01| instead of per metre
    with open(path, "w", newline="") as fh:
        fh.write(f"# scenario={cfg.name} cut={cut} mode={result.mode} part={cfg.part} "
                 f"t={_fmt_time(result.t)} [1/Omega] t_seconds={result.t_seconds!r}\n")
        fh.write(f"# x, x_prime in units of |x01| = {unit!r} m; re, im: rho in units of 1/|x01|\n")
        if is_grid:
            fh.write("x,x_prime,re,im\n")
            xs = result.xs
            n = xs.size
            data = np.column_stack([np.repeat(xs, n), np.tile(xs, n),
                                    result.values.real.ravel() * scale,
                                    result.values.imag.ravel() * scale])
        else:
            fh.write("x,re,im\n")
            data = np.column_stack([result.xs, result.values.real * scale,
                                    result.values.imag * scale])
        np.savetxt(fh, data, delimiter=",", fmt="%.17g")


def _threads() -> int:
    env = os.environ.get("SGDECOHERE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"SGDECOHERE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run(cfg: ScenarioConfig, out_dir: str | Path, strict: bool = False) -> dict:
    """Evaluate every requested time and write one CSV per time plus a manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeWarning)
        model = build_model(cfg, strict=strict)
    notes.extend(str(w.message) for w in caught if issubclass(w.category, RegimeWarning))

    horizon = model.T0_max * model.Omega
    for t in cfg.times:
        if t > horizon * (1 + 1e-12):
            msg = f"t = {t:g}/Omega exceeds the linearized-regime horizon {horizon:g}/Omega"
            if strict:
                raise SGDecohereError(msg)
            warnings.warn(msg, RegimeWarning, stacklevel=2)
            notes.append(msg)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        with ThreadPoolExecutor(max_workers=min(_threads(), len(cfg.times))) as pool:
            results = list(pool.map(lambda t: evaluate(model, cfg, t), cfg.times))

    files = []
    for t, res in zip(cfg.times, results):
        name = f"{cfg.name}_t{_fmt_time(t)}.csv"
        write_csv(out_dir / name, res, cfg, model.params.unit)
        entry = {"t": t, "t_seconds": res.t_seconds, "file": name,
                 "points": int(res.xs.size)}
        entry.update(residuals(model, res))
        files.append(entry)

    manifest = {
        "config": cfg.resolved(),
        "derived": {"k": model.params.k, "omega": model.params.omega,
                    "a0": model.params.a0, "delta": model.packets.delta},
        "model": model.describe(),
        "normalization_residual": abs(model.coeffs.total - 1.0),
        "outputs": files,
        "warnings": notes,
    }
    (out_dir / f"{cfg.name}_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    return manifest


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sgdecohere",
                                 description="Spatial decoherence of an atom in the optical "
                                             "Stern-Gerlach model.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a preset or config file and write CSVs")
    r.add_argument("--preset", choices=sorted(PRESETS))
    r.add_argument("--config", type=Path, help="flat key = value configuration file")
    r.add_argument("--mode", choices=("factored", "exact", "oracle"))
    r.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    r.add_argument("--strict", action="store_true",
                   help="treat regime-guard violations as errors")
    sub.add_parser("list-presets", help="show the figure presets")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-presets":
        print(list_presets())
        return 0
    try:
        if args.config is None and args.preset is None:
            raise ConfigError("run needs --preset and/or --config")
        if args.config is not None and args.preset is None:
            cfg = load_config(args.config)
        elif args.config is not None:
            try:
                text = args.config.read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
            cfg = build_config({"preset": args.preset, **parse_text(text)},
                               base_dir=args.config.parent)
        else:
            cfg = build_config({"preset": args.preset})
        if args.mode:
            cfg.mode = args.mode
        manifest = run(cfg, args.out, strict=args.strict)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SGDecohereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for entry in manifest["outputs"]:
        print(args.out / entry["file"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
