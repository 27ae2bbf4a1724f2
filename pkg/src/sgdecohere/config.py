"""Flat ``key = value`` scenario configuration with dotted section prefixes."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .fields import DEFAULT_TAIL_MASS
from .presets import PRESETS, preset_entries

KNOWN_KEYS = frozenset({
    "preset",
    "params.m", "params.epsilon", "params.lambda", "params.dx0", "params.x01", "params.x02",
    "field.kind", "field.temperature", "field.q", "field.mean_n", "field.abs_alpha",
    "field.abs_alpha2", "field.theta", "field.n0", "field.abs_z", "field.trapping",
    "field.csv",
    "qubit.gamma", "qubit.phi",
    "eval.mode", "eval.times", "eval.cut", "eval.part", "eval.points", "eval.extent",
    "eval.tail_mass", "eval.name", "eval.oracle_dt", "eval.oracle_points",
})
ANGLE_KEYS = frozenset({"qubit.gamma", "qubit.phi", "field.theta"})
MODES = ("factored", "exact", "oracle")
CUTS = ("grid", "antidiagonal", "local_1", "local_2")
PARTS = ("re", "im", "both")

_PI_RE = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text: str) -> float:
    """Parse radians, optionally written in units of pi: ``0.5pi``, ``pi/2``, ``1.2``."""
    s = text.strip().lower()
    m = _PI_RE.match(s)
    try:
        if m:
            coef = m.group(1)
            val = (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
            return val / float(m.group(2)) if m.group(2) else val
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def _float(key: str, text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"{key}: value must be finite, got {text!r}")
    return val


def _bool(key: str, text: str) -> bool:
    s = text.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def parse_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        entries[key] = val
    return entries


@dataclass
class ScenarioConfig:
    name: str
    params: dict[str, float]
    field: dict[str, object]
    gamma: float
    phi: float
    mode: str = "factored"
    times: list[float] = field(default_factory=lambda: [0.0])
    cut: str = "grid"
    part: str = "both"
    points: int = 241
    extent: float = 2.4
    tail_mass: float = DEFAULT_TAIL_MASS
    oracle_dt: float = 1e-5
    oracle_points: int = 4096
    base_dir: Path | None = None

    def resolved(self) -> dict:
        return {
            "name": self.name, "params": self.params, "field": self.field,
            "qubit": {"gamma": self.gamma, "phi": self.phi},
            "eval": {"mode": self.mode, "times": self.times, "cut": self.cut,
                     "part": self.part, "points": self.points, "extent": self.extent,
                     "tail_mass": self.tail_mass, "oracle_dt": self.oracle_dt,
                     "oracle_points": self.oracle_points},
        }


def build_config(entries: dict[str, str], base_dir: Path | None = None) -> ScenarioConfig:
    """Resolve a flat mapping (optionally seeded by ``preset``) into a config."""
    merged: dict[str, str] = {}
    if "preset" in entries:
        name = entries["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
        merged.update(preset_entries(name))
    merged.update({k: v for k, v in entries.items() if k != "preset"})
    unknown = set(merged) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")

    def need(key):
        if key not in merged:
            raise ConfigError(f"missing required key {key!r}")
        return merged[key]

    params = {k.split(".", 1)[1]: _float(k, need(k)) for k in
              ("params.m", "params.epsilon", "params.lambda", "params.dx0",
               "params.x01", "params.x02")}

    kind = need("field.kind").strip().lower()
    fld: dict[str, object] = {"kind": kind}
    for key, val in merged.items():
        if key.startswith("field.") and key != "field.kind":
            sub = key.split(".", 1)[1]
            if key in ANGLE_KEYS:
                fld[sub] = parse_angle(val)
            elif sub == "trapping":
                fld[sub] = _bool(key, val)
            elif sub == "csv":
                fld[sub] = val
            elif sub == "n0":
                try:
                    fld[sub] = int(val)
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {val!r}") from None
            else:
                fld[sub] = _float(key, val)

    gamma = parse_angle(need("qubit.gamma"))
    phi = parse_angle(merged.get("qubit.phi", "0"))

    mode = merged.get("eval.mode", "factored").strip().lower()
    if mode not in MODES:
        raise ConfigError(f"eval.mode must be one of {MODES}, got {mode!r}")
    cut = merged.get("eval.cut", "grid").strip().lower()
    if cut not in CUTS:
        raise ConfigError(f"eval.cut must be one of {CUTS}, got {cut!r}")
    part = merged.get("eval.part", "both").strip().lower()
    if part not in PARTS:
        raise ConfigError(f"eval.part must be one of {PARTS}, got {part!r}")
    times = [_float("eval.times", t) for t in merged.get("eval.times", "0").split(",") if t.strip()]
    if not times or any(t < 0 for t in times):
        raise ConfigError("eval.times must be a non-empty list of values >= 0")
    try:
        points = int(merged.get("eval.points", "241"))
        oracle_points = int(merged.get("eval.oracle_points", "4096"))
    except ValueError:
        raise ConfigError("eval.points / eval.oracle_points must be integers") from None
    if points < 2:
        raise ConfigError("eval.points must be >= 2")
    tail = _float("eval.tail_mass", merged.get("eval.tail_mass", repr(DEFAULT_TAIL_MASS)))
    if not 0 < tail < 1:
        raise ConfigError("eval.tail_mass must lie in (0, 1)")
    return ScenarioConfig(
        name=merged.get("eval.name", "scenario"), params=params, field=fld,
        gamma=gamma, phi=phi, mode=mode, times=times, cut=cut, part=part, points=points,
        extent=_float("eval.extent", merged.get("eval.extent", "2.4")), tail_mass=tail,
        oracle_dt=_float("eval.oracle_dt", merged.get("eval.oracle_dt", "1e-5")),
        oracle_points=oracle_points, base_dir=base_dir,
    )


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return build_config(parse_text(text), base_dir=path.parent)
