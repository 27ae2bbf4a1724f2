"""Figure presets: flat config mappings reproducing the published figures."""
from __future__ import annotations

from .params import reference_params

_REF = reference_params()
_COMMON = {
    "params.m": repr(_REF.m),
    "params.epsilon": repr(_REF.epsilon),
    "params.lambda": repr(_REF.lam),
    "params.dx0": repr(_REF.dx0),
    "params.x01": repr(_REF.x01),
    "params.x02": repr(_REF.x02),
    "qubit.gamma": "0.5pi",
    "qubit.phi": "0",
}

_THERMAL = {"field.kind": "thermal", "field.temperature": "200"}
_COHERENT_TRAP = {"field.kind": "coherent", "field.abs_alpha2": "82.76", "field.theta": "0"}

PRESETS: dict[str, dict[str, str]] = {
    "fig1": {**_THERMAL, "eval.cut": "grid", "eval.times": "0", "eval.part": "re",
             "description": "initial density matrix rho(x,x';0)"},
    "fig2": {**_THERMAL, "eval.cut": "grid", "eval.times": "100, 1000", "eval.part": "re",
             "description": "thermal field (T=200 K, <n>~82.76), full grid"},
    "fig3": {**_THERMAL, "eval.cut": "antidiagonal", "eval.times": "0, 3, 10, 100, 200, 500",
             "eval.part": "re", "description": "thermal field, nonlocal coherences x'=-x"},
    "fig4": {"field.kind": "fock", "field.n0": "83", "eval.cut": "antidiagonal",
             "eval.times": "0, 5, 10, 50, 100, 200", "eval.part": "re",
             "description": "Fock field n0=83, nonlocal coherences x'=-x"},
    "fig5": {**_COHERENT_TRAP, "eval.cut": "antidiagonal",
             "eval.times": "0, 10, 50, 100, 500, 1200", "eval.part": "re",
             "description": "coherent field in trapping configuration, Re rho(x'=-x)"},
    "fig6": {**_COHERENT_TRAP, "eval.cut": "antidiagonal",
             "eval.times": "0.3, 3, 10, 50, 100, 1200", "eval.part": "im",
             "description": "coherent field in trapping configuration, Im rho(x'=-x)"},
    "fig7": {"field.kind": "sg_phase", "field.trapping": "true", "qubit.gamma": "0.5019115pi",
             "eval.cut": "antidiagonal", "eval.times": "0.3, 3, 10, 50, 100, 1200",
             "eval.part": "im",
             "description": "Susskind-Glogower phase state, exact trapping, Im rho(x'=-x)"},
    "fig8": {**_COHERENT_TRAP, "eval.cut": "local_1",
             "eval.times": "0, 10, 50, 100, 500, 1000", "eval.part": "re",
             "description": "coherent trapping, local coherences Re rho(x'=-x+2x01)"},
    "fig9": {**_COHERENT_TRAP, "eval.cut": "local_1",
             "eval.times": "1, 10, 50, 100, 500, 1000", "eval.part": "im",
             "description": "coherent trapping, local coherences Im rho(x'=-x+2x01)"},
}


def preset_entries(name: str) -> dict[str, str]:
    """Full key/value mapping for a preset (common keys included)."""
    try:
        extra = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
    out = dict(_COMMON)
    out.update({k: v for k, v in extra.items() if k != "description"})
    out["eval.name"] = name
    return out


def list_presets() -> str:
    """Text table of the presets and their distinguishing settings."""
    rows = [("preset", "field", "gamma", "cut", "part", "times [1/Omega]")]
    for name in PRESETS:
        e = preset_entries(name)
        kind = e["field.kind"]
        if kind == "thermal":
            fdesc = f"thermal T={e['field.temperature']} K"
        elif kind == "fock":
            fdesc = f"fock n0={e['field.n0']}"
        elif kind == "coherent":
            fdesc = f"coherent |a|^2={e['field.abs_alpha2']} theta={e['field.theta']}"
        else:
            fdesc = "sg_phase (trapping)"
        rows.append((name, fdesc, e["qubit.gamma"], e["eval.cut"], e["eval.part"],
                     e["eval.times"].replace(" ", "")))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
