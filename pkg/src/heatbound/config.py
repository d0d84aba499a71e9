"""Campaign configuration: a strict TOML document with flat sections.

    [problem]     N, m, c1, c2, gamma, potential
    [grid]        L, n
    [hypothesis]  sigma, mu, lambda   (all three, or omit the section to fit)
    [campaign]    t, x, alpha, fit_t_count, fit_depth, tau_count,
                  boundary_check, boundary_tol, interp_grid, seed
    [output]      directory, formats

Unknown sections or keys are errors.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import tomli

from heatbound.core import Hypothesis, ProblemSpec
from heatbound.operator_lab import Grid1D


DEFAULT_L = 40.0
DEFAULT_N = 2048


class ConfigError(ValueError):
    pass


def default_t_values() -> list[float]:
    return [float(v) for v in np.geomspace(0.05, 1.0, 16)]


def default_x_values() -> list[float]:
    return [0.0, -0.5, 0.5, -1.0, 1.0, -2.0, 2.0]


@dataclass(frozen=True)
class CampaignSettings:
    t: tuple[float, ...] = field(default_factory=lambda: tuple(default_t_values()))
    x: tuple[float, ...] = field(default_factory=lambda: tuple(default_x_values()))
    alpha: Any = "optimal"
    fit_t_count: int = 16
    fit_depth: float = 1e-4
    tau_count: int = 32
    boundary_check: bool = True
    boundary_tol: float = 1e-3
    interp_grid: int = 5
    seed: int = 0


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class Config:
    problem: ProblemSpec = field(default_factory=ProblemSpec)
    grid: Grid1D = field(default_factory=lambda: Grid1D(DEFAULT_L, DEFAULT_N))
    hypothesis: Hypothesis | None = None
    campaign: CampaignSettings = field(default_factory=CampaignSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    defaults_applied: tuple[str, ...] = field(default=(), compare=False)


_PROBLEM_KEYS = {"N": int, "m": int, "c1": float, "c2": float, "gamma": float, "potential": str}
_GRID_KEYS = {"L": float, "n": int}
_HYP_KEYS = {"sigma": float, "mu": float, "lambda": float}
_CAMPAIGN_KEYS = {
    "t": list,
    "x": list,
    "alpha": object,
    "fit_t_count": int,
    "fit_depth": float,
    "tau_count": int,
    "boundary_check": bool,
    "boundary_tol": float,
    "interp_grid": int,
    "seed": int,
}
_OUTPUT_KEYS = {"directory": str, "formats": list}
_SECTIONS = {
    "problem": _PROBLEM_KEYS,
    "grid": _GRID_KEYS,
    "hypothesis": _HYP_KEYS,
    "campaign": _CAMPAIGN_KEYS,
    "output": _OUTPUT_KEYS,
}
_FORMATS = ("csv", "json")


def _coerce(section: str, key: str, value, kind):
    where = f"[{section}] {key}"
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{where}: expected a non-empty list, got {value!r}")
        return value
    return value


def _section(doc: dict, name: str, defaults_applied: list[str]) -> dict:
    raw = doc.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    keys = _SECTIONS[name]
    unknown = sorted(set(raw) - set(keys))
    if unknown:
        raise ConfigError(f"[{name}]: unknown key(s) {', '.join(unknown)}")
    out = {}
    for key, kind in keys.items():
        if key in raw:
            out[key] = _coerce(name, key, raw[key], kind)
        elif name != "hypothesis":
            defaults_applied.append(f"{name}.{key}")
    return out


def _number_list(section: str, key: str, values) -> tuple[float, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"[{section}] {key}: expected finite numbers, got {v!r}")
        out.append(float(v))
    return tuple(out)


def parse_config(text: str) -> Config:
    """Parse and validate a configuration document."""
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"parse error: {exc}") from exc
    unknown = sorted(set(doc) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")

    applied: list[str] = []
    prob = _section(doc, "problem", applied)
    grid = _section(doc, "grid", applied)
    hyp = _section(doc, "hypothesis", applied)
    camp = _section(doc, "campaign", applied)
    outp = _section(doc, "output", applied)

    try:
        problem = ProblemSpec(**prob)
    except ValueError as exc:
        raise ConfigError(f"[problem]: {exc}") from exc
    try:
        grid_obj = Grid1D(**{"L": DEFAULT_L, "n": DEFAULT_N, **grid})
    except ValueError as exc:
        raise ConfigError(f"[grid]: {exc}") from exc
    if problem.N != 1:
        raise ConfigError("[problem]: the grid lab needs N = 1")

    hypothesis = None
    if hyp:
        missing = sorted(set(_HYP_KEYS) - set(hyp))
        if missing:
            raise ConfigError(f"[hypothesis]: missing {', '.join(missing)} (give all three or none)")
        try:
            hypothesis = Hypothesis(hyp["sigma"], hyp["mu"], hyp["lambda"])
        except ValueError as exc:
            raise ConfigError(f"[hypothesis]: {exc}") from exc

    if "t" in camp:
        camp["t"] = _number_list("campaign", "t", camp["t"])
        if min(camp["t"]) <= 0.0:
            raise ConfigError("[campaign] t: times must be > 0")
    if "x" in camp:
        camp["x"] = _number_list("campaign", "x", camp["x"])
        if max(abs(v) for v in camp["x"]) >= grid_obj.L:
            raise ConfigError("[campaign] x: positions must lie inside (-L, L)")
    if "alpha" in camp:
        a = camp["alpha"]
        if a != "optimal" and (isinstance(a, bool) or not isinstance(a, (int, float)) or not 0.0 < a < 0.5):
            raise ConfigError(f"[campaign] alpha: expected \"optimal\" or a number in (0, 1/2), got {a!r}")
        if a != "optimal":
            camp["alpha"] = float(a)
    for key, lo in (("fit_t_count", 3), ("tau_count", 2), ("interp_grid", 1)):
        if key in camp and camp[key] < lo:
            raise ConfigError(f"[campaign] {key}: must be >= {lo}")
    if "fit_depth" in camp and not 0.0 < camp["fit_depth"] <= 1.0:
        raise ConfigError("[campaign] fit_depth: must lie in (0, 1]")
    if "boundary_tol" in camp and not camp["boundary_tol"] > 0.0:
        raise ConfigError("[campaign] boundary_tol: must be > 0")

    if "formats" in outp:
        bad = [f for f in outp["formats"] if f not in _FORMATS]
        if bad:
            raise ConfigError(f"[output] formats: unknown format(s) {bad}; expected {list(_FORMATS)}")
        outp["formats"] = tuple(outp["formats"])

    return Config(
        problem=problem,
        grid=grid_obj,
        hypothesis=hypothesis,
        campaign=CampaignSettings(**camp),
        output=OutputSettings(**outp),
        defaults_applied=tuple(applied),
    )


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialise {v!r}")


def serialize_config(cfg: Config) -> str:
    """Render ``cfg`` as a document that :func:`parse_config` reads back."""
    p = cfg.problem
    sections = {
        "problem": {"N": p.N, "m": p.m, "c1": p.c1, "c2": p.c2, "gamma": p.gamma, "potential": p.potential},
        "grid": {"L": cfg.grid.L, "n": cfg.grid.n},
    }
    if cfg.hypothesis is not None:
        h = cfg.hypothesis
        sections["hypothesis"] = {"sigma": h.sigma, "mu": h.mu, "lambda": h.lam}
    sections["campaign"] = dataclasses.asdict(cfg.campaign)
    sections["output"] = dataclasses.asdict(cfg.output)
    lines = []
    for name, body in sections.items():
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {_toml_value(v)}" for k, v in body.items())
        lines.append("")
    return "\n".join(lines)
