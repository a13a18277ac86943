"""Scenario configuration files: sectioned key = value text.

Format: four sections, one pair per line, '#' starts a comment anywhere.

    [model]   d, r, K, h, growth_family (logistic|constant), k, m,
              dim, extents, points     (extents/points: comma lists)
    [ic]      name (sin_pi|eigen|bump|paper_sin), amplitude
    [run]     t_end, dt (number or "auto"), snapshot_every, stop_when_steady
    [output]  dir, emit_plot

Parsing collects every problem with its line number instead of stopping at
the first one, and re-checks all model constraints so a config error never
surfaces later as a solver exception.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grids import Grid
from .growth import GrowthFunction
from .solver import INITIAL_CONDITIONS, Field, ModelParams, initial_condition, stable_dt

__all__ = ["ScenarioConfig", "ConfigError", "parse_config", "serialize"]

_SECTIONS = {
    "model": ("d", "r", "K", "h", "growth_family", "k", "m", "dim", "extents", "points"),
    "ic": ("name", "amplitude"),
    "run": ("t_end", "dt", "snapshot_every", "stop_when_steady"),
    "output": ("dir", "emit_plot"),
}
_REQUIRED = {
    "model": ("d", "r", "K", "h", "growth_family", "dim", "extents", "points"),
    "ic": ("name",),
    "run": ("t_end", "dt"),
    "output": ("dir",),
}


class ConfigError(Exception):
    """One entry per problem, each tagged with its source line number."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(f"line {ln}: {msg}" for ln, msg in self.errors))


@dataclass
class ScenarioConfig:
    d: float
    r: float
    K: float
    h: float
    growth_family: str
    k: float
    m: float
    dim: int
    extents: tuple
    points: tuple
    ic_name: str
    t_end: float
    dt: object  # float or the string "auto"
    out_dir: str
    ic_amplitude: float = 1.0
    snapshot_every: int = 50
    stop_when_steady: bool = False
    emit_plot: bool = False

    def growth(self) -> GrowthFunction:
        if self.growth_family == "logistic":
            return GrowthFunction.logistic(self.k, self.m)
        return GrowthFunction.constant()

    def grid(self) -> Grid:
        return Grid(self.extents, self.points)

    def params(self) -> ModelParams:
        return ModelParams(self.d, self.r, self.K, self.h, self.growth(), self.grid())

    def initial_field(self) -> Field:
        return initial_condition(self.ic_name, self.grid(), self.ic_amplitude)

    def resolve_dt(self) -> float:
        if self.dt == "auto":
            return stable_dt(self.params())
        return float(self.dt)


def _required_keys_message() -> str:
    parts = []
    for section, keys in _REQUIRED.items():
        parts.append(f"[{section}] " + ", ".join(keys))
    return "missing required keys: " + "; ".join(parts)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate; raises ConfigError listing every problem found."""
    entries = {}  # (section, key) -> (lineno, raw value)
    errors = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                errors.append((lineno, f"unknown section [{name}]"))
                section = None
            else:
                section = name
            continue
        if "=" not in line:
            errors.append((lineno, f"expected key = value, got {line!r}"))
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if section is None:
            errors.append((lineno, f"key {key!r} outside any known section"))
            continue
        if key not in _SECTIONS[section]:
            errors.append((lineno, f"unknown key {key!r} in section [{section}]"))
            continue
        if (section, key) in entries:
            errors.append((lineno, f"duplicate key {key!r} in section [{section}]"))
            continue
        entries[(section, key)] = (lineno, value)

    if not entries and not errors:
        raise ConfigError([(0, "empty config; " + _required_keys_message())])

    missing = [
        f"[{sec}] {key}"
        for sec, keys in _REQUIRED.items()
        for key in keys
        if (sec, key) not in entries
    ]
    if missing:
        errors.append((0, "missing required keys: " + ", ".join(missing)))

    def take(section, key, convert, default=None, check=None):
        if (section, key) not in entries:
            return default
        lineno, raw = entries[(section, key)]
        try:
            value = convert(raw)
        except ValueError as exc:
            errors.append((lineno, f"{key}: {exc}"))
            return default
        if check is not None:
            problem = check(value)
            if problem:
                errors.append((lineno, f"{key}: {problem}"))
                return default
        return value

    def as_bool(raw):
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"expected true/false, got {raw!r}")

    def as_float_list(raw):
        return tuple(float(x) for x in raw.split(","))

    def as_int_list(raw):
        return tuple(int(x) for x in raw.split(","))

    def as_dt(raw):
        if raw.lower() == "auto":
            return "auto"
        value = float(raw)
        if value <= 0.0:
            raise ValueError("must be positive or 'auto'")
        return value

    d = take("model", "d", float, check=lambda v: None if v >= 0 else "must be >= 0")
    r = take("model", "r", float, check=lambda v: None if v >= 0 else "must be >= 0")
    K = take("model", "K", float, check=lambda v: None if v > 0 else "must be > 0")
    h = take("model", "h", float, check=lambda v: None if v >= 0 else "must be >= 0")
    family = take(
        "model",
        "growth_family",
        str,
        check=lambda v: None if v in ("logistic", "constant") else "expected logistic or constant",
    )
    k = take("model", "k", float)
    m = take("model", "m", float)
    dim = take("model", "dim", int, check=lambda v: None if v in (1, 2) else "must be 1 or 2")
    extents = take(
        "model",
        "extents",
        as_float_list,
        check=lambda v: None if all(x > 0 for x in v) else "extents must be positive",
    )
    points = take(
        "model",
        "points",
        as_int_list,
        check=lambda v: None if all(n >= 3 for n in v) else "need at least 3 nodes per axis",
    )
    ic_name = take(
        "ic",
        "name",
        str,
        check=lambda v: None if v in INITIAL_CONDITIONS else f"expected one of {INITIAL_CONDITIONS}",
    )
    amplitude = take(
        "ic", "amplitude", float, default=1.0,
        check=lambda v: None if v > 0 else "must be > 0",
    )
    t_end = take("run", "t_end", float, check=lambda v: None if v > 0 else "must be > 0")
    dt = take("run", "dt", as_dt)
    snapshot_every = take(
        "run", "snapshot_every", int, default=50,
        check=lambda v: None if v >= 1 else "must be >= 1",
    )
    stop_when_steady = take("run", "stop_when_steady", as_bool, default=False)
    out_dir = take("output", "dir", str, check=lambda v: None if v else "must not be empty")
    emit_plot = take("output", "emit_plot", as_bool, default=False)

    # cross-field constraints, attached to the most relevant line
    if family == "logistic":
        if ("model", "k") not in entries:
            errors.append((0, "missing required keys: [model] k (logistic growth)"))
        elif k is not None and k <= 0:
            errors.append((entries[("model", "k")][0], "k: logistic growth requires k > 0"))
        if ("model", "m") not in entries:
            errors.append((0, "missing required keys: [model] m (logistic growth)"))
        elif m is not None and m <= 1:
            errors.append((entries[("model", "m")][0], "m must exceed 1 for logistic growth"))
    elif family == "constant":
        if m is not None and m != 1.0:
            errors.append((entries[("model", "m")][0], "m: constant growth fixes m = 1"))
        k = 0.0
        m = 1.0
    if dim is not None:
        for key, value in (("extents", extents), ("points", points)):
            if value is not None and len(value) != dim:
                errors.append(
                    (entries[("model", key)][0], f"{key}: expected {dim} comma-separated values")
                )

    if errors:
        raise ConfigError(sorted(errors))
    return ScenarioConfig(
        d=d, r=r, K=K, h=h,
        growth_family=family, k=k if k is not None else 0.0, m=m if m is not None else 1.0,
        dim=dim, extents=extents, points=points,
        ic_name=ic_name, ic_amplitude=amplitude,
        t_end=t_end, dt=dt, snapshot_every=snapshot_every, stop_when_steady=stop_when_steady,
        out_dir=out_dir, emit_plot=emit_plot,
    )


def serialize(cfg: ScenarioConfig) -> str:
    """Canonical text form; parse_config(serialize(cfg)) == cfg."""
    lines = ["[model]"]
    for key in ("d", "r", "K", "h"):
        lines.append(f"{key} = {getattr(cfg, key)!r}")
    lines.append(f"growth_family = {cfg.growth_family}")
    if cfg.growth_family == "logistic":
        lines.append(f"k = {cfg.k!r}")
        lines.append(f"m = {cfg.m!r}")
    lines.append(f"dim = {cfg.dim}")
    lines.append("extents = " + ", ".join(repr(x) for x in cfg.extents))
    lines.append("points = " + ", ".join(str(n) for n in cfg.points))
    lines += [
        "",
        "[ic]",
        f"name = {cfg.ic_name}",
        f"amplitude = {cfg.ic_amplitude!r}",
        "",
        "[run]",
        f"t_end = {cfg.t_end!r}",
        f"dt = {cfg.dt if cfg.dt == 'auto' else repr(cfg.dt)}",
        f"snapshot_every = {cfg.snapshot_every}",
        f"stop_when_steady = {'true' if cfg.stop_when_steady else 'false'}",
        "",
        "[output]",
        f"dir = {cfg.out_dir}",
        f"emit_plot = {'true' if cfg.emit_plot else 'false'}",
        "",
    ]
    return "\n".join(lines)
