"""Scenario configuration: TOML/JSON loading, dotted overrides, validation.

A config is a nested mapping with the sections ``model``, ``time_grid``,
``grid``, ``wigner``, ``tomography``, ``regimes``, ``dispersion`` and
``outputs``. Any key may be overridden from the command line by its dotted
name (``--model.delta 1e-3``). Validation errors name the field and, when
the key appears in the config file, its line.
"""
from __future__ import annotations

import copy
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from ..errors import ConfigError
from ..kibble_zurek import RampSpec, freeze_out_time
from ..ai_dynamics import AiScenario


@dataclass
class ModelConfig:
    n_atoms: float = 1e4
    delta: float = 1.0
    # exactly one of the three below; a list gives one scenario per entry
    t0: float | list | None = None
    b0: float | list | None = None
    t0_over_that: float | list | None = field(default_factory=lambda: [0.1, 0.01, 0.001])
    kappa: float = 1.0
    mass: float = 1.0
    lattice_const: float = 1.0


@dataclass
class TimeGridConfig:
    # units of t_hat; t_start = None starts each scenario at its own t0
    t_start: float | None = None
    t_end: float = 6.0
    n_samples: int = 2000
    spacing: str = "linear"


@dataclass
class GridConfig:
    n_points: int = 256
    window_sigmas: float = 8.0


@dataclass
class WignerConfig:
    times: list = field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0])


@dataclass
class TomographyConfig:
    time: float | None = None
    n_points: int = 128
    angles: int = 180
    samples_per_angle: int = 0
    seed: int = 0
    filter: str = "ramp"
    cutoff: float = 1.0


@dataclass
class RegimesConfig:
    deltas: list = field(default_factory=lambda: [1e-3, 1.0, 1e3])
    t_range: list = field(default_factory=lambda: [1e-2, 1e2])
    t0_range: list = field(default_factory=lambda: [1e-3, 1e1])
    n_t: int = 81
    n_t0: int = 41


@dataclass
class DispersionConfig:
    n_atoms: int = 8


@dataclass
class OutputsConfig:
    directory: str = "out"
    formats: list = field(default_factory=lambda: ["csv"])
    absolute_times: bool = False


@dataclass
class ScenarioConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    time_grid: TimeGridConfig = field(default_factory=TimeGridConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    wigner: WignerConfig = field(default_factory=WignerConfig)
    tomography: TomographyConfig = field(default_factory=TomographyConfig)
    regimes: RegimesConfig = field(default_factory=RegimesConfig)
    dispersion: DispersionConfig = field(default_factory=DispersionConfig)
    outputs: OutputsConfig = field(default_factory=OutputsConfig)
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)

    def scenarios(self) -> list[AiScenario]:
        """One scenario per initial-time entry, in config order."""
        m = self.model
        out = []
        for key in ("t0", "b0", "t0_over_that"):
            value = getattr(m, key)
            if value is None:
                continue
            for v in value if isinstance(value, list) else [value]:
                if key == "t0":
                    ramp = RampSpec.from_t0(m.delta, v)
                elif key == "b0":
                    ramp = RampSpec.from_b0(m.delta, v)
                else:
                    ramp = RampSpec.from_t0(m.delta, v * freeze_out_time(m.delta))
                out.append(AiScenario(m.n_atoms, ramp))
        return out


_SECTION_TYPES = {
    "model": ModelConfig,
    "time_grid": TimeGridConfig,
    "grid": GridConfig,
    "wigner": WignerConfig,
    "tomography": TomographyConfig,
    "regimes": RegimesConfig,
    "dispersion": DispersionConfig,
    "outputs": OutputsConfig,
}


def _locate(text: str | None, dotted: str) -> int | None:
    """Line where ``dotted`` is set in the source text, if it can be found.

    Keys are searched after their ``[section]`` header when there is one;
    a bare section name matches its header.
    """
    if not text:
        return None
    lines = text.splitlines()
    parts = dotted.split(".")
    header = re.compile(rf'^\s*\[\s*{re.escape(parts[0])}\s*\]')
    start = next((i for i, ln in enumerate(lines) if header.search(ln)), None)
    if len(parts) == 1 and start is not None:
        return start + 1
    key = re.compile(rf'^\s*"?{re.escape(parts[-1])}"?\s*[=:]')
    for i in range(start or 0, len(lines)):
        if key.search(lines[i]):
            return i + 1
    return None


def _parse_text(text: str, suffix: str) -> dict:
    if suffix == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"invalid TOML: {exc}", line=int(m.group(1)) if m else None) from exc


def parse_value(raw: str):
    """Command-line override value: JSON literal if it parses, else a string."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(data: dict, overrides: dict[str, object]) -> dict:
    out = copy.deepcopy(data)
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        node = out
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError("cannot override inside a scalar", field=dotted)
        node[parts[-1]] = value
    return out


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _coerce(section: str, name: str, value, default, text):
    dotted = f"{section}.{name}"
    line = _locate(text, dotted)

    def fail(msg):
        raise ConfigError(msg, field=dotted, line=line)

    if isinstance(default, bool):
        if not isinstance(value, bool):
            fail(f"expected true/false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if _is_number(value) and float(value) == int(value):
            return int(value)
        fail(f"expected an integer, got {value!r}")
    if isinstance(default, float):
        if _is_number(value) and math.isfinite(value):
            return float(value)
        fail(f"expected a finite number, got {value!r}")
    if isinstance(default, str):
        if not isinstance(value, str):
            fail(f"expected a string, got {value!r}")
        return value
    # list / optional fields
    if value is None:
        return None
    if isinstance(value, list):
        if name == "formats":
            if not all(isinstance(v, str) for v in value):
                fail("expected a list of strings")
            return list(value)
        if not all(_is_number(v) and math.isfinite(v) for v in value):
            fail(f"expected a list of finite numbers, got {value!r}")
        return [float(v) for v in value]
    if _is_number(value) and math.isfinite(value):
        return float(value)
    fail(f"expected a number or list of numbers, got {value!r}")


def from_dict(data: dict, text: str | None = None) -> ScenarioConfig:
    """Build and validate a config from a nested mapping."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table/object")
    cfg = ScenarioConfig()
    for key, value in data.items():
        if key == "workers":
            if not (isinstance(value, int) and not isinstance(value, bool) and value >= 1):
                raise ConfigError("must be a positive integer", field="workers", line=_locate(text, "workers"))
            cfg.workers = value
            continue
        if key not in _SECTION_TYPES:
            raise ConfigError("unknown section", field=key, line=_locate(text, key))
        if not isinstance(value, dict):
            raise ConfigError("section must be a table", field=key, line=_locate(text, key))
        section = getattr(cfg, key)
        known = {f.name for f in fields(section)}
        # an explicit t0 or b0 replaces the default reduced initial times
        if key == "model" and ("t0" in value or "b0" in value) and "t0_over_that" not in value:
            section.t0_over_that = None
        for name, v in value.items():
            if name not in known:
                raise ConfigError("unknown key", field=f"{key}.{name}", line=_locate(text, f"{key}.{name}"))
            default = getattr(type(section)(), name)
            setattr(section, name, _coerce(key, name, v, default, text))
    validate(cfg, text)
    return cfg


def validate(cfg: ScenarioConfig, text: str | None = None) -> None:
    def fail(dotted, msg):
        raise ConfigError(msg, field=dotted, line=_locate(text, dotted))

    m = cfg.model
    given = [k for k in ("t0", "b0", "t0_over_that") if getattr(m, k) is not None]
    if len(given) != 1:
        fail("model.t0", f"exactly one of t0, b0, t0_over_that must be given (got {given or 'none'})")
    values = getattr(m, given[0])
    values = values if isinstance(values, list) else [values]
    if not values:
        fail(f"model.{given[0]}", "needs at least one value")
    if any(v <= 0 for v in values):
        fail(f"model.{given[0]}", "initial times/fields must be positive")
    for name in ("n_atoms", "delta", "kappa", "mass", "lattice_const"):
        if not getattr(m, name) > 0:
            fail(f"model.{name}", "must be positive")

    tg = cfg.time_grid
    if tg.spacing not in ("linear", "log"):
        fail("time_grid.spacing", "must be 'linear' or 'log'")
    if tg.n_samples < 1:
        fail("time_grid.n_samples", "must be at least 1")
    t0_max = max(s.t0_reduced for s in cfg.scenarios())
    t_start = t0_max if tg.t_start is None else tg.t_start
    if tg.t_start is not None and tg.t_start < t0_max * (1 - 1e-12):
        fail("time_grid.t_start", f"must be >= t0/t_hat = {t0_max:.6g}")
    if not tg.t_end > t_start:
        fail("time_grid.t_end", f"must exceed t_start ({t_start:.6g})")

    if cfg.grid.n_points < 8:
        fail("grid.n_points", "must be at least 8")
    if cfg.grid.window_sigmas < 6:
        fail("grid.window_sigmas", "must be at least 6")

    tm = cfg.tomography
    if isinstance(tm.time, list):
        fail("tomography.time", "must be a single time")
    if not isinstance(cfg.wigner.times, list):
        fail("wigner.times", "must be a list")
    if tm.n_points < 8:
        fail("tomography.n_points", "must be at least 8")
    if tm.angles < 2:
        fail("tomography.angles", "must be at least 2")
    if tm.samples_per_angle < 0:
        fail("tomography.samples_per_angle", "must be nonnegative")
    if not 0 <= tm.seed < 2**64:
        fail("tomography.seed", "must fit in an unsigned 64-bit integer")
    if tm.filter not in ("ramp", "hann"):
        fail("tomography.filter", "must be 'ramp' or 'hann'")
    if not 0 < tm.cutoff <= 1:
        fail("tomography.cutoff", "must lie in (0, 1]")

    r = cfg.regimes
    if not r.deltas or any(d <= 0 for d in r.deltas):
        fail("regimes.deltas", "must be a nonempty list of positive values")
    for name in ("t_range", "t0_range"):
        lo_hi = getattr(r, name)
        if len(lo_hi) != 2 or not 0 < lo_hi[0] < lo_hi[1]:
            fail(f"regimes.{name}", "must be [low, high] with 0 < low < high")
    if r.n_t < 2 or r.n_t0 < 1:
        fail("regimes.n_t", "need n_t >= 2 and n_t0 >= 1")
    if cfg.dispersion.n_atoms < 2:
        fail("dispersion.n_atoms", "must be at least 2")
    if cfg.workers < 1:
        fail("workers", "must be positive")


def load(path: str | Path | None = None, overrides: dict | None = None) -> ScenarioConfig:
    """Read a TOML or JSON file (or defaults when ``path`` is None) and apply overrides."""
    text = None
    data: dict = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", field=str(path)) from exc
        data = _parse_text(text, path.suffix.lower())
    data = apply_overrides(data, overrides or {})
    return from_dict(data, text)


def emit(cfg: ScenarioConfig) -> str:
    """Canonical JSON text; ``from_dict(json.loads(emit(c))) == c``."""
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"
