"""Run configuration: JSON file plus command-line overrides.

Empty or missing files give the defaults below.  Unknown keys are rejected
by name so typos cannot silently fall back to defaults.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import InvalidArgument
from .signal import GridSpec

DEFAULT_SEED = 0xC0FFEE

DEFAULTS = {
    "n_cap": 512,        # modulation cut for box coefficients of exact inputs
    "j_cap": 4096,       # series cut for Rademacher norm ratios
    "w_max": None,       # plane half-width; None means 1/(4 dx)
    "x_step": 0.125,
    "w_step": 0.125,
    "seed": DEFAULT_SEED,
    "trials": 1000,      # Hilbert norm trials
    "product_bound": 10.0,
}

# per-command option blocks; values here are the fallbacks
COMMAND_OPTIONS = {
    "stft": {"input": None, "window": None},
    "gabor": {"input": None, "window": None, "alpha": 1.0},
    "norm": {"input": None, "p": 2.0, "method": "box"},
    "rademacher": {"n": 1, "k_max": 1024},
    "hilbert": {"input": None, "p": 2.0, "length": 4096},
    "wilson": {"n_max": 16, "k_max": 8},
    "translates": {"input": None, "window": None, "N": 16},
    "density": {"input": None, "family": "dyadic:0:10"},
    "verify": {},
}


class ConfigError(InvalidArgument):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec = field(default_factory=GridSpec.centered)
    defaults: dict = field(default_factory=lambda: dict(DEFAULTS))
    commands: dict = field(default_factory=lambda: {k: dict(v) for k, v in COMMAND_OPTIONS.items()})
    tolerances: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.defaults["seed"])

    def option(self, command: str, name: str):
        return self.commands[command][name]

    def to_dict(self) -> dict:
        return {"grid": self.grid.to_dict(), "defaults": dict(self.defaults),
                "commands": {k: dict(v) for k, v in self.commands.items()},
                "tolerances": dict(self.tolerances)}


def _check_defaults(d: dict) -> None:
    for key in ("n_cap", "j_cap", "trials"):
        v = d[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ConfigError(f"{key} must be a positive integer, got {v!r}")
    for key in ("x_step", "w_step", "product_bound"):
        v = d[key]
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
            raise ConfigError(f"{key} must be positive, got {v!r}")
    if d["w_max"] is not None and not (isinstance(d["w_max"], (int, float)) and d["w_max"] > 0):
        raise ConfigError(f"w_max must be positive or null, got {d['w_max']!r}")
    seed = d["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def _merge(base: dict, extra: dict, where: str) -> dict:
    if not isinstance(extra, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = sorted(set(extra) - set(base))
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in {where}")
    out = dict(base)
    out.update(extra)
    return out


def parse_config_text(text: str, overrides: dict | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from JSON text, then apply ``overrides``.

    ``overrides`` may hold ``grid_l``, ``grid_dx``, ``seed``, ``n_cap`` and
    ``p``; flags win over the file.
    """
    if text.strip():
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config parse error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    else:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = {"grid", "defaults", "tolerances"} | set(COMMAND_OPTIONS)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} at top level")

    defaults = _merge(DEFAULTS, raw.get("defaults", {}), "defaults")
    commands = {k: _merge(v, raw.get(k, {}), k) for k, v in COMMAND_OPTIONS.items()}

    g = raw.get("grid", {})
    if not isinstance(g, dict):
        raise ConfigError("grid must be an object")
    gunknown = sorted(set(g) - {"L", "dx", "t0"})
    if gunknown:
        raise ConfigError(f"unknown key {gunknown[0]!r} in grid")

    ov = dict(overrides or {})
    L = ov.pop("grid_l", None) or g.get("L", 65536)
    dx = ov.pop("grid_dx", None) or g.get("dx", 1.0 / 1024)
    t0 = g.get("t0", -L * dx / 2)
    try:
        grid = GridSpec(L, dx, t0)
    except InvalidArgument as e:
        raise ConfigError(f"grid: {e}") from None

    for key in ("seed", "n_cap"):
        if ov.get(key) is not None:
            defaults[key] = ov.pop(key)
    if ov.get("p") is not None:
        for block in ("norm", "hilbert"):
            commands[block]["p"] = ov["p"]
    _check_defaults(defaults)

    tol = raw.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances must be an object")
    from .verify import CHECK_NAMES

    for name, v in tol.items():
        if name not in CHECK_NAMES:
            raise ConfigError(f"unknown check {name!r} in tolerances")
        if not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"tolerance for {name!r} must be positive, got {v!r}")
    return RunConfig(grid, defaults, commands, dict(tol))


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    text = ""
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read config {path!r}: {e.strerror}") from None
    return parse_config_text(text, overrides)


def with_defaults(cfg: RunConfig, **changes) -> RunConfig:
    d = dict(cfg.defaults)
    d.update(changes)
    _check_defaults(d)
    return replace(cfg, defaults=d)
