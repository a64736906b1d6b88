"""Flat ``key = value`` run configuration.

Blank lines and lines starting with ``#`` are ignored.  Every key must be
one of ``KEYS``; anything else is rejected so typos cannot silently fall
back to defaults.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigError
from .pressure import PressureLaw
from .profile import rho_max, speed_from_k0

KEYS = {
    "pressure.T": "T",
    "pressure.gamma": "gamma",
    "V": "V_spec",
    "delta_list": "delta_list",
    "hill.N": "N",
    "hill.xi_points": "xi_points",
    "hill.refine_points": "refine_points",
    "crossings.ell_max": "ell_max",
    "sweep.V_max": "sweep_V_max",
    "sweep.points": "sweep_points",
    "workers": "workers",
    "output_dir": "output_dir",
}


@dataclass(frozen=True)
class RunConfig:
    T: float = 0.25
    gamma: float = 2.0
    V_spec: str = "k0=1"
    delta_list: tuple = (0.0, 0.002, 0.004)
    N: int = 32
    xi_points: int = 400
    refine_points: int = 100
    ell_max: int = 8
    sweep_V_max: float = 100.0
    sweep_points: int = 20
    workers: int = 1
    output_dir: str = "out"

    @property
    def law(self) -> PressureLaw:
        try:
            return PressureLaw(self.T, self.gamma)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def V(self) -> float:
        """Speed resolved from ``V_spec`` (a number or ``k0=<value>``)."""
        spec = self.V_spec.strip()
        try:
            if spec.startswith("k0="):
                return speed_from_k0(self.law, float(spec[3:]))
            return float(spec)
        except ValueError as exc:
            raise ConfigError(f"invalid V specification {self.V_spec!r}: {exc}") from exc

    def validate(self) -> "RunConfig":
        law, V = self.law, self.V
        if not V * V > law.sound_speed_sq:
            raise ConfigError(f"V={V!r} is not supersonic: V^2 must exceed P'(1)={law.sound_speed_sq!r}")
        bound = rho_max(law, V).delta_max
        for d in self.delta_list:
            if not 0 <= d < bound:
                raise ConfigError(f"delta={d!r} outside [0, delta_max={bound:.6g}) for V={V!r}")
        if self.N < 4:
            raise ConfigError("hill.N must be >= 4")
        if self.xi_points < 1 or self.refine_points < 3:
            raise ConfigError("hill.xi_points must be >= 1 and hill.refine_points >= 3")
        if self.ell_max < 2:
            raise ConfigError("crossings.ell_max must be >= 2")
        if self.sweep_points < 2 or not self.sweep_V_max > math.sqrt(law.sound_speed_sq):
            raise ConfigError("sweep needs >= 2 points and a supersonic V_max")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize(config: RunConfig) -> str:
    lines = [f"{key} = {_format_value(getattr(config, attr))}" for key, attr in KEYS.items()]
    return "\n".join(lines) + "\n"


def _convert(attr: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[attr]
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "tuple":
            return tuple(float(p) for p in raw.split(",") if p.strip())
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse {raw!r} for {attr}") from exc


def parse(text: str, base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, raw = stripped.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if KEYS[key] in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[KEYS[key]] = _convert(KEYS[key], raw.strip())
    return replace(base or RunConfig(), **values)


def load(path) -> RunConfig:
    try:
        with open(path) as fh:
            return parse(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
