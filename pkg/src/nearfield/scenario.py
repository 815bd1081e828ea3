"""Scenario configuration: named arrays, carrier, users, paths, seeding.

Scenarios serialize to a TOML file (nested tables; angles stored in degrees
and converted to radians on load; ``r_m = inf`` marks a far-field point).
Reads go through :mod:`tomllib` (or its ``tomli`` backport on 3.10); writes
use a small emitter scoped to this schema because no TOML writer ships with
the standard library.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

try:
    import tomllib
except ImportError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from .carrier import SPEED_OF_LIGHT, CarrierConfig
from .errors import ConfigError
from .geometry import FAR_FIELD, ArrayGeometry, PolarPoint, build_ula, build_upa


class AmplitudeModel(Enum):
    UNIT = "UNIT"
    FREE_SPACE = "FREE_SPACE"


@dataclass(frozen=True)
class PathSpec:
    gain: complex
    point: PolarPoint


@dataclass(frozen=True)
class ScenarioConfig:
    arrays: dict[str, ArrayGeometry]
    carrier: CarrierConfig
    users: tuple[PolarPoint, ...] = ()
    paths: tuple[PathSpec, ...] = ()
    seed: int = 0
    amplitude_model: AmplitudeModel = AmplitudeModel.UNIT

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "paths", tuple(self.paths))


def derive_rng(seed: int, *tags) -> np.random.Generator:
    """Deterministic per-purpose stream: same (seed, tags) -> same stream.

    String tags are crc32-hashed so streams are stable across processes
    (Python's builtin hash is salted per process).
    """
    ints = [int(seed)]
    for t in tags:
        ints.append(zlib.crc32(t.encode()) if isinstance(t, str) else int(t))
    return np.random.default_rng(np.random.SeedSequence(ints))


# --- loading -----------------------------------------------------------------


def _require(table: dict, key: str, types, context: str):
    if key not in table:
        raise ConfigError(f"missing key '{context}{key}'", key=context + key)
    v = table[key]
    if not isinstance(v, types):
        raise ConfigError(
            f"key '{context}{key}' has wrong type {type(v).__name__}", key=context + key
        )
    return v


def _array_from_table(name: str, t: dict) -> ArrayGeometry:
    ctx = f"arrays.{name}."
    kind = _require(t, "kind", str, ctx)
    if kind == "ula":
        n = _require(t, "n", int, ctx)
        spacing = float(_require(t, "spacing_m", (int, float), ctx))
        return build_ula(n, spacing, name=name)
    if kind == "upa":
        nx = _require(t, "nx", int, ctx)
        ny = _require(t, "ny", int, ctx)
        sx = float(_require(t, "spacing_x_m", (int, float), ctx))
        sy = float(_require(t, "spacing_y_m", (int, float), ctx))
        return build_upa(nx, ny, sx, sy, name=name)
    if kind == "explicit":
        positions = _require(t, "positions_m", list, ctx)
        return ArrayGeometry(np.asarray(positions, dtype=float), name=name)
    raise ConfigError(f"key '{ctx}kind' must be ula|upa|explicit, got {kind!r}", key=ctx + "kind")


def _point_from_table(t: dict, ctx: str) -> PolarPoint:
    theta_deg = float(_require(t, "theta_deg", (int, float), ctx))
    r = float(_require(t, "r_m", (int, float), ctx))
    return PolarPoint(math.radians(theta_deg), r)


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}", key=str(path))
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc

    seed = _require(raw, "seed", int, "")
    amp_name = raw.get("amplitude_model", "UNIT")
    try:
        amp = AmplitudeModel(amp_name)
    except ValueError:
        raise ConfigError(
            f"key 'amplitude_model' must be UNIT or FREE_SPACE, got {amp_name!r}",
            key="amplitude_model",
        ) from None

    ct = _require(raw, "carrier", dict, "")
    carrier = CarrierConfig(
        center_frequency=float(_require(ct, "center_frequency_hz", (int, float), "carrier.")),
        bandwidth=float(ct.get("bandwidth_hz", 0.0)),
        num_subcarriers=int(ct.get("num_subcarriers", 1)),
        propagation_speed=float(ct.get("propagation_speed_mps", SPEED_OF_LIGHT)),
    )

    arrays_table = _require(raw, "arrays", dict, "")
    if not arrays_table:
        raise ConfigError("key 'arrays' must define at least one array", key="arrays")
    arrays = {name: _array_from_table(name, t) for name, t in arrays_table.items()}

    users = tuple(_point_from_table(t, f"users[{i}].") for i, t in enumerate(raw.get("users", [])))
    paths = []
    for i, t in enumerate(raw.get("paths", [])):
        ctx = f"paths[{i}]."
        gain = complex(
            float(_require(t, "gain_re", (int, float), ctx)),
            float(t.get("gain_im", 0.0)),
        )
        paths.append(PathSpec(gain, _point_from_table(t, ctx)))

    return ScenarioConfig(
        arrays=arrays, carrier=carrier, users=users, paths=tuple(paths), seed=seed, amplitude_model=amp
    )


# --- saving ------------------------------------------------------------------


def _toml_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_scalar(x) for x in v) + "]"
    raise ConfigError(f"cannot serialize value of type {type(v).__name__}")


def _emit_table(lines: list[str], items: dict):
    for k, v in items.items():
        lines.append(f"{k} = {_toml_scalar(v)}")


def save_scenario(cfg: ScenarioConfig, path) -> None:
    lines: list[str] = []
    _emit_table(lines, {"seed": cfg.seed, "amplitude_model": cfg.amplitude_model.value})

    lines.append("")
    lines.append("[carrier]")
    _emit_table(
        lines,
        {
            "center_frequency_hz": cfg.carrier.center_frequency,
            "bandwidth_hz": cfg.carrier.bandwidth,
            "num_subcarriers": cfg.carrier.num_subcarriers,
            "propagation_speed_mps": cfg.carrier.propagation_speed,
        },
    )

    for name, geom in cfg.arrays.items():
        lines.append("")
        lines.append(f"[arrays.{name}]")
        # always persisted as explicit positions: lossless for any geometry
        _emit_table(
            lines,
            {"kind": "explicit", "positions_m": [list(row) for row in geom.elements]},
        )

    for p in cfg.users:
        lines.append("")
        lines.append("[[users]]")
        _emit_table(lines, {"theta_deg": math.degrees(p.theta), "r_m": p.r})

    for ps in cfg.paths:
        lines.append("")
        lines.append("[[paths]]")
        _emit_table(
            lines,
            {
                "gain_re": ps.gain.real,
                "gain_im": ps.gain.imag,
                "theta_deg": math.degrees(ps.point.theta),
                "r_m": ps.point.r,
            },
        )

    Path(path).write_text("\n".join(lines) + "\n")
