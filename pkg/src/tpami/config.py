"""Configuration schema, validation and bundled scenario presets.

Config files are single JSON documents; angles are degrees.  Two angle
conventions are accepted: "physical" angles are lab angles of the real
polarizers, "effective" angles are source-frame selection axes.  The
beam-splitter reflection maps a physical angle theta on P1 or P3 to the
effective axis -theta (P0 and P2 are unaffected), so effective configs
are converted to physical at load time by negating p1 and p3.

Example: the effective 45/135 arm scheme requires physical P1 = P2 =
135 degrees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ParseError, ValidationError

PRESET_NAMES = ("fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8")

_CONVENTIONS = ("physical", "effective")


@dataclass(frozen=True)
class SourceSpec:
    center_wavelength_nm: float
    bandwidth_nm: float
    shape: str = "gaussian"


@dataclass(frozen=True)
class PolarizerBank:
    """Physical polarizer angles in degrees; None means absent."""

    p0: float | None = None
    p1: float | None = None
    p2: float | None = None
    p3: float | None = None


@dataclass(frozen=True)
class ScanSpec:
    delay_min_fs: float = -60.0
    delay_max_fs: float = 60.0
    points: int = 2048

    def delays_s(self) -> np.ndarray:
        return np.linspace(self.delay_min_fs, self.delay_max_fs, self.points) * 1e-15

    def delays_fs(self) -> np.ndarray:
        return np.linspace(self.delay_min_fs, self.delay_max_fs, self.points)


@dataclass(frozen=True)
class InterferometerConfig:
    """A fully validated scenario; angles stored as physical degrees."""

    source: SourceSpec
    polarizers: PolarizerBank
    scan: ScanSpec
    blocked_arm: int | None = None

    def to_dict(self) -> dict:
        return {
            "source": {
                "center_wavelength_nm": self.source.center_wavelength_nm,
                "bandwidth_nm": self.source.bandwidth_nm,
                "shape": self.source.shape,
            },
            "polarizers": {
                "p0": self.polarizers.p0,
                "p1": self.polarizers.p1,
                "p2": self.polarizers.p2,
                "p3": self.polarizers.p3,
            },
            "angle_convention": "physical",
            "blocked_arm": self.blocked_arm,
            "scan": {
                "delay_min_fs": self.scan.delay_min_fs,
                "delay_max_fs": self.scan.delay_max_fs,
                "points": self.scan.points,
            },
        }


def _require_keys(mapping: dict, allowed: set[str], context: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ValidationError(f"unknown key(s) in {context}: {sorted(unknown)}")


def _as_number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{context} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{context} must be finite, got {value!r}")
    return value


def _as_angle(value, context: str) -> float | None:
    if value is None:
        return None
    return _as_number(value, context) % 180.0


def config_from_dict(raw: dict) -> InterferometerConfig:
    """Validate a parsed document and normalize it to physical angles."""
    if not isinstance(raw, dict):
        raise ValidationError("config document must be a JSON object")
    _require_keys(
        raw,
        {"source", "polarizers", "angle_convention", "blocked_arm", "scan"},
        "config",
    )

    source_raw = raw.get("source", {})
    if not isinstance(source_raw, dict):
        raise ValidationError("source must be an object")
    _require_keys(source_raw, {"center_wavelength_nm", "bandwidth_nm", "shape"}, "source")
    center = _as_number(source_raw.get("center_wavelength_nm", 1550.0),
                        "source.center_wavelength_nm")
    bandwidth = _as_number(source_raw.get("bandwidth_nm", 30.0), "source.bandwidth_nm")
    shape = source_raw.get("shape", "gaussian")
    if center <= 0:
        raise ValidationError("source.center_wavelength_nm must be positive")
    if bandwidth <= 0:
        raise ValidationError("source.bandwidth_nm must be positive")
    if shape != "gaussian":
        raise ValidationError(f"source.shape must be 'gaussian', got {shape!r}")

    pol_raw = raw.get("polarizers", {})
    if not isinstance(pol_raw, dict):
        raise ValidationError("polarizers must be an object")
    _require_keys(pol_raw, {"p0", "p1", "p2", "p3"}, "polarizers")
    angles = {k: _as_angle(pol_raw.get(k), f"polarizers.{k}") for k in ("p0", "p1", "p2", "p3")}

    convention = raw.get("angle_convention", "physical")
    if convention not in _CONVENTIONS:
        raise ValidationError(
            f"angle_convention must be one of {_CONVENTIONS}, got {convention!r}"
        )
    if convention == "effective":
        # Inverse of the beam-splitter handedness map: the flipped
        # elements (P1, P3) negate; P0 and P2 are already physical.
        for key in ("p1", "p3"):
            if angles[key] is not None:
                angles[key] = (-angles[key]) % 180.0

    blocked = raw.get("blocked_arm")
    if blocked not in (None, 1, 2):
        raise ValidationError(f"blocked_arm must be null, 1 or 2, got {blocked!r}")

    scan_raw = raw.get("scan", {})
    if not isinstance(scan_raw, dict):
        raise ValidationError("scan must be an object")
    _require_keys(scan_raw, {"delay_min_fs", "delay_max_fs", "points"}, "scan")
    delay_min = _as_number(scan_raw.get("delay_min_fs", -60.0), "scan.delay_min_fs")
    delay_max = _as_number(scan_raw.get("delay_max_fs", 60.0), "scan.delay_max_fs")
    points = scan_raw.get("points", 2048)
    if isinstance(points, bool) or not isinstance(points, int):
        raise ValidationError(f"scan.points must be an integer, got {points!r}")
    if points < 2:
        raise ValidationError(f"scan.points must be at least 2, got {points}")
    if not delay_min < delay_max:
        raise ValidationError("scan.delay_min_fs must be below scan.delay_max_fs")

    return InterferometerConfig(
        source=SourceSpec(center, bandwidth, shape),
        polarizers=PolarizerBank(**angles),
        scan=ScanSpec(delay_min, delay_max, points),
        blocked_arm=blocked,
    )


def preset_path(name: str):
    return resources.files("tpami").joinpath("presets", f"{name}.json")


def load_config(path_or_name: str) -> InterferometerConfig:
    """Load a config from a file path or a bundled preset name."""
    if path_or_name in PRESET_NAMES:
        text = preset_path(path_or_name).read_text()
    else:
        with open(path_or_name, "r", encoding="utf-8") as handle:
            text = handle.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed config document: {exc}") from exc
    return config_from_dict(raw)


def make_config(
    *,
    center_wavelength_nm: float = 1550.0,
    bandwidth_nm: float = 30.0,
    p0: float | None = None,
    p1: float | None = None,
    p2: float | None = None,
    p3: float | None = None,
    angle_convention: str = "physical",
    blocked_arm: int | None = None,
    delay_min_fs: float = -60.0,
    delay_max_fs: float = 60.0,
    points: int = 2048,
) -> InterferometerConfig:
    """Programmatic counterpart of `load_config` with the same validation."""
    return config_from_dict(
        {
            "source": {
                "center_wavelength_nm": center_wavelength_nm,
                "bandwidth_nm": bandwidth_nm,
                "shape": "gaussian",
            },
            "polarizers": {"p0": p0, "p1": p1, "p2": p2, "p3": p3},
            "angle_convention": angle_convention,
            "blocked_arm": blocked_arm,
            "scan": {
                "delay_min_fs": delay_min_fs,
                "delay_max_fs": delay_max_fs,
                "points": points,
            },
        }
    )
