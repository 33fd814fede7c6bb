"""Scan execution and data emission (CSV / JSON).

CSV traces use the fixed header `delay_fs,g2,background,hbt,omega,
two_omega`; JSON mirrors the same field names.  Floats are written with
17 significant digits so a round trip reproduces them bit-exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import decomposition, engine, spectrum
from .decomposition import ComponentBreakdown
from .oracle import CompareReport, OracleRun

TRACE_HEADER = ("delay_fs", "g2", "background", "hbt", "omega", "two_omega")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


@dataclass(frozen=True)
class ScanTrace:
    """Complete scan result: g2 plus the four class columns per delay.

    g2 is normalized; the class columns are the unnormalized real class
    totals, so their sum equals g2 times the normalization constant.
    """

    delays_fs: np.ndarray
    g2: np.ndarray
    background: np.ndarray
    hbt: np.ndarray
    omega: np.ndarray
    two_omega: np.ndarray
    metadata: dict

    @property
    def delays_s(self) -> np.ndarray:
        return self.delays_fs * 1e-15

    def spectral_model(self) -> spectrum.SpectralModel:
        source = self.metadata["config"]["source"]
        return spectrum.SpectralModel.from_nm(
            source["center_wavelength_nm"], source["bandwidth_nm"], source["shape"]
        )

    def rows(self):
        for values in zip(self.delays_fs, self.g2, self.background,
                          self.hbt, self.omega, self.two_omega):
            yield tuple(float(v) for v in values)


def run_scan(config, preset_name: str | None = None) -> ScanTrace:
    """Evaluate the closed-form trace over the config's delay grid.

    Deterministic and side-effect free; per-delay values are computed
    independently, so any parallel split reproduces this result.
    """
    delays_s = config.scan.delays_s()
    g2 = engine.g2_direct(config, delays_s)
    classes = decomposition.class_traces(config, delays_s)
    metadata = {
        "config": config.to_dict(),
        "library_version": __version__,
        "preset": preset_name,
    }
    return ScanTrace(
        delays_fs=config.scan.delays_fs(),
        g2=np.asarray(g2),
        background=classes["background"],
        hbt=classes["hbt"],
        omega=classes["omega"],
        two_omega=classes["two_omega"],
        metadata=metadata,
    )


def _trace_to_json(trace: ScanTrace) -> dict:
    return {
        "metadata": trace.metadata,
        "rows": [
            dict(zip(TRACE_HEADER, row)) for row in trace.rows()
        ],
    }


def _breakdown_rows(breakdown: ComponentBreakdown):
    for bar in breakdown.per_term_bars:
        yield (bar.label, bar.component, bar.value)


def emit(obj, fmt: str, path) -> None:
    """Serialize a trace, breakdown or oracle report to csv or json."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")

    if isinstance(obj, ScanTrace):
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(TRACE_HEADER)
                for row in obj.rows():
                    writer.writerow([_fmt(v) for v in row])
        else:
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(_trace_to_json(obj), handle, indent=2)
                handle.write("\n")
        return

    if isinstance(obj, ComponentBreakdown):
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(("term", "component", "value"))
                for label, component, value in _breakdown_rows(obj):
                    writer.writerow((label, component, _fmt(value)))
        else:
            payload = {
                "delay_fs": obj.tau_d * 1e15,
                "background": obj.background,
                "hbt": obj.hbt,
                "omega": obj.omega,
                "two_omega": obj.two_omega,
                "bars": [
                    {"term": label, "component": component, "value": value}
                    for label, component, value in _breakdown_rows(obj)
                ],
            }
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, indent=2)
                handle.write("\n")
        return

    if isinstance(obj, OracleRun):
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(("delay_fs", "mc_g2", "std_error"))
                for delay, mean, err in zip(obj.delays_s, obj.means, obj.std_errors):
                    writer.writerow([_fmt(delay * 1e15), _fmt(mean), _fmt(err)])
        else:
            payload = {
                "config_hash": obj.config_hash,
                "master_seed": obj.master_seed,
                "realizations": obj.realizations,
                "rows": [
                    {"delay_fs": float(d * 1e15), "mc_g2": float(m), "std_error": float(s)}
                    for d, m, s in zip(obj.delays_s, obj.means, obj.std_errors)
                ],
            }
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, indent=2)
                handle.write("\n")
        return

    if isinstance(obj, CompareReport):
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(("delay_fs", "mc_g2", "std_error", "direct_g2", "z"))
                for row in obj.to_dict()["rows"]:
                    writer.writerow([_fmt(row[k]) for k in
                                     ("delay_fs", "mc_g2", "std_error", "direct_g2", "z")])
        else:
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(obj.to_dict(), handle, indent=2)
                handle.write("\n")
        return

    raise TypeError(f"cannot emit object of type {type(obj).__name__}")


def read_trace_csv(path) -> ScanTrace:
    """Read back a CSV trace (metadata is not stored in CSV)."""
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = tuple(next(reader))
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header: {header}")
        columns = [[] for _ in TRACE_HEADER]
        for row in reader:
            for column, cell in zip(columns, row):
                column.append(float(cell))
    arrays = [np.asarray(c) for c in columns]
    return ScanTrace(*arrays, metadata={})
