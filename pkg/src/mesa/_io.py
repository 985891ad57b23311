"""File I/O for the CLI: CSV/binary readers, atomic writers.

All floating-point text output uses 17 significant digits so values
round-trip exactly.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from mesa.core import SpectralDensity, TimeSeries, ValidationError
from mesa.synth import TabulatedPsd


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def atomic_write_text(path, text: str) -> None:
    """Write via a sibling temp file + rename so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_numeric_rows(path) -> list[list[float]]:
    rows = []
    with open(path, "r") as handle:
        for lineno, line in enumerate(handle):
            line = line.strip()
            if not line:
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                if lineno == 0:
                    continue  # header line
                raise ValidationError(f"{path}: unparseable row {lineno + 1}: {line!r}")
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError(f"{path}: inconsistent column count")
    return rows


def read_timeseries(path, dt: float | None = None, binary: bool = False) -> TimeSeries:
    """Load a series from single-column CSV (+dt), two-column time,value CSV,
    or raw little-endian float64 (+dt)."""
    if binary:
        if dt is None:
            raise ValidationError("binary input requires --dt")
        samples = np.fromfile(path, dtype="<f8")
        return TimeSeries(samples=samples, dt=dt)
    rows = _read_numeric_rows(path)
    data = np.asarray(rows, dtype=np.float64)
    if data.shape[1] == 1:
        if dt is None:
            raise ValidationError("single-column input requires --dt")
        return TimeSeries(samples=data[:, 0], dt=dt)
    if data.shape[1] == 2:
        times, values = data[:, 0], data[:, 1]
        spacing = np.diff(times)
        if spacing.size == 0 or spacing[0] <= 0:
            raise ValidationError(f"{path}: time column must be increasing")
        mean_dt = float(np.mean(spacing))
        if np.max(np.abs(spacing - mean_dt)) > 1e-9 * mean_dt:
            raise ValidationError(f"{path}: time column is not uniformly spaced")
        if dt is not None and abs(dt - mean_dt) > 1e-9 * mean_dt:
            raise ValidationError(f"{path}: --dt disagrees with the file's time column")
        return TimeSeries(samples=values, dt=mean_dt)
    raise ValidationError(f"{path}: expected 1 or 2 columns, found {data.shape[1]}")


def write_timeseries_csv(path, ts: TimeSeries) -> None:
    atomic_write_text(path, "\n".join(fmt(v) for v in ts.samples) + "\n")


def read_tabulated_psd(path, interpolation: str = "linear") -> TabulatedPsd:
    rows = _read_numeric_rows(path)
    data = np.asarray(rows, dtype=np.float64)
    if data.shape[1] != 2:
        raise ValidationError(f"{path}: tabulated PSD needs two columns frequency_hz,psd")
    return TabulatedPsd(freqs=data[:, 0], values=data[:, 1], interpolation=interpolation)


def write_psd_csv(path, sd: SpectralDensity) -> None:
    lines = ["frequency_hz,psd"]
    lines += [f"{fmt(f)},{fmt(v)}" for f, v in zip(sd.freqs, sd.values)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def write_jsonl(path, dicts) -> None:
    atomic_write_text(path, "".join(json.dumps(d) + "\n" for d in dicts))
