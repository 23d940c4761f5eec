"""Readers and writers for every on-disk artifact.

Vector payloads share one shape: ``{"n": int, "re": [...], "im": [...]}``.
Signal files hold time-domain samples.  Window files hold DFT coefficients
(the spectrum is the windows' source of truth) plus the regime metadata
``bandlimit`` / ``zero_run_start`` / ``case``; a window-set file nests one
entry per window.  Measurement files are CSV with header
``window,k,m,magnitude`` (or an equivalent JSON form), trial reports are CSV
with header ``seed,n,case,error,status,wall_time_ms``.

Writers are deterministic: equal in-memory objects produce byte-equal files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import as_signal
from .recovery import RecoveryResult
from .stft import MeasurementPlan, MeasurementSet, PlanEntry
from .windows import Window, WindowSet

__all__ = [
    "MEASUREMENT_HEADER",
    "TRIAL_HEADER",
    "attach_plan",
    "read_measurement_rows",
    "read_signal",
    "read_windows",
    "write_json",
    "write_measurements",
    "write_recovery_result",
    "write_signal",
    "write_summary",
    "write_trials_csv",
    "write_windows",
]

MEASUREMENT_HEADER = ("window", "k", "m", "magnitude")
TRIAL_HEADER = ("seed", "n", "case", "error", "status", "wall_time_ms")


def _vector_fields(z: np.ndarray) -> dict:
    return {
        "n": int(z.shape[0]),
        "re": [float(v) for v in z.real],
        "im": [float(v) for v in z.imag],
    }


def _vector_from_fields(d: dict) -> np.ndarray:
    z = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    if z.shape[0] != d["n"]:
        raise ValueError(f"declared n = {d['n']} but {z.shape[0]} entries")
    return z


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_signal(path, z) -> None:
    write_json(path, _vector_fields(as_signal(z)))


def read_signal(path) -> np.ndarray:
    return _vector_from_fields(_read_json(path))


def _window_payload(w: Window) -> dict:
    payload = _vector_fields(w.spectrum)
    payload["bandlimit"] = int(w.bandlimit)
    payload["zero_run_start"] = int(w.zero_run_start)
    payload["case"] = w.case
    return payload


def _window_from_payload(d: dict) -> Window:
    return Window(
        spectrum=_vector_from_fields(d),
        bandlimit=int(d["bandlimit"]),
        zero_run_start=int(d["zero_run_start"]),
        case=d["case"],
    )


def write_windows(path, obj) -> None:
    """Write a single Window or a WindowSet (distinguished on read by the
    presence of a ``windows`` list)."""
    if isinstance(obj, Window):
        write_json(path, _window_payload(obj))
        return
    payload = {
        "case": obj.case,
        "n": obj.n,
        "bandlimit": int(obj.bandlimit),
        "zero_run_start": int(obj.zero_run_start),
        "windows": [_window_payload(w) for w in obj.windows],
    }
    write_json(path, payload)


def read_windows(path):
    d = _read_json(path)
    if "windows" in d:
        return WindowSet(
            windows=tuple(_window_from_payload(wd) for wd in d["windows"]),
            case=d["case"],
            bandlimit=int(d["bandlimit"]),
            zero_run_start=int(d["zero_run_start"]),
        )
    return _window_from_payload(d)


def write_measurements(path, ms: MeasurementSet, fmt: str = "csv") -> None:
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(MEASUREMENT_HEADER)
            for entry, mag in zip(ms.plan.entries, ms.magnitudes):
                writer.writerow([entry.window, entry.k, entry.m, repr(float(mag))])
        return
    if fmt == "json":
        payload = {
            "case": ms.plan.case,
            "n": ms.plan.n,
            "bandlimit": ms.plan.bandlimit,
            "zero_run_start": ms.plan.zero_run_start,
            "measurements": [
                {
                    "window": entry.window,
                    "k": entry.k,
                    "m": entry.m,
                    "magnitude": float(mag),
                }
                for entry, mag in zip(ms.plan.entries, ms.magnitudes)
            ],
        }
        write_json(path, payload)
        return
    raise ValueError(f"unknown measurement format {fmt!r}")


def read_measurement_rows(path) -> tuple[list[PlanEntry], np.ndarray]:
    """Read measurement rows (CSV or JSON) in file order.

    The plan metadata is not trusted from the file; callers rebuild the
    expected plan from the window file and parameters, then check the rows
    against it via :func:`attach_plan`.
    """
    p = Path(path)
    entries: list[PlanEntry] = []
    mags: list[float] = []
    if p.suffix.lower() == ".json":
        d = _read_json(p)
        for row in d["measurements"]:
            entries.append(
                PlanEntry(int(row["window"]), int(row["k"]), int(row["m"]))
            )
            mags.append(float(row["magnitude"]))
    else:
        with open(p, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader))
            if header != MEASUREMENT_HEADER:
                raise ValueError(
                    f"unexpected measurement header {header!r}; "
                    f"expected {MEASUREMENT_HEADER!r}"
                )
            for row in reader:
                if not row:
                    continue
                entries.append(PlanEntry(int(row[0]), int(row[1]), int(row[2])))
                mags.append(float(row[3]))
    return entries, np.asarray(mags, dtype=float)


def attach_plan(
    entries: list[PlanEntry], magnitudes: np.ndarray, plan: MeasurementPlan
) -> MeasurementSet:
    """Bind file rows to an expected plan, insisting on an exact entry match."""
    if tuple(entries) != plan.entries:
        raise ValueError(
            "measurement rows do not match the expected plan "
            f"({len(entries)} rows vs {len(plan.entries)} planned entries)"
        )
    return MeasurementSet(plan=plan, magnitudes=magnitudes)


def write_recovery_result(path, result: RecoveryResult) -> None:
    payload = _vector_fields(result.signal)
    payload["ambiguity"] = result.ambiguity
    payload["case"] = result.case
    payload["step_residuals"] = [float(r) for r in result.step_residuals]
    write_json(path, payload)


def write_trials_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.seed,
                    r.n,
                    r.case,
                    "" if r.error is None else repr(float(r.error)),
                    r.status,
                    f"{r.wall_time_ms:.3f}",
                ]
            )


def write_summary(path, summary: dict) -> None:
    write_json(path, summary)
