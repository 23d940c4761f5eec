"""Seeded end-to-end trials: draw, measure, recover, score.

Trial ``t`` of a run with master seed ``s`` uses ``base = s + t``; the signal
is drawn with seed ``2*base`` and the window draw (plus optional measurement
noise) with seed ``2*base + 1``, so any individual trial can be replayed in
isolation from its CSV row.  Records are emitted in job order regardless of
how many workers the ``ANALYTIC_PR_THREADS`` environment variable allows, so
reports do not depend on scheduling.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .analytic import sample_generic
from .errors import (
    AllZero,
    AmbiguousBranch,
    CoincidentCenters,
    ConsistencyFailure,
    DegenerateGeometry,
    DegenerateSignal,
    NoBranch,
    NoCommonPoint,
    SingularA0,
)
from .recovery import (
    RecoveryConfig,
    recover_case1,
    recover_case2,
    recover_case3,
    up_to_sign_error,
)
from .stft import StftParams, measure, measurement_plan, suggest_shift
from .windows import (
    CASE1,
    CASE2,
    CASE3,
    make_case1_window,
    make_case2_windows,
    make_case3_windows,
)

__all__ = [
    "THREADS_ENV",
    "ExperimentSpec",
    "TrialRecord",
    "run_experiment",
    "run_trial",
    "summarize",
]

THREADS_ENV = "ANALYTIC_PR_THREADS"

_DEGENERATE = (DegenerateSignal, DegenerateGeometry, CoincidentCenters)
_FAILED = (NoBranch, NoCommonPoint, ConsistencyFailure, SingularA0, AllZero)


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything a run depends on; two equal specs give byte-equal reports
    (wall-clock column aside)."""

    case: str
    n_list: tuple[int, ...]
    trials: int
    seed: int
    bandlimit: int = 3
    zero_run_start: int | None = None
    shift: int | None = None
    m_triple: tuple[int, int, int] = (0, 1, 2)
    noise_sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "m_triple", tuple(int(m) for m in self.m_triple))
        if self.case not in (CASE1, CASE2, CASE3):
            raise ValueError(f"unknown case {self.case!r}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not self.n_list:
            raise ValueError("empty n_list")
        for n in self.n_list:
            if n < 4:
                raise ValueError(f"need n >= 4, got {n}")
            if self.case == CASE3 and n % 2 != 0:
                raise ValueError(f"case3 needs even n, got {n}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_list"] = list(self.n_list)
        d["m_triple"] = list(self.m_triple)
        return d


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    n: int
    case: str
    error: float | None
    status: str
    wall_time_ms: float


def run_trial(
    case: str,
    n: int,
    base_seed: int,
    bandlimit: int = 3,
    zero_run_start: int | None = None,
    shift: int | None = None,
    m_triple: tuple[int, int, int] = (0, 1, 2),
    noise_sigma: float = 0.0,
) -> TrialRecord:
    """One draw-measure-recover round; library errors become statuses.

    Statuses: ``ok`` (with the up-to-sign error), ``degenerate`` (the input
    hit a measure-zero degeneracy), ``ambiguous`` (two anchor branches fit),
    ``failed`` (inconsistent data or singular anchor system).  Anything else
    — a genuine bug — propagates.
    """
    t0 = time.perf_counter()
    status, err = "ok", None
    try:
        signal = sample_generic(n, 2 * base_seed)
        aux_rng = np.random.default_rng(2 * base_seed + 1)
        params = StftParams(
            n=n,
            shift=shift if shift is not None else suggest_shift(n),
            m_triple=m_triple,
        )
        cfg = RecoveryConfig(params=params)
        if case == CASE1:
            i = (
                zero_run_start
                if zero_run_start is not None
                else int(aux_rng.integers(n))
            )
            w = make_case1_window(n, bandlimit, i, aux_rng)
            plan = measurement_plan(CASE1, n, bandlimit, i, params)
            meas = measure(
                signal, w, plan, params, noise_sigma=noise_sigma, rng=aux_rng
            )
            result = recover_case1(meas, w, cfg)
        elif case == CASE2:
            i = (
                zero_run_start
                if zero_run_start is not None
                else int(aux_rng.integers(n))
            )
            ws = make_case2_windows(n, i, aux_rng)
            plan = measurement_plan(CASE2, n, ws.bandlimit, i, params)
            meas = measure(
                signal, ws, plan, params, noise_sigma=noise_sigma, rng=aux_rng
            )
            result = recover_case2(meas, ws, cfg)
        elif case == CASE3:
            ws = make_case3_windows(n, aux_rng)
            plan = measurement_plan(CASE3, n, params=params)
            meas = measure(
                signal, ws, plan, params, noise_sigma=noise_sigma, rng=aux_rng
            )
            result = recover_case3(meas, ws, cfg)
        else:
            raise ValueError(f"unknown case {case!r}")
        err = up_to_sign_error(result.signal, signal.signal)
    except _DEGENERATE:
        status = "degenerate"
    except AmbiguousBranch:
        status = "ambiguous"
    except _FAILED:
        status = "failed"
    wall_ms = (time.perf_counter() - t0) * 1e3
    return TrialRecord(
        seed=base_seed, n=n, case=case, error=err, status=status,
        wall_time_ms=wall_ms,
    )


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def measurement_count(case: str, n: int) -> int:
    """Number of magnitudes each regime's plan consumes."""
    half = n // 2
    if case in (CASE1, CASE2):
        return 3 * half + 1
    if case == CASE3:
        return 3 * half - 1
    raise ValueError(f"unknown case {case!r}")


def run_experiment(spec: ExperimentSpec) -> tuple[list[TrialRecord], dict]:
    """Run every (n, trial) cell of a spec; returns records plus a summary."""
    jobs = [
        (n, spec.seed + t) for n in spec.n_list for t in range(spec.trials)
    ]

    def one(job: tuple[int, int]) -> TrialRecord:
        n, base = job
        return run_trial(
            spec.case,
            n,
            base,
            bandlimit=spec.bandlimit,
            zero_run_start=spec.zero_run_start,
            shift=spec.shift,
            m_triple=spec.m_triple,
            noise_sigma=spec.noise_sigma,
        )

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, jobs))
    else:
        records = [one(job) for job in jobs]
    return records, summarize(spec, records)


def summarize(spec: ExperimentSpec, records: list[TrialRecord]) -> dict:
    """Per-cell success rates and error medians; no timing fields, so equal
    specs give byte-equal summaries."""
    cells = []
    for n in spec.n_list:
        cell = [r for r in records if r.n == n]
        ok_errors = [r.error for r in cell if r.status == "ok" and r.error is not None]
        counts: dict[str, int] = {}
        for r in cell:
            counts[r.status] = counts.get(r.status, 0) + 1
        cells.append(
            {
                "case": spec.case,
                "n": n,
                "trials": len(cell),
                "measurement_count": measurement_count(spec.case, n),
                "success_rate": len(ok_errors) / len(cell) if cell else 0.0,
                "median_error": float(np.median(ok_errors)) if ok_errors else None,
                "status_counts": dict(sorted(counts.items())),
            }
        )
    return {"spec": spec.to_dict(), "cells": cells}
