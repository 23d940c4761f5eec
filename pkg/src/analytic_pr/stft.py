"""Windowed transform magnitudes, measurement plans, and batch measurement.

The measured quantity at frequency ``k`` and segment ``m`` is::

    y[k, m] = sum_n z[n] * w[(m*shift - n) % N] * exp(-2j*pi*k*n/N)

(the time-domain form; all index arithmetic is circular).  An equivalent
spectral form evaluates the same number from the DFTs of ``z`` and ``w``::

    y[k, m] = (1/N) * sum_l dft(z)[(k+l) % N] * dft(w)[l] * omega^(l*m)

with ``omega = exp(2j*pi*shift/N)``.  Both routes are exposed so they can be
checked against each other; the library measures along the time-domain route.

A *measurement plan* lists which ``(window, k, m)`` magnitudes a recovery
regime consumes: one anchor row (one to four entries depending on the regime)
plus three entries — one per modulation index of the ``m_triple`` — for every
recursion step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .analytic import AnalyticSignal
from .circles import im_ratio
from .core import as_signal, dft
from .errors import CoincidentCenters
from .windows import CASE1, CASE2, CASE3, Window, as_window_list

__all__ = [
    "MTripleCheck",
    "MeasurementPlan",
    "MeasurementSet",
    "PlanEntry",
    "StftParams",
    "measure",
    "measurement_plan",
    "stft_magnitude",
    "stft_magnitude_spectral",
    "suggest_shift",
    "validate_m_triple",
]


def _values(z) -> np.ndarray:
    if isinstance(z, AnalyticSignal):
        return z.signal
    return as_signal(z)


@dataclass(frozen=True)
class MTripleCheck:
    ok: bool
    im_value: float
    reason: str = ""


def validate_m_triple(
    n: int, shift: int, m1: int, m2: int, m3: int, threshold: float = 1e-9
) -> MTripleCheck:
    """Check that three modulation indices give well-separated circle centers.

    The triple passes when the indices are distinct, lie in
    ``[0, ceil(n/shift) - 1]``, and ``|Im((w1 - w2) / (w1 - w3))| >
    threshold`` for the corresponding roots ``wj = omega^mj``.  The imaginary
    part is returned for diagnostics either way.
    """
    if not 0 < shift < n:
        return MTripleCheck(False, float("nan"), f"shift must lie in (0, {n})")
    segments = -(-n // shift)
    if segments < 3:
        return MTripleCheck(
            False, float("nan"), f"only {segments} segments; need at least 3"
        )
    triple = (m1, m2, m3)
    if len(set(triple)) != 3:
        return MTripleCheck(False, float("nan"), f"indices not distinct: {triple}")
    if not all(0 <= m < segments for m in triple):
        return MTripleCheck(
            False, float("nan"), f"indices {triple} outside [0, {segments - 1}]"
        )
    omega = np.exp(2j * np.pi * shift / n)
    try:
        im = im_ratio(omega**m1, omega**m2, omega**m3)
    except CoincidentCenters:
        return MTripleCheck(False, 0.0, "coincident modulation roots")
    if abs(im) <= threshold:
        return MTripleCheck(False, im, f"|im_ratio| = {abs(im):.3e} <= {threshold}")
    return MTripleCheck(True, im)


@dataclass(frozen=True)
class StftParams:
    """Transform geometry: length ``n``, segment hop ``shift``, and the three
    modulation indices used by the recursion measurements."""

    n: int
    shift: int
    m_triple: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "m_triple", tuple(int(m) for m in self.m_triple))
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        check = validate_m_triple(self.n, self.shift, *self.m_triple)
        if not check.ok:
            raise ValueError(f"invalid transform parameters: {check.reason}")

    @property
    def segments(self) -> int:
        """Number of segments, ``ceil(n / shift)``: valid m lie below this."""
        return -(-self.n // self.shift)

    @property
    def modulation_root(self) -> complex:
        """``omega = exp(2j*pi*shift/n)``."""
        return complex(np.exp(2j * np.pi * self.shift / self.n))

    def root_power(self, exponent: int) -> complex:
        """``omega**exponent`` with the angle reduced exactly mod n first."""
        return complex(np.exp(2j * np.pi * ((self.shift * int(exponent)) % self.n) / self.n))

    def root_powers(self, exponents) -> np.ndarray:
        e = np.asarray(exponents, dtype=np.int64)
        return np.exp(2j * np.pi * ((self.shift * e) % self.n) / self.n)


def suggest_shift(n: int) -> int:
    """A well-conditioned default hop: the smallest ``shift`` giving exactly 3
    segments (maximal angular spread of the modulation roots), else 1."""
    for shift in range(1, n):
        if -(-n // shift) == 3:
            return shift
    return 1


class PlanEntry(NamedTuple):
    window: int
    k: int
    m: int


@dataclass(frozen=True)
class MeasurementPlan:
    """Ordered list of the magnitudes one recovery regime consumes."""

    case: str
    n: int
    bandlimit: int
    zero_run_start: int
    entries: tuple[PlanEntry, ...]


@dataclass(frozen=True)
class MeasurementSet:
    """Magnitudes aligned entry-for-entry with their plan."""

    plan: MeasurementPlan
    magnitudes: np.ndarray

    def __post_init__(self):
        if self.magnitudes.shape != (len(self.plan.entries),):
            raise ValueError(
                f"{len(self.plan.entries)} plan entries but "
                f"{self.magnitudes.shape} magnitudes"
            )

    @cached_property
    def _lookup(self) -> dict:
        return {
            tuple(entry): float(mag)
            for entry, mag in zip(self.plan.entries, self.magnitudes)
        }

    def magnitude(self, window: int, k: int, m: int) -> float:
        """Magnitude of plan entry ``(window, k, m)``; KeyError if absent."""
        return self._lookup[(window, k, m)]


def stft_magnitude(z, w: Window, k: int, m: int, params: StftParams) -> float:
    """One magnitude along the time-domain route (the library's reference)."""
    zv = _values(z)
    n = params.n
    if zv.shape[0] != n or w.n != n:
        raise ValueError(
            f"length mismatch: signal {zv.shape[0]}, window {w.n}, params {n}"
        )
    if not 0 <= k < n:
        raise ValueError(f"frequency index {k} outside [0, {n})")
    if not 0 <= m < params.segments:
        raise ValueError(f"segment index {m} outside [0, {params.segments})")
    grid = np.arange(n)
    shifted = w.values[(m * params.shift - grid) % n]
    phase = np.exp((-2j * np.pi * k / n) * grid)
    return float(abs(np.sum(zv * shifted * phase)))


def stft_magnitude_spectral(z, w: Window, k: int, m: int, params: StftParams) -> float:
    """The same magnitude along the spectral route (cross-check formula)."""
    zv = _values(z)
    n = params.n
    if zv.shape[0] != n or w.n != n:
        raise ValueError(
            f"length mismatch: signal {zv.shape[0]}, window {w.n}, params {n}"
        )
    if not 0 <= k < n:
        raise ValueError(f"frequency index {k} outside [0, {n})")
    if not 0 <= m < params.segments:
        raise ValueError(f"segment index {m} outside [0, {params.segments})")
    if isinstance(z, AnalyticSignal):
        zs = z.spectrum
    else:
        zs = dft(zv)
    rolled = np.roll(zs, -k)  # rolled[l] = dft(z)[(k + l) % n]
    mods = params.root_powers(m * np.arange(n))
    return float(abs(np.sum(rolled * w.spectrum * mods)) / n)


def measurement_plan(
    case: str,
    n: int,
    bandlimit: int | None = None,
    zero_run_start: int | None = None,
    params: StftParams | None = None,
) -> MeasurementPlan:
    """Build the deterministic measurement plan of a recovery regime.

    Entry order is consumption order: the anchor row first, then the
    recursion triples from the top frequency downward, each triple in
    ``m_triple`` order.  All frequency indices are reduced mod ``n``.
    """
    if params is None:
        raise ValueError("params is required")
    if params.n != n:
        raise ValueError(f"params built for n = {params.n}, plan asked for {n}")
    half = n // 2
    entries: list[PlanEntry] = []
    if case == CASE1:
        if bandlimit is None or zero_run_start is None:
            raise ValueError("case1 plans need explicit bandlimit and zero_run_start")
        if not 2 <= bandlimit <= (n + 1) // 2:
            raise ValueError(f"bandlimit {bandlimit} outside [2, {(n + 1) // 2}]")
        if not 0 <= zero_run_start < n:
            raise ValueError(f"zero_run_start {zero_run_start} outside [0, {n})")
        band = (zero_run_start + n - bandlimit) % n
        entries.append(PlanEntry(0, (half - band) % n, 0))
        for k0 in range(half, 0, -1):
            entries.extend(
                PlanEntry(0, (k0 - 1 - band) % n, m) for m in params.m_triple
            )
    elif case == CASE2:
        expected_b = (n + 1) // 2 + 1
        if bandlimit is None:
            bandlimit = expected_b
        if bandlimit != expected_b:
            raise ValueError(f"case2 requires bandlimit {expected_b}, got {bandlimit}")
        if zero_run_start is None or not 0 <= zero_run_start < n:
            raise ValueError(f"case2 plans need zero_run_start in [0, {n})")
        entries.extend(
            PlanEntry(s, (1 - zero_run_start) % n, 0) for s in range(4)
        )
        band = (zero_run_start + half - 1) % n
        for k0 in range(half, 1, -1):
            entries.extend(
                PlanEntry(0, (k0 - 1 - band) % n, m) for m in params.m_triple
            )
    elif case == CASE3:
        if n % 2 != 0:
            raise ValueError(f"case3 needs even n, got {n}")
        expected = half + 1
        if bandlimit is None:
            bandlimit = expected
        if zero_run_start is None:
            zero_run_start = expected
        if bandlimit != expected or zero_run_start != expected:
            raise ValueError(
                f"case3 windows are pinned to bandlimit = zero_run_start = {expected}"
            )
        entries.append(PlanEntry(0, half, 0))
        entries.append(PlanEntry(1, half, 0))
        for k0 in range(half, 1, -1):
            entries.extend(PlanEntry(0, k0 - 1, m) for m in params.m_triple)
    else:
        raise ValueError(f"unknown case {case!r}")
    return MeasurementPlan(
        case=case,
        n=n,
        bandlimit=bandlimit,
        zero_run_start=zero_run_start,
        entries=tuple(entries),
    )


def measure(
    z,
    windows,
    plan: MeasurementPlan,
    params: StftParams,
    noise_sigma: float = 0.0,
    rng=None,
) -> MeasurementSet:
    """Evaluate every plan entry on a signal (time-domain route, batched).

    Entries sharing ``(window, m)`` differ only in the frequency index, so
    each group is one windowed product followed by one DFT.  ``noise_sigma``
    adds optional exploratory Gaussian noise to the magnitudes (clipped at
    zero); it is outside every correctness contract, and ``0.0`` leaves the
    magnitudes bit-identical to the noiseless path.
    """
    wlist = as_window_list(windows)
    zv = _values(z)
    n = params.n
    if zv.shape[0] != n:
        raise ValueError(f"signal length {zv.shape[0]} but params.n = {n}")
    for w in wlist:
        if w.n != n:
            raise ValueError(f"window length {w.n} but params.n = {n}")
    highest = max((e.window for e in plan.entries), default=-1)
    if highest >= len(wlist):
        raise ValueError(f"plan references window {highest}, only {len(wlist)} given")

    grid = np.arange(n)
    transforms: dict[tuple[int, int], np.ndarray] = {}
    mags = np.empty(len(plan.entries))
    for pos, entry in enumerate(plan.entries):
        key = (entry.window, entry.m)
        if key not in transforms:
            shifted = wlist[entry.window].values[(entry.m * params.shift - grid) % n]
            transforms[key] = np.abs(np.fft.fft(zv * shifted))
        mags[pos] = transforms[key][entry.k]
    if noise_sigma > 0.0:
        gen = np.random.default_rng(rng)
        mags = np.clip(mags + gen.normal(0.0, noise_sigma, size=mags.shape), 0.0, None)
    return MeasurementSet(plan=plan, magnitudes=mags)
