"""Window construction and validation for the three measurement regimes.

A window is stored through its DFT coefficients (the spectrum is the source
of truth; time-domain values are derived on demand).  A window is
``B``-bandlimited when its spectrum has ``n - B`` consecutive zeros in the
circular sense, starting at ``zero_run_start``; the complementary ``B``
indices form the *band* and ``band_start`` is its first index.

Regimes
-------
``case1``
    One window, bandlimit ``2 <= B <= ceil(n/2)``, with the first two band
    entries nonzero.
``case2``
    Four windows sharing bandlimit ``ceil(n/2) + 1`` and the same zero run.
    The two outermost band entries of window 1 (the *key pair*) are raised to
    the powers s = 2, 3, 4 to form the other windows' key pairs, which makes
    the 4x4 anchor system a scaled Vandermonde matrix.
``case3``
    Two analytic windows (even ``n``), equivalently ``(n/2 + 1)``-bandlimited
    windows whose band starts at index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .analytic import is_analytic
from .core import as_signal, idft
from .errors import AllZero

__all__ = [
    "A0Matrix",
    "CASE1",
    "CASE2",
    "CASE3",
    "CheckResult",
    "ValidationReport",
    "Window",
    "WindowSet",
    "as_window_list",
    "bandlimit_profile",
    "build_A0",
    "make_case1_window",
    "make_case2_windows",
    "make_case3_windows",
    "validate_for_case",
]

CASE1 = "case1"
CASE2 = "case2"
CASE3 = "case3"
ALL_CASES = (CASE1, CASE2, CASE3)

# |coefficient| <= ZERO_TOL * sup-norm counts as zero everywhere below.
ZERO_TOL = 1e-10
# Construction-time margin for entries that some hypothesis requires nonzero.
KEY_MARGIN = 0.1
# Construction-time margin for distinctness-type hypotheses.
SEP_MARGIN = 0.05
# Condition-number budget for the four-window anchor system.
A0_COND_LIMIT = 1e6
_MAX_DRAWS = 500

# Band-shape ranges used by the random constructors.  The recovery recursion
# divides by the leading band entry once per step, so the leading (and, where
# an anchor system needs it, the trailing) modulus is kept near 1 while the
# interior moduli decay geometrically; that stops estimation error from
# compounding over the ~n/2 recursion steps.
_LEAD_MODULUS = (0.85, 1.0)
_KEY_MODULUS = (0.6, 0.85)
_INTERIOR_MODULUS = (0.35, 0.6)
_INTERIOR_DECAY = 0.55


@dataclass(frozen=True)
class Window:
    """A single window, described by its spectrum plus regime metadata."""

    spectrum: np.ndarray
    bandlimit: int
    zero_run_start: int
    case: str

    @property
    def n(self) -> int:
        return self.spectrum.shape[0]

    @property
    def band_start(self) -> int:
        """First spectral index of the band (just past the zero run)."""
        return (self.zero_run_start + self.n - self.bandlimit) % self.n

    @cached_property
    def values(self) -> np.ndarray:
        """Time-domain samples, derived from the spectrum on first use."""
        return idft(self.spectrum)

    def band_entry(self, offset: int) -> complex:
        """Spectrum entry at ``band_start + offset`` (mod n)."""
        return complex(self.spectrum[(self.band_start + offset) % self.n])


@dataclass(frozen=True)
class WindowSet:
    """Windows sharing one regime, bandlimit, and zero run."""

    windows: tuple[Window, ...]
    case: str
    bandlimit: int
    zero_run_start: int

    @property
    def n(self) -> int:
        return self.windows[0].n


@dataclass(frozen=True)
class A0Matrix:
    """The 4x4 anchor system of the four-window regime, with its conditioning."""

    matrix: np.ndarray
    cond: float


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_for_case`: diagnostics, not exceptions."""

    case: str
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            detail = f": {c.detail}" if c.detail else ""
            lines.append(f"[{mark}] {c.name}{detail}")
        return "\n".join(lines)


def as_window_list(obj) -> list[Window]:
    """Normalize a Window / WindowSet / sequence of Windows to a plain list."""
    if isinstance(obj, Window):
        return [obj]
    if isinstance(obj, WindowSet):
        return list(obj.windows)
    return list(obj)


def bandlimit_profile(spectrum, tol: float = ZERO_TOL) -> tuple[int, int]:
    """Detect ``(B, zero_run_start)`` from a spectrum.

    Finds the longest circular run of entries with ``|c| <= tol * sup`` and
    returns ``(n - run_length, run_start)``; ties go to the smallest starting
    index.  A spectrum with no zero entry reports ``(n, 0)``.

    Raises
    ------
    AllZero
        If every entry is below the tolerance.
    """
    coeffs = as_signal(spectrum)
    n = coeffs.shape[0]
    sup = float(np.max(np.abs(coeffs)))
    flags = np.abs(coeffs) <= tol * sup
    if flags.all():
        raise AllZero("every spectral entry is below the zero tolerance")
    if not flags.any():
        return n, 0
    best_len, best_start = 0, 0
    for s in range(n):
        if flags[s] and not flags[(s - 1) % n]:
            length = 1
            while flags[(s + length) % n]:
                length += 1
            if length > best_len:
                best_len, best_start = length, s
    return n - best_len, best_start


def _band_values(rng: np.random.Generator, count: int) -> np.ndarray:
    """Random complex values with modulus in [0.3, 1] (comfortably nonzero)."""
    moduli = rng.uniform(0.3, 1.0, size=count)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return moduli * np.exp(1j * phases)


def _shaped_band(rng: np.random.Generator, count: int) -> np.ndarray:
    """Random band values whose leading entry dominates a decaying interior."""
    moduli = np.empty(count)
    moduli[0] = rng.uniform(*_LEAD_MODULUS)
    if count > 1:
        base = rng.uniform(*_INTERIOR_MODULUS, size=count - 1)
        moduli[1:] = base * _INTERIOR_DECAY ** np.arange(count - 1)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return moduli * np.exp(1j * phases)


def _place_band(n: int, band_start: int, band: np.ndarray) -> np.ndarray:
    spectrum = np.zeros(n, dtype=np.complex128)
    idx = (band_start + np.arange(band.shape[0])) % n
    spectrum[idx] = band
    return spectrum


def make_case1_window(n: int, bandlimit: int, zero_run_start: int, seed=None) -> Window:
    """Draw a random valid single-window (``case1``) instance.

    The leading band entry dominates a geometrically decaying interior (see
    the band-shape constants), so the two hypothesis-critical entries (band
    offsets 0 and 1) clear the 0.1 margin by construction and the recovery
    recursion stays numerically contractive.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if not 2 <= bandlimit <= (n + 1) // 2:
        raise ValueError(
            f"bandlimit must lie in [2, ceil(n/2)] = [2, {(n + 1) // 2}], got {bandlimit}"
        )
    if not 0 <= zero_run_start < n:
        raise ValueError(f"zero_run_start must lie in [0, {n}), got {zero_run_start}")
    rng = np.random.default_rng(seed)
    band_start = (zero_run_start + n - bandlimit) % n
    band = _shaped_band(rng, bandlimit)
    band /= np.max(np.abs(band))
    w = Window(
        spectrum=_place_band(n, band_start, band),
        bandlimit=bandlimit,
        zero_run_start=zero_run_start,
        case=CASE1,
    )
    assert abs(w.band_entry(0)) >= KEY_MARGIN and abs(w.band_entry(1)) >= KEY_MARGIN
    return w


def make_case2_windows(n: int, zero_run_start: int, seed=None) -> WindowSet:
    """Draw a random valid four-window (``case2``) set.

    Window 1 is redrawn until its key pair ``(a, b)`` (band offsets 0 and
    ``B - 1``) is well separated: ``|a - b|``, ``||a| - |b||`` and
    ``|Im(a * conj(b))|`` all clear their margins, which keeps the Vandermonde
    nodes of the anchor system apart.  Windows 2-4 copy window 1's zero run,
    take key pairs ``(a^s, b^s)`` and random nonzero filler in between.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if not 0 <= zero_run_start < n:
        raise ValueError(f"zero_run_start must lie in [0, {n}), got {zero_run_start}")
    rng = np.random.default_rng(seed)
    bandlimit = (n + 1) // 2 + 1
    band_start = (zero_run_start + n - bandlimit) % n

    for _ in range(_MAX_DRAWS):
        band1 = _shaped_band(rng, bandlimit)
        band1[-1] = rng.uniform(*_KEY_MODULUS) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        band1 /= np.max(np.abs(band1))
        a, b = band1[0], band1[-1]
        if abs(a - b) < KEY_MARGIN:
            continue
        if abs(abs(a) - abs(b)) < SEP_MARGIN:
            continue
        if abs((a * np.conj(b)).imag) < SEP_MARGIN:
            continue
        bands = [band1]
        for s in (2, 3, 4):
            band_s = _band_values(rng, bandlimit)
            band_s[0] = a**s
            band_s[-1] = b**s
            bands.append(band_s)
        windows = tuple(
            Window(
                spectrum=_place_band(n, band_start, band),
                bandlimit=bandlimit,
                zero_run_start=zero_run_start,
                case=CASE2,
            )
            for band in bands
        )
        ws = WindowSet(
            windows=windows,
            case=CASE2,
            bandlimit=bandlimit,
            zero_run_start=zero_run_start,
        )
        if build_A0(ws).cond <= A0_COND_LIMIT:
            return ws
    raise RuntimeError(f"no acceptable four-window draw after {_MAX_DRAWS} tries")


def make_case3_windows(n: int, seed=None) -> WindowSet:
    """Draw a random valid analytic-pair (``case3``) set for even ``n``.

    Both windows are analytic by construction (spectrum supported on
    ``0..n/2`` with real endpoints), i.e. ``(n/2 + 1)``-bandlimited with the
    band starting at index 0.  The pair is redrawn until the 2x2 anchor
    determinant ``w1[0]*w2[n/2] - w2[0]*w1[n/2]`` clears its margin.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"need even n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    half = n // 2
    bandlimit = half + 1
    zero_run_start = half + 1

    def draw() -> np.ndarray:
        band = _shaped_band(rng, bandlimit)
        signs = rng.choice([-1.0, 1.0], size=2)
        band[0] = signs[0] * abs(band[0])
        band[-1] = signs[1] * rng.uniform(*_KEY_MODULUS)
        band /= np.max(np.abs(band))
        return _place_band(n, 0, band)

    for _ in range(_MAX_DRAWS):
        s1, s2 = draw(), draw()
        a1, b1 = s1[0].real, s1[half].real
        a2, b2 = s2[0].real, s2[half].real
        det = a1 * b2 - a2 * b1
        scale = max(abs(a1 * b2), abs(a2 * b1))
        if abs(det) < KEY_MARGIN * scale:
            continue
        windows = tuple(
            Window(
                spectrum=s,
                bandlimit=bandlimit,
                zero_run_start=zero_run_start,
                case=CASE3,
            )
            for s in (s1, s2)
        )
        return WindowSet(
            windows=windows,
            case=CASE3,
            bandlimit=bandlimit,
            zero_run_start=zero_run_start,
        )
    raise RuntimeError(f"no acceptable window pair after {_MAX_DRAWS} tries")


def _key_indices(ws: WindowSet) -> tuple[int, int]:
    """Spectral indices of the anchor key pair: band start and band end."""
    n = ws.n
    p = (ws.zero_run_start + n // 2 - 1) % n
    q = (ws.zero_run_start - 1) % n
    return p, q


def build_A0(ws: WindowSet) -> A0Matrix:
    """Assemble the 4x4 anchor system of a four-window set.

    Row s holds ``(|a_s|^2, a_s*conj(b_s), conj(a_s)*b_s, |b_s|^2)`` where
    ``(a_s, b_s)`` is window s's key pair.
    """
    if len(ws.windows) != 4:
        raise ValueError(f"need exactly 4 windows, got {len(ws.windows)}")
    p, q = _key_indices(ws)
    rows = []
    for w in ws.windows:
        a, b = w.spectrum[p], w.spectrum[q]
        rows.append(
            [abs(a) ** 2, a * np.conj(b), np.conj(a) * b, abs(b) ** 2]
        )
    matrix = np.array(rows, dtype=np.complex128)
    return A0Matrix(matrix=matrix, cond=float(np.linalg.cond(matrix)))


def _nonzero(coeff: complex, sup: float) -> bool:
    return abs(coeff) > ZERO_TOL * sup


def _zero_run_check(w: Window) -> CheckResult:
    n = w.n
    run_len = n - w.bandlimit
    idx = (w.zero_run_start + np.arange(run_len)) % n
    sup = float(np.max(np.abs(w.spectrum)))
    worst = float(np.max(np.abs(w.spectrum[idx]))) if run_len else 0.0
    return CheckResult(
        name="zero_run",
        passed=worst <= ZERO_TOL * sup,
        detail=f"largest coefficient inside the declared zero run: {worst:.3e}",
    )


def _validate_case1(w: Window) -> ValidationReport:
    n = w.n
    sup = float(np.max(np.abs(w.spectrum)))
    checks = [
        CheckResult(
            name="bandlimit_range",
            passed=2 <= w.bandlimit <= (n + 1) // 2,
            detail=f"B = {w.bandlimit}, allowed [2, {(n + 1) // 2}]",
        ),
        _zero_run_check(w),
        CheckResult(
            name="band_start_nonzero",
            passed=_nonzero(w.band_entry(0), sup),
            detail=f"|w^[{w.band_start}]| = {abs(w.band_entry(0)):.3e}",
        ),
        CheckResult(
            name="recursion_entry_nonzero",
            passed=_nonzero(w.band_entry(1), sup),
            detail=(
                f"|w^[{(w.band_start + 1) % n}]| = {abs(w.band_entry(1)):.3e}"
                if _nonzero(w.band_entry(1), sup)
                else "underdetermined recursion: the band entry after the "
                "leading one vanishes"
            ),
        ),
    ]
    return ValidationReport(case=CASE1, checks=tuple(checks))


def _validate_case2(ws: WindowSet) -> ValidationReport:
    n = ws.n
    checks = [
        CheckResult(
            name="window_count",
            passed=len(ws.windows) == 4,
            detail=f"got {len(ws.windows)}",
        )
    ]
    expected_b = (n + 1) // 2 + 1
    checks.append(
        CheckResult(
            name="bandlimit_value",
            passed=ws.bandlimit == expected_b
            and all(w.bandlimit == expected_b for w in ws.windows),
            detail=f"B = {ws.bandlimit}, required {expected_b}",
        )
    )
    checks.append(
        CheckResult(
            name="shared_zero_run",
            passed=all(w.zero_run_start == ws.zero_run_start for w in ws.windows),
            detail=f"declared start {ws.zero_run_start}",
        )
    )
    for s, w in enumerate(ws.windows, start=1):
        zr = _zero_run_check(w)
        checks.append(CheckResult(f"zero_run_w{s}", zr.passed, zr.detail))
    p, q = _key_indices(ws)
    for s, w in enumerate(ws.windows, start=1):
        sup = float(np.max(np.abs(w.spectrum)))
        checks.append(
            CheckResult(
                name=f"key_pair_nonzero_w{s}",
                passed=_nonzero(w.spectrum[p], sup) and _nonzero(w.spectrum[q], sup),
                detail=f"|w^[{p}]| = {abs(w.spectrum[p]):.3e}, "
                f"|w^[{q}]| = {abs(w.spectrum[q]):.3e}",
            )
        )
    w1 = ws.windows[0]
    sup1 = float(np.max(np.abs(w1.spectrum)))
    second = w1.spectrum[(p + 1) % n]
    checks.append(
        CheckResult(
            name="recursion_entry_nonzero",
            passed=_nonzero(second, sup1),
            detail=(
                f"|w1^[{(p + 1) % n}]| = {abs(second):.3e}"
                if _nonzero(second, sup1)
                else "underdetermined recursion: window 1's band entry after "
                "the leading one vanishes"
            ),
        )
    )
    if len(ws.windows) == 4:
        cond = build_A0(ws).cond
        checks.append(
            CheckResult(
                name="anchor_system_invertible",
                passed=cond <= 1e8,
                detail=f"cond(A0) = {cond:.3e}",
            )
        )
    return ValidationReport(case=CASE2, checks=tuple(checks))


def _validate_case3(ws: WindowSet) -> ValidationReport:
    n = ws.n
    half = n // 2
    checks = [
        CheckResult(
            name="window_count",
            passed=len(ws.windows) == 2,
            detail=f"got {len(ws.windows)}",
        ),
        CheckResult(name="even_length", passed=n % 2 == 0, detail=f"n = {n}"),
    ]
    for s, w in enumerate(ws.windows, start=1):
        checks.append(
            CheckResult(
                name=f"analytic_w{s}",
                passed=is_analytic(idft(w.spectrum), tol=ZERO_TOL),
                detail="spectrum must live on indices 0..n/2 with real endpoints",
            )
        )
    w1, w2 = ws.windows[0], ws.windows[1]
    sup1 = float(np.max(np.abs(w1.spectrum)))
    sup2 = float(np.max(np.abs(w2.spectrum)))
    checks.append(
        CheckResult(
            name="w1_leading_entries_nonzero",
            passed=_nonzero(w1.spectrum[0], sup1) and _nonzero(w1.spectrum[1], sup1),
            detail=f"|w1^[0]| = {abs(w1.spectrum[0]):.3e}, "
            f"|w1^[1]| = {abs(w1.spectrum[1]):.3e}",
        )
    )
    checks.append(
        CheckResult(
            name="fold_entries_nonzero",
            passed=_nonzero(w1.spectrum[half], sup1)
            and _nonzero(w2.spectrum[half], sup2),
            detail=f"|w1^[{half}]| = {abs(w1.spectrum[half]):.3e}, "
            f"|w2^[{half}]| = {abs(w2.spectrum[half]):.3e}",
        )
    )
    a1, b1 = w1.spectrum[0].real, w1.spectrum[half].real
    a2, b2 = w2.spectrum[0].real, w2.spectrum[half].real
    det = a1 * b2 - a2 * b1
    scale = max(abs(a1 * b2), abs(a2 * b1), np.finfo(float).tiny)
    checks.append(
        CheckResult(
            name="independent_pair",
            passed=abs(det) > ZERO_TOL * scale,
            detail=f"|w1^[0]*w2^[{half}] - w2^[0]*w1^[{half}]| = {abs(det):.3e}",
        )
    )
    return ValidationReport(case=CASE3, checks=tuple(checks))


def validate_for_case(obj, case: str | None = None) -> ValidationReport:
    """Check a Window / WindowSet against its regime's hypotheses.

    Returns diagnostics (never raises on a bad window): a
    :class:`ValidationReport` whose ``ok`` is True exactly when every named
    hypothesis holds.  ``case`` defaults to the object's own tag.
    """
    if case is None:
        case = obj.case
    if case not in ALL_CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {ALL_CASES}")
    if case == CASE1:
        w = obj if isinstance(obj, Window) else as_window_list(obj)[0]
        return _validate_case1(w)
    if not isinstance(obj, WindowSet):
        raise ValueError(f"{case} validation needs a WindowSet, got {type(obj)!r}")
    if case == CASE2:
        return _validate_case2(obj)
    return _validate_case3(obj)
