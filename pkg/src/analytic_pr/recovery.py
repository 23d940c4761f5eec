"""Recover an analytic signal, up to global sign, from planned magnitudes.

All three regimes share one engine: the spectrum is rebuilt coefficient by
coefficient from the top frequency ``floor(n/2)`` downward.  At step ``k0``
the already-known tail coefficients turn the three magnitudes measured at the
``m_triple`` modulations into a three-circle system whose unique intersection
is the next coefficient down.  The regimes differ only in how the recursion
is seeded:

``case1``
    One anchor magnitude fixes ``|z^[floor(n/2)]|``; the free sign (even
    ``n``) or phase (odd ``n``, repaired at the end by rotating coefficient 0
    onto the real axis) is the global ambiguity.
``case2``
    Four anchor magnitudes feed a 4x4 linear system whose unknowns are the
    quadratic monomials of ``z^[0]`` and ``z^[floor(n/2)]``; splitting the
    monomials fixes both coefficients at once, up to global sign.
``case3``
    Two anchor magnitudes give a 2x2 linear system with one unknown relative
    sign; both sign branches are tried and the three-circle residual of the
    first recursion step rejects the wrong one.

Estimates inherit a global sign ambiguity from the magnitudes themselves:
``canonicalize`` maps the two representatives onto a single conventional one,
and ``up_to_sign_error`` scores estimates modulo the ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticSignal
from .circles import CircleSystem, residual, solve_three_circles
from .core import as_signal, idft
from .errors import (
    AmbiguousBranch,
    CoincidentCenters,
    ConsistencyFailure,
    DegenerateGeometry,
    DegenerateSignal,
    InvalidWindow,
    NoBranch,
    NoCommonPoint,
    SingularA0,
)
from .stft import MeasurementSet, StftParams, measure, measurement_plan
from .windows import (
    CASE1,
    CASE2,
    CASE3,
    Window,
    WindowSet,
    as_window_list,
    build_A0,
    validate_for_case,
)

__all__ = [
    "RecoveryConfig",
    "RecoveryResult",
    "canonicalize",
    "recover",
    "recover_case1",
    "recover_case2",
    "recover_case3",
    "recursion_step",
    "up_to_sign_error",
]


@dataclass(frozen=True)
class RecoveryConfig:
    """Transform geometry plus every tolerance the recursion consults.

    ``tol_step`` gates each three-circle solve: a step residual above
    ``tol_step`` times the step's scale means the magnitudes are grossly
    inconsistent.  ``tol_residual`` is the final acceptance: the finished
    estimate must reproduce every planned magnitude to ``tol_residual`` times
    the largest one.  ``refine_steps`` Gauss-Newton sweeps over the full
    magnitude system polish the sequentially-built estimate (0 disables).
    ``branch_policy`` (case3 only): ``"strict"`` raises AmbiguousBranch when
    both sign branches survive the residual test, ``"best"`` keeps the branch
    with the smaller residual.
    """

    params: StftParams
    tol_degenerate: float = 1e-9
    tol_residual: float = 1e-6
    tol_step: float = 1e-2
    tol_zero: float = 1e-12
    tol_consistency: float = 1e-6
    a0_max_cond: float = 1e8
    refine_steps: int = 3
    branch_policy: str = "strict"

    def __post_init__(self):
        if self.branch_policy not in ("strict", "best"):
            raise ValueError(f"unknown branch policy {self.branch_policy!r}")
        for name in (
            "tol_degenerate",
            "tol_residual",
            "tol_step",
            "tol_zero",
            "tol_consistency",
            "a0_max_cond",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be >= 0")


@dataclass(frozen=True)
class RecoveryResult:
    """An estimate (spectrum and signal views of the same vector) plus
    per-step three-circle residual diagnostics."""

    spectrum: np.ndarray
    signal: np.ndarray
    case: str
    step_residuals: tuple[float, ...]
    ambiguity: str = "global_sign"


def _sig_values(z) -> np.ndarray:
    if isinstance(z, AnalyticSignal):
        return z.signal
    return as_signal(z)


def _step(
    est: np.ndarray,
    k0: int,
    w: Window,
    cfg: RecoveryConfig,
    triple_mags,
    solver_tol: float | None = None,
) -> tuple[complex, float]:
    """One recursion step: solve for coefficient ``k0 - 1`` given the tail.

    Reads ``est[k0 .. floor(n/2)]``, never anything below ``k0`` (coefficient
    0, known early in some regimes, stays out of the sums by construction).
    ``solver_tol`` overrides ``cfg.tol_step`` for the circle solve (the
    case3 branch test discriminates with a much tighter one).
    """
    params = cfg.params
    n = w.n
    half = n // 2
    band = w.band_start
    lead = complex(w.spectrum[band])
    offsets = np.arange(1, half - k0 + 2)
    wvals = w.spectrum[(band + offsets) % n]
    tail = est[k0 - 1 + offsets]

    centers = []
    radii = []
    for m, mag in zip(params.m_triple, triple_mags):
        num = np.sum(tail * wvals * params.root_powers((band + offsets) * m))
        den = lead * params.root_power(band * m)
        centers.append(complex(num / den))
        radii.append(n * float(mag) / abs(lead))

    scale = max(max(abs(c) for c in centers), max(radii))
    if scale == 0.0:
        raise DegenerateSignal(f"step {k0}: all centers and radii vanish")
    for a in range(3):
        for b in range(a + 1, 3):
            if abs(centers[a] - centers[b]) <= cfg.tol_degenerate * scale:
                raise DegenerateSignal(
                    f"step {k0}: modulated centers {a + 1} and {b + 1} nearly coincide"
                )
    sys = CircleSystem(centers=tuple(centers), radii=tuple(radii))
    try:
        z = solve_three_circles(
            sys,
            tol=cfg.tol_step if solver_tol is None else solver_tol,
            tol_degenerate=cfg.tol_degenerate,
        )
    except (DegenerateGeometry, CoincidentCenters) as exc:
        raise DegenerateSignal(f"step {k0}: {exc}") from exc
    return z, residual(z, sys)


def recursion_step(
    k0: int, known_tail, triple_mags, w: Window, cfg: RecoveryConfig
) -> complex:
    """Solve one recursion step in isolation.

    ``known_tail`` is a length-``n`` vector whose entries ``k0 ..
    floor(n/2)`` hold the already-recovered coefficients (other entries are
    ignored).  Returns coefficient ``k0 - 1``.
    """
    n = w.n
    if not 1 <= k0 <= n // 2:
        raise ValueError(f"step index {k0} outside [1, {n // 2}]")
    tail = as_signal(known_tail)
    if tail.shape[0] != n:
        raise ValueError(f"tail has length {tail.shape[0]}, window has {n}")
    z, _ = _step(tail, k0, w, cfg, tuple(triple_mags))
    return z


def _require_valid(obj, case: str) -> None:
    report = validate_for_case(obj, case)
    if not report.ok:
        raise InvalidWindow(
            f"window rejected for {case}:\n{report.summary()}", report
        )


def _require_matching_plan(
    meas: MeasurementSet, case: str, n: int, bandlimit: int, zero_run_start: int,
    params: StftParams,
) -> None:
    expected = measurement_plan(case, n, bandlimit, zero_run_start, params)
    if meas.plan.entries != expected.entries:
        raise ValueError(
            f"measurement set does not follow the {case} plan for this window "
            f"(n={n}, B={bandlimit}, i={zero_run_start})"
        )


def _measurement_scale(meas: MeasurementSet) -> float:
    return float(np.max(meas.magnitudes))


def _verify_reconstruction(signal, windows, meas: MeasurementSet, cfg) -> None:
    """Final guard: the estimate must reproduce every planned magnitude.

    Catches any run where floating-point error drifted past the per-step
    checks; a wrong answer is never returned silently.
    """
    recomputed = measure(signal, windows, meas.plan, cfg.params)
    worst = float(np.max(np.abs(recomputed.magnitudes - meas.magnitudes)))
    scale = _measurement_scale(meas)
    if worst > cfg.tol_residual * scale:
        raise NoCommonPoint(
            f"reconstruction does not reproduce the measurements "
            f"(worst magnitude mismatch {worst:.3e} against scale {scale:.3e})"
        )


def _refine(est: np.ndarray, windows, meas: MeasurementSet, cfg) -> np.ndarray:
    """Polish the recursive estimate against the full magnitude system.

    Runs ``cfg.refine_steps`` Gauss-Newton sweeps on the residuals
    ``|y_j(est)|^2 - magnitude_j^2`` over the real degrees of freedom of an
    analytic spectrum (coefficient 0, and the fold coefficient for even
    ``n``, stay real; everything above the fold stays zero).  The recursion
    is sequential, so one ill-conditioned step taints all later
    coefficients; the joint system pins every coefficient through all its
    measurements at once and is far better conditioned.
    """
    params = cfg.params
    n = params.n
    half = n // 2
    wins = as_window_list(windows)
    g2 = np.asarray(meas.magnitudes, dtype=float) ** 2
    bins = np.arange(half + 1)
    rows = []
    for e in meas.plan.entries:
        l = (bins - e.k) % n
        rows.append(wins[e.window].spectrum[l] * params.root_powers(l * e.m) / n)
    coeff = np.array(rows)
    im_bins = bins[1 : half if n % 2 == 0 else half + 1]
    n_re = bins.size

    est = est.copy()
    for _ in range(cfg.refine_steps):
        y = coeff @ est[: half + 1]
        f = np.abs(y) ** 2 - g2
        grad = 2.0 * np.conj(y)[:, None] * coeff
        jac = np.concatenate([grad.real, -grad[:, im_bins].imag], axis=1)
        delta, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        if not np.all(np.isfinite(delta)):
            break
        est[bins] += delta[:n_re]
        est[im_bins] += 1j * delta[n_re:]
    return est


def recover_case1(
    meas: MeasurementSet, w: Window, cfg: RecoveryConfig
) -> RecoveryResult:
    """Recover from one bandlimited window's plan (single-anchor regime)."""
    params = cfg.params
    n = w.n
    if params.n != n:
        raise ValueError(f"params.n = {params.n} but window length is {n}")
    _require_valid(w, CASE1)
    _require_matching_plan(meas, CASE1, n, w.bandlimit, w.zero_run_start, params)

    half = n // 2
    band = w.band_start
    scale = _measurement_scale(meas)
    anchor = meas.magnitude(0, (half - band) % n, 0)
    if scale == 0.0 or anchor <= cfg.tol_zero * scale:
        raise DegenerateSignal(
            f"anchor magnitude {anchor:.3e} vanishes; the top coefficient is zero"
        )

    est = np.zeros(n, dtype=np.complex128)
    est[half] = n * anchor / abs(w.spectrum[band])
    residuals = []
    for k0 in range(half, 0, -1):
        triple = [
            meas.magnitude(0, (k0 - 1 - band) % n, m) for m in params.m_triple
        ]
        z, res = _step(est, k0, w, cfg, triple)
        est[k0 - 1] = z
        residuals.append(res)

    if n % 2 == 1:
        # The anchor only fixed a modulus, so the whole estimate carries one
        # unknown phase; rotating coefficient 0 onto the real axis removes it.
        lead = complex(est[0])
        if abs(lead) <= cfg.tol_zero * float(np.max(np.abs(est))):
            raise DegenerateSignal(
                "cannot fix the global phase: coefficient 0 vanishes"
            )
        est *= np.conj(lead) / abs(lead)
    est[0] = est[0].real
    est = _refine(est, w, meas, cfg)
    signal = idft(est)
    _verify_reconstruction(signal, w, meas, cfg)
    return RecoveryResult(
        spectrum=est,
        signal=signal,
        case=CASE1,
        step_residuals=tuple(residuals),
    )


def recover_case2(
    meas: MeasurementSet, ws: WindowSet, cfg: RecoveryConfig
) -> RecoveryResult:
    """Recover from a four-window set (monomial-anchor regime)."""
    params = cfg.params
    n = ws.n
    if params.n != n:
        raise ValueError(f"params.n = {params.n} but window length is {n}")
    _require_valid(ws, CASE2)
    _require_matching_plan(
        meas, CASE2, n, ws.bandlimit, ws.zero_run_start, params
    )

    a0 = build_A0(ws)
    if a0.cond > cfg.a0_max_cond:
        raise SingularA0(f"cond(A0) = {a0.cond:.3e} exceeds {cfg.a0_max_cond:.1e}")

    half = n // 2
    scale = _measurement_scale(meas)
    if scale == 0.0:
        raise DegenerateSignal("all measured magnitudes vanish")
    anchor_freq = (1 - ws.zero_run_start) % n
    rhs = np.array(
        [(n * meas.magnitude(s, anchor_freq, 0)) ** 2 for s in range(4)],
        dtype=np.complex128,
    )
    mono = np.linalg.solve(a0.matrix, rhs)
    m1, m2, m3, m4 = (complex(v) for v in mono)
    mscale = float(np.max(np.abs(mono)))
    if mscale == 0.0:
        raise DegenerateSignal("anchor monomials all vanish")

    tol = cfg.tol_consistency
    defects = []
    if abs(m2 - np.conj(m3)) > tol * mscale:
        defects.append(f"|m2 - conj(m3)| = {abs(m2 - np.conj(m3)):.3e}")
    for label, v in (("m1", m1), ("m4", m4)):
        if abs(v.imag) > tol * mscale or v.real < -tol * mscale:
            defects.append(f"{label} = {v:.3e} is not a nonnegative real")
    if abs(abs(m2) ** 2 - m1 * m4) > tol * mscale**2:
        defects.append(
            f"||m2|^2 - m1*m4| = {abs(abs(m2) ** 2 - m1 * m4):.3e}"
        )
    if defects:
        raise ConsistencyFailure(
            "anchor monomials are inconsistent: " + "; ".join(defects)
        )

    sq = max(m4.real, 0.0)
    if sq <= cfg.tol_zero * mscale:
        raise DegenerateSignal(
            "coefficient 0 vanishes; the anchor monomials cannot be split"
        )
    z0 = float(np.sqrt(sq))
    est = np.zeros(n, dtype=np.complex128)
    est[0] = z0
    # the fold coefficient of an even-length analytic signal is real
    est[half] = (m2 / z0).real if n % 2 == 0 else m2 / z0

    residuals = []
    w1 = ws.windows[0]
    band = w1.band_start
    for k0 in range(half, 1, -1):
        triple = [
            meas.magnitude(0, (k0 - 1 - band) % n, m) for m in params.m_triple
        ]
        z, res = _step(est, k0, w1, cfg, triple)
        est[k0 - 1] = z
        residuals.append(res)
    est = _refine(est, ws, meas, cfg)
    signal = idft(est)
    _verify_reconstruction(signal, ws, meas, cfg)
    return RecoveryResult(
        spectrum=est,
        signal=signal,
        case=CASE2,
        step_residuals=tuple(residuals),
    )


def recover_case3(
    meas: MeasurementSet, ws: WindowSet, cfg: RecoveryConfig
) -> RecoveryResult:
    """Recover from an analytic window pair (sign-branch regime)."""
    params = cfg.params
    n = ws.n
    if params.n != n:
        raise ValueError(f"params.n = {params.n} but window length is {n}")
    _require_valid(ws, CASE3)
    _require_matching_plan(
        meas, CASE3, n, ws.bandlimit, ws.zero_run_start, params
    )

    half = n // 2
    if _measurement_scale(meas) == 0.0:
        raise DegenerateSignal("all measured magnitudes vanish")
    w1, w2 = ws.windows
    y1 = meas.magnitude(0, half, 0)
    y2 = meas.magnitude(1, half, 0)
    a1, b1 = w1.spectrum[0].real, w1.spectrum[half].real
    a2, b2 = w2.spectrum[0].real, w2.spectrum[half].real
    det = a1 * b2 - a2 * b1

    branch_triple = [meas.magnitude(0, half - 1, m) for m in params.m_triple]
    survivors = []
    for sign in (1.0, -1.0):
        zhalf = n * (y1 * b2 - sign * y2 * b1) / det
        z0 = n * (-y1 * a2 + sign * y2 * a1) / det
        probe = np.zeros(n, dtype=np.complex128)
        probe[half] = zhalf
        try:
            znext, res = _step(
                probe, half, w1, cfg, branch_triple, solver_tol=cfg.tol_residual
            )
        except (DegenerateSignal, NoCommonPoint):
            continue
        survivors.append((z0, zhalf, znext, res))
    if not survivors:
        raise NoBranch("neither anchor sign branch fits the recursion data")
    if len(survivors) == 2:
        if cfg.branch_policy == "best":
            survivors.sort(key=lambda s: s[-1])
            survivors = survivors[:1]
        else:
            raise AmbiguousBranch(
                "both anchor sign branches fit the recursion data "
                f"(residuals {survivors[0][-1]:.3e} and {survivors[1][-1]:.3e})"
            )
    z0, zhalf, znext, res0 = survivors[0]

    est = np.zeros(n, dtype=np.complex128)
    est[0] = z0
    est[half] = zhalf
    est[half - 1] = znext
    residuals = [res0]
    for k0 in range(half - 1, 1, -1):
        triple = [meas.magnitude(0, k0 - 1, m) for m in params.m_triple]
        z, res = _step(est, k0, w1, cfg, triple)
        est[k0 - 1] = z
        residuals.append(res)
    est = _refine(est, ws, meas, cfg)
    signal = idft(est)
    _verify_reconstruction(signal, ws, meas, cfg)
    return RecoveryResult(
        spectrum=est,
        signal=signal,
        case=CASE3,
        step_residuals=tuple(residuals),
    )


def recover(meas: MeasurementSet, windows, cfg: RecoveryConfig) -> RecoveryResult:
    """Dispatch to the regime named by the measurement plan."""
    case = meas.plan.case
    if case == CASE1:
        w = windows if isinstance(windows, Window) else windows.windows[0]
        return recover_case1(meas, w, cfg)
    if case == CASE2:
        return recover_case2(meas, windows, cfg)
    if case == CASE3:
        return recover_case3(meas, windows, cfg)
    raise ValueError(f"unknown case {case!r}")


def canonicalize(spectrum, tol: float = 1e-10) -> np.ndarray:
    """Fix the free global sign to a convention.

    Scans the real parts in index order (then, for completeness, the
    imaginary parts) and flips the vector's sign, if needed, so the first
    entry whose magnitude exceeds ``tol`` times the Euclidean norm comes out
    positive.  Idempotent, and maps a vector and its negation to the same
    output.
    """
    z = as_signal(spectrum).copy()
    norm = float(np.linalg.norm(z))
    if norm == 0.0:
        return z
    thresh = tol * norm
    for part in (z.real, z.imag):
        idx = np.flatnonzero(np.abs(part) > thresh)
        if idx.size:
            if part[idx[0]] < 0.0:
                return -z
            return z
    return z


def up_to_sign_error(z_hat, z_true) -> float:
    """Relative Euclidean error modulo the global sign ambiguity."""
    a = _sig_values(z_hat)
    b = _sig_values(z_true)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    ref = float(np.linalg.norm(b))
    if ref == 0.0:
        raise ValueError("reference signal has zero norm")
    return float(
        min(np.linalg.norm(a - b), np.linalg.norm(a + b)) / ref
    )
