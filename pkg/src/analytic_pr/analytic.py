"""Discrete analytic signals: construction, structure tests, Hilbert transform.

A length-``n`` complex signal is *analytic* when its DFT is supported on the
nonnegative half of the frequency grid: coefficient 0 is real, coefficients
1 .. ceil(n/2)-1 are unconstrained, coefficient n/2 (even ``n`` only) is real,
and everything above is zero.  ``analytic_from_real`` maps a real signal to
the unique analytic signal whose real part it is; the imaginary part is the
discrete Hilbert transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_signal, dft, idft
from .errors import ZeroSample

__all__ = [
    "AnalyticSignal",
    "analytic_from_real",
    "hilbert",
    "hilbert_matrix",
    "instantaneous_frequency",
    "is_analytic",
    "sample_generic",
    "spectral_gain",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AnalyticSignal:
    """An analytic signal together with its cached spectrum."""

    signal: np.ndarray
    spectrum: np.ndarray

    @property
    def n(self) -> int:
        return self.signal.shape[0]


def spectral_gain(n: int) -> np.ndarray:
    """Per-bin gain turning a real signal's DFT into its analytic signal's DFT.

    Bin 0 keeps gain 1, strictly positive frequencies below the fold get gain
    2, the fold bin n/2 (even ``n`` only) keeps gain 1, and the negative
    frequencies get gain 0.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    g = np.zeros(n)
    g[0] = 1.0
    if n % 2 == 0:
        g[1 : n // 2] = 2.0
        g[n // 2] = 1.0
    else:
        g[1 : (n + 1) // 2] = 2.0
    return g


def analytic_from_real(x) -> AnalyticSignal:
    """Build the analytic signal of a real signal ``x``.

    Parameters
    ----------
    x : array_like
        Real-valued vector of length >= 2.

    Returns
    -------
    AnalyticSignal
        Signal ``x + i * hilbert(x)`` with its spectrum cached.

    Raises
    ------
    ValueError
        If ``x`` is not a real vector of length >= 2.
    """
    xr = np.asarray(x)
    if np.iscomplexobj(xr):
        raise ValueError("expected a real vector, got complex values")
    xr = xr.astype(float)
    if xr.ndim != 1 or xr.size < 2:
        raise ValueError(f"expected a real vector of length >= 2, got shape {xr.shape}")
    spectrum = dft(xr) * spectral_gain(xr.size)
    return AnalyticSignal(signal=idft(spectrum), spectrum=spectrum)


def hilbert(x) -> np.ndarray:
    """Discrete Hilbert transform of a real signal (the imaginary part of its
    analytic signal)."""
    return analytic_from_real(x).signal.imag.copy()


def hilbert_matrix(n: int) -> np.ndarray:
    """The n-by-n real matrix applying :func:`hilbert`; column j is
    ``hilbert(e_j)``.

    For ``n == 2`` both frequency bins are their own conjugate pair, so the
    transform vanishes identically and the matrix is zero.
    """
    gain = spectral_gain(n)
    # Columns of the analytic map applied to the identity, taken imaginary part.
    spectra = gain[:, None] * np.fft.fft(np.eye(n), axis=0)
    return np.fft.ifft(spectra, axis=0).imag


def _signal_values(z) -> np.ndarray:
    if isinstance(z, AnalyticSignal):
        return z.signal
    return as_signal(z)


def is_analytic(z, tol: float = 1e-10) -> bool:
    """Check the spectral-support structure of an analytic signal.

    Accepts raw vectors or :class:`AnalyticSignal`.  The high-frequency tail
    must vanish and the designated bins (0, and n/2 for even n) must be real,
    all within ``tol`` times the spectrum's Euclidean norm.
    """
    if isinstance(z, AnalyticSignal):
        coeffs = z.spectrum
    else:
        coeffs = dft(as_signal(z))
    n = coeffs.shape[0]
    bound = tol * float(np.linalg.norm(coeffs))
    half = n // 2
    tail = coeffs[half + 1 :]
    if n % 2 == 0 and n >= 2:
        real_bins = coeffs[[0, half]]
    else:
        real_bins = coeffs[[0]]
    if tail.size and float(np.max(np.abs(tail))) > bound:
        return False
    if float(np.max(np.abs(real_bins.imag))) > bound:
        return False
    return True


def sample_generic(n: int, seed=None) -> AnalyticSignal:
    """Draw the analytic signal of an i.i.d. standard normal real signal.

    ``seed`` may be anything ``numpy.random.default_rng`` accepts, including
    an existing Generator.
    """
    rng = np.random.default_rng(seed)
    return analytic_from_real(rng.standard_normal(n))


def instantaneous_frequency(z, tol_zero: float = 1e-12) -> np.ndarray:
    """Per-sample phase increment, each value in ``[0, 2*pi)``.

    Entry ``k`` is ``(arg z_k - arg z_{k-1}) mod 2*pi`` with the predecessor
    index taken mod n, evaluated as the argument of ``z_k * conj(z_{k-1})`` so
    that negating the whole signal leaves the output bit-identical.

    Raises
    ------
    ZeroSample
        If any sample magnitude is at most ``tol_zero`` times the largest
        sample magnitude (the phase there is numerically meaningless).
    """
    zv = _signal_values(z)
    mags = np.abs(zv)
    scale = float(mags.max())
    if scale == 0.0 or float(mags.min()) <= tol_zero * scale:
        k = int(np.argmin(mags))
        raise ZeroSample(f"sample {k} has magnitude {mags[k]:.3e}; phase undefined")
    rot = zv * np.conj(np.roll(zv, 1))
    return np.mod(np.angle(rot), TWO_PI)
