"""Plain DFT/IDFT and index arithmetic shared by every other module.

Signals are length-``n`` complex vectors with indices understood modulo ``n``.
The transform convention is the plain (non-unitary) one::

    dft(z)[k]  = sum_n z[n] * exp(-2j*pi*k*n/n)
    idft(c)[k] = (1/n) * sum_m c[m] * exp(+2j*pi*k*m/n)

i.e. the 1/n factor lives in :func:`idft` only, so ``idft(dft(z)) == z``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["as_signal", "dft", "idft", "mod_index"]


def as_signal(values) -> np.ndarray:
    """Coerce ``values`` to a 1-D complex128 array.

    Parameters
    ----------
    values : array_like
        Any nonempty 1-D sequence of numbers.

    Returns
    -------
    numpy.ndarray
        A fresh-or-viewed complex128 vector.

    Raises
    ------
    ValueError
        If the input is empty or not one-dimensional.
    """
    z = np.asarray(values, dtype=np.complex128)
    if z.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {z.shape}")
    if z.size == 0:
        raise ValueError("expected a nonempty vector")
    return z


def dft(z) -> np.ndarray:
    """Forward transform, no normalization: ``sum_n z[n] e^{-2 pi i k n / N}``."""
    return np.fft.fft(as_signal(z))


def idft(coeffs) -> np.ndarray:
    """Inverse transform carrying the 1/N factor; exact inverse of :func:`dft`."""
    return np.fft.ifft(as_signal(coeffs))


def mod_index(j: int, n: int) -> int:
    """Reduce an index to the canonical range ``[0, n)``.

    Handles negative ``j`` the mathematical way: ``mod_index(-6, 8) == 2``.
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return int(j) % int(n)
