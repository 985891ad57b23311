"""MESA spectral density evaluation and PSD <-> autocorrelation conversion.

The density of an :class:`~mesa.core.ArModel` is

    S(f) = p_m * dt / |sum_s a_s exp(i 2 pi f s dt)|^2,

a two-sided density over [-Nyquist, Nyquist], even in f for real models.
"""
from __future__ import annotations

import numpy as np

from mesa.core import AccuracyError, ArModel, Sided, SpectralDensity, ValidationError

_CHUNK = 4096


def frequency_grid(n_freqs: int, dt: float, sided: Sided | str = Sided.ONE_SIDED) -> np.ndarray:
    """Equally spaced frequencies spanning [0, Ny] or [-Ny, Ny], endpoints included."""
    sided = Sided(sided)
    if n_freqs < 2:
        raise ValidationError(f"need n_freqs >= 2, got {n_freqs}")
    if not dt > 0:
        raise ValidationError("dt must be > 0")
    ny = 1.0 / (2.0 * dt)
    if sided is Sided.ONE_SIDED:
        return np.linspace(0.0, ny, n_freqs)
    return np.linspace(-ny, ny, n_freqs)


def default_grid_size(order: int) -> int:
    """Default one-sided grid resolution: 4*max(order, 256) + 1 points."""
    return 4 * max(order, 256) + 1


def _denominator_fft(a: np.ndarray, n_pos: int) -> np.ndarray:
    """|A|^2 on the canonical positive grid via a zero-padded DFT."""
    nfft = 2 * (n_pos - 1)
    spec = np.fft.rfft(a, nfft)[:n_pos]
    return np.abs(spec) ** 2


def _denominator_direct(a: np.ndarray, freqs: np.ndarray, dt: float) -> np.ndarray:
    s = np.arange(a.size)
    out = np.empty(freqs.size)
    for start in range(0, freqs.size, _CHUNK):
        f = freqs[start : start + _CHUNK]
        phases = np.exp(2j * np.pi * dt * np.outer(f, s))
        out[start : start + _CHUNK] = np.abs(phases @ a) ** 2
    return out


def _is_canonical_positive(freqs: np.ndarray, ny: float) -> bool:
    if freqs.size < 2 or freqs[0] != 0.0:
        return False
    ref = np.linspace(0.0, ny, freqs.size)
    return freqs[-1] == ny and bool(np.all(np.abs(freqs - ref) <= 1e-12 * ny))


def psd(model: ArModel, freqs: np.ndarray | None = None) -> SpectralDensity:
    """Evaluate the model's two-sided spectral density on ``freqs``.

    ``freqs=None`` uses the default one-sided grid. On the canonical
    equally-spaced grid the denominator comes from a zero-padded DFT of the
    coefficient vector; elsewhere it is summed directly (both routes agree
    to 1e-12 relative).
    """
    ny = model.nyquist
    if freqs is None:
        freqs = frequency_grid(default_grid_size(model.order), model.dt)
    freqs = np.asarray(freqs, dtype=np.float64)
    if np.any(np.abs(freqs) > ny * (1 + 1e-12)):
        raise ValidationError("frequency outside the Nyquist band")

    if _is_canonical_positive(freqs, ny):
        den = _denominator_fft(model.a, freqs.size)
    elif (
        freqs.size >= 3
        and freqs.size % 2 == 1
        and _is_canonical_positive(freqs[freqs.size // 2 :], ny)
        and np.array_equal(freqs, -freqs[::-1])
    ):
        half = _denominator_fft(model.a, freqs.size // 2 + 1)
        den = np.concatenate([half[:0:-1], half])
    else:
        den = _denominator_direct(model.a, freqs, model.dt)
    return SpectralDensity(freqs=freqs, values=model.p_m * model.dt / den, sided=Sided.TWO_SIDED)


def autocorr_from_psd(sd: SpectralDensity, lags) -> np.ndarray:
    """Trapezoid quadrature of int S(f) exp(i 2 pi f k dt) df at each lag.

    Requires a two-sided density on a dense uniform symmetric grid; the
    grid must carry at least 8 points per requested lag for the oscillatory
    integrand to be resolved.
    """
    lags = np.asarray(lags, dtype=np.int64)
    if sd.sided is not Sided.TWO_SIDED:
        raise ValidationError("autocorrelation recovery needs a two-sided density")
    freqs = sd.freqs
    if freqs.size < 2:
        raise ValidationError("grid too small")
    df = np.diff(freqs)
    if np.max(np.abs(df - df[0])) > 1e-9 * abs(df[0]):
        raise ValidationError("frequency grid must be uniform")
    if abs(freqs[0] + freqs[-1]) > 1e-9 * freqs[-1]:
        raise ValidationError("two-sided grid must be symmetric about 0")
    max_lag = int(np.max(np.abs(lags))) if lags.size else 0
    if freqs.size < 8 * max_lag:
        raise AccuracyError(
            f"grid of {freqs.size} points is too coarse for lag {max_lag} (need >= {8 * max_lag})"
        )
    dt = 1.0 / (2.0 * freqs[-1])
    weights = np.full(freqs.size, df[0])
    weights[0] *= 0.5
    weights[-1] *= 0.5
    weighted = weights * sd.values
    phases = np.exp(2j * np.pi * dt * np.outer(lags, freqs))
    r = phases @ weighted
    bad = np.abs(r.imag) >= 1e-8 * np.abs(r.real) + 1e-12
    if np.any(bad):
        raise AccuracyError("imaginary residue of the constraint integral is too large")
    return np.ascontiguousarray(r.real)


def to_one_sided(sd: SpectralDensity) -> SpectralDensity:
    """Fold a two-sided density to the one-sided convention.

    Values strictly inside (0, max frequency) are doubled; the grid is
    assumed to span up to the Nyquist frequency.
    """
    if sd.sided is Sided.ONE_SIDED:
        return sd
    freqs = sd.freqs
    values = sd.values
    if freqs[0] < 0:
        keep = freqs >= 0
        freqs = freqs[keep]
        values = values[keep]
    scale = np.where((freqs > 0) & (freqs < freqs[-1]), 2.0, 1.0)
    return SpectralDensity(freqs=freqs, values=values * scale, sided=Sided.ONE_SIDED)


def to_two_sided(sd: SpectralDensity) -> SpectralDensity:
    """Inverse of :func:`to_one_sided` on the non-negative grid."""
    if sd.sided is Sided.TWO_SIDED:
        return sd
    freqs = sd.freqs
    scale = np.where((freqs > 0) & (freqs < freqs[-1]), 0.5, 1.0)
    return SpectralDensity(freqs=freqs, values=sd.values * scale, sided=Sided.TWO_SIDED)
