"""AR model fitting via the Levinson/Burg recursion.

Two routes produce a :class:`~mesa.core.RecursionTrace`:

* ``burg`` (default): data-driven reflection coefficients from the
  forward/backward prediction errors of the samples themselves.
* ``yule_walker``: reflection coefficients from the sample autocorrelation,
  i.e. the literal Levinson-Durbin solve of the Toeplitz normal equations.
  Kept as a cross-check oracle for the Burg route.
"""
from __future__ import annotations

import enum

import numpy as np

from mesa._kernels import burg_recursion
from mesa.core import (
    DegenerateModelError,
    RecursionTrace,
    TimeSeries,
    ValidationError,
    _levinson_update,
)


class EstimatorMethod(enum.Enum):
    BURG = "burg"
    YULE_WALKER = "yule_walker"


def sample_autocorrelation(ts: TimeSeries, max_lag: int) -> np.ndarray:
    """Biased sample autocorrelation r_k = (1/N) sum_t x_t x_{t+k}, k = 0..max_lag.

    The 1/N normalization keeps the Toeplitz autocorrelation matrix
    positive semi-definite, which in turn bounds every Levinson reflection
    coefficient by 1.
    """
    x = np.asarray(ts.samples, dtype=np.float64)
    n = x.shape[0]
    if not 0 <= max_lag < n:
        raise ValidationError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    nfft = 1 << int(2 * n - 1).bit_length()
    spec = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1]
    return acov / n


def levinson_step(prev_a: np.ndarray, prev_p: float, c: float) -> tuple[np.ndarray, float]:
    """One order-raising step of the Levinson recursion.

    Returns the order-N coefficient vector and prediction-error power built
    from the order-(N-1) quantities and the reflection coefficient ``c``.
    """
    prev_a = np.asarray(prev_a, dtype=np.float64)
    if prev_a.ndim != 1 or prev_a.size < 1 or prev_a[0] != 1.0:
        raise ValidationError("prev_a must be a coefficient vector with prev_a[0] == 1")
    if not (np.isfinite(prev_p) and prev_p >= 0):
        raise ValidationError("prev_p must be finite and >= 0")
    if not (np.isfinite(c) and abs(c) <= 1.0):
        raise ValidationError("reflection coefficient must satisfy |c| <= 1")
    return _levinson_update(prev_a, c), prev_p * (1.0 - c * c)


def reflection_yule_walker(a: np.ndarray, r: np.ndarray, p: float) -> float:
    """Reflection coefficient c = -Delta/p from the autocorrelation sequence.

    ``a`` is the order-k coefficient vector and Delta = sum_n a_n r_{k+1-n}.
    """
    a = np.asarray(a, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    k = a.size - 1
    if r.size < k + 2:
        raise ValidationError(f"need autocorrelation up to lag {k + 1}, got {r.size - 1}")
    if p == 0:
        raise DegenerateModelError("zero prediction-error power: signal is perfectly predictable")
    delta = float(a @ r[k + 1 : 0 : -1])
    return -delta / p


def reflection_burg(fwd: np.ndarray, bwd: np.ndarray) -> float:
    """Burg reflection coefficient from aligned forward/backward errors.

    c = -2 sum(fwd*bwd) / sum(fwd^2 + bwd^2); |c| <= 1 by Cauchy-Schwarz
    and the AM-GM inequality.
    """
    fwd = np.asarray(fwd, dtype=np.float64)
    bwd = np.asarray(bwd, dtype=np.float64)
    if fwd.shape != bwd.shape:
        raise ValidationError("fwd and bwd must have equal length")
    den = float(fwd @ fwd + bwd @ bwd)
    if den == 0.0:
        raise DegenerateModelError("prediction errors vanished")
    c = -2.0 * float(fwd @ bwd) / den
    return float(np.clip(c, -1.0, 1.0))


def _replay_coefficients(c: np.ndarray) -> tuple:
    out = [np.ones(1)]
    for ck in c:
        out.append(_levinson_update(out[-1], ck))
    return tuple(out)


def fit(
    ts: TimeSeries,
    max_order: int,
    method: EstimatorMethod | str = EstimatorMethod.BURG,
    keep_coefficients: bool = True,
) -> RecursionTrace:
    """Run the recursion on ``ts`` up to ``max_order``.

    With ``keep_coefficients=False`` only the powers and reflection
    coefficients are retained (memory-lean mode for large orders); the
    per-order vectors are then rebuilt on demand by the trace.
    """
    method = EstimatorMethod(method)
    n = len(ts)
    if not 1 <= max_order <= n - 1:
        raise ValidationError(f"max_order must be in [1, {n - 1}], got {max_order}")

    if method is EstimatorMethod.BURG:
        p, c = burg_recursion(ts.samples, max_order)
    else:
        r = sample_autocorrelation(ts, max_order)
        p = np.empty(max_order + 1)
        c = np.empty(max_order)
        p[0] = r[0]
        if p[0] == 0.0:
            raise DegenerateModelError("zero-variance input")
        a = np.ones(1)
        for k in range(max_order):
            ck = reflection_yule_walker(a, r, p[k])
            ck = float(np.clip(ck, -1.0, 1.0))
            c[k] = ck
            a, p[k + 1] = levinson_step(a, p[k], ck)

    coeffs = _replay_coefficients(c) if keep_coefficients else None
    return RecursionTrace(p=p, c=c, coeffs=coeffs, dt=ts.dt, n_samples=n)


def fit_from_autocorr(
    r: np.ndarray,
    max_order: int,
    dt: float = 1.0,
    n_samples: int | None = None,
    keep_coefficients: bool = True,
) -> RecursionTrace:
    """Levinson recursion from a given autocorrelation sequence.

    ``n_samples`` is only metadata (order-selection losses need it); pass
    it when the sequence came from data of known length.
    """
    r = np.asarray(r, dtype=np.float64)
    if not 1 <= max_order <= r.size - 1:
        raise ValidationError(f"max_order must be in [1, {r.size - 1}], got {max_order}")
    if r[0] == 0.0:
        raise DegenerateModelError("zero-variance autocorrelation")
    p = np.empty(max_order + 1)
    c = np.empty(max_order)
    p[0] = r[0]
    a = np.ones(1)
    for k in range(max_order):
        ck = float(np.clip(reflection_yule_walker(a, r, p[k]), -1.0, 1.0))
        c[k] = ck
        a, p[k + 1] = levinson_step(a, p[k], ck)
    coeffs = _replay_coefficients(c) if keep_coefficients else None
    return RecursionTrace(p=p, c=c, coeffs=coeffs, dt=dt, n_samples=n_samples)


def reflection_coefficients(a: np.ndarray) -> np.ndarray:
    """Recover the reflection coefficients of a coefficient vector (step-down).

    Inverts the Levinson order-update; the model is stable (all roots of
    the prediction error filter outside the unit circle) iff every returned
    value has magnitude strictly below 1.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size < 1 or a[0] != 1.0:
        raise ValidationError("a must be a coefficient vector with a[0] == 1")
    m = a.size - 1
    out = np.empty(m)
    cur = a.copy()
    for k in range(m, 0, -1):
        ck = cur[k]
        out[k - 1] = ck
        denom = 1.0 - ck * ck
        if denom == 0.0:
            # |c| == 1: stage is singular; lower orders are unreachable
            out[: k - 1] = 1.0
            break
        cur = (cur[: k] - ck * cur[k:0:-1]) / denom
        cur[0] = 1.0
    return out
