"""Conditional forecasting from a fitted AR model.

Future samples follow x_t = sum_i b_i x_{t-i} + eps_t with
eps_t ~ Normal(0, noise_scale^2 * p_m), conditioned on the tail of the
seed series. Each ensemble member draws from its own counter-based stream
keyed by (rng_seed, member index), so parallel and serial generation agree
bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mesa._rng import make_rng
from mesa.core import ArModel, ForecastEnsemble, TimeSeries, ValidationError


def forecast(
    model: ArModel,
    seed: TimeSeries,
    horizon: int,
    n_realizations: int,
    rng_seed: int,
    noise_scale: float = 1.0,
) -> ForecastEnsemble:
    """Generate an ensemble of conditional continuations of ``seed``."""
    m = model.order
    if len(seed) < m:
        raise ValidationError(f"seed has {len(seed)} samples, model order is {m}")
    if abs(seed.dt - model.dt) > 1e-9 * model.dt:
        raise ValidationError("seed and model sampling intervals disagree")
    if horizon < 1:
        raise ValidationError("horizon must be >= 1")
    if n_realizations < 1:
        raise ValidationError("need at least one realization")
    if noise_scale < 0:
        raise ValidationError("noise_scale must be >= 0")

    sigma = noise_scale * np.sqrt(model.p_m)
    noise = np.empty((n_realizations, horizon))
    for i in range(n_realizations):
        noise[i] = make_rng(rng_seed, i).standard_normal(horizon)
    noise *= sigma

    b = model.b
    out = np.empty((n_realizations, horizon))
    # state columns hold x_{t-1}..x_{t-m}
    state = np.tile(seed.samples[len(seed) - m :][::-1], (n_realizations, 1))
    for t in range(horizon):
        nxt = state @ b + noise[:, t] if m else noise[:, t]
        out[:, t] = nxt
        if m:
            state[:, 1:] = state[:, :-1]
            state[:, 0] = nxt
    return ForecastEnsemble(realizations=out, seed_length=m, model=model)


@dataclass(frozen=True)
class ForecastSummary:
    """Per-step quantile table of a forecast ensemble."""

    steps: np.ndarray
    median: np.ndarray
    quantile_levels: tuple
    quantiles: np.ndarray  # shape (len(levels), horizon)

    def column_names(self) -> list[str]:
        return ["step", "median"] + [f"q{round(q * 100):02d}" for q in self.quantile_levels]


def forecast_summary(ens: ForecastEnsemble, quantiles=(0.05, 0.95)) -> ForecastSummary:
    """Empirical per-step median and quantile band edges (linear interpolation)."""
    if ens.n_realizations < 2:
        raise ValidationError("need at least two realizations to summarize")
    levels = tuple(float(q) for q in quantiles)
    if any(not 0.0 < q < 1.0 for q in levels):
        raise ValidationError("quantiles must lie strictly inside (0, 1)")
    r = ens.realizations
    return ForecastSummary(
        steps=np.arange(1, ens.horizon + 1),
        median=np.quantile(r, 0.5, axis=0),
        quantile_levels=levels,
        quantiles=np.quantile(r, levels, axis=0) if levels else np.empty((0, ens.horizon)),
    )
