"""Order-selection losses, the order bound, and the early-stop scan."""
import math

import numpy as np
import pytest

from mesa.core import Criterion, RecursionTrace, UndefinedLossError, ValidationError
from mesa.estimator import fit
from mesa.core import TimeSeries
from mesa.selection import (
    EarlyStopConfig,
    loss_cat,
    loss_fpe,
    loss_obd,
    max_order,
    select_order,
)


def make_trace(p, c, n):
    return RecursionTrace(p=p, c=c, coeffs=None, dt=1.0, n_samples=n)


# --- max_order ---------------------------------------------------------------

def test_max_order_values():
    assert max_order(3000) == 689
    # floor(81920 / ln 81920) recomputed from the defining formula
    assert max_order(40960) == 7240
    assert max_order(2) == 1  # clamped to n - 1
    with pytest.raises(ValidationError):
        max_order(1)


def test_max_order_never_exceeds_n_minus_1():
    for n in (2, 3, 5, 10, 100, 10_000):
        assert 1 <= max_order(n) <= n - 1


# --- losses -------------------------------------------------------------------

def test_fpe_hand_values():
    assert loss_fpe(1.0, 100, 0) == pytest.approx(101 / 99, abs=1e-12)
    assert loss_fpe(1.0, 100, 1) == pytest.approx(102 / 98, abs=1e-12)
    assert loss_fpe(0.0, 100, 7) == 0.0
    with pytest.raises(UndefinedLossError):
        loss_fpe(1.0, 100, 99)


def test_cat_hand_values():
    p = [np.nan, 1.0, 1.0]  # indexed by order, p[0] unused
    assert loss_cat(p, 100, 1) == pytest.approx(-0.9801, abs=1e-12)
    assert loss_cat(p, 100, 2) == pytest.approx(-0.9603, abs=1e-12)
    with pytest.raises(UndefinedLossError):
        loss_cat(p, 100, 0)
    with pytest.raises(UndefinedLossError):
        loss_cat([np.nan, 0.0], 100, 1)


def test_cat_scaling_leaves_argmin_unchanged():
    rng = np.random.default_rng(0)
    p = np.concatenate([[np.nan], np.cumprod(rng.uniform(0.7, 1.0, 10))])
    losses = [loss_cat(p, 200, m) for m in range(1, 11)]
    scaled = [loss_cat(2 * p, 200, m) for m in range(1, 11)]
    np.testing.assert_allclose(scaled, np.asarray(losses) / 2, rtol=1e-12)
    assert int(np.argmin(losses)) == int(np.argmin(scaled))


def test_obd_hand_values():
    assert loss_obd([2.0], [1.0], 10, 0) == pytest.approx(8 * math.log(2), abs=1e-9)
    assert loss_obd([1.0], [1.0], 10, 0) == 0.0
    assert loss_obd([1.0, 1.0], [1.0, 0.5], 10, 1) == pytest.approx(math.log(10) + 0.25, abs=1e-9)
    with pytest.raises(UndefinedLossError):
        loss_obd([0.0], [1.0], 10, 0)


# --- select_order ---------------------------------------------------------------

def test_select_picks_first_minimum():
    # power drops hard at order 1 then barely improves: FPE must pick 1
    trace = make_trace(p=[4.0, 1.0, 0.999], c=[np.sqrt(0.75), np.sqrt(1 - 0.999)], n=1000)
    sel = select_order(trace, "fpe", EarlyStopConfig.full_scan())
    assert sel.chosen_order == 1
    assert sel.chosen_order == int(np.nanargmin(sel.losses))


def test_select_white_noise_picks_small_orders():
    # sampling noise can push the first minimum slightly past 0, but the
    # chosen model must stay trivial and its loss indistinguishable from m=0
    orders = []
    for seed in range(5):
        x = np.random.default_rng(seed).standard_normal(20_000)
        trace = fit(TimeSeries(x, dt=1.0), 64)
        sel = select_order(trace, Criterion.FPE, EarlyStopConfig.full_scan())
        orders.append(sel.chosen_order)
        assert sel.losses[sel.chosen_order] == pytest.approx(sel.losses[0], rel=5e-3)
    assert np.median(orders) == 0
    assert max(orders) < 16


def test_fpe_constant_power_is_increasing_in_order():
    n = 500
    p = np.full(21, 2.0)
    trace = make_trace(p, np.zeros(20), n)
    sel = select_order(trace, "fpe", EarlyStopConfig.full_scan())
    assert sel.chosen_order == 0
    assert np.all(np.diff(sel.losses) > 0)


def test_cat_scan_starts_at_order_one():
    x = np.random.default_rng(2).standard_normal(5000)
    trace = fit(TimeSeries(x, dt=1.0), 32)
    sel = select_order(trace, "cat", EarlyStopConfig.full_scan())
    assert np.isnan(sel.losses[0])
    assert sel.chosen_order >= 1


def test_scaling_data_leaves_fpe_argmin_unchanged():
    x = np.random.default_rng(3).standard_normal(4000)
    t1 = fit(TimeSeries(x, dt=1.0), 40)
    t2 = fit(TimeSeries(5.0 * x, dt=1.0), 40)
    cfg = EarlyStopConfig.full_scan()
    for crit in ("fpe", "cat"):
        assert select_order(t1, crit, cfg).chosen_order == \
            select_order(t2, crit, cfg).chosen_order


def test_early_stop_with_large_patience_matches_full_scan():
    x = np.random.default_rng(4).standard_normal(3000)
    trace = fit(TimeSeries(x, dt=1.0), 100)
    for crit in Criterion:
        full = select_order(trace, crit, EarlyStopConfig.full_scan())
        patient = select_order(trace, crit, EarlyStopConfig(enabled=True, patience=100))
        assert full.chosen_order == patient.chosen_order
        assert not patient.early_stopped or patient.chosen_order == full.chosen_order


def test_early_stop_truncates_scan():
    x = np.random.default_rng(5).standard_normal(3000)
    trace = fit(TimeSeries(x, dt=1.0), 200)
    sel = select_order(trace, "fpe", EarlyStopConfig(enabled=True, patience=10))
    assert sel.early_stopped
    assert sel.losses.size < 201


def test_selection_is_deterministic():
    x = np.random.default_rng(6).standard_normal(2000)
    trace = fit(TimeSeries(x, dt=1.0), 50)
    a = select_order(trace, "obd")
    b = select_order(trace, "obd")
    assert a.chosen_order == b.chosen_order
    np.testing.assert_array_equal(a.losses, b.losses)


def test_obd_uses_per_order_coefficients():
    # direct loss evaluation must match the scan's stored losses
    x = np.random.default_rng(7).standard_normal(1000)
    ts = TimeSeries(x, dt=1.0)
    trace = fit(ts, 12, keep_coefficients=True)
    sel = select_order(trace, "obd", EarlyStopConfig.full_scan())
    for m in range(13):
        expected = loss_obd(trace.p, trace.coefficients(m), 1000, m)
        assert sel.losses[m] == pytest.approx(expected, rel=1e-12)


def test_trace_without_sample_count_rejected():
    trace = RecursionTrace(p=[1.0, 0.5], c=[np.sqrt(0.5)], coeffs=None, dt=1.0)
    with pytest.raises(ValidationError):
        select_order(trace, "fpe")


def test_early_stop_config_validation():
    with pytest.raises(ValidationError):
        EarlyStopConfig(patience=0)
    with pytest.raises(ValidationError):
        EarlyStopConfig(check_stride=0)
    cfg = EarlyStopConfig.default(5000)
    assert cfg.patience == 500
    assert EarlyStopConfig.default(100).patience == 100
