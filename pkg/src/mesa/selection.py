"""AR order selection: FPE/CAT/OBD losses, the order bound, early stopping."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mesa.core import (
    Criterion,
    OrderSelection,
    RecursionTrace,
    UndefinedLossError,
    ValidationError,
)


def max_order(n: int) -> int:
    """Upper bound 2N/ln(2N) on the scanned AR order, floored and clamped to N-1."""
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    return min(int(2 * n / math.log(2 * n)), n - 1)


def loss_fpe(p_m: float, n: int, m: int) -> float:
    """Final Prediction Error loss P_m (N+m+1)/(N-m-1)."""
    if m >= n - 1:
        raise UndefinedLossError(f"FPE undefined for m={m} with n={n}")
    return p_m * (n + m + 1) / (n - m - 1)


def loss_cat(p, n: int, m: int) -> float:
    """Parzen's CAT loss at order m >= 1.

    ``p`` is indexed by order (p[0] present but unused): the loss is
    (1/N) sum_{k=1..m} (N-k)/(N P_k) - (N-m)/(N P_m).
    """
    if m < 1:
        raise UndefinedLossError("CAT is undefined at order 0")
    p = np.asarray(p, dtype=np.float64)
    if np.any(p[1 : m + 1] == 0.0):
        raise UndefinedLossError("CAT undefined: zero prediction-error power")
    k = np.arange(1, m + 1)
    return float(np.sum((n - k) / (n * p[1 : m + 1])) / n - (n - m) / (n * p[m]))


def loss_obd(p, a, n: int, m: int) -> float:
    """Rao's Optimum Bayes Decision loss at order m.

    ``p`` is indexed by order; ``a`` is the order-m coefficient vector
    (a[0] == 1). Natural logarithms throughout.
    """
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if np.any(p[: m + 1] == 0.0):
        raise UndefinedLossError("OBD undefined: zero prediction-error power")
    value = (n - m - 2) * math.log(p[m]) + m * math.log(n)
    if m >= 1:
        value += float(np.sum(np.log(p[:m]))) + float(a[1 : m + 1] @ a[1 : m + 1])
    return value


@dataclass(frozen=True)
class EarlyStopConfig:
    """Stop the selection scan once the incumbent minimum stops moving.

    ``patience`` counts evaluated orders without a new minimum; the check
    runs every ``check_stride`` evaluated orders.
    """

    enabled: bool = True
    patience: int = 100
    check_stride: int = 1

    def __post_init__(self):
        if self.patience < 1:
            raise ValidationError("patience must be >= 1")
        if self.check_stride < 1:
            raise ValidationError("check_stride must be >= 1")

    @classmethod
    def default(cls, scan_max_order: int) -> "EarlyStopConfig":
        return cls(enabled=True, patience=max(100, -(-scan_max_order // 10)), check_stride=1)

    @classmethod
    def full_scan(cls) -> "EarlyStopConfig":
        return cls(enabled=False)


def _loss_sequence(trace: RecursionTrace, criterion: Criterion, n: int):
    """Yield (order, loss) in ascending order, stopping where undefined."""
    p = trace.p
    if criterion is Criterion.FPE:
        for m in range(trace.max_order + 1):
            if m >= n - 1:
                return
            yield m, loss_fpe(p[m], n, m)
    elif criterion is Criterion.CAT:
        # running sum keeps the scan O(1) per order
        acc = 0.0
        for m in range(1, trace.max_order + 1):
            if p[m] == 0.0:
                return
            acc += (n - m) / (n * p[m])
            yield m, acc / n - (n - m) / (n * p[m])
    else:
        log_acc = 0.0
        for m, a in trace.iter_coefficients():
            if p[m] == 0.0:
                return
            sq = float(a[1:] @ a[1:]) if m >= 1 else 0.0
            yield m, (n - m - 2) * math.log(p[m]) + m * math.log(n) + log_acc + sq
            log_acc += math.log(p[m])


def select_order(
    trace: RecursionTrace,
    criterion: Criterion | str,
    early_stop: EarlyStopConfig | None = None,
) -> OrderSelection:
    """Scan the trace's orders and pick the first minimum of the loss.

    ``early_stop=None`` uses the default configuration (enabled, patience
    max(100, max_order/10)); pass ``EarlyStopConfig.full_scan()`` for a
    reproducible full sweep.
    """
    criterion = Criterion(criterion)
    n = trace.n_samples
    if n is None:
        raise ValidationError("trace has no sample count; order-selection losses need it")
    if trace.max_order < 1:
        raise ValidationError("trace must hold at least order 1")
    if early_stop is None:
        early_stop = EarlyStopConfig.default(trace.max_order)

    losses: list[float] = [np.nan] if criterion is Criterion.CAT else []
    best_loss = np.inf
    best_order = -1
    early_stopped = False
    evaluated = 0
    for m, value in _loss_sequence(trace, criterion, n):
        losses.append(value)
        evaluated += 1
        if value < best_loss:
            best_loss = value
            best_order = m
        if (
            early_stop.enabled
            and evaluated % early_stop.check_stride == 0
            and m - best_order >= early_stop.patience
        ):
            early_stopped = True
            break
    if best_order < 0:
        raise UndefinedLossError(f"{criterion.value} undefined at every order of the trace")
    return OrderSelection(
        criterion=criterion,
        losses=np.asarray(losses, dtype=np.float64),
        chosen_order=best_order,
        early_stopped=early_stopped,
    )
