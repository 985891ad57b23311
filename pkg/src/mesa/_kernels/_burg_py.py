"""Pure-numpy Burg recursion (fallback for the compiled kernel)."""
from __future__ import annotations

import numpy as np

from mesa.core import DegenerateModelError


def burg_recursion(x: np.ndarray, max_order: int):
    """Run the Burg lattice recursion on ``x`` up to ``max_order``.

    Returns ``(p, c)``: prediction-error powers for orders 0..max_order and
    the reflection coefficients used at each step. Forward/backward error
    sequences start as the signal itself and lose one usable sample per
    order.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    p = np.empty(max_order + 1)
    c = np.empty(max_order)
    p[0] = x @ x / n
    if p[0] == 0.0:
        raise DegenerateModelError("zero-variance input")
    f = x
    b = x
    for k in range(max_order):
        fa = f[1:]
        ba = b[:-1]
        den = fa @ fa + ba @ ba
        if den == 0.0:
            raise DegenerateModelError(f"prediction errors vanished at order {k}")
        ck = -2.0 * (fa @ ba) / den
        # |c| <= 1 analytically; clamp the last-ulp excess
        if ck > 1.0:
            ck = 1.0
        elif ck < -1.0:
            ck = -1.0
        c[k] = ck
        p[k + 1] = p[k] * (1.0 - ck * ck)
        f = fa + ck * ba
        b = ba + ck * fa
    return p, c
