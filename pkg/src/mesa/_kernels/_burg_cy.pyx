# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Burg recursion: the whole order loop runs in C."""
import numpy as np

from mesa.core import DegenerateModelError


def burg_recursion(x, Py_ssize_t max_order):
    """Same contract as mesa._kernels._burg_py.burg_recursion."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] xv = x_arr
    cdef Py_ssize_t n = xv.shape[0]

    p_arr = np.empty(max_order + 1, dtype=np.float64)
    c_arr = np.empty(max_order, dtype=np.float64)
    f_arr = x_arr.copy()
    b_arr = x_arr.copy()
    cdef double[::1] p = p_arr
    cdef double[::1] c = c_arr
    cdef double[::1] f = f_arr
    cdef double[::1] b = b_arr

    cdef double p0 = 0.0, num, den, ck, fv, bv
    cdef Py_ssize_t k, t, L
    cdef Py_ssize_t degenerate_at = -1

    with nogil:
        for t in range(n):
            p0 += xv[t] * xv[t]
    p0 /= n
    if p0 == 0.0:
        raise DegenerateModelError("zero-variance input")
    p[0] = p0

    L = n
    with nogil:
        for k in range(max_order):
            num = 0.0
            den = 0.0
            for t in range(L - 1):
                fv = f[t + 1]
                bv = b[t]
                num += fv * bv
                den += fv * fv + bv * bv
            if den == 0.0:
                degenerate_at = k
                break
            ck = -2.0 * num / den
            if ck > 1.0:
                ck = 1.0
            elif ck < -1.0:
                ck = -1.0
            c[k] = ck
            p[k + 1] = p[k] * (1.0 - ck * ck)
            for t in range(L - 1):
                fv = f[t + 1]
                bv = b[t]
                f[t] = fv + ck * bv
                b[t] = bv + ck * fv
            L -= 1

    if degenerate_at >= 0:
        raise DegenerateModelError(f"prediction errors vanished at order {degenerate_at}")
    return p_arr, c_arr
