# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the hot kernels in `_reference`.

Same algorithms, same arithmetic: the Monte-Carlo path engine is
bit-identical to the Python fallback (scalar IEEE ops in the same
order); the Volterra march differs only in the summation order of the
convolution dot product.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log, log1p
from scipy.linalg.cython_blas cimport ddot

cnp.import_array()

DEF RESCALE_AT = 1e150


def volterra_march(p_vals, f_vals, double lam, double q, double dx, double u0,
                   source_vals=None):
    """March p u' = (lam+q) u - lam*(conv(u,f) + source) from u(0)=u0.

    Returns (values, derivatives, log_scale); see the reference twin for
    the discretization details.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = np.ascontiguousarray(p_vals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] f = np.ascontiguousarray(f_vals, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d = np.zeros(n)
    cdef bint has_src = source_vals is not None
    cdef cnp.ndarray[cnp.float64_t, ndim=1] src
    if has_src:
        src = np.ascontiguousarray(source_vals, dtype=np.float64)
    else:
        src = np.zeros(1)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] fr = f[::-1].copy()
    cdef double log_scale = 0.0
    cdef double src_scale = 1.0
    cdef double A = lam + q - 0.5 * lam * dx * f[0]
    cdef double S, extra, pi1, denom, au
    cdef Py_ssize_t i, j
    cdef int m, one = 1

    u[0] = u0
    d[0] = ((lam + q) * u0 - lam * (src[0] if has_src else 0.0)) / p[0]

    with nogil:
        for i in range(n - 1):
            S = 0.5 * u[0] * f[i + 1]
            if i >= 1:
                # sum_{j=1..i} u[j] * f[i+1-j] as a BLAS inner product
                m = <int> i
                S += ddot(&m, &u[1], &one, &fr[n - 1 - i], &one)
            S *= dx
            extra = -lam * S
            if has_src:
                extra -= lam * src[i + 1] * src_scale
            pi1 = p[i + 1]
            denom = 1.0 - 0.5 * dx * A / pi1
            u[i + 1] = (u[i] + 0.5 * dx * (d[i] + extra / pi1)) / denom
            d[i + 1] = (A * u[i + 1] + extra) / pi1
            au = fabs(u[i + 1])
            if au > RESCALE_AT:
                for j in range(i + 2):
                    u[j] /= au
                    d[j] /= au
                log_scale += log(au)
                src_scale /= au
    return u, d, log_scale


cdef inline double _hit(int pkind, double c, double eps, double x, double level) nogil:
    if pkind == 0:
        return (level - x) / c
    if pkind == 1:
        return log((level + c / eps) / (x + c / eps)) / eps
    return (level - x) / c - (log(c * (1.0 + level) + 1.0)
                              - log(c * (1.0 + x) + 1.0)) / (c * c)


cdef inline double _flow(int pkind, double c, double eps, double x, double t) nogil:
    cdef double b, err
    cdef int k
    if pkind == 0:
        return x + c * t
    if pkind == 1:
        return (x + c / eps) * exp(eps * t) - c / eps
    if t == 0.0:
        return x
    b = x + (c + 1.0 / (1.0 + x)) * t
    for k in range(60):
        err = (b - x) / c - (log(c * (1.0 + b) + 1.0)
                             - log(c * (1.0 + x) + 1.0)) / (c * c) - t
        b -= err * (c + 1.0 / (1.0 + b))
        if b < x:
            b = x
        if fabs(err) < 1e-14 * (1.0 + t):
            break
    return b


def closed_form_path(u_arr, int mode, int pkind, double c, double eps, double mu,
                     double lam, double q, double x0, double a, double horizon,
                     int wkind, double wk, double wbeta):
    """One Monte-Carlo path on pre-drawn uniforms.

    Returns (value, ruined, deficit, used, status); status 1 means the
    uniform block was exhausted and the caller should redraw a longer one.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.ascontiguousarray(u_arr, dtype=np.float64)
    cdef Py_ssize_t nu = u.shape[0]
    cdef double val = 0.0
    cdef double t = 0.0
    cdef double lvl = x0
    cdef double pa, tau, t_claim, cut, s, claim, pre, new
    cdef Py_ssize_t i = 0
    cdef int ruined = 0
    cdef int status = -1
    cdef double deficit = 0.0
    cdef double out_val = 0.0

    if mode == 0 and lvl > a:
        val += lvl - a
        lvl = a
    if pkind == 0:
        pa = c
    elif pkind == 1:
        pa = c + eps * a
    else:
        pa = c + 1.0 / (1.0 + a)

    with nogil:
        while True:
            if i >= nu:
                status = 1
                break
            tau = -log1p(-u[i]) / lam
            i += 1
            t_claim = t + tau
            cut = t_claim if t_claim < horizon else horizon
            s = 0.0
            if mode == 0:
                if lvl < a:
                    s = _hit(pkind, c, eps, lvl, a)
                if t + s < cut:
                    val += pa * (exp(-q * (t + s)) - exp(-q * cut)) / q
            elif mode == 2:
                s = _hit(pkind, c, eps, lvl, a)
                if t + s <= cut:
                    out_val = exp(-q * (t + s))
                    status = 0
                    break
            if t_claim >= horizon:
                out_val = val
                status = 0
                break
            if i >= nu:
                status = 1
                break
            claim = -log1p(-u[i]) / mu
            i += 1
            if mode == 0 and t + s <= t_claim:
                pre = a
            else:
                pre = _flow(pkind, c, eps, lvl, tau)
            new = pre - claim
            if new < 0.0:
                if mode == 2:
                    out_val = 0.0
                else:
                    if wkind == 1:
                        val += exp(-q * t_claim) * (-wk)
                    elif wkind == 2:
                        val += exp(-q * t_claim) * (-wk + wbeta * new)
                    out_val = val
                ruined = 1
                deficit = new
                status = 0
                break
            lvl = new
            t = t_claim

    if status == 1:
        return 0.0, 0, 0.0, i, 1
    return out_val, ruined, deficit, i, 0
