"""Pure-Python/numpy implementations of the two hot kernels.

These are the fallback twins of the compiled routines in `_kernels.pyx`:
the Volterra forward march behind the scale functions, and the per-path
Monte-Carlo event loop.  The event loop is written over plain floats with
exactly the arithmetic of the C version, so both backends produce
bit-identical path values; the march differs from the compiled one only
in float-summation order of the convolution dot products.
"""

from __future__ import annotations

import math

import numpy as np

_RESCALE_AT = 1e150


def volterra_march(p_vals, f_vals, lam, q, dx, u0, source_vals=None):
    """March p(x) u' = (lam+q) u - lam*(conv(u, f) + source) from u(0)=u0.

    Implicit-trapezoid stepping (second order); the convolution term uses
    trapezoidal quadrature over already-computed nodes, and the returned
    derivative sequence comes from the relation itself.  Running rescaling
    keeps the stored values inside float range; the true solution is
    stored * exp(log_scale).

    Returns (values, derivatives, log_scale).
    """
    p = np.ascontiguousarray(p_vals, dtype=float)
    f = np.ascontiguousarray(f_vals, dtype=float)
    n = p.size
    u = np.zeros(n)
    d = np.zeros(n)
    has_src = source_vals is not None
    src = np.ascontiguousarray(source_vals, dtype=float) if has_src else None

    u[0] = u0
    d[0] = ((lam + q) * u0 - lam * (src[0] if has_src else 0.0)) / p[0]
    fr = f[::-1].copy()
    A = lam + q - 0.5 * lam * dx * f[0]
    log_scale = 0.0
    src_scale = 1.0

    for i in range(n - 1):
        S = 0.5 * u[0] * f[i + 1]
        if i >= 1:
            S += float(np.dot(u[1:i + 1], fr[n - 1 - i:n - 1]))
        S *= dx
        extra = -lam * (S + (src[i + 1] * src_scale if has_src else 0.0))
        pi1 = p[i + 1]
        denom = 1.0 - 0.5 * dx * A / pi1
        u[i + 1] = (u[i] + 0.5 * dx * (d[i] + extra / pi1)) / denom
        d[i + 1] = (A * u[i + 1] + extra) / pi1
        au = abs(u[i + 1])
        if au > _RESCALE_AT:
            u[:i + 2] /= au
            d[:i + 2] /= au
            log_scale += math.log(au)
            src_scale /= au
    return u, d, log_scale


# ---------------------------------------------------------------------------
# Monte-Carlo path engine (closed-form premium families, exponential claims)
#
# modes: 0 value under a barrier, 1 Gerber-Shiu (no dividends),
#        2 two-sided exit towards an upper level.
# premium kinds: 0 constant(c), 1 linear(c, eps), 2 rational(c).
# penalty kinds: 0 zero, 1 constant(k), 2 linear(k, beta).
#
# Statuses: 0 done, 1 ran out of uniforms (caller redraws a longer block).


def _hit(pkind, c, eps, x, level):
    if pkind == 0:
        return (level - x) / c
    if pkind == 1:
        return math.log((level + c / eps) / (x + c / eps)) / eps
    return (level - x) / c - (math.log(c * (1.0 + level) + 1.0)
                              - math.log(c * (1.0 + x) + 1.0)) / (c * c)


def _flow(pkind, c, eps, x, t):
    if pkind == 0:
        return x + c * t
    if pkind == 1:
        return (x + c / eps) * math.exp(eps * t) - c / eps
    if t == 0.0:
        return x
    b = x + (c + 1.0 / (1.0 + x)) * t
    for _ in range(60):
        err = (b - x) / c - (math.log(c * (1.0 + b) + 1.0)
                             - math.log(c * (1.0 + x) + 1.0)) / (c * c) - t
        b -= err * (c + 1.0 / (1.0 + b))
        if b < x:
            b = x
        if abs(err) < 1e-14 * (1.0 + t):
            break
    return b


def closed_form_path(u, mode, pkind, c, eps, mu, lam, q, x0, a, horizon,
                     wkind, wk, wbeta):
    """One path on the pre-drawn uniforms `u`.

    Returns (value, ruined, deficit, used, status).
    """
    nu = u.shape[0]
    val = 0.0
    t = 0.0
    lvl = x0
    if mode == 0 and lvl > a:
        val += lvl - a
        lvl = a
    pa = c if pkind == 0 else (c + eps * a if pkind == 1 else c + 1.0 / (1.0 + a))
    i = 0
    while True:
        if i >= nu:
            return 0.0, 0, 0.0, i, 1
        tau = -math.log1p(-u[i]) / lam
        i += 1
        t_claim = t + tau
        cut = t_claim if t_claim < horizon else horizon
        if mode == 0:
            s = 0.0 if lvl >= a else _hit(pkind, c, eps, lvl, a)
            if t + s < cut:
                val += pa * (math.exp(-q * (t + s)) - math.exp(-q * cut)) / q
        elif mode == 2:
            s = _hit(pkind, c, eps, lvl, a)
            if t + s <= cut:
                return math.exp(-q * (t + s)), 0, 0.0, i, 0
        if t_claim >= horizon:
            return val, 0, 0.0, i, 0
        if i >= nu:
            return 0.0, 0, 0.0, i, 1
        claim = -math.log1p(-u[i]) / mu
        i += 1
        if mode == 0 and t + s <= t_claim:
            pre = a
        else:
            pre = _flow(pkind, c, eps, lvl, tau)
        new = pre - claim
        if new < 0.0:
            if mode == 2:
                return 0.0, 1, new, i, 0
            if wkind == 1:
                val += math.exp(-q * t_claim) * (-wk)
            elif wkind == 2:
                val += math.exp(-q * t_claim) * (-wk + wbeta * new)
            return val, 1, new, i, 0
        lvl = new
        t = t_claim


def generic_path(u, mode, hit_fn, flow_fn, claim_ppf, w_fn, p_at_barrier,
                 lam, q, x0, a, horizon):
    """closed_form_path generalized to arbitrary model callables.

    Used for tabulated premiums/claims/penalties; same event order and
    uniform consumption as the closed-form engine.
    """
    nu = u.shape[0]
    val = 0.0
    t = 0.0
    lvl = x0
    if mode == 0 and lvl > a:
        val += lvl - a
        lvl = a
    i = 0
    while True:
        if i >= nu:
            return 0.0, 0, 0.0, i, 1
        tau = -math.log1p(-u[i]) / lam
        i += 1
        t_claim = t + tau
        cut = t_claim if t_claim < horizon else horizon
        if mode == 0:
            s = 0.0 if lvl >= a else hit_fn(lvl, a)
            if t + s < cut:
                val += p_at_barrier * (math.exp(-q * (t + s)) - math.exp(-q * cut)) / q
        elif mode == 2:
            s = hit_fn(lvl, a)
            if t + s <= cut:
                return math.exp(-q * (t + s)), 0, 0.0, i, 0
        if t_claim >= horizon:
            return val, 0, 0.0, i, 0
        if i >= nu:
            return 0.0, 0, 0.0, i, 1
        claim = float(claim_ppf(u[i]))
        i += 1
        if mode == 0 and t + s <= t_claim:
            pre = a
        else:
            pre = flow_fn(lvl, tau)
        new = pre - claim
        if new < 0.0:
            if mode == 2:
                return 0.0, 1, new, i, 0
            val += math.exp(-q * t_claim) * float(w_fn(new))
            return val, 1, new, i, 0
        lvl = new
        t = t_claim
