"""Scale-type function W_q and Gerber-Shiu function G_{q,w}.

Both solve the same integro-differential relation

    p(x) u'(x) = (lam + q) u(x) - lam * int_0^x u(x-z) f(z) dz - lam * omega(x)

(omega = 0 for W_q) but with different boundary behaviour: W_q starts at
W_q(0) = 1 and grows without bound, while G_{q,w} is the unique solution
vanishing at infinity.  G is recovered from a particular solution G_p
(zero initial value) plus the multiple of W that annihilates the unstable
mode at the truncation boundary:

    G = G_p + gamma * W,   gamma = -G_p(x_max) / W(x_max).

Closed forms kept as oracles: the two-exponential scale function for
constant premiums, the classical ruin probability, and the Kummer-function
form for linear premiums.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainTooShortError, NumericsError, OverflowDomainError
from .grid import GridFunction
from .kummer import kummer_M, kummer_U
from .model import ModelParams, omega_eval

_MAX_SAFE_LOG = 708.0  # natural-log range representable in float64
_DECAY_SLACK = 1e-12


@dataclass(frozen=True)
class ScaleSolution:
    """W and G on a common grid, plus the stable-mode bookkeeping."""

    params: ModelParams
    W: GridFunction
    G: GridFunction
    domain_end: float
    stable_coefficient: float
    diagnostics: dict

    @property
    def dx(self) -> float:
        return self.W.dx


@dataclass(frozen=True)
class LodeOperatorSpec:
    """Order bookkeeping for claim densities with rational Laplace transform.

    The density satisfies L(d/dy) f = 0 with the monic polynomial
    L(v) = v^m + beta_{m-1} v^{m-1} + ... + beta_0; the scale equation then
    reduces to a linear ODE of order m + 1.  Only m = 1 (exponential
    claims, L(v) = v + mu) has a solver here; larger m is representable
    for bookkeeping but not executable.
    """

    m: int
    beta: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"Laplace order must be >= 1, got {self.m}")
        if len(self.beta) != self.m:
            raise ValueError(f"need {self.m} coefficients, got {len(self.beta)}")
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))

    @staticmethod
    def from_claim(claim) -> "LodeOperatorSpec":
        if claim.kind != "exponential":
            raise NotImplementedError("rational-Laplace structure is only wired up "
                                      "for exponential claims (m = 1)")
        return LodeOperatorSpec(1, (claim.mu,))

    def char_poly(self, v: float) -> float:
        acc = 1.0
        for b in reversed(self.beta):
            acc = acc * v + b
        return acc

    @property
    def ode_order(self) -> int:
        return self.m + 1

    @property
    def solver_available(self) -> bool:
        return self.m == 1


def _grid_arrays(params: ModelParams, dx: float, x_max: float):
    if dx <= 0 or x_max <= dx:
        raise ValueError(f"need 0 < dx < x_max, got dx={dx}, x_max={x_max}")
    step_cap = 0.01 * min(1.0 / params.lam, params.claim.mean())
    if dx > step_cap * (1 + 1e-12):
        warnings.warn(f"dx={dx} exceeds the recommended cap {step_cap:.4g} "
                      f"(0.01 * min(1/lambda, mean claim)); results may be coarse")
    n = int(round(x_max / dx)) + 1
    x = dx * np.arange(n)
    p_vals = np.asarray(params.premium.p(x), dtype=float)
    if np.any(p_vals <= 0):
        raise NumericsError("premium not positive on the grid")
    f_vals = np.asarray(params.claim.density(x), dtype=float)
    return x, p_vals, f_vals


def _march_W(params, dx, x_max):
    x, p_vals, f_vals = _grid_arrays(params, dx, x_max)
    vals, ders, log_scale = _backend.volterra_march(p_vals, f_vals, params.lam,
                                                    params.q, dx, 1.0, None)
    return x, p_vals, f_vals, vals, ders, log_scale


def _normalize_marched_W(x, vals, ders, log_scale):
    """Rescale a marched W back to W(0)=1, or report the largest safe domain.

    Division by the stored value at 0 undoes the running rescale without
    materializing exp(log_scale), so it works whenever the *range* of W
    fits in float64.
    """
    if log_scale == 0.0:
        return vals, ders  # u0 = 1 and no rescale event: already normalized
    positive = vals > 0
    with np.errstate(divide="ignore"):
        logs = np.where(positive, np.log(np.where(positive, vals, 1.0)), -np.inf)
    base = logs[0] if positive[0] else -log_scale
    rng = logs - base
    if positive[0] and float(np.max(rng)) <= _MAX_SAFE_LOG:
        return vals / vals[0], ders / vals[0]
    ok = np.nonzero(rng <= _MAX_SAFE_LOG - 5.0)[0]
    safe = float(x[ok[-1]]) if ok.size else 0.0
    raise OverflowDomainError(
        f"scale function spans more than float64 range on [0, {x[-1]}]; "
        f"largest safe x_max is about {safe:.6g}", largest_safe_x_max=safe)


def compute_W(params: ModelParams, dx: float, x_max: float) -> GridFunction:
    """Scale-type function W_q on a uniform grid over [0, x_max].

    W(0) = 1 exactly; the derivative samples come from the defining
    relation (not finite differences).
    """
    x, _, _, vals, ders, log_scale = _march_W(params, dx, x_max)
    vals, ders = _normalize_marched_W(x, vals, ders, log_scale)
    return GridFunction(0.0, dx, vals, ders)


def _omega_grid(params: ModelParams, x: np.ndarray) -> np.ndarray:
    pen, claim = params.penalty, params.claim
    if pen.is_zero:
        return np.zeros_like(x)
    if claim.kind == "exponential":
        # omega(x) = omega(0) * exp(-mu x) by memorylessness of the overshoot
        return omega_eval(params, 0.0) * np.exp(-claim.mu * x)
    out = np.zeros_like(x)
    cutoff = claim.support_end
    for i, xi in enumerate(x):
        if xi >= cutoff:
            break
        out[i] = omega_eval(params, float(xi))
    return out


def compute_G(params: ModelParams, dx: float, x_max: float) -> GridFunction:
    """Gerber-Shiu function G_{q,w} on [0, x_max] (the stable solution)."""
    return solve_scale(params, dx, x_max).G


def solve_scale(params: ModelParams, dx: float, x_max: float) -> ScaleSolution:
    """Compute W and G together with consistency diagnostics."""
    x, p_vals, f_vals, w_raw, wd_raw, Lw = _march_W(params, dx, x_max)
    w_vals, wd_vals = _normalize_marched_W(x, w_raw, wd_raw, Lw)
    lam, q = params.lam, params.q

    if params.penalty.is_zero:
        g_vals = np.zeros_like(w_vals)
        gd_vals = np.zeros_like(w_vals)
        gamma = 0.0
    else:
        omega = _omega_grid(params, x)
        gp, gpd, Lg = _backend.volterra_march(p_vals, f_vals, lam, q, dx, 0.0, omega)
        if Lg > 650.0:
            raise OverflowDomainError(
                "penalty solution needed rescaling beyond float range; "
                "shorten the truncation domain", largest_safe_x_max=0.5 * x_max)
        # the log scales cancel inside the stable combination G_p + gamma*W,
        # so the raw-unit ratio is the right annihilation coefficient
        r = gp[-1] / w_raw[-1]
        scale = math.exp(Lg)
        g_vals = scale * (gp - r * w_raw)
        gd_vals = scale * (gpd - r * wd_raw)
        gamma = float(g_vals[0])
        _check_G_decay(x, g_vals, x_max)

    diagnostics = _diagnostics(params, x, p_vals, f_vals, w_vals, wd_vals,
                               g_vals, gd_vals)
    Wf = GridFunction(0.0, dx, w_vals, wd_vals)
    Gf = GridFunction(0.0, dx, g_vals, gd_vals)
    if Wf.values[0] != 1.0:
        raise NumericsError("W(0) != 1 after normalization")
    return ScaleSolution(params, Wf, Gf, float(x[-1]), gamma, diagnostics)


def _check_G_decay(x, g_vals, x_max):
    n = g_vals.size
    absg = np.abs(g_vals)
    peak = float(absg.max())
    if peak == 0.0:
        return
    i90, i80 = int(0.9 * n), int(0.8 * n)
    last = float(absg[i90:].max())
    prev = float(absg[i80:i90].max())
    if last > prev + _DECAY_SLACK * peak:
        raise DomainTooShortError(
            f"|G| is not decaying on the last 10% of [0, {x_max}] "
            f"(max {last:.3e} vs {prev:.3e} on the previous band); "
            f"increase the truncation domain", suggested_x_max=1.5 * x_max)
    # the stable mode must have died out before the annihilation zone,
    # otherwise forcing G(x_max) = 0 distorts the whole profile
    if last > 0.01 * peak:
        raise DomainTooShortError(
            f"|G| has only decayed to {last / peak:.1%} of its peak by the last "
            f"10% of [0, {x_max}]; the truncation distorts the stable solution",
            suggested_x_max=1.5 * x_max)


def _trapezoid_convolution(u: np.ndarray, f: np.ndarray, dx: float) -> np.ndarray:
    """conv_j = dx * trapezoid of int_0^{x_j} u(s) f(x_j - s) ds for every j."""
    from scipy.signal import fftconvolve

    full = fftconvolve(u, f)[:u.size]
    return dx * (full - 0.5 * u[0] * f - 0.5 * u * f[0])


def _diagnostics(params, x, p_vals, f_vals, w_vals, wd_vals, g_vals, gd_vals):
    lam, q = params.lam, params.q
    conv_w = _trapezoid_convolution(w_vals, f_vals, float(x[1] - x[0]))
    resid_w = p_vals * wd_vals - (lam + q) * w_vals + lam * conv_w
    wmax = float(np.max(np.abs(w_vals)))
    out = {
        "residual_W": float(np.max(np.abs(resid_w))) / wmax,
        "W_prime_positive": bool(np.all(wd_vals > 0)),
        "one_minus_G_prime_positive": bool(np.all(1.0 - gd_vals > 0)),
    }
    if not out["W_prime_positive"]:
        bad = int(np.argmax(wd_vals <= 0))
        out["W_prime_first_violation_x"] = float(x[bad])
        warnings.warn(f"W' <= 0 at x={x[bad]:.6g}; barrier quantities are "
                      f"undefined there (flagged, not clipped)")
    if not out["one_minus_G_prime_positive"]:
        bad = int(np.argmax(1.0 - gd_vals <= 0))
        out["G_prime_first_violation_x"] = float(x[bad])
        warnings.warn(f"1 - G' <= 0 at x={x[bad]:.6g} (flagged, not clipped)")
    if np.any(g_vals != 0.0):
        omega = _omega_grid(params, x)
        conv_g = _trapezoid_convolution(g_vals, f_vals, float(x[1] - x[0]))
        resid_g = p_vals * gd_vals - (lam + q) * g_vals + lam * conv_g + lam * omega
        gmax = float(np.max(np.abs(g_vals)))
        out["residual_G"] = float(np.max(np.abs(resid_g))) / max(gmax, 1e-300)
        out["G_nonpositive"] = bool(np.all(g_vals <= 1e-12 * gmax))
    else:
        out["residual_G"] = 0.0
        out["G_nonpositive"] = True
    return out


# ---------------------------------------------------------------------------
# closed forms (oracles)


def closed_form_W_constant(params: ModelParams, x):
    """Two-exponential scale function: constant premium, exponential claims."""
    if params.premium.kind != "constant" or params.claim.kind != "exponential":
        raise ValueError("closed form needs a constant premium and exponential claims")
    c, mu, lam, q = params.premium.c, params.claim.mu, params.lam, params.q
    b = c * mu - lam - q
    disc = math.sqrt(b * b + 4.0 * c * q * mu)
    th_p = (-b + disc) / (2.0 * c)
    th_m = (-b - disc) / (2.0 * c)
    x = np.asarray(x, dtype=float)
    out = ((th_p + mu) * np.exp(th_p * x) - (th_m + mu) * np.exp(th_m * x)) / (th_p - th_m)
    return out if out.ndim else float(out)


def closed_form_G_ruin_constant(params: ModelParams, x):
    """Classical ruin probability as G: q = 0, w = -1, constant premium."""
    if params.premium.kind != "constant" or params.claim.kind != "exponential":
        raise ValueError("closed form needs a constant premium and exponential claims")
    if params.q != 0.0:
        raise ValueError("ruin-probability closed form requires q = 0")
    c, mu, lam = params.premium.c, params.claim.mu, params.lam
    if mu - lam / c <= 0:
        raise ValueError("needs positive safety loading (mu > lambda/c)")
    x = np.asarray(x, dtype=float)
    out = -(lam / (c * mu)) * np.exp(-(mu - lam / c) * x)
    return out if out.ndim else float(out)


def _linear_W_coefficients(params: ModelParams):
    prem, claim = params.premium, params.claim
    if prem.kind != "linear" or prem.epsilon <= 0 or claim.kind != "exponential":
        raise ValueError("closed form needs a linear premium (eps > 0) and "
                         "exponential claims")
    if params.q <= 0:
        raise ValueError("closed form needs q > 0 (speed condition)")
    lam, q = params.lam, params.q
    c, eps, mu = prem.c, prem.epsilon, claim.mu
    a = q / eps + 1.0
    b = (lam + q) / eps + 1.0
    z0 = mu * c / eps
    try:
        pref0 = c ** ((lam + q) / eps)
        M0, U0 = kummer_M(a, b, z0), kummer_U(a, b, z0)
        dM0 = (a / b) * kummer_M(a + 1.0, b + 1.0, z0)
        dU0 = -a * kummer_U(a + 1.0, b + 1.0, z0)
    except OverflowError as exc:
        raise NumericsError(f"Kummer closed form overflows for c={c}, eps={eps}, "
                            f"mu={mu} (prefactor exponent {(lam + q) / eps:.3g}, "
                            f"argument {z0:.3g})") from exc
    g0 = (lam + q) / c - mu
    A = np.array([[pref0 * M0, pref0 * U0],
                  [pref0 * (g0 * M0 + mu * dM0), pref0 * (g0 * U0 + mu * dU0)]])
    if not np.all(np.isfinite(A)):
        raise NumericsError("Kummer closed form overflows the boundary system "
                            f"for c={c}, eps={eps}, mu={mu}")
    cond = np.linalg.cond(A)
    if cond > 1e12:
        raise NumericsError(f"boundary system for the Kummer form is "
                            f"ill-conditioned (cond ~ {cond:.2e})")
    C1, C2 = np.linalg.solve(A, np.array([1.0, (lam + q) / c]))
    return a, b, c, eps, mu, lam, q, C1, C2


def closed_form_W_linear(params: ModelParams, x):
    """Kummer-function form of W_q for linear premiums, boundary conditions
    W(0) = 1 and W'(0) = (lam+q)/c solved as a 2x2 system."""
    a, b, c, eps, mu, lam, q, C1, C2 = _linear_W_coefficients(params)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, xi in enumerate(xs):
        z = mu * xi + mu * c / eps
        P = (eps * xi + c) ** ((lam + q) / eps) * math.exp(-mu * xi)
        out[i] = (C1 * kummer_M(a, b, z) + C2 * kummer_U(a, b, z)) * P
    return out if np.asarray(x).ndim else float(out[0])


def closed_form_W_linear_prime(params: ModelParams, x):
    """Derivative of the Kummer form (used by barrier-location oracles)."""
    a, b, c, eps, mu, lam, q, C1, C2 = _linear_W_coefficients(params)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, xi in enumerate(xs):
        z = mu * xi + mu * c / eps
        P = (eps * xi + c) ** ((lam + q) / eps) * math.exp(-mu * xi)
        g = (lam + q) / (eps * xi + c) - mu
        K = C1 * kummer_M(a, b, z) + C2 * kummer_U(a, b, z)
        dK = mu * (C1 * (a / b) * kummer_M(a + 1.0, b + 1.0, z)
                   - C2 * a * kummer_U(a + 1.0, b + 1.0, z))
        out[i] = P * (g * K + dK)
    return out if np.asarray(x).ndim else float(out[0])
