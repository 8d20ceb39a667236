"""Barrier location and the candidate value function.

The barrier-quality function h(y) = (1 - G'(y)) / W'(y) trades marginal
dividend value against marginal ruin cost; the candidate barrier is the
largest global maximizer of h (sup convention).  The value of the barrier
strategy is

    v_a(x) = W(x) * (1 - G'(a)) / W'(a) + G(x)   for x <= a,
    v_a(x) = x - a + v_a(a)                      for x >  a,

continuously differentiable with v_a'(a) = 1 (smooth pasting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainTooShortError, NumericsError
from .grid import GridFunction
from .model import omega_eval
from .scale import ScaleSolution

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_TIE_REL = 1e-9
_FLAT_EPS = 1e-12
_SMOOTH_PASTING_TOL = 1e-3
_SLOPE_FLOOR = 1.0 - 1e-6


@dataclass(frozen=True)
class BarrierSolution:
    """Located barrier with its h profile and assembled value function."""

    a_star: float
    h_profile: GridFunction
    v: GridFunction
    v_at_barrier: float
    refinement_width: float
    smooth_pasting_residual: float

    def to_dict(self) -> dict:
        return {
            "a_star": self.a_star,
            "v_at_barrier": self.v_at_barrier,
            "smooth_pasting_residual": self.smooth_pasting_residual,
            "refinement_width": self.refinement_width,
        }


def _derivative_arrays(scale: ScaleSolution):
    wd = scale.W.derivative_values
    gd = scale.G.derivative_values
    if wd is None or gd is None:
        raise NumericsError("scale solution lacks derivative samples")
    return wd, gd


def h_grid(scale: ScaleSolution) -> np.ndarray:
    """h at the grid nodes; node 0 holds the right limit (Richardson)."""
    wd, gd = _derivative_arrays(scale)
    if np.any(wd <= 0):
        bad = float(scale.W.x[int(np.argmax(wd <= 0))])
        raise NumericsError(f"W' <= 0 at x={bad:.6g}: barrier-quality function "
                            f"undefined (model degeneracy)")
    h = (1.0 - gd) / wd
    h[0] = 2.0 * h[1] - h[2]
    return h


def h_eval(scale: ScaleSolution, y: float) -> float:
    """h(y) from the relation-derived derivatives (C1 interpolation).

    h(0) is the limit from the right, extrapolated from the first
    interior nodes.
    """
    if y == 0.0:
        dx = scale.W.dx
        return 2.0 * h_eval(scale, dx) - h_eval(scale, 2.0 * dx)
    wp = scale.W.derivative(y)
    if wp <= 0:
        raise NumericsError(f"W'({y}) <= 0: barrier-quality function undefined "
                            f"(model degeneracy)")
    return (1.0 - scale.G.derivative(y)) / wp


def _golden_max(fn, lo: float, hi: float, width: float):
    """Golden-section maximizer; returns (argmax, final bracket width)."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > width:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fn(x2)
    best = x1 if f1 >= f2 else x2
    return best, hi - lo


def find_barrier(scale: ScaleSolution, refine_width: float = 1e-4,
                 allow_edge: bool = False) -> BarrierSolution:
    """Locate the largest global maximizer of h and assemble v.

    Scans h on the grid, takes the largest index attaining the maximum
    within a relative tie tolerance of 1e-9, then refines by golden
    section on the bracketing interval.  A maximum at the first node
    returns a* = 0 unrefined; a maximum at the last node raises
    DomainTooShortError unless `allow_edge`.
    """
    h = h_grid(scale)
    x = scale.W.x
    n = h.size
    hmax = float(h.max())
    tie = _TIE_REL * abs(hmax)
    k = int(np.nonzero(h >= hmax - tie)[0][-1])

    if k == 0:
        a_star, width = 0.0, 0.0
    elif k == n - 1:
        if not allow_edge:
            raise DomainTooShortError(
                f"h attains its maximum at the right edge x={x[-1]:.6g}; "
                f"the truncation domain is likely too short",
                suggested_x_max=2.0 * float(x[-1]))
        a_star, width = float(x[-1]), 0.0
    else:
        lo, hi = float(x[k - 1]), float(x[k + 1])
        local = h[k - 1:k + 2]
        if float(local.max() - local.min()) < _FLAT_EPS:
            j = k
            while j + 1 < n and abs(h[j + 1] - h[k]) < _FLAT_EPS:
                j += 1
            a_star, width = float(x[j]), 0.0  # right endpoint of the flat region
        else:
            a_star, width = _golden_max(lambda y: h_eval(scale, y), lo, hi,
                                        refine_width)

    sol = barrier_solution_at(scale, a_star, refinement_width=width)
    _check_optimal_invariants(scale, sol, h)
    return sol


def barrier_solution_at(scale: ScaleSolution, a: float,
                        refinement_width: float = 0.0) -> BarrierSolution:
    """Assemble the value function for an arbitrary barrier level."""
    v = assemble_value(scale, a)
    wd, gd = _derivative_arrays(scale)
    if a == 0.0:
        alpha = (1.0 - gd[0]) / wd[0]
        va = alpha * scale.W.values[0] + scale.G.values[0]
        pasting = 0.0
    else:
        wp = scale.W.derivative(a)
        gp = scale.G.derivative(a)
        alpha = (1.0 - gp) / wp
        va = alpha * scale.W(a) + scale.G(a)
        pasting = abs(alpha * wp + gp - 1.0)
    h = h_grid(scale)
    hf = GridFunction(0.0, scale.dx, h)
    return BarrierSolution(float(a), hf, v, float(va), refinement_width, pasting)


def _check_optimal_invariants(scale, sol: BarrierSolution, h: np.ndarray):
    if sol.smooth_pasting_residual > _SMOOTH_PASTING_TOL:
        raise NumericsError(f"smooth pasting violated at a*={sol.a_star}: "
                            f"|v'(a*) - 1| = {sol.smooth_pasting_residual:.3e}")
    x = sol.v.x
    below = x <= sol.a_star
    slopes = sol.v.derivative_values[below]
    if slopes.size and float(slopes.min()) < _SLOPE_FLOOR:
        raise NumericsError(f"v' = {float(slopes.min()):.9f} < 1 - 1e-6 below the "
                            f"barrier: h is not maximal at a*={sol.a_star}")


def assemble_value(scale: ScaleSolution, a: float) -> GridFunction:
    """v_a on the full grid, extended linearly (slope one) past a."""
    x = scale.W.x
    if not 0.0 <= a <= float(x[-1]):
        raise ValueError(f"barrier {a} outside the grid [0, {x[-1]}]")
    wd, gd = _derivative_arrays(scale)
    if a == 0.0:
        alpha = (1.0 - gd[0]) / wd[0]
    else:
        alpha = (1.0 - scale.G.derivative(a)) / scale.W.derivative(a)
    va = alpha * (scale.W(a) if a > 0 else scale.W.values[0]) \
        + (scale.G(a) if a > 0 else scale.G.values[0])
    below = x <= a
    values = np.where(below, alpha * scale.W.values + scale.G.values, x - a + va)
    derivs = np.where(below, alpha * wd + gd, 1.0)
    return GridFunction(0.0, scale.dx, values, derivs)


def value_function(scale: ScaleSolution, a: float, x) -> float:
    """v_a(x): the two-branch formula (scalar or array x)."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("initial capital must be >= 0")
    wd, gd = _derivative_arrays(scale)
    if a == 0.0:
        alpha = (1.0 - gd[0]) / wd[0]
        va = alpha * scale.W.values[0] + scale.G.values[0]
    else:
        alpha = (1.0 - scale.G.derivative(a)) / scale.W.derivative(a)
        va = alpha * scale.W(a) + scale.G(a)
    inside = np.minimum(xs, a)
    w_in = np.interp(inside, scale.W.x, scale.W.values)
    g_in = np.interp(inside, scale.G.x, scale.G.values)
    out = np.where(xs <= a, alpha * w_in + g_in, xs - a + va)
    return out if out.ndim else float(out)


def barrier_boundary_identity(scale: ScaleSolution, a: float,
                              v_at_barrier: float | None = None) -> float:
    """Residual of the stationarity identity at the barrier:

        0 = -(lam+q) v_a(a) + lam * int_0^a v_a(a-z) dF(z)
            + lam * omega(a) + p(a).

    Holds for every barrier level by construction of v_a; used as an
    independent consistency check.  `v_at_barrier` overrides only the
    standalone v_a(a) term (perturbation probes).
    """
    params = scale.params
    v = assemble_value(scale, a)
    va = v(a) if a > 0 else float(v.values[0])
    if v_at_barrier is not None:
        va = v_at_barrier
    lam, q = params.lam, params.q
    dx = scale.dx
    x = v.x
    J = int(math.floor(a / dx + 1e-12))
    # int_0^a v(u) f(a-u) du: trapezoid over grid nodes plus the partial cell
    integral = 0.0
    if J >= 1:
        u = x[:J + 1]
        fv = np.asarray(params.claim.density(a - u), dtype=float)
        vv = v.values[:J + 1]
        integral += dx * (np.dot(vv, fv) - 0.5 * vv[0] * fv[0] - 0.5 * vv[J] * fv[J])
    rem = a - float(x[J]) if J >= 0 else a
    if rem > 1e-14:
        f_at = float(params.claim.density(rem))
        f0 = float(params.claim.density(0.0))
        integral += 0.5 * rem * (v.values[J] * f_at + float(v(a)) * f0)
    return -(lam + q) * va + lam * integral + lam * omega_eval(params, a) \
        + float(params.premium.p(a))
