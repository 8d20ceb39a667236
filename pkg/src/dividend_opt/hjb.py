"""Generator application and optimality verification.

The full generator of the claim-free-flow-plus-jumps process is

    A m(x) = p(x) m'(x) + lam * int_0^inf (m(x-y) - m(x)) dF(y),

with m extended below zero by the penalty.  The barrier strategy at a*
is optimal if and only if (A - q) v_{a*} <= 0 above the barrier; three
sufficient conditions (h monotone past a*, convex density with concave
premium, decreasing density with bounded premium slope) are evaluated
alongside as pass / fail / not-applicable.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .barrier import BarrierSolution
from .errors import NumericsError
from .grid import GridFunction
from .model import ModelParams, PenaltyModel, omega_eval
from .scale import _trapezoid_convolution

_RESIDUAL_TOL = 1e-6
_H_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class OptimalityReport:
    """HJB residuals above the barrier plus the sufficient-condition tests."""

    residual_profile: GridFunction
    max_residual_above: float
    necessary_sufficient_pass: bool
    thm_h_monotone_pass: Optional[bool]
    thm_convex_concave_pass: Optional[bool]
    thm_decreasing_density_pass: Optional[bool]
    barrier: float
    tolerance: float
    sanity_band_max: float  # max |residual| on (0, a*); not a gate

    def to_dict(self) -> dict:
        return {
            "barrier": self.barrier,
            "max_residual_above": self.max_residual_above,
            "necessary_sufficient_pass": self.necessary_sufficient_pass,
            "thm_h_monotone_pass": self.thm_h_monotone_pass,
            "thm_convex_concave_pass": self.thm_convex_concave_pass,
            "thm_decreasing_density_pass": self.thm_decreasing_density_pass,
            "tolerance": self.tolerance,
            "sanity_band_max": self.sanity_band_max,
        }

    def to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def generator_apply(m: GridFunction, params: ModelParams, x: float,
                    extension: Optional[PenaltyModel] = None) -> float:
    """(A m)(x) with m extended below zero by `extension`.

    Defaults to the instance's own penalty; pass PenaltyModel.zero() for
    functions that vanish on the negative axis (e.g. W).  Trapezoidal
    quadrature on the grid for the inner part, closed-form/quadrature
    omega for the tail.
    """
    if m.derivative_values is None:
        raise NumericsError("generator needs derivative samples on the grid function")
    ext = params.penalty if extension is None else extension
    tail_params = dataclasses.replace(params, penalty=ext)
    lam = params.lam
    dx = m.dx
    xv = m.x
    J = int(math.floor((x - m.x0) / dx + 1e-12))
    J = min(J, m.n - 1)
    conv = 0.0
    if J >= 1:
        u = xv[:J + 1]
        fv = np.asarray(params.claim.density(x - u), dtype=float)
        vv = m.values[:J + 1]
        conv += dx * (float(np.dot(vv, fv)) - 0.5 * vv[0] * fv[0] - 0.5 * vv[J] * fv[J])
    rem = x - float(xv[J])
    if rem > 1e-14:
        conv += 0.5 * rem * (m.values[J] * float(params.claim.density(rem))
                             + float(m(x)) * float(params.claim.density(0.0)))
    tail = omega_eval(tail_params, x)
    return float(params.premium.p(x)) * m.derivative(x) \
        + lam * (conv + tail - float(m(x)))


def residual_profile(v: GridFunction, params: ModelParams) -> GridFunction:
    """(A - q) v at every grid node in one batch (v extended by the penalty)."""
    if v.derivative_values is None:
        raise NumericsError("residual profile needs derivative samples")
    x = v.x
    lam, q = params.lam, params.q
    p_vals = np.asarray(params.premium.p(x), dtype=float)
    f_vals = np.asarray(params.claim.density(x), dtype=float)
    conv = _trapezoid_convolution(v.values, f_vals, v.dx)
    if params.penalty.is_zero:
        omega = np.zeros_like(x)
    elif params.claim.kind == "exponential":
        omega = omega_eval(params, 0.0) * np.exp(-params.claim.mu * x)
    else:
        omega = np.array([omega_eval(params, float(xi)) for xi in x])
    g = p_vals * v.derivative_values + lam * (conv + omega - v.values) - q * v.values
    return GridFunction(v.x0, v.dx, g)


def verify_optimality(solution: BarrierSolution, params: ModelParams,
                      tolerance: float = _RESIDUAL_TOL) -> OptimalityReport:
    """Theorem-style optimality decision for the barrier in `solution`.

    Necessary-and-sufficient: max of (A - q) v over grid points strictly
    above the barrier must not exceed tolerance * (1 + max |v|); the band
    below the barrier is reported as a sanity check only.
    """
    a = solution.a_star
    v = solution.v
    x = v.x
    span_needed = a + 5.0 * params.claim.mean()
    if float(x[-1]) < span_needed:
        raise NumericsError(f"grid must extend at least 5 mean claim sizes past "
                            f"the barrier (need {span_needed:.6g}, have {x[-1]:.6g})")
    prof = residual_profile(v, params)
    g = prof.values
    above = x > a + 1e-12
    inner = (x > 1e-12) & (x < a - 1e-12)
    vmax = float(np.max(np.abs(v.values)))
    tol = tolerance * (1.0 + vmax)
    max_above = float(g[above].max()) if above.any() else -math.inf
    ns_pass = max_above <= tol
    sanity = float(np.max(np.abs(g[inner]))) if inner.any() else 0.0

    # (i) h non-increasing past the barrier
    h = solution.h_profile.values
    past = x >= a - 1e-12
    hp = h[past]
    slack = _H_MONOTONE_SLACK * max(1.0, float(np.max(np.abs(h))))
    h_monotone = bool(np.all(np.diff(hp) <= slack)) if hp.size >= 2 else None

    # (ii) convex claim density + concave premium
    convex_concave = bool(params.claim.density_convex and params.premium.concave)

    # (iii) decreasing density + p' <= q + lam above the barrier (zero penalty)
    if params.penalty.is_zero:
        pp = np.asarray(params.premium.p_prime(x[past]), dtype=float)
        decreasing = bool(params.claim.density_decreasing
                          and np.all(pp <= params.q + params.lam + 1e-12))
    else:
        decreasing = None

    return OptimalityReport(prof, max_above, ns_pass, h_monotone,
                            convex_concave, decreasing, a, tol, sanity)
