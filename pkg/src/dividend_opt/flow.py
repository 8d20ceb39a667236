"""Deterministic surplus dynamics between claims.

The claim-free trajectory solves dr/dt = p(r), r(0) = x.  Constant and
linear premiums have elementary solutions; the rational premium
p(x) = c + 1/(1+x) admits an exact implicit time law

    t(x -> b) = (b - x)/c - c^{-2} * ln( (c(1+b)+1) / (c(1+x)+1) ),

which gives hit times directly and the forward flow by Newton inversion.
Tabulated premiums fall back to adaptive RK45 integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NumericsError
from .model import PremiumModel

_NEWTON_TOL = 1e-14
_NEWTON_MAX = 60


def rational_travel_time(c: float, x: float, b: float) -> float:
    """Exact time for the rational-premium flow to move from x to b >= x."""
    return (b - x) / c - (math.log(c * (1.0 + b) + 1.0)
                          - math.log(c * (1.0 + x) + 1.0)) / (c * c)


def rational_flow(c: float, x: float, t: float) -> float:
    """Invert the rational travel-time law for the position after time t."""
    if t == 0.0:
        return x
    b = x + (c + 1.0 / (1.0 + x)) * t  # first-order guess, slight overshoot
    for _ in range(_NEWTON_MAX):
        err = rational_travel_time(c, x, b) - t
        step = err * (c + 1.0 / (1.0 + b))
        b -= step
        if b < x:
            b = x
        if abs(err) < _NEWTON_TOL * (1.0 + t):
            break
    else:
        raise NumericsError(f"rational flow inversion failed at x={x}, t={t}")
    return b


@dataclass(frozen=True)
class FlowSolver:
    """Forward flow and level-hitting times for one premium model.

    Pure functions of immutable configuration; safe for concurrent use.
    The semigroup law forward(forward(x, s), t) == forward(x, s + t)
    holds to ~10x abs_tol.
    """

    premium: PremiumModel
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_step: float = field(default=math.inf)

    def forward(self, x: float, t: float) -> float:
        """Position r_t of the claim-free trajectory started at x >= 0."""
        if t < 0:
            raise ValueError(f"flow time must be >= 0, got {t}")
        if t == 0.0:
            return float(x)
        kind = self.premium.kind
        if kind == "constant":
            return x + self.premium.c * t
        if kind == "linear":
            c, eps = self.premium.c, self.premium.epsilon
            if eps == 0.0:
                return x + c * t
            return (x + c / eps) * math.exp(eps * t) - c / eps
        if kind == "rational":
            return rational_flow(self.premium.c, float(x), float(t))
        return self._forward_numeric(float(x), float(t))

    def _forward_numeric(self, x: float, t: float) -> float:
        from scipy.integrate import solve_ivp

        sol = solve_ivp(lambda _, r: [self.premium.p(r[0])], (0.0, t), [x],
                        rtol=self.rel_tol, atol=self.abs_tol,
                        max_step=self.max_step, dense_output=False)
        if not sol.success:
            raise NumericsError(f"flow integration failed: {sol.message}")
        return float(sol.y[0, -1])

    def hit_time(self, x: float, level: float) -> float:
        """Smallest t with forward(x, t) == level, for level >= x >= 0."""
        if level < x:
            raise ValueError(f"hit level {level} below start {x}")
        if level == x:
            return 0.0
        kind = self.premium.kind
        if kind == "constant":
            return (level - x) / self.premium.c
        if kind == "linear":
            c, eps = self.premium.c, self.premium.epsilon
            if eps == 0.0:
                return (level - x) / c
            return math.log((level + c / eps) / (x + c / eps)) / eps
        if kind == "rational":
            return rational_travel_time(self.premium.c, float(x), float(level))
        return self._hit_numeric(float(x), float(level))

    def _hit_numeric(self, x: float, level: float) -> float:
        from scipy.integrate import solve_ivp

        # p > 0 on [x, level] guarantees the level is reached; bound the
        # search horizon by the smallest premium on the segment
        p_floor = self.premium.floor_from(x, level)
        if p_floor <= 0:
            raise NumericsError("premium not positive on the hit segment")
        t_hi = 1.1 * (level - x) / p_floor + 1e-9

        def reached(_, r):
            return r[0] - level

        reached.terminal = True
        reached.direction = 1.0
        sol = solve_ivp(lambda _, r: [self.premium.p(r[0])], (0.0, t_hi), [x],
                        rtol=min(self.rel_tol, 1e-10), atol=min(self.abs_tol, 1e-12),
                        events=reached, max_step=self.max_step)
        if not sol.success:
            raise NumericsError(f"hit-time integration failed: {sol.message}")
        if sol.t_events[0].size == 0:
            raise NumericsError(f"flow did not reach level {level} from {x} "
                                f"within t={t_hi} (premium underflow?)")
        return float(sol.t_events[0][0])


def flow_forward(premium: PremiumModel, x: float, t: float) -> float:
    return FlowSolver(premium).forward(x, t)


def hit_time(premium: PremiumModel, x: float, level: float) -> float:
    return FlowSolver(premium).hit_time(x, level)
