"""Problem instances: premium, claim and penalty families, and model validation.

The surplus process grows at rate p(x) between claims, drops by i.i.d.
claim amounts at Poisson(lambda) arrival times, and values are discounted
at rate q.  A non-positive penalty w is charged on the deficit at ruin.

All types are immutable after construction; every function here is pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, ModelValidationError, QuadratureError

_OMEGA_TOL = 1e-10
_DENSITY_MASS_TOL = 1e-8


def _as_readonly(a) -> np.ndarray:
    out = np.ascontiguousarray(np.asarray(a, dtype=float))
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------------------
# premium


@dataclass(frozen=True)
class PremiumModel:
    """Income rate p(x) as a function of the current surplus.

    Families: constant p=c, linear p=c+eps*x, rational p=c+1/(1+x),
    and tabulated samples with linear interpolation.  p must be positive
    and monotone (either direction).
    """

    kind: str
    c: float = 0.0
    epsilon: float = 0.0
    xs: Optional[np.ndarray] = None
    ps: Optional[np.ndarray] = None

    @staticmethod
    def constant(c: float) -> "PremiumModel":
        if c <= 0:
            raise ConfigError(f"constant premium must be positive, got {c}")
        return PremiumModel("constant", c=float(c))

    @staticmethod
    def linear(c: float, epsilon: float) -> "PremiumModel":
        if c <= 0:
            raise ConfigError(f"linear premium level must be positive, got {c}")
        if epsilon < 0:
            raise ConfigError(f"linear premium slope must be >= 0, got {epsilon}")
        return PremiumModel("linear", c=float(c), epsilon=float(epsilon))

    @staticmethod
    def rational(c: float) -> "PremiumModel":
        if c <= 0:
            raise ConfigError(f"rational premium level must be positive, got {c}")
        return PremiumModel("rational", c=float(c))

    @staticmethod
    def tabulated(xs, ps) -> "PremiumModel":
        xs = _as_readonly(xs)
        ps = _as_readonly(ps)
        if xs.ndim != 1 or xs.shape != ps.shape or xs.size < 2:
            raise ConfigError("tabulated premium needs matching 1-d x and p arrays (>= 2 points)")
        if not np.all(np.diff(xs) > 0):
            raise ConfigError("tabulated premium grid must be strictly increasing")
        if np.any(ps <= 0):
            raise ConfigError("premium samples must be positive")
        d = np.diff(ps)
        if not (np.all(d >= -1e-12) or np.all(d <= 1e-12)):
            raise ConfigError("tabulated premium must be monotone")
        return PremiumModel("tabulated", xs=xs, ps=ps)

    def p(self, x):
        """Premium rate at surplus x (scalar or array)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            out = np.full_like(x, self.c)
        elif self.kind == "linear":
            out = self.c + self.epsilon * x
        elif self.kind == "rational":
            out = self.c + 1.0 / (1.0 + x)
        else:
            if np.any(x < self.xs[0] - 1e-12) or np.any(x > self.xs[-1] + 1e-12):
                raise ConfigError("tabulated premium evaluated outside its grid")
            out = np.interp(x, self.xs, self.ps)
        return out if out.ndim else float(out)

    def p_prime(self, x):
        """Derivative of the premium rate (a.e. for tabulated)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            out = np.zeros_like(x)
        elif self.kind == "linear":
            out = np.full_like(x, self.epsilon)
        elif self.kind == "rational":
            out = -1.0 / (1.0 + x) ** 2
        else:
            idx = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, self.xs.size - 2)
            out = (self.ps[idx + 1] - self.ps[idx]) / (self.xs[idx + 1] - self.xs[idx])
        return out if out.ndim else float(out)

    @property
    def concave(self) -> Optional[bool]:
        """p'' <= 0 by family; None when unknown (tabulated: sampled check)."""
        if self.kind in ("constant", "linear"):
            return True
        if self.kind == "rational":
            return False  # p'' = 2/(1+x)^3 > 0
        d2 = np.diff(self.ps, 2)
        return bool(np.all(d2 <= 1e-10 * max(1.0, float(np.max(np.abs(self.ps))))))

    def floor_from(self, x: float, x_hi: float) -> float:
        """inf of p over [x, x_hi] (monotone families make this an endpoint)."""
        return float(min(self.p(x), self.p(x_hi)))


# ---------------------------------------------------------------------------
# claims


@dataclass(frozen=True)
class ClaimModel:
    """Claim size distribution with density f and d.f. F.

    Exponential(mu) or a density tabulated on a uniform grid (linearly
    interpolated, held at the last sample inside the grid and zero past
    the grid end).
    """

    kind: str
    mu: float = 0.0
    x0: float = 0.0
    dx: float = 0.0
    f_vals: Optional[np.ndarray] = None
    _cdf_vals: Optional[np.ndarray] = field(default=None, repr=False)

    @staticmethod
    def exponential(mu: float) -> "ClaimModel":
        if mu <= 0:
            raise ConfigError(f"exponential claim rate must be positive, got {mu}")
        return ClaimModel("exponential", mu=float(mu))

    @staticmethod
    def tabulated(x0: float, dx: float, density) -> "ClaimModel":
        f = _as_readonly(density)
        if dx <= 0 or f.ndim != 1 or f.size < 2:
            raise ConfigError("tabulated claim needs dx > 0 and >= 2 density samples")
        if x0 < 0:
            raise ConfigError("claim density grid must start at x0 >= 0")
        if np.any(f < 0):
            raise ConfigError("claim density must be non-negative")
        mass = float(np.trapezoid(f, dx=dx)) + x0 * f[0]  # leading cell approximated as a box
        if abs(mass - 1.0) > _DENSITY_MASS_TOL:
            raise ConfigError(f"claim density integrates to {mass:.10f}, not 1 "
                              f"(tolerance {_DENSITY_MASS_TOL})")
        cdf = np.concatenate(([0.0], np.cumsum((f[1:] + f[:-1]) * 0.5 * dx))) + x0 * f[0]
        cdf = np.minimum(cdf, 1.0)
        return ClaimModel("tabulated", x0=float(x0), dx=float(dx), f_vals=f,
                          _cdf_vals=_as_readonly(cdf))

    def density(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "exponential":
            out = np.where(y >= 0, self.mu * np.exp(-self.mu * np.maximum(y, 0.0)), 0.0)
        else:
            end = self.x0 + self.dx * (self.f_vals.size - 1)
            inside = (y >= self.x0) & (y <= end)
            out = np.where(inside, np.interp(y, self._grid(), self.f_vals), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "exponential":
            out = np.where(y >= 0, -np.expm1(-self.mu * np.maximum(y, 0.0)), 0.0)
        else:
            end = self.x0 + self.dx * (self.f_vals.size - 1)
            out = np.where(y >= end, 1.0,
                           np.where(y < self.x0, 0.0, np.interp(y, self._grid(), self._cdf_vals)))
        return out if out.ndim else float(out)

    def _grid(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.f_vals.size)

    def mean(self) -> float:
        if self.kind == "exponential":
            return 1.0 / self.mu
        g = self._grid()
        return float(np.trapezoid(g * self.f_vals, dx=self.dx))

    def ppf(self, u):
        """Inverse d.f. (used for sampling)."""
        if self.kind == "exponential":
            return -np.log1p(-np.asarray(u, dtype=float)) / self.mu
        return np.interp(u, self._cdf_vals, self._grid())

    @property
    def support_end(self) -> float:
        return math.inf if self.kind == "exponential" else self.x0 + self.dx * (self.f_vals.size - 1)

    # flags consumed by the sufficient-condition checks
    @property
    def density_convex(self) -> bool:
        if self.kind == "exponential":
            return True
        d2 = np.diff(self.f_vals, 2)
        return bool(np.all(d2 >= -1e-10 * max(1.0, float(np.max(self.f_vals)))))

    @property
    def density_decreasing(self) -> bool:
        if self.kind == "exponential":
            return True
        return bool(np.all(np.diff(self.f_vals) <= 1e-12))

    @property
    def density_at_zero(self) -> float:
        return float(self.density(0.0))


# ---------------------------------------------------------------------------
# penalty


@dataclass(frozen=True)
class PenaltyModel:
    """Non-positive penalty w on the deficit at ruin (argument x < 0).

    zero: w = 0; constant: w = -k; linear: w(x) = -k + beta*x for x < 0
    (beta >= 0, so more negative deficit means harsher penalty);
    tabulated: samples on x < 0, held at the outermost sample beyond
    the grid.
    """

    kind: str
    k: float = 0.0
    beta: float = 0.0
    xs: Optional[np.ndarray] = None
    ws: Optional[np.ndarray] = None

    @staticmethod
    def zero() -> "PenaltyModel":
        return PenaltyModel("zero")

    @staticmethod
    def constant(k: float) -> "PenaltyModel":
        if k < 0:
            raise ConfigError(f"constant penalty level must be >= 0, got {k}")
        return PenaltyModel("constant", k=float(k))

    @staticmethod
    def linear(k: float, beta: float) -> "PenaltyModel":
        if k < 0 or beta < 0:
            raise ConfigError("linear penalty needs k >= 0 and beta >= 0")
        return PenaltyModel("linear", k=float(k), beta=float(beta))

    @staticmethod
    def tabulated(xs, ws) -> "PenaltyModel":
        xs = _as_readonly(xs)
        ws = _as_readonly(ws)
        if xs.ndim != 1 or xs.shape != ws.shape or xs.size < 2:
            raise ConfigError("tabulated penalty needs matching 1-d arrays (>= 2 points)")
        if not np.all(np.diff(xs) > 0) or np.any(xs >= 0):
            raise ConfigError("tabulated penalty grid must be increasing and entirely on x < 0")
        if np.any(ws > 0):
            raise ConfigError("penalty samples must be <= 0")
        return PenaltyModel("tabulated", xs=xs, ws=ws)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or (self.kind == "constant" and self.k == 0.0) \
            or (self.kind == "linear" and self.k == 0.0 and self.beta == 0.0)

    def w(self, x):
        """Penalty value at deficit x (x < 0; w(x) <= 0)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(x)
        elif self.kind == "constant":
            out = np.full_like(x, -self.k)
        elif self.kind == "linear":
            out = -self.k + self.beta * x
        else:
            out = np.interp(x, self.xs, self.ws)  # np.interp holds endpoint values
        return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# full instance


@dataclass(frozen=True)
class ModelParams:
    """A complete problem instance."""

    premium: PremiumModel
    claim: ClaimModel
    penalty: PenaltyModel
    lam: float
    q: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigError(f"claim arrival intensity must be positive, got {self.lam}")
        if self.q < 0:
            raise ConfigError(f"discount rate must be >= 0, got {self.q}")
        if not math.isfinite(self.claim.mean()):
            raise ConfigError("claim mean must be finite")


def omega_eval(params: ModelParams, x: float) -> float:
    """Expected penalty rate omega(x) = integral of w(x-z) dF(z) over z > x.

    Closed form for exponential claims with zero/constant/linear penalties;
    adaptive quadrature (abs tol 1e-10) otherwise.  Always <= 0.
    """
    if x < 0:
        raise ValueError(f"omega is defined on x >= 0, got {x}")
    pen, claim = params.penalty, params.claim
    if pen.is_zero:
        return 0.0
    if claim.kind == "exponential" and pen.kind in ("constant", "linear"):
        mu = claim.mu
        # E[w(x-C); C > x] with the memoryless overshoot: -(k + beta/mu) * exp(-mu x)
        return -(pen.k + pen.beta / mu) * math.exp(-mu * x)
    hi = claim.support_end
    if math.isinf(hi):
        hi = x + 60.0 / claim.mu
    if hi <= x:
        return 0.0
    if claim.kind == "tabulated":
        # the density is piecewise linear with many kinks: composite Simpson
        # on a refinement of its own grid instead of adaptive quadrature
        m = 2 * max(8, int(math.ceil((hi - x) / (0.5 * claim.dx))))
        zs = np.linspace(x, hi, m + 1)
        vals = np.asarray(pen.w(x - zs)) * np.asarray(claim.density(zs))
        from scipy.integrate import simpson

        return min(float(simpson(vals, x=zs)), 0.0)
    val, err = quad(lambda z: pen.w(x - z) * claim.density(z), x, hi,
                    epsabs=_OMEGA_TOL, limit=200)
    if err > 100 * _OMEGA_TOL + 1e-8 * abs(val):
        raise QuadratureError(f"omega({x}) quadrature error estimate {err:.2e} "
                              f"exceeds tolerance", achieved_error=err)
    return min(val, 0.0)


def penalty_envelope(params: ModelParams) -> float:
    """sup over y >= 0 of E[-w(y - C) | C > y] (the integrability constant)."""
    pen, claim = params.penalty, params.claim
    if pen.is_zero:
        return 0.0
    if claim.kind == "exponential" and pen.kind in ("constant", "linear"):
        return pen.k + pen.beta / claim.mu
    ys = np.linspace(0.0, max(1.0, 10.0 * claim.mean()), 201)
    vals = []
    for y in ys:
        surv = 1.0 - float(claim.cdf(y))
        if surv < 1e-14:
            continue
        vals.append(-omega_eval(params, float(y)) / surv)
    return float(max(vals)) if vals else 0.0


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the standing-assumption checks, with reasons."""

    speed_pass: bool
    speed_bound: tuple  # fitted (A, B) with integral <= A*x + B, or (nan, nan)
    drift_pass: bool
    drift_x0: float  # capital beyond which p(x) > lam * E[C]
    penalty_pass: bool
    reasons: tuple

    @property
    def passed(self) -> bool:
        return self.speed_pass and self.drift_pass and self.penalty_pass

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "speed_pass": self.speed_pass,
            "speed_bound": list(self.speed_bound),
            "drift_pass": self.drift_pass,
            "drift_x0": self.drift_x0,
            "penalty_pass": self.penalty_pass,
            "reasons": list(self.reasons),
        }


_SPEED_CAPITALS = (0.0, 1.0, 10.0, 100.0)


def _discounted_premium_integral(params: ModelParams, x: float, horizon: float):
    """(integral over [0, H] of e^{-qt} p(r_t^x) dt, integrand at H)."""
    from .flow import FlowSolver  # late import: flow depends on PremiumModel only

    solver = FlowSolver(params.premium)
    q = params.q
    p = params.premium.p
    kind = params.premium.kind
    if kind == "constant":
        c = params.premium.c
        val = c * horizon if q == 0 else c * (1.0 - math.exp(-q * horizon)) / q
        return val, c * math.exp(-q * horizon)
    if kind == "linear":
        # e^{-qt} p(r_t^x) = (eps*x + c) * e^{(eps-q) t}
        eps, c = params.premium.epsilon, params.premium.c
        a0 = eps * x + c
        rate = eps - q
        if rate == 0:
            val = a0 * horizon
        else:
            val = a0 * (math.exp(rate * horizon) - 1.0) / rate
        return val, a0 * math.exp(rate * horizon)
    # numeric: Simpson on a time grid of the flow
    n = 2001
    ts = np.linspace(0.0, horizon, n)
    rs = np.array([solver.forward(x, float(t)) for t in ts])
    integrand = np.exp(-q * ts) * np.asarray(p(rs), dtype=float)
    from scipy.integrate import simpson

    return float(simpson(integrand, x=ts)), float(integrand[-1])


def validate_model(params: ModelParams, horizon: Optional[float] = None) -> ValidationReport:
    """Check the standing assumptions: speed condition, eventual positive
    drift, and penalty non-positivity/integrability.

    `horizon` bounds the numerical speed-condition integrals; by default it
    adapts to the discount rate so the truncated tail is negligible.
    Deterministic: identical inputs produce identical reports.  The hard
    rejection (raise) is q = 0 with a linear premium of positive slope,
    where the speed integral diverges exponentially.
    """
    if horizon is not None and horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    reasons = []
    prem, claim = params.premium, params.claim
    if np.any(np.asarray(prem.p(np.linspace(0.0, 10.0, 11))) <= 0):
        raise ModelValidationError("premium must be positive on the working domain")
    if params.q == 0.0 and prem.kind == "linear" and prem.epsilon > 0:
        raise ModelValidationError(
            "q = 0 with a linear premium of positive slope: the discounted "
            "premium integral diverges (speed condition cannot hold)")

    # (a) speed condition
    speed_pass = True
    A = B = math.nan
    if prem.kind == "linear" and params.q > 0 and prem.epsilon >= params.q:
        speed_pass = False
        reasons.append(f"speed condition fails analytically: premium slope "
                       f"{prem.epsilon} >= discount rate {params.q}")
    elif params.q == 0.0:
        speed_pass = False
        reasons.append("speed condition fails: q = 0 makes the discounted premium "
                       "integral diverge for any positive premium")
    elif prem.kind == "linear":
        # exact: integrand is (eps*x + c) e^{(eps-q)t}, eps < q here
        A = prem.epsilon / (params.q - prem.epsilon)
        B = prem.c / (params.q - prem.epsilon)
    else:
        H = horizon if horizon is not None else max(200.0, 45.0 / params.q)
        ints = []
        for x in _SPEED_CAPITALS:
            val, tail = _discounted_premium_integral(params, x, H)
            # remaining mass of a ~e^{-qt}-decaying integrand is ~ tail/q
            if tail / params.q > 1e-6 * (1.0 + val):
                speed_pass = False
                reasons.append(f"speed integral not converged at x={x}: integrand at "
                               f"horizon {H} is {tail:.3e}")
                break
            ints.append(val)
        if speed_pass:
            B = ints[0]
            A = max(0.0, max((iv - B) / x for x, iv in zip(_SPEED_CAPITALS[1:], ints[1:])))

    # (b) eventual positive drift: p(x) > lam * E[C] from some x0 on
    rate_out = params.lam * claim.mean()
    x_hi = 100.0 if prem.kind != "tabulated" else float(prem.xs[-1])
    xs = np.linspace(0.0, x_hi, 501)
    pvals = np.asarray(prem.p(xs), dtype=float)
    above = pvals > rate_out
    drift_pass = bool(above[-1])
    if prem.kind == "rational":
        drift_pass = prem.c >= rate_out  # limit level as x -> inf
    elif prem.kind == "linear" and prem.epsilon > 0:
        drift_pass = True
    if drift_pass:
        below = np.nonzero(~above)[0]
        drift_x0 = float(xs[below[-1] + 1]) if below.size and below[-1] + 1 < xs.size else 0.0
        if prem.kind == "linear" and prem.epsilon > 0 and not above[-1]:
            drift_x0 = (rate_out - prem.c) / prem.epsilon
    else:
        drift_x0 = math.inf
        reasons.append(f"no eventual positive drift: p(x) <= lam*E[C] = {rate_out:.6g} "
                       f"for large x on the working domain")

    # (c) penalty sign and integrability
    penalty_pass = True
    if not params.penalty.is_zero:
        test_x = np.linspace(-max(10.0, 5.0 * claim.mean()), -1e-9, 101)
        if np.any(np.asarray(params.penalty.w(test_x)) > 0):
            penalty_pass = False
            reasons.append("penalty takes positive values on x < 0")
        else:
            env = penalty_envelope(params)
            if not math.isfinite(env):
                penalty_pass = False
                reasons.append("penalty integrability constant is not finite")

    return ValidationReport(speed_pass, (A, B), drift_pass, drift_x0,
                            penalty_pass, tuple(reasons))


# ---------------------------------------------------------------------------
# JSON configuration


def _reject_unknown(d: dict, allowed: set, where: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def params_from_dict(doc: dict) -> ModelParams:
    """Build a ModelParams from the JSON configuration schema.

    {"premium": {"kind": ...}, "claim": {"kind": ...}, "penalty": {"kind": ...},
     "lambda": ..., "q": ...} with unknown keys rejected at every level.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    _reject_unknown(doc, {"premium", "claim", "penalty", "lambda", "q"}, "config")
    for key in ("premium", "claim", "penalty", "lambda", "q"):
        if key not in doc:
            raise ConfigError(f"missing required key '{key}'")

    prem = doc["premium"]
    kind = prem.get("kind")
    if kind == "constant":
        _reject_unknown(prem, {"kind", "c"}, "premium")
        premium = PremiumModel.constant(prem["c"])
    elif kind == "linear":
        _reject_unknown(prem, {"kind", "c", "epsilon"}, "premium")
        premium = PremiumModel.linear(prem["c"], prem["epsilon"])
    elif kind == "rational":
        _reject_unknown(prem, {"kind", "c"}, "premium")
        premium = PremiumModel.rational(prem["c"])
    elif kind == "tabulated":
        _reject_unknown(prem, {"kind", "x", "p"}, "premium")
        premium = PremiumModel.tabulated(prem["x"], prem["p"])
    else:
        raise ConfigError(f"unknown premium kind {kind!r}")

    cl = doc["claim"]
    kind = cl.get("kind")
    if kind == "exponential":
        _reject_unknown(cl, {"kind", "mu"}, "claim")
        claim = ClaimModel.exponential(cl["mu"])
    elif kind == "tabulated":
        _reject_unknown(cl, {"kind", "x0", "dx", "density"}, "claim")
        claim = ClaimModel.tabulated(cl["x0"], cl["dx"], cl["density"])
    else:
        raise ConfigError(f"unknown claim kind {kind!r}")

    pen = doc["penalty"]
    kind = pen.get("kind")
    if kind == "zero":
        _reject_unknown(pen, {"kind"}, "penalty")
        penalty = PenaltyModel.zero()
    elif kind == "constant":
        _reject_unknown(pen, {"kind", "k"}, "penalty")
        penalty = PenaltyModel.constant(pen["k"])
    elif kind == "linear":
        _reject_unknown(pen, {"kind", "k", "beta"}, "penalty")
        penalty = PenaltyModel.linear(pen["k"], pen["beta"])
    elif kind == "tabulated":
        _reject_unknown(pen, {"kind", "x", "w"}, "penalty")
        penalty = PenaltyModel.tabulated(pen["x"], pen["w"])
    else:
        raise ConfigError(f"unknown penalty kind {kind!r}")

    return ModelParams(premium, claim, penalty, lam=float(doc["lambda"]), q=float(doc["q"]))


def params_from_json(path) -> ModelParams:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return params_from_dict(doc)


def params_to_dict(params: ModelParams) -> dict:
    prem = params.premium
    if prem.kind == "constant":
        pd = {"kind": "constant", "c": prem.c}
    elif prem.kind == "linear":
        pd = {"kind": "linear", "c": prem.c, "epsilon": prem.epsilon}
    elif prem.kind == "rational":
        pd = {"kind": "rational", "c": prem.c}
    else:
        pd = {"kind": "tabulated", "x": prem.xs.tolist(), "p": prem.ps.tolist()}
    cl = params.claim
    if cl.kind == "exponential":
        cd = {"kind": "exponential", "mu": cl.mu}
    else:
        cd = {"kind": "tabulated", "x0": cl.x0, "dx": cl.dx, "density": cl.f_vals.tolist()}
    pen = params.penalty
    if pen.kind == "zero":
        wd = {"kind": "zero"}
    elif pen.kind == "constant":
        wd = {"kind": "constant", "k": pen.k}
    elif pen.kind == "linear":
        wd = {"kind": "linear", "k": pen.k, "beta": pen.beta}
    else:
        wd = {"kind": "tabulated", "x": pen.xs.tolist(), "w": pen.ws.tolist()}
    return {"premium": pd, "claim": cd, "penalty": wd, "lambda": params.lam, "q": params.q}
