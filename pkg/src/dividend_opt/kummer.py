"""Confluent hypergeometric (Kummer) functions M and U.

M(a, b, z) is the regular solution (power series); U(a, b, z) the
singular one, computed by whichever of these applies first:

  1. a or a-b+1 a non-positive integer: the large-z expansion terminates
     and is exact for every z > 0;
  2. z >= 30: optimally truncated asymptotic series;
  3. b not within 1e-8 of an integer: the standard connection formula
     through two M series;
  4. otherwise: the Laplace integral representation (a > 0), evaluated
     by adaptive quadrature.

When the connection formula (or the truncated asymptotic series) would
lose more than 1e-8 in relative cancellation, the value is recomputed
through the integral representation; the `precision_loss` flag on the
diagnostics sink records that the classical route degraded, while
`route` names the formula that actually produced the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericsError

_SERIES_RTOL = 1e-14
_SERIES_MAX_TERMS = 20000
_ASYMPTOTIC_Z = 30.0
_LARGE_Z_SERIES_SWITCH = 250.0
_CANCEL_FLAG = 1e-8


@dataclass
class KummerDiagnostics:
    """Filled in by kummer_M / kummer_U when passed as `diag`."""

    precision_loss: bool = False
    cancellation: float = 0.0
    terms: int = 0
    route: str = ""

    def update(self, route: str, cancellation: float, terms: int):
        self.route = route
        self.terms = terms
        self.cancellation = max(self.cancellation, cancellation)
        if self.cancellation > _CANCEL_FLAG:
            self.precision_loss = True


def _is_nonpositive_int(v: float, tol: float = 1e-12) -> bool:
    return v <= tol and abs(v - round(v)) < tol


def _series_M(a: float, b: float, z: float):
    """Power series sum with term-ratio stopping; returns (value, max|term|, k)."""
    term = 1.0
    total = 1.0
    peak = 1.0
    for k in range(1, _SERIES_MAX_TERMS):
        term *= (a + k - 1) / (b + k - 1) * z / k
        if term == 0.0:  # (a)_k hit zero: the series terminates exactly
            return total, peak, k
        total += term
        peak = max(peak, abs(term))
        if abs(term) <= _SERIES_RTOL * abs(total) and k > 3:
            return total, peak, k
    raise NumericsError(f"Kummer M series did not converge for a={a}, b={b}, z={z}")


def kummer_M(a: float, b: float, z: float, diag: KummerDiagnostics | None = None) -> float:
    """Kummer's M (confluent hypergeometric 1F1)."""
    if _is_nonpositive_int(b) and not (_is_nonpositive_int(a) and round(a) >= round(b)):
        raise ValueError(f"M(a, b, z) undefined for non-positive integer b={b}")
    if z == 0.0:
        return 1.0
    if a == b:
        return math.exp(z)
    if z < 0.0:
        # Kummer transform keeps every series term positive
        return math.exp(z) * kummer_M(b - a, b, -z, diag)
    if z > _LARGE_Z_SERIES_SWITCH and not _is_nonpositive_int(a):
        # large-z expansion: M ~ Gamma(b)/Gamma(a) e^z z^{a-b} 2F0(b-a, 1-a; 1/z)
        val = _asymptotic_sum(b - a, 1.0 - a, z)
        scale = math.exp(z + (a - b) * math.log(z)) * math.gamma(b) / math.gamma(a)
        if diag:
            diag.update("M-asymptotic", _asymptotic_tail(b - a, 1.0 - a, z), 0)
        return scale * val
    total, peak, k = _series_M(a, b, z)
    if diag:
        cancel = peak / abs(total) if total != 0.0 else math.inf
        diag.update("M-series", cancel * _SERIES_RTOL, k)
    return total


def _asymptotic_sum(p: float, r: float, minus_z: float) -> float:
    """sum_k (p)_k (r)_k / (k! * minus_z^k), truncated at the smallest term.

    Divergent in general; terminates exactly when p or r is a
    non-positive integer.
    """
    term = 1.0
    total = 1.0
    smallest = 1.0
    for k in range(1, 400):
        term *= (p + k - 1) * (r + k - 1) / (k * minus_z)
        if term == 0.0:
            break
        if abs(term) > smallest:  # series started diverging: stop before the blow-up
            break
        total += term
        smallest = abs(term)
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def kummer_U(a: float, b: float, z: float, diag: KummerDiagnostics | None = None) -> float:
    """Tricomi's U (the solution decaying like z^-a)."""
    if z <= 0.0:
        raise ValueError(f"U(a, b, z) requires z > 0, got {z}")

    # 1. terminating expansion (exact polynomial in 1/z)
    if _is_nonpositive_int(a) or _is_nonpositive_int(a - b + 1.0):
        val = _terminating_U(a, b, z)
        if diag:
            diag.update("U-terminating", 0.0, 0)
        return val

    # 2. asymptotic series for large z: z^-a 2F0(a, a-b+1; -1/z)
    if z >= _ASYMPTOTIC_Z:
        tail = _asymptotic_tail(a, a - b + 1.0, z)
        if tail <= _CANCEL_FLAG or a <= 0:
            if diag:
                diag.update("U-asymptotic", tail, 0)
            if tail > _CANCEL_FLAG and diag is None:
                raise NumericsError(f"U asymptotic series stalls at relative "
                                    f"{tail:.2e} for a={a}, b={b}, z={z}")
            return z ** (-a) * _asymptotic_sum(a, a - b + 1.0, -z)
        if diag:  # degraded: record the stall, produce the value elsewhere
            diag.update("U-asymptotic-stalled", tail, 0)
        return _integral_U(a, b, z, diag)

    # 3. connection formula (needs b away from the integers)
    if abs(b - round(b)) > 1e-8:
        m1, _, _ = _series_M(a, b, z)
        m2, _, _ = _series_M(a - b + 1.0, 2.0 - b, z)
        t1 = math.gamma(1.0 - b) / math.gamma(a - b + 1.0) * m1
        t2 = math.gamma(b - 1.0) / math.gamma(a) * z ** (1.0 - b) * m2
        val = t1 + t2
        # each term carries ~1e-15 relative error from its own series
        cancel = (abs(t1) + abs(t2)) / abs(val) * 1e-15 if val != 0.0 else math.inf
        if cancel <= _CANCEL_FLAG:
            if diag:
                diag.update("U-connection", cancel, 0)
            return val
        if diag:  # degraded: two huge M terms nearly cancel
            diag.update("U-connection-degraded", cancel, 0)
        if a <= 0:
            if diag:
                return val
            raise NumericsError(f"U connection formula cancellation ~{cancel:.2e} "
                                f"for a={a}, b={b}, z={z} with no fallback (a <= 0)")
        return _integral_U(a, b, z, diag)

    # 4. Laplace integral (valid for a > 0)
    if a <= 0:
        raise ValueError(f"U(a, b, z) with integer b={b} and a={a} <= 0 unsupported")
    return _integral_U(a, b, z, diag)


def _integral_U(a: float, b: float, z: float, diag: KummerDiagnostics | None) -> float:
    """Laplace integral of U for a > 0, with the t^{a-1} endpoint handled
    by an algebraic-weight rule so small a stays stable."""
    from scipy.integrate import quad

    smooth = lambda t: math.exp(-z * t + (b - a - 1.0) * math.log1p(t))
    head, _ = quad(smooth, 0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0),
                   epsabs=1e-300, epsrel=1e-13, limit=300)
    full = lambda t: math.exp(-z * t + (a - 1.0) * math.log(t)
                              + (b - a - 1.0) * math.log1p(t))
    tail, _ = quad(full, 1.0, math.inf, epsabs=1e-300, epsrel=1e-13, limit=300)
    val = (head + tail) / math.gamma(a)
    if diag:
        diag.route = "U-integral"
        diag.terms = 0
    return val


def _terminating_U(a: float, b: float, z: float) -> float:
    if _is_nonpositive_int(a):
        n = int(round(-a))
    else:
        n = int(round(-(a - b + 1.0)))
    term = 1.0
    total = 1.0
    for k in range(1, n + 1):
        term *= (a + k - 1) * (a - b + k) / (-z * k)
        total += term
    return z ** (-a) * total


def _asymptotic_tail(p: float, r: float, z: float) -> float:
    """Relative size of the smallest (first omitted) asymptotic term."""
    term = 1.0
    smallest = 1.0
    for k in range(1, 400):
        term *= abs((p + k - 1) * (r + k - 1)) / (k * z)
        if term > smallest:
            break
        smallest = term
        if term < 1e-17:
            break
    return smallest
