"""Uniform-grid sampled functions with interpolation and derivative access."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class GridFunction:
    """A function sampled on a uniform grid.

    Value evaluation between nodes is linear interpolation; evaluation
    outside [x0, x_end] raises.  Derivative samples, when present, are
    interpolated with a C1 cubic (Catmull-Rom) so that optimizers running
    on derived quantities see a smooth surrogate.  `log_scale` is a global
    offset: the represented function is values * exp(log_scale); it is 0
    unless an overflow rescue happened during construction.
    """

    x0: float
    dx: float
    values: np.ndarray
    derivative_values: Optional[np.ndarray] = None
    log_scale: float = 0.0

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if self.dx <= 0:
            raise ValueError(f"grid step must be positive, got {self.dx}")
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("grid needs at least 2 sample points")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if self.derivative_values is not None:
            dv = np.ascontiguousarray(np.asarray(self.derivative_values, dtype=float))
            if dv.shape != vals.shape:
                raise ValueError("derivative sample array must match the value array")
            dv.flags.writeable = False
            object.__setattr__(self, "derivative_values", dv)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def x_end(self) -> float:
        return self.x0 + self.dx * (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def _locate(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = self.x0 - 1e-9 * self.dx, self.x_end + 1e-9 * self.dx
        if np.any(y < lo) or np.any(y > hi):
            raise ValueError(f"evaluation outside grid [{self.x0}, {self.x_end}]")
        return y

    def __call__(self, y):
        """Linear interpolation of the sampled values."""
        y = self._locate(y)
        out = np.interp(y, self.x, self.values)
        return out if out.ndim else float(out)

    def derivative(self, y):
        """C1 cubic interpolation of the derivative samples."""
        if self.derivative_values is None:
            raise ValueError("no derivative samples on this grid function")
        y = self._locate(y)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        d = self.derivative_values
        n = self.n
        pos = np.clip((y - self.x0) / self.dx, 0.0, n - 1.0)
        j = np.minimum(pos.astype(int), n - 2)
        s = pos - j
        # Catmull-Rom node slopes (one-sided at the ends), in units of dx
        jm = np.maximum(j - 1, 0)
        jp = np.minimum(j + 2, n - 1)
        m0 = (d[j + 1] - d[jm]) / (j + 1 - jm)
        m1 = (d[jp] - d[j]) / (jp - j)
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        out = h00 * d[j] + h10 * m0 + h01 * d[j + 1] + h11 * m1
        return float(out[0]) if scalar else out

    def to_csv(self, path):
        """Write "x,value,derivative" rows at 17 significant digits."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_string())

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        buf.write("x,value,derivative\n")
        xs = self.x
        dv = self.derivative_values
        for i in range(self.n):
            dtxt = f"{dv[i]:.17g}" if dv is not None else ""
            buf.write(f"{xs[i]:.17g},{self.values[i]:.17g},{dtxt}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(path) -> "GridFunction":
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        if data.ndim != 2 or data.shape[0] < 2:
            raise ValueError(f"not a grid-function CSV: {path}")
        xs = data[:, 0]
        dx = xs[1] - xs[0]
        if not np.allclose(np.diff(xs), dx, rtol=1e-9, atol=1e-12 * max(1.0, abs(dx))):
            raise ValueError("grid-function CSV must have uniform spacing")
        deriv = None
        if data.shape[1] >= 3 and not np.all(np.isnan(data[:, 2])):
            deriv = data[:, 2]
        return GridFunction(float(xs[0]), float(dx), data[:, 1], deriv)
