"""From a boundary symbol to the planar map and back.

a = |Φ'|^{-1} on the circle.  Conversely u = log(1/a) is the boundary
value of Re log Φ', whose holomorphic completion is ĉ_0 + 2 Σ_{n>0} ĉ_n z^n;
exponentiating and integrating gives Φ with Φ(0) = 0 and Φ'(0) > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .circlefn import FourierSeries, grid, holomorphy_defect, resample, sample
from .errors import ConsistencyError, PreconditionError

BOUNDARY_GRID = 512


@dataclass(frozen=True)
class PowerSeries:
    """Σ_k c_k z^k on the closed unit disk."""

    taylor: np.ndarray

    def __post_init__(self):
        c = np.array(self.taylor, dtype=complex).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "taylor", c)

    @property
    def degree(self):
        return self.taylor.size - 1

    def __call__(self, z):
        # Horner
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.taylor[::-1]:
            out = out * z + c
        return out

    def derivative(self):
        k = np.arange(1, self.taylor.size)
        return PowerSeries(self.taylor[1:] * k if k.size else [0.0])

    def antiderivative(self, c0=0.0):
        k = np.arange(1, self.taylor.size + 1)
        return PowerSeries(np.concatenate([[c0], self.taylor / k]))

    def on_circle(self, P=BOUNDARY_GRID):
        return self(np.exp(1j * grid(P)))

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return PowerSeries(np.convolve(self.taylor, other.taylor))
        return PowerSeries(self.taylor * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other])
        n = max(self.taylor.size, other.taylor.size)
        return PowerSeries(np.pad(self.taylor, (0, n - self.taylor.size))
                           + np.pad(other.taylor, (0, n - other.taylor.size)))

    __radd__ = __add__


class MapResult(NamedTuple):
    phi: PowerSeries
    dphi: PowerSeries
    last_coefficient: float  # |Φ'_{Kd}|, convergence indicator


@dataclass(frozen=True)
class DomainCurve:
    points: np.ndarray  # (P, 2)
    theta: np.ndarray
    closing_point: np.ndarray  # Φ evaluated at θ = 2π
    closed: bool = True

    @property
    def closing_gap(self):
        return float(np.hypot(*(self.closing_point - self.points[0])))

    def to_csv(self):
        lines = ["theta,x,y"]
        for t, (x, y) in zip(self.theta, self.points):
            lines.append(f"{t:.17g},{x:.17g},{y:.17g}")
        return "\n".join(lines) + "\n"

    def to_svg(self, stroke="black"):
        """Closed polyline; y is flipped so the picture keeps the usual orientation."""
        x, y = self.points[:, 0], -self.points[:, 1]
        xmin, xmax, ymin, ymax = x.min(), x.max(), y.min(), y.max()
        w, h = max(xmax - xmin, 1e-12), max(ymax - ymin, 1e-12)
        mx, my = 0.05 * w, 0.05 * h
        box = (xmin - mx, ymin - my, w + 2 * mx, h + 2 * my)
        pts = " ".join(f"{px:.9g},{py:.9g}" for px, py in zip(np.append(x, x[0]), np.append(y, y[0])))
        sw = 0.005 * max(w, h)
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{box[0]:.9g} {box[1]:.9g} {box[2]:.9g} {box[3]:.9g}">\n'
            f'  <polyline fill="none" stroke="{stroke}" stroke-width="{sw:.6g}" points="{pts}"/>\n'
            "</svg>\n"
        )


ZERO_RTOL = 1e-12


def _boundary_ok(dphi, P=BOUNDARY_GRID):
    mod = np.abs(dphi.on_circle(P))
    # a zero sitting on a grid node evaluates to rounding noise, not 0
    if not np.min(mod) > ZERO_RTOL * np.max(mod):
        raise PreconditionError("Φ' vanishes on the boundary grid")
    return np.min(mod)


def symbol_from_map(dphi: PowerSeries, band: int, return_tail=False):
    """a = |Φ'(e^{iθ})|^{-1} at the given band."""
    _boundary_ok(dphi)
    P = 1 << int(np.ceil(np.log2(max(64, 8 * band + 8))))
    series, tail = resample(lambda t: 1.0 / np.abs(dphi(np.exp(1j * t))), band, P)
    return (series, tail) if return_tail else series


def log_derivative_series(a: FourierSeries, degree: int, P=None):
    """Taylor coefficients of log Φ' = ĉ_0 + 2 Σ ĉ_n z^n for c = log(1/a)."""
    P = P or 1 << int(np.ceil(np.log2(max(512, 8 * degree + 8, 16 * a.band))))
    vals = sample(a, P)
    if np.min(vals) <= 0:
        raise PreconditionError("map_from_symbol needs a positive symbol")
    c = np.fft.rfft(-np.log(vals)) / P
    taylor = np.zeros(degree + 1, dtype=complex)
    n = min(degree, c.size - 1)
    taylor[0] = c[0].real
    taylor[1:n + 1] = 2 * c[1:n + 1]
    # the completion has no negative frequencies by construction
    completion = FourierSeries(np.concatenate([np.zeros(degree), taylor]), real=False)
    if holomorphy_defect(completion) != 0:
        raise ConsistencyError("holomorphic completion carries negative frequencies")
    return taylor


def exp_series(g, degree):
    """Taylor coefficients of exp(g) via w' = g' w."""
    g = np.asarray(g, dtype=complex)
    dg = np.arange(1, g.size) * g[1:]
    w = np.zeros(degree + 1, dtype=complex)
    w[0] = np.exp(g[0])
    for k in range(degree):
        j = np.arange(min(k + 1, dg.size))
        w[k + 1] = np.sum(dg[j] * w[k - j]) / (k + 1)
    return w


def map_from_symbol(a: FourierSeries, degree: int = 64) -> MapResult:
    if not a.real:
        raise PreconditionError("map_from_symbol needs a real symbol")
    g = log_derivative_series(a, degree)
    dphi = PowerSeries(exp_series(g, degree))
    mod = np.abs(dphi.on_circle())
    if not np.min(mod) > ZERO_RTOL * np.max(mod):
        raise ConsistencyError("truncated Φ' vanishes on the boundary")
    return MapResult(dphi.antiderivative(0.0), dphi, float(abs(dphi.taylor[-1])))


def curve_export(phi: PowerSeries, P: int = BOUNDARY_GRID) -> DomainCurve:
    if P < 4:
        raise PreconditionError("curve_export needs P >= 4")
    theta = grid(P)
    z = phi(np.exp(1j * theta))
    end = phi(np.exp(2j * np.pi))
    pts = np.column_stack([z.real, z.imag])
    return DomainCurve(pts, theta, np.array([end.real, end.imag]))
