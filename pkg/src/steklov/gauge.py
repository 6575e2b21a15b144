"""Conformal equivalence of symbols and the b̂_1 = 0 gauge.

A disk automorphism is Ψ(z) = e^{iα}(z - w)/(1 - w̄z); its anticonformal
partner is the complex conjugate of that map.  The pullback of a symbol is

    b(θ) = a(Ψ(e^{iθ})) |1 - w̄ e^{iθ}|^2 / (1 - |w|^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .circlefn import FourierSeries, grid, resample, sample
from .errors import PreconditionError, SearchError

TAIL_TOL = 1e-20
R_STEP = 0.05
R_LATE = (0.97, 0.99, 0.995, 0.999)
N_ALPHA = 256


@dataclass(frozen=True)
class MoebiusParams:
    w: complex = 0j
    alpha: float = 0.0
    conjugate: bool = False

    def __post_init__(self):
        if abs(self.w) >= 1 - 1e-9:
            raise PreconditionError(f"|w| = {abs(self.w)} is not inside the disk")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.exp(1j * self.alpha) * (z - self.w) / (1 - np.conj(self.w) * z)
        return np.conj(out) if self.conjugate else out

    def boundary_jacobian(self, theta):
        """|dψ/dθ| on the unit circle."""
        z = np.exp(1j * np.asarray(theta))
        return (1 - abs(self.w) ** 2) / np.abs(1 - np.conj(self.w) * z) ** 2

    def matrix(self):
        e = np.exp(1j * self.alpha)
        return np.array([[e, -e * self.w], [-np.conj(self.w), 1]])

    def compose(self, other):
        """The automorphism z ↦ self(other(z)) (conformal maps only)."""
        if self.conjugate or other.conjugate:
            raise PreconditionError("compose supports conformal maps only")
        (A, B), (C, D) = self.matrix() @ other.matrix()
        return MoebiusParams(w=-B / A, alpha=float(np.angle(A / D)))


IDENTITY = MoebiusParams()


class Pullback(NamedTuple):
    series: FourierSeries
    tail_energy: float
    warning: bool


def mobius_pullback(a: FourierSeries, psi: MoebiusParams, out_band=None,
                    tail_tol=TAIL_TOL) -> Pullback:
    if not a.real:
        raise PreconditionError("pullback needs a real symbol")
    if np.min(sample(a, max(256, 16 * a.band))) <= 0:
        raise PreconditionError("pullback needs a positive symbol")
    if out_band is None:
        out_band = 4 * a.band + 16
    if out_band < a.band:
        raise PreconditionError("out_band must be at least band(a)")

    def b(theta):
        phi = np.angle(psi(np.exp(1j * theta)))
        return a.evaluate(phi) / psi.boundary_jacobian(theta)

    P = 1 << int(np.ceil(np.log2(max(256, 8 * out_band + 8))))
    series, tail = resample(b, out_band, P)
    return Pullback(series, tail, tail > tail_tol)


def _quad_size(a, r):
    spread = (1 + r) / max(1 - r, 1e-6)
    P = max(64, 8 * a.band, int(np.ceil(8 * max(a.band, 1) * spread)) + 32)
    return 1 << int(np.ceil(np.log2(P)))


def h_function(a: FourierSeries, r: float, alpha: float) -> complex:
    """(1 - r^2) e^{-iα} (b̂_{r,α})_1, by the trapezoid rule on the circle."""
    if not 0 <= r < 1:
        raise PreconditionError("h_function needs 0 <= r < 1")
    P = _quad_size(a, r)
    theta = grid(P)
    z = np.exp(1j * theta)
    inner = np.exp(1j * alpha) * (z - r) / (1 - r * z)
    integrand = np.exp(-1j * (alpha + theta)) * a.evaluate(np.angle(inner)) * np.abs(1 - r * z) ** 2
    return complex(np.mean(integrand))


def _h_on_circle(a, r, alphas):
    return np.array([h_function(a, r, t) for t in alphas])


def winding_number(values):
    """Turns of a closed sampled curve around 0 (last point joins the first)."""
    v = np.asarray(values)
    steps = np.angle(np.roll(v, -1) / v)
    return int(np.rint(np.sum(steps) / (2 * np.pi)))


def _h_xy(a, p):
    r = float(np.hypot(*p))
    return h_function(a, r, float(np.arctan2(p[1], p[0])))


def _newton(a, p0, tol, max_iter=60, rmax=1 - 1e-6):
    p = np.array(p0, dtype=float)
    h = _h_xy(a, p)
    for _ in range(max_iter):
        if abs(h) < tol:
            break
        eps = 1e-7
        J = np.empty((2, 2))
        for i in range(2):
            dp = np.zeros(2)
            dp[i] = eps
            dh = (_h_xy(a, p + dp) - _h_xy(a, p - dp)) / (2 * eps)
            J[:, i] = dh.real, dh.imag
        try:
            step = np.linalg.solve(J, -np.array([h.real, h.imag]))
        except np.linalg.LinAlgError:
            break
        t = 1.0
        while t > 1e-4:
            q = p + t * step
            if np.hypot(*q) < rmax:
                hq = _h_xy(a, q)
                if abs(hq) < abs(h):
                    p, h = q, hq
                    break
            t *= 0.5
        else:
            break
    return p, h


@dataclass(frozen=True)
class GaugeResult:
    b: FourierSeries
    params: MoebiusParams
    r0: float
    alpha0: float
    residual: float
    tail_energy: float


def find_gauge_zero(a: FourierSeries, tol=1e-10, refinements=4):
    """(r0, α0, |H|) with |H(r0, α0)| < tol, located by the winding argument."""
    h0 = a.coef(1)
    if abs(h0) < tol:
        return 0.0, 0.0, abs(h0)
    alphas = 2 * np.pi * np.arange(N_ALPHA) / N_ALPHA
    radii = list(np.arange(R_STEP, 0.95 + 1e-12, R_STEP)) + list(R_LATE)
    r_in, r_out = 0.0, None
    for r in radii:
        if winding_number(_h_on_circle(a, r, alphas)) != 0:
            r_out = r
            break
        r_in = r
    if r_out is None:
        raise SearchError("H(r, .) never winds around 0", abs(h0), (0.0, 0.0))
    # seed Newton from the best points of a polar grid over the disk of radius r_out
    best = (abs(h0), np.zeros(2))
    lo, hi, na = 0.0, r_out, 48
    centre = None
    for _ in range(refinements):
        cand = []
        for rr in np.linspace(lo, hi, 9)[1:]:
            for t in np.linspace(0, 2 * np.pi, na, endpoint=False):
                p = np.array([rr * np.cos(t), rr * np.sin(t)])
                if centre is not None:
                    p = centre + p
                if np.hypot(*p) < r_out:
                    cand.append((abs(_h_xy(a, p)), p))
        cand.sort(key=lambda c: c[0])
        for _, p in cand[:4]:
            q, h = _newton(a, p, tol * 1e-3)
            if abs(h) < best[0]:
                best = (abs(h), q)
            if best[0] < tol * 1e-3:
                break
        if best[0] < tol:
            break
        # refine around the best point found so far
        centre, lo, hi = best[1], 0.0, (hi - lo) / 4
    res, p = best
    if res >= tol:
        raise SearchError(f"no zero of H below {tol:g} (best {res:.3e})", res, tuple(p))
    r0 = float(np.hypot(*p))
    return r0, float(np.arctan2(p[1], p[0])) if r0 > 0 else 0.0, res


def normalize_gauge(a: FourierSeries, tol=1e-10, out_band=None) -> GaugeResult:
    """Conformally equivalent b with b̂_1 = 0 (conformal maps only)."""
    if not a.real or np.min(sample(a, max(256, 16 * a.band))) <= 0:
        raise PreconditionError("normalize_gauge needs a positive real symbol")
    r0, alpha0, res = find_gauge_zero(a, tol)
    if r0 == 0.0:
        return GaugeResult(a, IDENTITY, 0.0, 0.0, res, 0.0)
    params = MoebiusParams(w=complex(r0), alpha=alpha0)
    if out_band is None:
        out_band = 4 * a.band + 16
    pb = mobius_pullback(a, params, out_band)
    b1 = abs(pb.series.coef(1))
    if b1 >= 1e-9:
        raise SearchError(f"normalized symbol keeps |b_1| = {b1:.3e}", b1, (r0, alpha0))
    return GaugeResult(pb.series, params, r0, alpha0, res, pb.tail_energy)
