"""Trigonometric polynomials on the unit circle and the Fourier multipliers
acting on them.

A function u(θ) = Σ û_n e^{inθ} is stored by its coefficients for
|n| <= band, in a centered array: ``coeffs[n + band] = û_n``.  Sampling is
a derived view (uniform grid θ_p = 2πp/P).
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping

import numpy as np

from .errors import AliasingError, PreconditionError

REAL_TOL = 1e-12


class Multiplier(str, Enum):
    LAMBDA = "Lambda"
    D = "D"
    H = "H"
    SQRT_LAMBDA = "SqrtLambda"


def multiplier_symbol(kind, freqs):
    """Per-frequency symbol of Λ, D, H or Λ^{1/2} on integer frequencies."""
    kind = Multiplier(kind)
    freqs = np.asarray(freqs)
    if kind is Multiplier.LAMBDA:
        return np.abs(freqs).astype(float)
    if kind is Multiplier.D:
        return freqs.astype(float)
    if kind is Multiplier.H:
        # +1 at n = 0 as well (not the usual 0)
        return np.where(freqs >= 0, 1.0, -1.0)
    return np.sqrt(np.abs(freqs).astype(float))


class FourierSeries:
    """Finite Fourier series with coefficients for |n| <= band.

    Instances are immutable.  ``real=True`` declares û_{-n} = conj(û_n);
    the declaration is checked to ``REAL_TOL`` and then enforced exactly.
    ``real=None`` infers the flag with the same tolerance.
    """

    __slots__ = ("_c", "_real")

    def __init__(self, coeffs, real=None):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise PreconditionError("centered coefficient array must have odd length")
        mirror = np.conj(c[::-1])
        if real is None:
            real = bool(np.all(np.abs(c - mirror) <= REAL_TOL))
        elif real:
            dev = np.max(np.abs(c - mirror)) if c.size else 0.0
            if dev > REAL_TOL:
                raise PreconditionError(
                    f"coefficients are not conjugate-symmetric (deviation {dev:.3e})")
        if real:
            c = 0.5 * (c + mirror)
            c[c.size // 2] = c[c.size // 2].real
        c.setflags(write=False)
        self._c = c
        self._real = bool(real)

    # construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, complex], real=None):
        band = max((abs(int(n)) for n in coeffs), default=0)
        arr = np.zeros(2 * band + 1, dtype=complex)
        for n, v in coeffs.items():
            arr[int(n) + band] += v
        return cls(arr, real=real)

    @classmethod
    def constant(cls, value=1.0):
        return cls([value], real=np.isrealobj(value) or np.imag(value) == 0)

    @classmethod
    def zeros(cls, band=0):
        return cls(np.zeros(2 * band + 1), real=True)

    # accessors ----------------------------------------------------------

    @property
    def coeffs(self):
        return self._c

    @property
    def band(self):
        return self._c.size // 2

    @property
    def real(self):
        return self._real

    @property
    def freqs(self):
        return np.arange(-self.band, self.band + 1)

    def coef(self, n):
        n = int(n)
        if abs(n) > self.band:
            return 0j
        return complex(self._c[n + self.band])

    def to_dict(self, drop_zeros=True):
        return {int(n): complex(v) for n, v in zip(self.freqs, self._c)
                if not (drop_zeros and v == 0)}

    def __repr__(self):
        return f"FourierSeries(band={self.band}, real={self.real})"

    # shape --------------------------------------------------------------

    def padded(self, band):
        """Same function represented with a larger band."""
        if band < self.band:
            raise PreconditionError("padded() cannot shrink; use truncate()")
        extra = band - self.band
        return FourierSeries(np.pad(self._c, extra), real=self._real)

    def truncate(self, band):
        """Drop all frequencies with |n| > band."""
        if band >= self.band:
            return self
        lo = self.band - band
        return FourierSeries(self._c[lo:lo + 2 * band + 1], real=self._real)

    def trim(self, tol=0.0):
        """Smallest band keeping every coefficient with modulus > tol."""
        mags = np.abs(self._c)
        keep = np.nonzero(mags > tol)[0]
        if keep.size == 0:
            return FourierSeries.zeros(0)
        k = int(np.max(np.abs(keep - self.band)))
        return self.truncate(k)

    def tail(self, band):
        """The discarded part of ``truncate(band)``."""
        if band >= self.band:
            return FourierSeries.zeros(0)
        c = self._c.copy()
        c[self.band - band:self.band + band + 1] = 0
        return FourierSeries(c, real=self._real)

    # algebra ------------------------------------------------------------

    def _binary(self, other, op):
        if not isinstance(other, FourierSeries):
            other = FourierSeries.constant(other)
        k = max(self.band, other.band)
        a, b = self.padded(k)._c, other.padded(k)._c
        return FourierSeries(op(a, b), real=self._real and other._real)

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FourierSeries(-self._c, real=self._real)

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return multiply(self, other)
        real = self._real and np.isrealobj(other)
        return FourierSeries(self._c * other, real=real)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, m):
        return power(self, m)

    def conj(self):
        """Coefficients of the complex conjugate function."""
        return FourierSeries(np.conj(self._c[::-1]), real=self._real)

    def rotate(self, t):
        """The function θ ↦ u(θ + t)."""
        return FourierSeries(self._c * np.exp(1j * self.freqs * t), real=self._real)

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = np.exp(1j * np.multiply.outer(theta, self.freqs)) @ self._c
        return vals.real if self._real else vals

    def allclose(self, other, atol=1e-12):
        k = max(self.band, other.band)
        return bool(np.max(np.abs(self.padded(k)._c - other.padded(k)._c), initial=0.0) <= atol)


# --- operations ----------------------------------------------------------

def multiply(a: FourierSeries, b: FourierSeries) -> FourierSeries:
    """Pointwise product, i.e. discrete convolution of coefficients."""
    # np.convolve rounds differently with its arguments swapped; a canonical
    # operand order makes the product commute bit for bit
    if (a.band, a.coeffs.tobytes()) > (b.band, b.coeffs.tobytes()):
        a, b = b, a
    return FourierSeries(np.convolve(a.coeffs, b.coeffs), real=a.real and b.real)


def power(a: FourierSeries, m: int) -> FourierSeries:
    if m < 0:
        raise PreconditionError("negative powers are not trigonometric polynomials")
    out = FourierSeries.constant(1.0)
    for _ in range(m):
        out = multiply(out, a)
    return out


def apply_multiplier(u: FourierSeries, kind) -> FourierSeries:
    """Apply Λ (|n|), D (n), H (sign, +1 at n = 0) or Λ^{1/2} (√|n|)."""
    kind = Multiplier(kind)
    c = u.coeffs * multiplier_symbol(kind, u.freqs)
    # Λ, Λ^{1/2} commute with conjugation; D and H anticommute with it
    real = u.real and kind in (Multiplier.LAMBDA, Multiplier.SQRT_LAMBDA)
    return FourierSeries(c, real=real)


def sobolev_norm(u: FourierSeries, s: float) -> float:
    """sqrt(Σ (1 + |n|^{2s}) |û_n|^2).

    The n = 0 weight is 1 for s != 0 (|0|^{2s} taken as 0, also for
    negative s) and 2 for s = 0.
    """
    n = np.abs(u.freqs).astype(float)
    if s == 0:
        w = np.full_like(n, 2.0)
    else:
        w = np.ones_like(n)
        nz = n > 0
        w[nz] += n[nz] ** (2 * s)
    return float(np.sqrt(np.sum(w * np.abs(u.coeffs) ** 2)))


def holomorphy_defect(u: FourierSeries) -> float:
    """L2 norm of (Λ - D)u; zero iff u has no negative frequencies."""
    n = u.freqs
    neg = n < 0
    return float(2.0 * np.sqrt(np.sum(n[neg] ** 2 * np.abs(u.coeffs[neg]) ** 2)))


def grid(P):
    return 2.0 * np.pi * np.arange(P) / P


def sample(u: FourierSeries, P: int):
    """Values at θ_p = 2πp/P, p = 0..P-1."""
    if P < 1:
        raise PreconditionError("grid size must be positive")
    folded = np.zeros(P, dtype=complex)
    np.add.at(folded, u.freqs % P, u.coeffs)
    vals = np.fft.ifft(folded) * P
    return vals.real if u.real else vals


def from_samples(values, band: int, real=None) -> FourierSeries:
    """Coefficients |n| <= band from samples on the uniform grid.

    Exact for trigonometric polynomials of degree <= band provided
    P > 2*band; coarser grids raise AliasingError.
    """
    values = np.asarray(values)
    P = values.size
    if P <= 2 * band:
        raise AliasingError(f"{P} samples cannot resolve band {band} (need > {2 * band})")
    if real is None:
        real = np.isrealobj(values) or bool(np.all(np.imag(values) == 0))
    if real:
        pos = np.fft.rfft(np.real(values))[:band + 1] / P
        c = np.concatenate([np.conj(pos[:0:-1]), pos])
        return FourierSeries(c, real=True)
    full = np.fft.fft(values) / P
    idx = np.arange(-band, band + 1) % P
    return FourierSeries(full[idx], real=False)


def resample(fn, band: int, P=None, real=True):
    """Fourier coefficients of a callable θ ↦ f(θ), plus discarded tail energy.

    The tail energy is Σ_{|n| > band} |f̂_n|^2 as seen by the P-point grid.
    """
    if P is None:
        P = 1 << int(np.ceil(np.log2(max(64, 8 * band + 8))))
    vals = np.asarray(fn(grid(P)))
    if real:
        vals = np.real(vals)
    full = np.fft.fft(vals) / P
    k = np.fft.fftfreq(P, 1.0 / P)
    tail = float(np.sum(np.abs(full[np.abs(k) > band]) ** 2))
    return from_samples(vals, band, real=real), tail


def random_real_series(rng, band, scale=1.0):
    """Real series with â_0 and Re/Im of â_n (n >= 1) uniform in [-scale, scale]."""
    pos = rng.uniform(-scale, scale, band) + 1j * rng.uniform(-scale, scale, band)
    c0 = rng.uniform(-scale, scale)
    return FourierSeries(np.concatenate([np.conj(pos[::-1]), [c0], pos]), real=True)


def random_positive_series(rng, band, lo=0.6, hi=1.8):
    """Real series of exact band whose values lie in [lo, hi]."""
    p = random_real_series(rng, band)
    p = p - p.coef(0)
    if band == 0:
        return FourierSeries.constant(0.5 * (lo + hi))
    peak = np.max(np.abs(sample(p, max(64, 16 * band))))
    # dense grid peak; 10% slack covers the between-node maximum
    half = 0.5 * (hi - lo) / 1.1
    return 0.5 * (lo + hi) + p * (half / peak)
