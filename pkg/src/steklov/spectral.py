"""Steklov spectrum of aΛ from the symmetrized truncation Λ^{1/2} a Λ^{1/2}."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .circlefn import FourierSeries, sample
from .errors import PreconditionError
from .wordtrace import l_matrix


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    truncation: int
    convergence: np.ndarray | None = None

    def __len__(self):
        return len(self.eigenvalues)


def is_positive(a: FourierSeries, P=None):
    P = P or max(256, 16 * a.band)
    return bool(a.real and np.min(sample(a, P)) > 0)


def truncated_eigenvalues(a: FourierSeries, N: int):
    """All 2N+1 eigenvalues of the truncated symmetric matrix, ascending."""
    if a.band == 0:
        # L is diagonal with entries c|n|; skip the solver and the √n·√n rounding
        return np.sort(a.coef(0).real * np.abs(np.arange(-N, N + 1)))
    return eigh(l_matrix(a, N), eigvals_only=True, check_finite=False)


def steklov_spectrum(a: FourierSeries, N: int = 256, M: int = 20,
                     convergence=True, allow_signed=False) -> SpectrumResult:
    """Lowest M eigenvalues of aΛ; convergence from recomputation at 2N."""
    if not a.real:
        raise PreconditionError("spectrum requires a real symbol")
    if not allow_signed and not is_positive(a):
        raise PreconditionError("symbol is not positive; pass allow_signed to override")
    if M > 2 * N:
        raise PreconditionError(f"M={M} exceeds 2N={2 * N}")
    lam = truncated_eigenvalues(a, N)[:M]
    conv = None
    if convergence:
        conv = np.abs(truncated_eigenvalues(a, 2 * N)[:M] - lam)
    return SpectrumResult(lam, N, conv)


def spectrum_distance(s1: SpectrumResult, s2: SpectrumResult, M: int) -> float:
    if M > min(len(s1), len(s2)):
        raise PreconditionError(f"M={M} exceeds available eigenvalues")
    return float(np.max(np.abs(s1.eigenvalues[:M] - s2.eigenvalues[:M]), initial=0.0))


def disk_spectrum(M: int, scale=1.0):
    """c·{0, 1, 1, 2, 2, ...}: the k-th value is c·ceil(k/2)."""
    return np.array([scale * math.ceil(k / 2) for k in range(M)])
