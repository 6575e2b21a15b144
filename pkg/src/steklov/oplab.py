"""The finite-rank family L_λ on span{e^{iθ}, e^{-iθ}}.

L_λ e^{iθ} = e^{iθ} + λ e^{-iθ},  L_λ e^{-iθ} = -e^{-iθ} + λ e^{iθ},
zero on every other frequency.  On that plane L_λ^2 = (1+λ^2) I and L_λH
acts like multiplication by 1 + iλ = ρ e^{iτ}, so

    Tr[L_λ^{2j} - (L_λH)^{2j}] = 2[ρ^{2j} - Re (1+iλ)^{2j}] = 4 ρ^{2j} sin^2(jτ).

The last form is evaluated: it is nonnegative by construction and does not
lose digits to cancellation when the trace vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .wordtrace import OperatorWord, trace_from_matrix

N_FREQ = 4  # frequencies |n| <= 4; exact since L_λ vanishes off |n| = 1
AGREE_RTOL = 1e-10
ZERO_TOL = 1e-9
CRIT_TOL = 1e-12
MATRIX_TOL = 1e-10


@dataclass(frozen=True)
class FiniteRankL:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise PreconditionError("λ must be positive")

    def matrix(self, N=N_FREQ):
        L = np.zeros((2 * N + 1, 2 * N + 1))
        p, q = N + 1, N - 1  # rows/cols of e^{iθ}, e^{-iθ}
        L[p, p], L[q, p] = 1.0, self.lam
        L[q, q], L[p, q] = -1.0, self.lam
        return L


def h_matrix(N=N_FREQ):
    return np.diag(np.where(np.arange(-N, N + 1) >= 0, 1.0, -1.0))


def closed_form_trace(lam, j):
    rho2 = 1.0 + lam * lam
    return 4.0 * rho2 ** j * math.sin(j * math.atan(lam)) ** 2


def matrix_trace(lam, j):
    """Same trace from the 9x9 matrix through the general word-trace evaluator."""
    return trace_from_matrix(FiniteRankL(lam).matrix(), OperatorWord.power_of_L(2 * j))


def finite_rank_trace(lam: float, j: int) -> float:
    """Tr[L_λ^{2j} - (L_λH)^{2j}], cross-checked against the 9x9 matrices.

    Agreement is relative to the size 2(1+λ^2)^j of the two traces being
    subtracted; that is the precision float64 can carry.
    """
    if j < 1:
        raise PreconditionError("j must be >= 1")
    closed = closed_form_trace(lam, j)
    direct = matrix_trace(lam, j)
    scale = max(1.0, 2.0 * (1.0 + lam * lam) ** j)
    if abs(closed - direct) > AGREE_RTOL * scale:
        raise ConsistencyError(f"closed form {closed!r} vs matrix {direct!r} (λ={lam}, j={j})")
    return closed


@dataclass(frozen=True)
class Commutation:
    commutes: bool
    criterion: float  # Im((1+iλ)^j)
    matrix_defect: float
    l2_defect: float


def commutation_check(lam: float, j: int) -> Commutation:
    """Does (L_λH)^j = (HL_λ)^j?  Analytic criterion vs 9x9 matrices."""
    if j < 2:
        raise PreconditionError("j must be >= 2")
    L = FiniteRankL(lam).matrix()
    H = h_matrix()
    l2 = float(np.max(np.abs(L @ L @ H - H @ L @ L)))
    if l2 != 0.0:
        raise ConsistencyError(f"L_λ^2 fails to commute with H (defect {l2:.3e})")
    rho, tau = math.hypot(1.0, lam), math.atan(lam)
    crit = rho ** j * math.sin(j * tau)
    # the zero test is scale-free: |Im| relative to |1+iλ|^j
    analytic = abs(math.sin(j * tau)) < CRIT_TOL
    defect = float(np.max(np.abs(np.linalg.matrix_power(L @ H, j) - np.linalg.matrix_power(H @ L, j))))
    matrix_ok = defect < MATRIX_TOL * max(1.0, rho ** j)
    if analytic != matrix_ok:
        raise ConsistencyError(f"analytic/matrix disagreement at λ={lam}, j={j}")
    return Commutation(analytic, crit, defect, l2)


@dataclass(frozen=True)
class PatternRow:
    j: int
    trace: float
    is_zero: bool
    commutes: bool | None


def prop11_pattern(m: int, jmax: int):
    """Rows (j, trace, is_zero, commutes) for λ = tan(π/m), j = 1..jmax."""
    if m < 3:
        raise PreconditionError("m >= 3 required (tan(π/2) is undefined)")
    if jmax < m:
        raise PreconditionError("jmax must be >= m")
    lam = math.tan(math.pi / m)
    rows = []
    for j in range(1, jmax + 1):
        t = finite_rank_trace(lam, j)
        c = commutation_check(lam, j).commutes if j >= 2 else None
        rows.append(PatternRow(j, t, abs(t) < ZERO_TOL, c))
    return rows


def gcd_pattern(m: int, pmax: int = 3):
    """Both Tr at 2m and 3m vanish; their gcd m then commutes and every
    multiple p·m has zero trace."""
    lam = math.tan(math.pi / m)
    m1, m2 = 2 * m, 3 * m
    g = math.gcd(m1, m2)
    both = abs(finite_rank_trace(lam, m1)) < ZERO_TOL and abs(finite_rank_trace(lam, m2)) < ZERO_TOL
    commutes = commutation_check(lam, g).commutes
    multiples = all(abs(finite_rank_trace(lam, p * g)) < ZERO_TOL for p in range(1, pmax + 1))
    return {"m1": m1, "m2": m2, "gcd": g, "both_zero": both,
            "gcd_commutes": commutes, "multiples_zero": multiples}
