"""Lower-bound machinery for Z_m(a).

(aD)^{m-1}(a e^{inθ}) = (Σ_s n^{s-1} f_s) e^{inθ} with f_m = a^m.  The
coefficients of g_n = (aD)^{m-1} a e^{inθ} feed the double sum

    S1 = 4 Σ_{n,k>0} n k |(ĝ_n)_{-k}|^2 = 4 Σ_{j>=2} j^3 F_j(f̃_j, f̃_j),

which bounds Z_m(a) from below.  Uniform positivity of the Gram matrices
F_j for j >= m+1 gives the final bound in terms of b = a^m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .circlefn import FourierSeries, Multiplier, apply_multiplier, multiply, power
from .errors import PreconditionError
from .wordtrace import zeta_invariant

INF = math.inf


@dataclass(frozen=True)
class FComponents:
    m: int
    parts: tuple  # f_1 .. f_m

    def __getitem__(self, s):
        """1-based access, f_s."""
        return self.parts[s - 1]


@dataclass(frozen=True)
class GramMatrix:
    m: int
    j: float
    entries: np.ndarray

    @property
    def lambda_min(self):
        return float(eigh(self.entries, eigvals_only=True)[0])


@dataclass(frozen=True)
class CConstant:
    lemma_c: float
    theorem_c: float
    argmin_j: float
    monotone: bool
    jmax: int


@dataclass(frozen=True)
class BoundChain:
    m: int
    Z: float
    S1: float
    S1_tail: float  # j >= m+1 part of S1
    S2: float
    c: CConstant

    @property
    def holds(self):
        return self.Z >= self.S1 - 1e-9 and self.S1 >= self.S2 - 1e-9


def f_components(a: FourierSeries, m: int) -> FComponents:
    if m < 1:
        raise PreconditionError("m must be a positive integer")
    fs = [a]
    for _ in range(m - 1):
        nxt = []
        for s in range(1, len(fs) + 2):
            acc = FourierSeries.zeros(0)
            if s - 1 >= 1:
                acc = acc + fs[s - 2]
            if s <= len(fs):
                acc = acc + apply_multiplier(fs[s - 1], Multiplier.D)
            nxt.append(multiply(a, acc))
        fs = nxt
    # the top component is exactly a^m; keep the multiply-power version
    fs[-1] = power(a, m)
    return FComponents(m=m, parts=tuple(fs))


def g_coefficients(a: FourierSeries, m: int, n: int, kmax: int, fc=None):
    """[(ĝ_n)_{-k} for k = 1..kmax]."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    fc = fc or f_components(a, m)
    out = np.zeros(kmax, dtype=complex)
    for s, f in enumerate(fc.parts, start=1):
        for k in range(1, kmax + 1):
            out[k - 1] += n ** (s - 1) * f.coef(-(n + k))
    return out


def gram_matrix(m: int, j) -> GramMatrix:
    if m < 1:
        raise PreconditionError("m must be a positive integer")
    st = np.add.outer(np.arange(1, m + 1), np.arange(1, m + 1))
    if j == INF:
        return GramMatrix(m, INF, 1.0 / (st * (st + 1.0)))
    j = int(j)
    if j < 2:
        raise PreconditionError("gram_matrix needs j >= 2")
    t = np.arange(1, j) / j
    w = t * (1 - t) / j
    # entries depend on s+t only: a Hankel matrix of the moments Σ_n w_n t_n^k
    moments = (t[:, None] ** np.arange(2 * m - 1)[None, :]).T @ w
    return GramMatrix(m, j, moments[st - 2])


def c_constant(m: int, jmax: int = 200) -> CConstant:
    if jmax < m + 1:
        raise PreconditionError(f"jmax={jmax} < m+1={m + 1}")
    js = list(range(m + 1, jmax + 1))
    lams = [gram_matrix(m, j).lambda_min for j in js]
    lam_inf = gram_matrix(m, INF).lambda_min
    i = int(np.argmin(lams))
    lemma_c, argmin = lams[i], js[i]
    if lam_inf < lemma_c:
        lemma_c, argmin = lam_inf, INF
    diffs = np.diff(lams)
    monotone = bool(np.all(diffs >= -1e-15) or np.all(diffs <= 1e-15))
    return CConstant(lemma_c, 4.0 * lemma_c, argmin, monotone, jmax)


def s1_double_sum(a, m, fc=None):
    """4 Σ_{n,k>0} n k |(ĝ_n)_{-k}|^2, a finite sum since n + k <= m·band."""
    fc = fc or f_components(a, m)
    reach = m * a.band
    total = 0.0
    for n in range(1, reach):
        g = g_coefficients(a, m, n, reach - n, fc)
        k = np.arange(1, reach - n + 1)
        total += 4.0 * n * float(np.sum(k * np.abs(g) ** 2))
    return total


def s1_gram_form(a, m, fc=None, jmin=2):
    """4 Σ_{j>=jmin} j^3 F_j(f̃_j, f̃_j) with (f̃_j)_s = j^{s-1} (f̂_s)_{-j}."""
    fc = fc or f_components(a, m)
    total = 0.0
    for j in range(max(jmin, 2), m * a.band + 1):
        x = np.array([j ** (s - 1) * fc[s].coef(-j) for s in range(1, m + 1)])
        F = gram_matrix(m, j).entries
        total += 4.0 * j ** 3 * float(np.real(np.conj(x) @ F @ x))
    return total


def bound_chain(a: FourierSeries, m: int, jmax: int = 200) -> BoundChain:
    if not a.real:
        raise PreconditionError("bound_chain is stated for real symbols")
    fc = f_components(a, m)
    Z = zeta_invariant(a, m).value
    S1 = s1_double_sum(a, m, fc)
    S1_tail = s1_gram_form(a, m, fc, jmin=m + 1)
    # only j <= m*band contribute, so the scan must reach that far
    c = c_constant(m, max(jmax, m * a.band, m + 1))
    b = fc[m]
    j = np.arange(m + 1, b.band + 1)
    bj = b.coeffs[b.band + j] if j.size else np.zeros(0)
    S2 = c.theorem_c * float(np.sum(j.astype(float) ** (2 * m + 1) * np.abs(bj) ** 2))
    return BoundChain(m, Z, S1, S1_tail, S2, c)
