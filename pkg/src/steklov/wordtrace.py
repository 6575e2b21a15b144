"""Exact traces Tr[W - (LH)^{2m}] for words W in L = Λ^{1/2} a Λ^{1/2} and H.

For a trigonometric polynomial a of band K the operator L has matrix
L_{jk} = √|j| â_{j-k} √|k|.  Split L = L_d + L_o into the part preserving
the sign of the frequency and the part flipping it.  L_d commutes with H,
L_o anticommutes with it, and L_o is supported on 0 < |j|, |k| < K.
Moving every H of a word with even H-degree to the right gives

    W = Π_i (L_d + ε_i L_o),    ε_i = (-1)^{number of H's left of the i-th L},

so the difference of two words telescopes into terms each containing one
L_o factor.  Each term is a trace against a finite-rank matrix, which makes
the result an exact finite sum (no cancellation between huge diagonal
entries) once the truncation covers every frequency path of length 2m
starting in the support of L_o, i.e. N >= 2mK.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .circlefn import FourierSeries
from .errors import ConsistencyError, PreconditionError, TruncationError

IMAG_TOL = 1e-10
PHI_MAX_M = 8


@dataclass(frozen=True)
class OperatorWord:
    """W = L^{j_1} H L^{j_2} H ... L^{j_s} H, stored as (j_1, ..., j_s)."""

    exponents: tuple

    def __post_init__(self):
        exps = tuple(int(j) for j in self.exponents)
        if any(j < 0 for j in exps):
            raise PreconditionError("word exponents must be nonnegative")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_tokens(cls, tokens: str):
        """Parse e.g. "HLLHLH".  A word ending in L is closed with HH = I,
        which keeps the parity of the H-degree."""
        tokens = tokens.replace(" ", "").upper()
        if set(tokens) - {"L", "H"}:
            raise PreconditionError(f"bad token in word {tokens!r}")
        if tokens and tokens[-1] != "H":
            tokens += "HH"
        runs = tokens.split("H")[:-1]
        return cls(tuple(len(r) for r in runs))

    @classmethod
    def power_of_L(cls, p):
        # L^p H H
        return cls((p, 0))

    @classmethod
    def lh_power(cls, p):
        return cls((1,) * p)

    @property
    def l_degree(self):
        return sum(self.exponents)

    @property
    def h_degree(self):
        return len(self.exponents)

    @property
    def m(self):
        return self.l_degree // 2

    def tokens(self):
        return "".join("L" * j + "H" for j in self.exponents)

    def __mul__(self, other):
        return OperatorWord(self.exponents + other.exponents)

    def adjoint(self):
        """W* written again in normal form (uses H H = I)."""
        # (L^{j1} H ... L^{js} H)* = H L^{js} ... H L^{j1}
        #                          = L^0 H L^{js} H ... L^{j2} H L^{j1}
        # the trailing L^{j1} has no H after it; absorb it by H H = I
        return OperatorWord((0,) + tuple(reversed(self.exponents[1:]))) * \
            OperatorWord((self.exponents[0], 0))

    def signs(self):
        """ε_i for each L factor, read left to right."""
        eps, h = [], 0
        for j in self.exponents:
            eps.extend([(-1) ** h] * j)
            h += 1
        return eps


@dataclass(frozen=True)
class ZetaReport:
    m: int
    value: float
    truncation: int
    band: int
    exact: bool = True


# --- matrices --------------------------------------------------------------

def l_matrix(a: FourierSeries, N: int):
    """Truncated L = Λ^{1/2} a Λ^{1/2} on frequencies |n| <= N."""
    n = np.arange(-N, N + 1)
    diff = n[:, None] - n[None, :]
    K = a.band
    T = np.zeros(diff.shape, dtype=complex)
    inside = np.abs(diff) <= K
    T[inside] = a.coeffs[diff[inside] + K]
    r = np.sqrt(np.abs(n).astype(float))
    return r[:, None] * T * r[None, :]


def h_diagonal(N: int):
    n = np.arange(-N, N + 1)
    return np.where(n >= 0, 1.0, -1.0)


def split_l(L, N):
    """(L_d, L_o): sign-preserving and sign-flipping parts of L."""
    s = h_diagonal(N)
    same = s[:, None] == s[None, :]
    return np.where(same, L, 0), np.where(same, 0, L)


def _check_inputs(a, m, N):
    if not a.real:
        raise PreconditionError("word traces are implemented for real symbols only")
    need = 2 * m * a.band
    if N is None:
        N = need
    if N < need:
        raise TruncationError(f"truncation N={N} < 2mK={need}; trace would not be exact")
    return N


def _telescoped_trace(Ld, Lo, eps, ref):
    """Tr[Π(L_d + ε_i L_o) - Π(L_d + ε'_i L_o)] by telescoping."""
    A = [Ld + e * Lo for e in eps]
    B = [Ld + e * Lo for e in ref]
    n = len(eps)
    size = Ld.shape[0]
    eye = np.eye(size, dtype=complex)
    # prefix[k] = A_0 ... A_{k-1};  suffix[k] = B_{k+1} ... B_{n-1}
    prefix = [eye]
    for k in range(n - 1):
        prefix.append(prefix[-1] @ A[k])
    suffix = [eye] * n
    for k in range(n - 2, -1, -1):
        suffix[k] = B[k + 1] @ suffix[k + 1]
    total = 0j
    scale = 0.0
    for k in range(n):
        d = eps[k] - ref[k]
        if d == 0:
            continue
        # Tr[P L_o S] = Tr[L_o S P]; only the L_o support matters
        M = suffix[k] @ prefix[k]
        term = d * np.sum(Lo * M.T)
        total += term
        scale += abs(term)
    return total, scale


def _real_trace(total, scale, what):
    if abs(total.imag) > IMAG_TOL * max(1.0, scale):
        raise ConsistencyError(f"{what}: imaginary residue {total.imag:.3e}")
    return float(total.real)


def trace_word(a: FourierSeries, word: OperatorWord, N=None, reference="LH",
               method="commutator"):
    """Tr[W - (LH)^{2m}] (or against (HL)^{2m}) for a real bandlimited symbol.

    ``method="diagonal"`` sums the diagonal of the truncated matrices over
    |n| <= mK instead; it is slower and loses digits to cancellation but
    shares no code path with the default and serves as a cross-check.
    """
    if word.h_degree % 2 or word.l_degree % 2:
        raise PreconditionError("word must have even H-degree and even L-degree")
    m = word.m
    N = _check_inputs(a, m, N)
    if reference not in ("LH", "HL"):
        raise PreconditionError("reference must be 'LH' or 'HL'")
    if method not in ("commutator", "diagonal"):
        raise PreconditionError(f"unknown method {method!r}")
    ref_word = OperatorWord.lh_power(2 * m)
    if reference == "HL":
        # (HL)^{2m} H H in normal form
        ref_word = OperatorWord((0,) + (1,) * (2 * m) + (0,))
    L = l_matrix(a, N)
    if method == "diagonal":
        return _diagonal_trace(L, N, word, ref_word, m * a.band)
    return trace_from_matrix(L, word, ref_word)


def trace_from_matrix(L, word: OperatorWord, ref_word=None):
    """Telescoped Tr[W - ref] for an explicit matrix L on frequencies -N..N.

    The caller guarantees the truncation is exact for this L.
    """
    N = L.shape[0] // 2
    if ref_word is None:
        ref_word = OperatorWord.lh_power(word.l_degree)
    Ld, Lo = split_l(L, N)
    total, scale = _telescoped_trace(Ld, Lo, word.signs(), ref_word.signs())
    return _real_trace(total, scale, "trace_word")


def _word_matrix(L, Hd, word):
    out = np.eye(L.shape[0], dtype=complex)
    for j in word.exponents:
        out = out @ np.linalg.matrix_power(L, j) * Hd[None, :]
    return out


def _diagonal_trace(L, N, word, ref_word, reach):
    Hd = h_diagonal(N)
    W = _word_matrix(L, Hd, word)
    R = _word_matrix(L, Hd, ref_word)
    idx = np.arange(-N, N + 1)
    keep = np.abs(idx) <= reach
    diag = np.diag(W)[keep] - np.diag(R)[keep]
    total = complex(np.sum(diag))
    return _real_trace(total, float(np.sum(np.abs(np.diag(W)[keep]))), "trace_word")


# --- zeta-invariants ---------------------------------------------------------

def zeta_invariant(a: FourierSeries, m: int, N=None, exact=True) -> ZetaReport:
    """Z_m(a) = Tr[(aΛ)^{2m} - (aD)^{2m}] = Tr[L^{2m} - (LH)^{2m}]."""
    if m < 1:
        raise PreconditionError("m must be a positive integer")
    N = _check_inputs(a, m, N)
    L = l_matrix(a, N)
    Ld, Lo = split_l(L, N)
    word = OperatorWord.power_of_L(2 * m)
    total, scale = _telescoped_trace(Ld, Lo, word.signs(), OperatorWord.lh_power(2 * m).signs())
    value = _real_trace(total, scale, "zeta_invariant")
    if value < -1e-9 * max(1.0, scale):
        raise ConsistencyError(f"Z_{m} = {value:.3e} < 0 contradicts the lower bound")
    return ZetaReport(m=m, value=value, truncation=N, band=a.band, exact=exact)


def edward_z1(a: FourierSeries) -> float:
    """(2/3) Σ_{n>=2} (n^3 - n) |â_n|^2."""
    if not a.real:
        raise PreconditionError("edward_z1 is stated for real symbols")
    n = np.arange(2, a.band + 1)
    if n.size == 0:
        return 0.0
    c = a.coeffs[a.band + n]
    return float((2.0 / 3.0) * np.sum((n ** 3 - n) * np.abs(c) ** 2))


def truncate_for_tolerance(a: FourierSeries, m: int, tol: float):
    """Smallest band K whose discarded tail has H^{m+1} norm below tol.

    Returns (truncated series, exact flag).  The resulting Z_m is an
    approximation whenever anything was discarded.
    """
    from .circlefn import sobolev_norm
    for K in range(a.band + 1):
        if sobolev_norm(a.tail(K), m + 1) < tol:
            t = a.truncate(K)
            return t, not np.any(a.tail(K).coeffs)
    return a, True


# --- φ(ℓ) ---------------------------------------------------------------------

def compositions(m, parts):
    """All (δ_1..δ_ℓ) with δ_i >= 1 and Σ δ_i = m."""
    for cuts in itertools.combinations(range(1, m), parts - 1):
        edges = (0,) + cuts + (m,)
        yield tuple(edges[i + 1] - edges[i] for i in range(parts))


def g_word(delta):
    """G_δ = (L^{δ_1}H)...(L^{δ_ℓ}H)."""
    return OperatorWord(tuple(delta))


def gram_word(delta):
    """G_δ* G_δ in normal form."""
    g = g_word(delta)
    return g.adjoint() * g


def phi(a: FourierSeries, m: int, ell: int, N=None, return_argmax=False):
    """max over δ ∈ Δ_ℓ of Tr[G_δ* G_δ - (LH)^{2m}]."""
    if not 1 <= ell <= m:
        raise PreconditionError(f"ell={ell} outside [1, {m}]")
    if m > PHI_MAX_M:
        raise PreconditionError(f"phi enumerates C(m-1, l-1) words; m > {PHI_MAX_M} refused")
    N = _check_inputs(a, m, N)
    L = l_matrix(a, N)
    Ld, Lo = split_l(L, N)
    ref = OperatorWord.lh_power(2 * m).signs()
    best, arg = -np.inf, None
    for delta in compositions(m, ell):
        total, scale = _telescoped_trace(Ld, Lo, gram_word(delta).signs(), ref)
        val = _real_trace(total, scale, "phi")
        if val > best:
            best, arg = val, delta
    return (best, arg) if return_argmax else best


def n_compositions(m, ell):
    return comb(m - 1, ell - 1)
