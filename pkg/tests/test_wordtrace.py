import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import real_series
from steklov.circlefn import FourierSeries, random_real_series, sobolev_norm
from steklov.errors import PreconditionError, TruncationError
from steklov.wordtrace import (OperatorWord, compositions, edward_z1, gram_word, n_compositions,
                               phi, trace_word, truncate_for_tolerance, zeta_invariant)

COS2 = FourierSeries.from_dict({-2: 0.5, 2: 0.5})


def mp_zeta(a, m, dps=40):
    """Z_m by summing diagonals of high-precision matrices, no shared code."""
    with mpmath.workdps(dps):
        K = a.band
        N, reach = 2 * m * K, m * K
        size = 2 * N + 1
        coef = {n: mpmath.mpc(complex(a.coef(n))) for n in range(-K, K + 1)}
        L = mpmath.matrix(size, size)
        LH = mpmath.matrix(size, size)
        for r in range(size):
            for c in range(size):
                j, k = r - N, c - N
                if abs(j - k) <= K:
                    L[r, c] = mpmath.sqrt(abs(j)) * coef[j - k] * mpmath.sqrt(abs(k))
                    LH[r, c] = L[r, c] * (1 if k >= 0 else -1)
        A, B = L ** (2 * m), LH ** (2 * m)
        total = mpmath.fsum(A[i, i] - B[i, i] for i in range(N - reach, N + reach + 1))
        return float(mpmath.re(total))


# --- words ---------------------------------------------------------------------------

def test_word_normal_form():
    w = OperatorWord.from_tokens("LLHLH")
    assert w.exponents == (2, 1) and w.tokens() == "LLHLH"
    assert w.l_degree == 3 and w.h_degree == 2
    assert OperatorWord.from_tokens("HLL").exponents == (0, 2, 0)
    assert OperatorWord.power_of_L(4).tokens() == "LLLLHH"
    assert OperatorWord.lh_power(2).tokens() == "LHLH"
    with pytest.raises(PreconditionError):
        OperatorWord.from_tokens("LXH")
    with pytest.raises(PreconditionError):
        OperatorWord((1, -1))


def test_adjoint_reverses_tokens():
    for tokens in ("LLHLH", "HLLLH", "LHLLH", "LLLLHH"):
        w = OperatorWord.from_tokens(tokens)
        # as operators H* = H, L* = L, so W* reads the token string backwards
        assert w.adjoint().tokens().endswith("H")
        back = OperatorWord.from_tokens(tokens[::-1])
        assert _strip(w.adjoint().tokens()) == _strip(back.tokens())


def _strip(tokens):
    while "HH" in tokens:
        tokens = tokens.replace("HH", "")
    return tokens


def test_gram_word_shape():
    w = gram_word((1, 2))
    assert w.l_degree == 6 and w.h_degree % 2 == 0
    assert _strip(w.tokens()) == _strip("H" + "LLH" + "L" + "LH" + "LLH")


def test_compositions():
    assert sorted(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    for m in range(1, 7):
        for ell in range(1, m + 1):
            cs = list(compositions(m, ell))
            assert len(cs) == n_compositions(m, ell)
            assert all(sum(c) == m and min(c) >= 1 for c in cs)


# --- trace_word ----------------------------------------------------------------------

def test_constant_symbol_has_zero_trace():
    a = FourierSeries.constant(1.3)
    for m in range(1, 5):
        assert trace_word(a, OperatorWord.power_of_L(2 * m)) == 0.0


def test_cos2_trace_is_one():
    assert trace_word(COS2, OperatorWord.power_of_L(2)) == pytest.approx(1.0, abs=1e-14)


def test_hl_word_matches_l_word(rng):
    for _ in range(10):
        a = random_real_series(rng, 4)
        for m in (1, 2):
            w1 = OperatorWord.from_tokens("H" + "L" * (2 * m) + "H")
            w2 = OperatorWord.power_of_L(2 * m)
            assert abs(trace_word(a, w1) - trace_word(a, w2)) < 1e-9


def test_diagonal_route_agrees(rng):
    for _ in range(5):
        a = random_real_series(rng, 3)
        for tokens in ("LLHH", "LLLLHH", "LHLLLH", "HLLHLLHH", "LLHLLH"):
            w = OperatorWord.from_tokens(tokens)
            if w.l_degree % 2 or w.h_degree % 2:
                continue
            t = trace_word(a, w)
            d = trace_word(a, w, method="diagonal")
            assert abs(t - d) <= 1e-9 * max(1.0, abs(t))


def test_matches_high_precision_oracle(rng):
    for K, m in ((2, 1), (2, 2), (3, 1), (3, 2), (2, 3)):
        a = random_real_series(rng, K)
        z = zeta_invariant(a, m).value
        assert z == pytest.approx(mp_zeta(a, m), rel=1e-12, abs=1e-12)


def test_cyclic_invariance(rng):
    m = 2
    for _ in range(5):
        a = random_real_series(rng, 3)
        # random token string with L-degree 4 and even H-degree
        while True:
            tokens = "".join(rng.permutation(list("LLLL" + "H" * int(2 * rng.integers(1, 4)))))
            if tokens:
                break
        cut = int(rng.integers(1, len(tokens)))
        A1, A2 = tokens[:cut], tokens[cut:]
        lhs = trace_word(a, OperatorWord.from_tokens(A1 + A2), reference="LH")
        rhs = trace_word(a, OperatorWord.from_tokens(A2 + A1), reference="HL")
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))
        # same value from the truncated diagonal route
        assert abs(lhs - trace_word(a, OperatorWord.from_tokens(A2 + A1), method="diagonal",
                                    reference="HL")) < 1e-9 * max(1.0, abs(lhs))


def test_reference_words_have_equal_traces(rng):
    a = random_real_series(rng, 4)
    for m in (1, 2, 3):
        hl = OperatorWord.from_tokens("H" + "LH" * (2 * m) + "H")
        assert abs(trace_word(a, hl)) < 1e-9
        assert abs(trace_word(a, hl, method="diagonal")) < 1e-9 * max(1, zeta_invariant(a, m).value)


def test_trace_preconditions():
    with pytest.raises(TruncationError):
        trace_word(COS2, OperatorWord.power_of_L(2), N=3)
    with pytest.raises(PreconditionError):
        trace_word(FourierSeries.from_dict({1: 1.0}), OperatorWord.power_of_L(2))
    with pytest.raises(PreconditionError):
        trace_word(COS2, OperatorWord.from_tokens("LLH"))
    with pytest.raises(PreconditionError):
        trace_word(COS2, OperatorWord.power_of_L(2), reference="XX")


# --- zeta_invariant -------------------------------------------------------------------

def test_null_space_example():
    a = FourierSeries.from_dict({0: 1.7, 1: 0.3 * np.exp(0.3j), -1: 0.3 * np.exp(-0.3j)})
    for m in range(1, 5):
        assert abs(zeta_invariant(a, m).value) < 1e-10


def test_cos2_zeta():
    rep = zeta_invariant(COS2, 1)
    assert rep.value == pytest.approx(1.0, abs=1e-14)
    assert rep.truncation == 4 and rep.band == 2 and rep.exact


def test_nonnegative_on_random_symbols(rng):
    for _ in range(20):
        a = random_real_series(rng, 6)
        for m in (1, 2, 3):
            assert zeta_invariant(a, m).value >= -1e-9


def test_positivity_not_required():
    a = FourierSeries.from_dict({-3: 0.5, 3: 0.5})  # cos 3θ changes sign
    assert zeta_invariant(a, 1).value == pytest.approx(4.0, rel=1e-13)


def test_z2_positive_when_high_modes_present(rng):
    for _ in range(20):
        a = random_real_series(rng, int(rng.integers(2, 6)))
        n = int(rng.integers(2, a.band + 1))
        c = dict(a.to_dict())
        c[n] = 0.1 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        c[-n] = np.conj(c[n])
        assert zeta_invariant(FourierSeries.from_dict(c), 2).value > 1e-4


@given(real_series(max_band=1, scale=3.0), st.integers(1, 4))
def test_band_one_is_null(a, m):
    assert abs(zeta_invariant(a, m).value) < 1e-10


@given(real_series(max_band=4), st.floats(0, 2 * math.pi))
def test_rotation_invariance(a, t):
    for m in (1, 2):
        z0, z1 = zeta_invariant(a, m).value, zeta_invariant(a.rotate(t), m).value
        assert abs(z0 - z1) <= 1e-10 * max(1.0, abs(z0))


@given(real_series(max_band=6), st.integers(1, 3))
def test_path_locality(a, m):
    N = 2 * m * a.band
    z1 = zeta_invariant(a, m, N).value
    z2 = zeta_invariant(a, m, N + 8).value
    assert abs(z1 - z2) <= 1e-12 * max(abs(z1), abs(z2)) or z1 == z2


@given(real_series(max_band=8))
def test_edward_equivalence(a):
    e = edward_z1(a)
    assert abs(zeta_invariant(a, 1).value - e) <= 1e-10 * (1 + e)


def test_edward_examples():
    assert edward_z1(FourierSeries.constant(2.0)) == 0
    assert edward_z1(COS2) == pytest.approx(1.0, rel=1e-15)
    assert edward_z1(FourierSeries.from_dict({-3: 0.5, 3: 0.5})) == pytest.approx(4.0, rel=1e-15)


def test_truncate_for_tolerance():
    c = {n: 0.5 ** abs(n) for n in range(-12, 13)}
    a = FourierSeries.from_dict(c)
    t, exact = truncate_for_tolerance(a, 1, 0.05)
    assert not exact and t.band < a.band
    assert sobolev_norm(a.tail(t.band), 2) < 0.05
    assert sobolev_norm(a.tail(t.band - 1), 2) >= 0.05
    t2, exact2 = truncate_for_tolerance(COS2, 1, 1e-12)
    assert exact2 and t2.band == 2


# --- phi -----------------------------------------------------------------------------

def test_phi_one_is_zeta(rng):
    for _ in range(5):
        a = random_real_series(rng, 4)
        for m in (1, 2, 3):
            assert abs(phi(a, m, 1) - zeta_invariant(a, m).value) < 1e-9


def test_phi_monotone_nonnegative(rng):
    for _ in range(5):
        a = random_real_series(rng, 3)
        p = [phi(a, 3, ell) for ell in (1, 2, 3)]
        assert p[0] >= p[1] >= p[2] >= -1e-9


def test_phi_argmax_and_constant():
    a = FourierSeries.constant(0.7)
    for ell in (1, 2, 3):
        assert phi(a, 3, ell) == 0
    val, arg = phi(COS2, 3, 2, return_argmax=True)
    assert sum(arg) == 3 and len(arg) == 2


def test_phi_preconditions():
    with pytest.raises(PreconditionError):
        phi(COS2, 3, 4)
    with pytest.raises(PreconditionError):
        phi(COS2, 9, 1)
