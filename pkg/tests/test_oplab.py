import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steklov.errors import PreconditionError
from steklov.oplab import (FiniteRankL, closed_form_trace, commutation_check, finite_rank_trace,
                           gcd_pattern, h_matrix, matrix_trace, prop11_pattern)

SQRT3 = math.sqrt(3.0)


def naive_trace(lam, j):
    """Tr L^{2j} - Tr (LH)^{2j} straight from matrix powers."""
    L = FiniteRankL(lam).matrix()
    H = h_matrix()
    return np.trace(np.linalg.matrix_power(L, 2 * j)) - np.trace(np.linalg.matrix_power(L @ H, 2 * j))


def expanded_form(lam, j):
    return 2 * ((1 + lam * lam) ** j - ((1 + 1j * lam) ** (2 * j)).real)


def test_examples():
    assert finite_rank_trace(SQRT3, 1) == pytest.approx(12, abs=1e-12)
    assert finite_rank_trace(SQRT3, 2) == pytest.approx(48, abs=1e-12)
    assert abs(finite_rank_trace(SQRT3, 3)) < 1e-9


def test_matrix_on_invariant_plane():
    lam = 0.7
    L = FiniteRankL(lam).matrix()
    P = np.zeros_like(L)
    P[3, 3] = P[5, 5] = 1.0
    assert np.array_equal(L @ L, (1 + lam * lam) * P)
    assert np.array_equal(L, L.T)


def test_three_routes_random(rng):
    for _ in range(50):
        lam = float(rng.uniform(0.05, 3.0))
        j = int(rng.integers(1, 16))
        scale = 2 * (1 + lam * lam) ** j
        c = closed_form_trace(lam, j)
        assert abs(c - matrix_trace(lam, j)) < 1e-10 * scale
        assert abs(c - naive_trace(lam, j)) < 1e-10 * scale
        assert abs(c - expanded_form(lam, j)) < 1e-10 * scale
        assert finite_rank_trace(lam, j) == c


@given(st.floats(1e-3, 10.0), st.integers(1, 30))
def test_nonnegative(lam, j):
    assert finite_rank_trace(lam, j) >= 0


@pytest.mark.parametrize("m", [3, 4, 5])
def test_multiples_of_zero_stay_zero(m):
    lam = math.tan(math.pi / m)
    assert abs(finite_rank_trace(lam, m)) < 1e-9
    for p in (2, 3):
        assert abs(finite_rank_trace(lam, p * m)) < 1e-9


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_zero_iff_commutes(m):
    lam = math.tan(math.pi / m)
    for j in range(2, 13):
        zero = abs(finite_rank_trace(lam, j)) < 1e-9
        assert zero == commutation_check(lam, j).commutes == (j % m == 0)


def test_commutation_examples():
    c = commutation_check(SQRT3, 3)
    assert c.commutes and abs(c.criterion) < 1e-12 * 8
    c = commutation_check(SQRT3, 2)
    assert not c.commutes and c.criterion == pytest.approx(2 * SQRT3, rel=1e-14)


@given(st.floats(1e-3, 50.0))
def test_l_squared_commutes_with_h(lam):
    L = FiniteRankL(lam).matrix()
    H = h_matrix()
    assert np.array_equal(L @ L @ H, H @ L @ L)
    assert commutation_check(lam, 2).l2_defect == 0.0


def test_pattern_examples():
    rows = prop11_pattern(3, 9)
    assert [r.j for r in rows if r.is_zero] == [3, 6, 9]
    assert [r.j for r in prop11_pattern(4, 8) if r.is_zero] == [4, 8]
    rows = prop11_pattern(5, 10)
    assert all(r.trace > 0 for r in rows if not r.is_zero)
    assert all(r.commutes == r.is_zero for r in rows if r.commutes is not None)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_gcd_pattern(m):
    g = gcd_pattern(m)
    assert g["gcd"] == m and g["both_zero"] and g["gcd_commutes"] and g["multiples_zero"]


def test_preconditions():
    with pytest.raises(PreconditionError):
        FiniteRankL(0.0)
    with pytest.raises(PreconditionError):
        finite_rank_trace(1.0, 0)
    with pytest.raises(PreconditionError):
        commutation_check(1.0, 1)
    with pytest.raises(PreconditionError):
        prop11_pattern(2, 4)
    with pytest.raises(PreconditionError):
        prop11_pattern(5, 4)
