"""The acceptance suite: ten end-to-end checks with fixed seeds.

Each check returns a CheckResult; the runtime budget is part of the check.
The report order is the declaration order regardless of how the checks are
scheduled.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import beta

from . import bounds, gauge, geometry, oplab, spectral, wordtrace
from .circlefn import grid, random_positive_series, random_real_series
from .errors import SteklovError

SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    runtime: float
    budget: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name:<24s} {self.runtime:7.2f}s/{self.budget:g}s  {self.detail}"


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    budget: float
    fn: Callable[[np.random.Generator], tuple]

    def run(self) -> CheckResult:
        rng = np.random.default_rng([SEED, self.number])
        t0 = time.perf_counter()
        try:
            ok, detail = self.fn(rng)
        except SteklovError as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        dt = time.perf_counter() - t0
        if dt >= self.budget:
            ok, detail = False, f"over budget; {detail}"
        return CheckResult(self.number, self.name, bool(ok), detail, dt, self.budget)


# --- checks -------------------------------------------------------------------

def edward_equivalence(rng):
    worst = 0.0
    for _ in range(50):
        a = random_real_series(rng, int(rng.integers(0, 9)))
        e = wordtrace.edward_z1(a)
        z = wordtrace.zeta_invariant(a, 1).value
        worst = max(worst, abs(z - e) / (1 + e))
    return worst < 1e-10, f"max |Z1-E|/(1+E) = {worst:.2e}"


def _with_high_mode(rng):
    """Random real symbol with some |â_n| >= 0.1 at n >= 2."""
    while True:
        a = random_real_series(rng, int(rng.integers(2, 7)))
        if np.max(np.abs(a.coeffs[a.band + 2:])) >= 0.1:
            return a


def null_space(rng):
    worst = 0.0
    for _ in range(20):
        a = random_real_series(rng, int(rng.integers(0, 2)), scale=2.0)
        for m in range(1, 5):
            worst = max(worst, abs(wordtrace.zeta_invariant(a, m).value))
    least = math.inf
    for _ in range(20):
        least = min(least, wordtrace.zeta_invariant(_with_high_mode(rng), 2).value)
    ok = worst < 1e-10 and least > 1e-4
    return ok, f"band<=1 max|Z| = {worst:.2e}; high-mode min Z2 = {least:.3e}"


def bound_chain(rng):
    worst_gap = math.inf
    syms = [random_real_series(rng, 5) for _ in range(20)]
    for m in (2, 3):
        for a in syms:
            bc = bounds.bound_chain(a, m)
            if not bc.holds:
                return False, f"chain fails at m={m}: Z={bc.Z:.6g} S1={bc.S1:.6g} S2={bc.S2:.6g}"
            worst_gap = min(worst_gap, bc.Z - bc.S1, bc.S1 - bc.S2)
    m1 = 0.0
    for a in syms:
        fc = bounds.f_components(a, 1)
        m1 = max(m1, abs(bounds.s1_double_sum(a, 1, fc) - wordtrace.edward_z1(a)))
    return m1 < 1e-10, f"min slack {worst_gap:.3e}; m=1 |S1-E| = {m1:.2e}"


def gram_positivity(rng):
    least = math.inf
    for m in range(1, 5):
        for j in range(m + 1, 101):
            least = min(least, bounds.gram_matrix(m, j).lambda_min)
    ent = 0.0
    for m in range(1, 5):
        F = bounds.gram_matrix(m, bounds.INF).entries
        st = np.add.outer(np.arange(1, m + 1), np.arange(1, m + 1))
        # ∫_0^1 t^{s+t-1}(1-t) dt = B(s+t, 2)
        ent = max(ent, float(np.max(np.abs(F - beta(st, 2)))))
    c1 = bounds.c_constant(1, 200)
    ok = least > 0 and ent < 1e-14 and c1.lemma_c == 0.125 and c1.theorem_c == 0.5
    return ok, (f"min λ_min = {least:.3e}; F_inf err = {ent:.1e}; "
                f"c1 = {c1.lemma_c!r}/{c1.theorem_c!r} at j={c1.argmin_j}")


def phi_monotone(rng):
    worst_eq, worst_mono, floor = 0.0, -math.inf, math.inf
    for _ in range(10):
        a = random_real_series(rng, 3)
        p = [wordtrace.phi(a, 3, ell) for ell in (1, 2, 3)]
        z = wordtrace.zeta_invariant(a, 3).value
        worst_eq = max(worst_eq, abs(p[0] - z))
        worst_mono = max(worst_mono, p[1] - p[0], p[2] - p[1])
        floor = min(floor, p[2])
    ok = worst_mono <= 0 and floor >= -1e-9 and worst_eq < 1e-9
    return ok, f"max increase {worst_mono:.2e}; min φ(3) = {floor:.3e}; |φ(1)-Z3| <= {worst_eq:.1e}"


def finite_rank_pattern(rng):
    bad = []
    for m in (3, 4, 5):
        for row in oplab.prop11_pattern(m, 12):
            expect = row.j % m == 0
            if row.is_zero != expect or (row.commutes is not None and row.commutes != row.is_zero):
                bad.append((m, row.j))
    return not bad, "zero iff m | j, commutation agrees" if not bad else f"mismatch at {bad}"


def _random_moebius(rng, conjugate=False):
    w = rng.uniform(0, 0.5) * np.exp(2j * np.pi * rng.uniform())
    return gauge.MoebiusParams(complex(w), float(rng.uniform(0, 2 * np.pi)), conjugate)


def conformal_invariance(rng):
    dspec, dz = 0.0, 0.0
    for _ in range(5):
        a = random_positive_series(rng, 3)
        sa = spectral.steklov_spectrum(a, 256, 12, convergence=False)
        za = wordtrace.zeta_invariant(a, 1).value
        for k in range(3):
            psi = _random_moebius(rng, conjugate=(k == 2))
            b = gauge.mobius_pullback(a, psi, out_band=64).series
            sb = spectral.steklov_spectrum(b, 256, 12, convergence=False)
            dspec = max(dspec, spectral.spectrum_distance(sa, sb, 12))
            dz = max(dz, abs(za - wordtrace.zeta_invariant(b, 1).value))
    return dspec < 1e-5 and dz < 1e-4, f"max eig diff {dspec:.2e}; max |ΔZ1| {dz:.2e}"


def gauge_normalization(rng):
    b1, dist = 0.0, 0.0
    for _ in range(10):
        a = random_positive_series(rng, int(rng.integers(1, 5)), lo=0.5, hi=2.0)
        res = gauge.normalize_gauge(a)
        b1 = max(b1, abs(res.b.coef(1)))
        sa = spectral.steklov_spectrum(a, 256, 12, convergence=False)
        sb = spectral.steklov_spectrum(res.b, 256, 12, convergence=False)
        dist = max(dist, spectral.spectrum_distance(sa, sb, 12))
    return b1 < 1e-9 and dist < 1e-5, f"max |b1| {b1:.2e}; max distance {dist:.2e}"


def reconstruction(rng):
    theta = grid(512)
    err, ok_gauge = 0.0, True
    for taylor in ([1.0], [1.0, 0.3], [1.0, 0.6, 0.09]):
        dphi = geometry.PowerSeries(taylor)
        a = geometry.symbol_from_map(dphi, 64)
        mr = geometry.map_from_symbol(a, 64)
        a2 = geometry.symbol_from_map(mr.dphi, 64)
        err = max(err, float(np.max(np.abs(a.evaluate(theta) - a2.evaluate(theta)))))
        d0 = mr.phi.taylor[1]
        ok_gauge &= mr.phi.taylor[0] == 0 and d0.imag == 0 and d0.real > 0
    return err < 1e-7 and ok_gauge, f"sup-norm {err:.2e}; Φ(0)=0, Φ'(0)>0: {ok_gauge}"


def path_locality(rng):
    worst = 0.0
    for m in (1, 2, 3):
        for K in range(0, 7):
            a = random_real_series(rng, K)
            N = 2 * m * K
            z1 = wordtrace.zeta_invariant(a, m, N).value
            z2 = wordtrace.zeta_invariant(a, m, N + 8).value
            scale = max(abs(z1), abs(z2))
            # Z vanishes exactly for K <= 1, and then both values are 0.0
            d = abs(z1 - z2) / scale if scale > 0 else 0.0
            worst = max(worst, d)
    return worst < 1e-12, f"max relative change {worst:.2e}"


CHECKS = (
    Check(1, "edward-equivalence", 5, edward_equivalence),
    Check(2, "null-space", 10, null_space),
    Check(3, "lower-bound-chain", 30, bound_chain),
    Check(4, "gram-positivity", 5, gram_positivity),
    Check(5, "phi-monotone", 60, phi_monotone),
    Check(6, "finite-rank-pattern", 2, finite_rank_pattern),
    Check(7, "conformal-invariance", 60, conformal_invariance),
    Check(8, "gauge-normalization", 60, gauge_normalization),
    Check(9, "reconstruction", 5, reconstruction),
    Check(10, "path-locality", 10, path_locality),
)


def thread_cap():
    try:
        return max(1, int(os.environ.get("STEKLOV_THREADS", "1")))
    except ValueError:
        return 1


def run_checks(numbers=None, threads=None):
    """Run the selected checks; results come back in declaration order."""
    chosen = [c for c in CHECKS if numbers is None or c.number in numbers]
    threads = threads or thread_cap()
    if threads == 1:
        return [c.run() for c in chosen]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(Check.run, chosen))
