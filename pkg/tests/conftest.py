"""Shared fixtures and independent oracles.

The heavy session fixtures (full-range census runs, the l=5 group
enumeration) are lazy: they only compute when a test first requests
them, so subset runs stay fast.
"""

from __future__ import annotations

import math
import time

import mpmath as mp
import pytest

from splitcensus import census, curve, gsp4

SAMPLE_CURVES = ("x^5+x+1", "x^5+1", "2x^6+x+1")
ACCEPTANCE_XMAX = 10_000


def weil_oracle_valid(q: int, a1: int, a2: int, tol: float = 1e-9) -> bool:
    """Numerical root-magnitude oracle, independent of the exact inequalities.

    Solves the reciprocal quartic in radicals through T = X + q/X (so
    T^2 + a1*T + a2 - 2q = 0 and X^2 - T*X + q = 0) at 40 digits and
    demands every |root| equal sqrt(q) within tol.
    """
    with mp.workdps(40):
        sq = mp.sqrt(mp.mpc(a1 * a1 - 4 * (a2 - 2 * q)))
        target = mp.sqrt(q)
        for t in ((-a1 + sq) / 2, (-a1 - sq) / 2):
            d = mp.sqrt(t * t - 4 * q)
            for x in ((t + d) / 2, (t - d) / 2):
                if abs(abs(x) - target) > tol:
                    return False
    return True


def newton_isqrt(n: int) -> int:
    """Floating-point-free integer square root by Newton iteration."""
    if n < 0:
        raise ValueError("negative")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 1) // 2)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            break
        x = y
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


def brute_legendre(a: int, p: int) -> int:
    """Legendre symbol by exhaustive squaring."""
    a %= p
    if a == 0:
        return 0
    return 1 if any(y * y % p == a for y in range(1, p)) else -1


def brute_factor_reciprocal(a1: int, a2: int, gamma: int, ell: int):
    """All monic quadratic pairs (X^2+b1*X+gamma)(X^2+b2*X+gamma) matching
    the reciprocal quartic, by scanning all ell^2 candidates."""
    hits = []
    for b1 in range(ell):
        for b2 in range(b1, ell):
            if (b1 + b2) % ell == a1 % ell and (b1 * b2 + 2 * gamma) % ell == a2 % ell:
                hits.append((b1, b2))
    return hits


def primes_in(lo: int, hi: int) -> list[int]:
    return [p for p in census.primes_up_to(hi) if p >= lo]


@pytest.fixture(scope="session")
def sample_curves() -> dict[str, curve.HyperellipticCurve]:
    return {text: curve.parse_curve(text) for text in SAMPLE_CURVES}


@pytest.fixture(scope="session")
def tally3() -> gsp4.GroupTally:
    return gsp4.enumerate_gsp4(3, seed=0)


@pytest.fixture(scope="session")
def tally5() -> gsp4.GroupTally:
    return gsp4.enumerate_gsp4(5, seed=0)


class CensusRun:
    def __init__(self, report, records, elapsed):
        self.report = report
        self.records = records
        self.elapsed = elapsed


@pytest.fixture(scope="session")
def census10k(sample_curves) -> CensusRun:
    """Single-worker reference census of y^2 = x^5+x+1 up to 10^4."""
    records = []
    t0 = time.time()
    report = census.run_census(
        sample_curves["x^5+x+1"],
        ACCEPTANCE_XMAX,
        checkpoints=(100, 1_000, 10_000),
        workers=1,
        sink=records.append,
    )
    return CensusRun(report, records, time.time() - t0)


@pytest.fixture(scope="session")
def census10k_parallel(sample_curves) -> CensusRun:
    """Same census with two workers; must match the reference bit for bit."""
    records = []
    t0 = time.time()
    report = census.run_census(
        sample_curves["x^5+x+1"],
        ACCEPTANCE_XMAX,
        checkpoints=(100, 1_000, 10_000),
        workers=2,
        sink=records.append,
    )
    return CensusRun(report, records, time.time() - t0)
