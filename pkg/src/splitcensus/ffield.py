"""Exact arithmetic substrate: Legendre/Jacobi symbols, integer and p-adic
square tests, square roots mod p, and F_{p^2} as F_p[t]/(t^2 - ns).

Everything here is exact integer arithmetic; no floats touch any verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from splitcensus.errors import InternalCheckError

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for machine-scale integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def _is_odd_prime(p: int) -> bool:
    return p != 2 and is_prime(p)


def require_odd_prime(p: int, name: str = "p") -> None:
    if not _is_odd_prime(p):
        raise ValueError(f"{name} must be an odd prime, got {p}")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, +1}, by Euler's criterion."""
    require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by quadratic reciprocity.

    Independent of ``legendre``: the two must agree whenever n is prime.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd n >= 1, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def jacobi_pair(a: int, l1: int, l2: int) -> int:
    """(a / l1*l2) as the product legendre(a,l1) * legendre(a,l2)."""
    if l1 == l2:
        raise ValueError("jacobi_pair needs two distinct primes")
    return legendre(a, l1) * legendre(a, l2)


def is_square_int(n: int) -> int | None:
    """Return r >= 0 with r*r == n, or None if n is not a square in Z.

    Negative n is never a square. Uses exact integer square root; compare
    results with ``is not None`` since the root may legitimately be 0.
    """
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def valuation(n: int, p: int) -> int:
    """p-adic valuation of n != 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square_padic(n: int, p: int) -> bool:
    """True iff n is a square in the p-adic integers Z_p (p odd).

    n = 0 counts as a square; otherwise needs even valuation and a
    quadratic-residue unit part.
    """
    require_odd_prime(p)
    if n == 0:
        return True
    v = valuation(n, p)
    if v % 2:
        return False
    return legendre(n // p**v, p) == 1


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a mod p (Tonelli-Shanks); raises if a is a non-residue."""
    require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod p."""
    require_odd_prime(p)
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def legendre_table(p: int) -> np.ndarray:
    """Array T of length p with T[a] = legendre(a, p), built from squares."""
    require_odd_prime(p)
    t = np.full(p, -1, dtype=np.int64)
    t[0] = 0
    t[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return t


Elt = tuple[int, int]


@dataclass(frozen=True)
class QuadExt:
    """F_{p^2} realized as F_p[t]/(t^2 - ns) with ns a non-residue.

    Elements are pairs (c0, c1) meaning c0 + c1*t, coordinates reduced mod p.
    """

    p: int
    ns: int = field(default=0)

    def __post_init__(self) -> None:
        require_odd_prime(self.p)
        ns = self.ns if self.ns else smallest_nonresidue(self.p)
        if legendre(ns, self.p) != -1:
            raise ValueError(f"{ns} is not a non-residue mod {self.p}")
        object.__setattr__(self, "ns", ns % self.p)

    def elt(self, c0: int, c1: int = 0) -> Elt:
        return (c0 % self.p, c1 % self.p)

    def add(self, x: Elt, y: Elt) -> Elt:
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def mul(self, x: Elt, y: Elt) -> Elt:
        p, ns = self.p, self.ns
        return (
            (x[0] * y[0] + ns * x[1] * y[1]) % p,
            (x[0] * y[1] + x[1] * y[0]) % p,
        )

    def pow(self, x: Elt, k: int) -> Elt:
        r: Elt = (1, 0)
        b = x
        while k:
            if k & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            k >>= 1
        return r

    def norm(self, x: Elt) -> int:
        """N(x) = x * x^p = c0^2 - ns*c1^2 in F_p."""
        return (x[0] * x[0] - self.ns * x[1] * x[1]) % self.p

    def chi(self, x: Elt) -> int:
        """Quadratic character of F_{p^2}: x^((p^2-1)/2) mapped to {-1,0,+1}."""
        if x == (0, 0):
            return 0
        r = self.pow(x, (self.p * self.p - 1) // 2)
        if r == (1, 0):
            return 1
        if r == (self.p - 1, 0):
            return -1
        raise InternalCheckError(f"character of {x} landed outside {{1,-1}}: {r}")

    def eval_poly(self, coeffs: tuple[int, ...], x: Elt) -> Elt:
        """Horner evaluation of an integer polynomial (constant term first)."""
        acc = self.elt(coeffs[-1])
        for c in reversed(coeffs[:-1]):
            acc = self.mul(acc, x)
            acc = self.add(acc, self.elt(c))
        return acc
