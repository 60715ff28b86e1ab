import random

import pytest

from conftest import brute_legendre, newton_isqrt
from splitcensus import ffield

ODD_PRIMES_101 = [p for p in range(3, 102) if ffield.is_prime(p)]


def test_legendre_contract_values():
    assert ffield.legendre(0, 5) == 0
    assert ffield.legendre(4, 7) == 1
    assert ffield.legendre(2, 5) == -1


def test_legendre_rejects_bad_modulus():
    with pytest.raises(ValueError):
        ffield.legendre(3, 4)
    with pytest.raises(ValueError):
        ffield.legendre(3, 2)
    with pytest.raises(ValueError):
        ffield.legendre(3, 15)


def test_legendre_against_brute_force():
    for p in ODD_PRIMES_101:
        for a in range(p):
            assert ffield.legendre(a, p) == brute_legendre(a, p), (a, p)


def test_euler_and_reciprocity_paths_agree():
    for p in ODD_PRIMES_101:
        for a in range(-p, 2 * p):
            assert ffield.legendre(a, p) == ffield.jacobi(a, p), (a, p)


def test_legendre_multiplicative():
    for p in [q for q in ODD_PRIMES_101 if q <= 31]:
        for a in range(1, p):
            for b in range(1, p):
                assert ffield.legendre(a * b, p) == ffield.legendre(a, p) * ffield.legendre(b, p)


def test_jacobi_pair_contract():
    assert ffield.jacobi_pair(2, 3, 5) == 1
    assert ffield.jacobi_pair(9, 3, 5) == 0
    assert ffield.jacobi_pair(1, 3, 5) == 1
    with pytest.raises(ValueError):
        ffield.jacobi_pair(2, 5, 5)


def test_jacobi_pair_matches_composite_jacobi():
    for a in range(-20, 40):
        for l1, l2 in ((3, 5), (5, 7), (3, 11)):
            assert ffield.jacobi_pair(a, l1, l2) == ffield.jacobi(a, l1 * l2)


def test_is_square_int_contract():
    assert ffield.is_square_int(0) == 0
    assert ffield.is_square_int(33) is None
    assert ffield.is_square_int(64) == 8
    assert ffield.is_square_int(-4) is None


def test_is_square_int_against_newton_oracle():
    for n in range(1_000_001):
        r = newton_isqrt(n)
        expected = r if r * r == n else None
        assert ffield.is_square_int(n) == expected, n


def test_is_square_padic_contract():
    assert ffield.is_square_padic(0, 5) is True
    assert ffield.is_square_padic(50, 5) is False  # unit part 2 is a non-residue
    assert ffield.is_square_padic(175, 5) is False  # unit part 7 = 2 mod 5
    assert ffield.is_square_padic(25, 5) is True


def test_is_square_padic_signs():
    # -1 is a residue mod 5 (2^2 = 4 = -1), so -25 is a 5-adic square
    assert ffield.is_square_padic(-25, 5) is True
    assert ffield.is_square_padic(-9, 3) is False


def test_is_square_padic_against_modular_oracle():
    for p in (3, 5, 7):
        for n in range(1, 2_000):
            v = ffield.valuation(n, p)
            m = p ** (v + 1)
            solvable = any(y * y % m == n % m for y in range(m))
            assert ffield.is_square_padic(n, p) == solvable, (n, p)


def test_sqrt_mod_roundtrip():
    for p in ODD_PRIMES_101:
        for a in range(p):
            if ffield.legendre(a, p) >= 0:
                r = ffield.sqrt_mod(a, p)
                assert r * r % p == a % p
            else:
                with pytest.raises(ValueError):
                    ffield.sqrt_mod(a, p)


def test_legendre_table_matches_scalar():
    for p in (3, 5, 7, 11, 101):
        tab = ffield.legendre_table(p)
        for a in range(p):
            assert tab[a] == ffield.legendre(a, p)


class TestQuadExt:
    def test_requires_nonresidue(self):
        with pytest.raises(ValueError):
            ffield.QuadExt(5, 4)  # 4 is a square mod 5

    def test_ring_axioms_spot_check(self):
        rng = random.Random(0)
        for p in (5, 13):
            f = ffield.QuadExt(p)
            for _ in range(50):
                x, y, z = (f.elt(rng.randrange(p), rng.randrange(p)) for _ in range(3))
                assert f.mul(x, y) == f.mul(y, x)
                assert f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
                assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))

    def test_multiplicative_group_order(self):
        # some candidate generates the full multiplicative group of order p^2-1
        import sympy

        for p in (5, 7):
            f = ffield.QuadExt(p)
            n = p * p - 1
            qs = list(sympy.factorint(n))
            found = False
            for c0 in range(p):
                g = f.elt(c0, 1)
                if f.pow(g, n) == (1, 0) and all(f.pow(g, n // q) != (1, 0) for q in qs):
                    found = True
                    break
            assert found, f"no generator of F_{p}^2 found among c0 + t"

    def test_chi_matches_norm_character(self):
        for p in (3, 5, 7, 11):
            f = ffield.QuadExt(p)
            for c0 in range(p):
                for c1 in range(p):
                    x = (c0, c1)
                    assert f.chi(x) == ffield.legendre(f.norm(x), p), (p, x)

    def test_chi_counts_squares(self):
        # exactly (p^2 - 1) / 2 nonzero squares
        p = 7
        f = ffield.QuadExt(p)
        total = sum(
            1 for c0 in range(p) for c1 in range(p) if f.chi((c0, c1)) == 1
        )
        assert total == (p * p - 1) // 2
