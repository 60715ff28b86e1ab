import math
import random
from fractions import Fraction

import pytest

from splitcensus import sieve
from splitcensus.ffield import is_square_int, jacobi_pair


def test_sieve_bound_worked_example():
    rep = sieve.sieve_bound(sieve.SieveInput(a=(1, 4, 9, 2), primes=(3, 5)))
    assert rep.s_exact == 3
    assert rep.term1 == 2
    assert rep.term2 == 3 and rep.term2_pair == (3, 5)
    assert rep.term3 == 1
    assert rep.term4 == Fraction(1, 4)
    assert rep.rhs == Fraction(25, 4)


def test_sieve_bound_empty_multiset():
    rep = sieve.sieve_bound(sieve.SieveInput(a=(), primes=(3, 5)))
    assert rep.s_exact == 0
    assert rep.rhs == 0


def test_sieve_bound_single_nonsquare():
    rep = sieve.sieve_bound(sieve.SieveInput(a=(2,), primes=(3, 5)))
    assert rep.s_exact == 0
    assert rep.term1 == Fraction(1, 2)
    assert rep.term2 == 1
    assert rep.rhs == Fraction(3, 2)


def test_sieve_input_validation():
    with pytest.raises(ValueError):
        sieve.SieveInput(a=(1, 0), primes=(3, 5))
    with pytest.raises(ValueError):
        sieve.SieveInput(a=(1,), primes=(3, 3))
    with pytest.raises(ValueError):
        sieve.SieveInput(a=(1,), primes=(3, 4))
    with pytest.raises(ValueError):
        sieve.sieve_bound(sieve.SieveInput(a=(1,), primes=(3,)))


def test_sieve_terms_match_direct_symbol_evaluation():
    a = (12, -7, 49, 30, 5, 9)
    primes = (3, 5, 7)
    rep = sieve.sieve_bound(sieve.SieveInput(a=a, primes=primes))
    best = 0
    for i, l1 in enumerate(primes):
        for l2 in primes[i + 1 :]:
            best = max(best, abs(sum(jacobi_pair(x, l1, l2) for x in a)))
    assert rep.term2 == best
    nu = [sum(1 for p in primes if x % p == 0) for x in a]
    assert rep.term3 == Fraction(2 * sum(nu), len(primes))
    assert rep.term4 == Fraction(sum(v * v for v in nu), len(primes) ** 2)
    assert rep.s_exact == sum(1 for x in a if is_square_int(x) is not None)


def test_squares_coprime_to_pair_contribute_plus_one():
    a = (4, 49, 36, 25)
    for l1, l2 in ((3, 5), (11, 13)):
        for x in a:
            if x % l1 and x % l2:
                assert jacobi_pair(x, l1, l2) == 1


def test_nu_bound_by_factor_counting():
    rng = random.Random(7)
    primes = (3, 5, 7, 11)
    for _ in range(300):
        x = rng.randint(1, 10**6)
        nu = sum(1 for p in primes if x % p == 0)
        assert min(primes) ** nu <= x or nu == 0


def test_char_sum_contract():
    assert sieve.char_sum([], 3, 5) == sieve.CharSumResult(0, 0, 0, 0)
    r = sieve.char_sum([2], 3, 5)
    assert (r.s, r.pi_plus, r.pi_minus) == (1, 1, 0)
    with pytest.raises(ValueError):
        sieve.char_sum([2], 3, 3)


def test_char_sum_symmetric_and_consistent():
    deltas = [40, 33, 64, -7, 90, 13, 45]
    a = sieve.char_sum(deltas, 11, 13)
    b = sieve.char_sum(deltas, 13, 11)
    assert a == b
    assert a.pi_plus + a.pi_zero + a.pi_minus == len(deltas)
    assert a.s == a.pi_plus - a.pi_minus


def test_parse_z():
    assert sieve.parse_z("17") == sieve.ZSpec(absolute=17)
    assert sieve.parse_z("x^{1/6}") == sieve.ZSpec(num=1, den=6)
    assert sieve.parse_z("x^(1/42)") == sieve.ZSpec(num=1, den=42)
    assert sieve.parse_z("x^2") == sieve.ZSpec(num=2, den=1)
    with pytest.raises(ValueError):
        sieve.parse_z("y^2")
    with pytest.raises(ValueError):
        sieve.parse_z("x^{0/3}")


def test_zspec_exact_comparisons():
    z = sieve.ZSpec(num=1, den=6)
    x = 10_000
    # z = 10000^(1/6) = 4.64...; exact integer comparisons against primes
    assert z.less_than_prime(5, x)
    assert not z.less_than_prime(3, x)
    assert z.double_exceeds_prime(7, x)
    assert not z.double_exceeds_prime(11, x)


def test_sieve_window_plain_and_extended():
    z = sieve.ZSpec(num=1, den=6)
    window, extended = sieve.sieve_window(z, 10_000)
    assert window == [5, 7] and not extended
    # a tiny z forces the extension fallback
    z42 = sieve.ZSpec(num=1, den=42)
    window, extended = sieve.sieve_window(z42, 10_000)
    assert extended and len(window) == 2 and all(p % 2 for p in window)
    # exclusions are honored
    window, _ = sieve.sieve_window(z, 10_000, exclude={5})
    assert 5 not in window


def test_sieve_window_cap():
    z = sieve.ZSpec(absolute=100)
    window, extended = sieve.sieve_window(z, 10_000, cap=5)
    assert len(window) == 5 and not extended
    assert all(100 < p < 200 for p in window)


def test_proposition_terms_dominance_flip():
    inp = sieve.SieveInput(a=(12, -7, 49, 30), primes=(3, 5))
    small_z = sieve.proposition_52_terms(inp, 10_000, sieve.ZSpec(absolute=5))
    big_z = sieve.proposition_52_terms(inp, 10_000, sieve.ZSpec(absolute=10_000))
    assert small_z.term_window > big_z.term_window
    assert big_z.term_window < 10.0  # x log z / z collapses once z reaches x
    assert small_z.term_window == pytest.approx(10_000 * math.log(5) / 5)


def test_randomized_inequality_never_violated_small():
    # the full 1000-trial sweep runs in the acceptance suite
    rng = random.Random(0)
    pool = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for _ in range(100):
        n = rng.randint(1, 200)
        a = tuple(
            rng.choice((1, -1)) * rng.randint(1, 10**6) if rng.random() < 0.7
            else rng.randint(1, 1000) ** 2
            for _ in range(n)
        )
        k = rng.randint(2, 6)
        primes = tuple(sorted(rng.sample(pool, k)))
        rep = sieve.sieve_bound(sieve.SieveInput(a=a, primes=primes))
        assert rep.s_exact <= rep.rhs
