"""Square sieve over discriminant multisets.

The bound: for a finite multiset A of nonzero integers and a set P of
distinct odd primes,

  #squares(A) <= |A|/|P| + max_{l1 != l2} |sum_a (a / l1 l2)|
               + (2/|P|) sum_a nu_P(a) + (1/|P|^2) sum_a nu_P(a)^2,

with nu_P(a) the number of P-primes dividing a. All four terms are kept
as exact rationals; floats appear only in rendered summaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from splitcensus.census import primes_up_to
from splitcensus.errors import InternalCheckError
from splitcensus.ffield import is_square_int, legendre_table, require_odd_prime


@dataclass(frozen=True)
class SieveInput:
    """Multiset A of nonzero integers and auxiliary odd primes P."""

    a: tuple[int, ...]
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(x == 0 for x in self.a):
            raise ValueError("0 is not allowed in the sieve multiset")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("sieve primes must be distinct")
        for p in self.primes:
            require_odd_prime(p, "sieve prime")


@dataclass
class SieveReport:
    s_exact: int
    term1: Fraction
    term2: int
    term2_pair: Optional[tuple[int, int]]
    term3: Fraction
    term4: Fraction
    n_elements: int
    n_primes: int
    window_extended: bool = False

    @property
    def rhs(self) -> Fraction:
        return self.term1 + self.term2 + self.term3 + self.term4

    def to_json_dict(self) -> dict:
        return {
            "s_exact": self.s_exact,
            "n_elements": self.n_elements,
            "n_primes": self.n_primes,
            "window_extended": self.window_extended,
            "term1": {"exact": str(self.term1), "float": float(self.term1)},
            "term2": {
                "exact": str(self.term2),
                "float": float(self.term2),
                "pair": list(self.term2_pair) if self.term2_pair else None,
            },
            "term3": {"exact": str(self.term3), "float": float(self.term3)},
            "term4": {"exact": str(self.term4), "float": float(self.term4)},
            "rhs": {"exact": str(self.rhs), "float": float(self.rhs)},
        }


def _symbol_values(a: Sequence[int], primes: Sequence[int]) -> dict[int, np.ndarray]:
    arr = np.array(a, dtype=np.int64)
    values = {}
    for p in primes:
        tab = legendre_table(p)
        values[p] = tab[arr % p]
    return values


def sieve_bound(inp: SieveInput) -> SieveReport:
    """Evaluate every term of the square-sieve inequality exactly."""
    np_count = len(inp.primes)
    if np_count < 2:
        raise ValueError("the sieve needs at least two auxiliary primes")
    n = len(inp.a)
    s_exact = sum(1 for x in inp.a if is_square_int(x) is not None)

    values = _symbol_values(inp.a, inp.primes) if n else {p: np.zeros(0, dtype=np.int64) for p in inp.primes}

    term2 = 0
    pair: Optional[tuple[int, int]] = None
    plist = sorted(inp.primes)
    for i, l1 in enumerate(plist):
        for l2 in plist[i + 1 :]:
            s = abs(int((values[l1] * values[l2]).sum()))
            if s > term2:
                term2, pair = s, (l1, l2)

    nu = np.zeros(n, dtype=np.int64)
    for p in plist:
        nu += values[p] == 0
    term1 = Fraction(n, np_count)
    term3 = Fraction(2 * int(nu.sum()), np_count)
    term4 = Fraction(int((nu * nu).sum()), np_count * np_count)

    report = SieveReport(
        s_exact=s_exact,
        term1=term1,
        term2=term2,
        term2_pair=pair,
        term3=term3,
        term4=term4,
        n_elements=n,
        n_primes=np_count,
    )
    if report.s_exact > report.rhs:
        raise InternalCheckError(
            f"square sieve inequality violated: {report.s_exact} > {report.rhs}"
        )
    return report


@dataclass(frozen=True)
class CharSumResult:
    s: int
    pi_plus: int
    pi_zero: int
    pi_minus: int


def char_sum(deltas: Iterable[int], l1: int, l2: int) -> CharSumResult:
    """S(l1 l2) = #(symbol +1) - #(symbol -1) over the census discriminants."""
    if l1 == l2:
        raise ValueError("char_sum needs two distinct primes")
    require_odd_prime(l1, "l1")
    require_odd_prime(l2, "l2")
    arr = np.fromiter(deltas, dtype=np.int64)
    if len(arr) == 0:
        return CharSumResult(0, 0, 0, 0)
    vals = legendre_table(l1)[arr % l1] * legendre_table(l2)[arr % l2]
    plus = int((vals == 1).sum())
    minus = int((vals == -1).sum())
    return CharSumResult(s=plus - minus, pi_plus=plus, pi_zero=len(arr) - plus - minus, pi_minus=minus)


# ---------------------------------------------------------------------------
# Window construction with exact x^{a/b} comparisons


@dataclass(frozen=True)
class ZSpec:
    """z given as an absolute value or as x^{num/den}, kept exact."""

    absolute: Optional[int] = None
    num: int = 0
    den: int = 1

    def value(self, x: int) -> float:
        if self.absolute is not None:
            return float(self.absolute)
        return x ** (self.num / self.den)

    def less_than_prime(self, ell: int, x: int) -> bool:
        """Exact test of z < ell."""
        if self.absolute is not None:
            return self.absolute < ell
        return x**self.num < ell**self.den

    def double_exceeds_prime(self, ell: int, x: int) -> bool:
        """Exact test of ell < 2z."""
        if self.absolute is not None:
            return ell < 2 * self.absolute
        return ell**self.den < 2**self.den * x**self.num


def parse_z(text: str) -> ZSpec:
    """Parse '17' or 'x^{a/b}' (also x^(a/b), x^a/b)."""
    s = text.strip().replace(" ", "")
    if not s.startswith("x"):
        try:
            return ZSpec(absolute=int(s))
        except ValueError as exc:
            raise ValueError(f"cannot parse z spec {text!r}") from exc
    body = s[1:]
    if not body.startswith("^"):
        raise ValueError(f"cannot parse z spec {text!r}")
    body = body[1:].strip("{}()")
    if "/" in body:
        num_s, den_s = body.split("/", 1)
        num, den = int(num_s), int(den_s)
    else:
        num, den = int(body), 1
    if num <= 0 or den <= 0:
        raise ValueError("z exponent must be positive")
    return ZSpec(num=num, den=den)


def sieve_window(
    z: ZSpec,
    x: int,
    floor: int = 0,
    exclude: Iterable[int] = (),
    cap: int = 64,
    min_primes: int = 2,
) -> tuple[list[int], bool]:
    """Odd primes in (max(z, floor), 2z), excluding the given set.

    At desk scale the paper's window can hold fewer than two primes; the
    sieve inequality holds for any valid (A, P), so the window is then
    extended upward to the next odd primes and flagged as extended.
    """
    excluded = set(exclude)
    hi_scan = max(int(2 * z.value(x)) + 1, 100)
    window: list[int] = []
    for ell in primes_up_to(hi_scan):
        if ell == 2 or ell in excluded or ell <= floor:
            continue
        if not z.less_than_prime(ell, x):
            continue
        if not z.double_exceeds_prime(ell, x):
            break
        window.append(ell)
        if len(window) >= cap:
            return window, False
    if len(window) >= min_primes:
        return window, False
    # extension fallback: take the next admissible odd primes above the window
    from splitcensus.ffield import is_prime

    ell = window[-1] + 2 if window else 3
    while len(window) < min_primes:
        if is_prime(ell) and ell not in excluded and ell > floor:
            window.append(ell)
        ell += 2
    return window, True


@dataclass
class Prop52Report:
    """Numeric values of the three bound summands at a given (x, z)."""

    x: int
    z: float
    term_window: float  # x log z / z
    term_window_sq: float  # x (log x)(log z)^2 / z^2
    term_char: int  # max |S(l1 l2)| over window pairs
    dominant: str

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "z": self.z,
            "term_window": self.term_window,
            "term_window_sq": self.term_window_sq,
            "term_char": self.term_char,
            "dominant": self.dominant,
        }


def proposition_52_terms(inp: SieveInput, x: int, z: ZSpec) -> Prop52Report:
    """Evaluate the three decomposition summands and name the dominant one."""
    zv = z.value(x)
    if zv <= 1:
        raise ValueError("z must exceed 1")
    lz = math.log(zv)
    t1 = x * lz / zv
    t2 = x * math.log(x) * lz * lz / (zv * zv)
    report = sieve_bound(inp)
    t3 = report.term2
    names = {"window": t1, "window_sq": t2, "char_sum": float(t3)}
    dominant = max(names, key=lambda k: names[k])
    return Prop52Report(
        x=x, z=zv, term_window=t1, term_window_sq=t2, term_char=t3, dominant=dominant
    )
