"""Genus-2 hyperelliptic models y^2 = f(x) over Q and Frobenius data at
good primes by exact point counting over F_p and F_{p^2}.

The F_{p^2} count is the hot path of the census. For x = u + v*t with
t^2 = ns, conjugation is v -> -v and fixes the quadratic character of
f(x), so the affine sum runs over v in 1..(p-1)/2 with weight 2 plus the
rational row v = 0. Writing f(u + v*t) = sum_m g_m(v) u^m reduces each
row to two plain mod-p Horner evaluations in u, vectorized over blocks
of rows; the character itself is chi(z) = legendre_p(N(z)) with
N(c0 + c1*t) = c0^2 - ns*c1^2, a size-p table lookup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from splitcensus import weil
from splitcensus.errors import CurveModelError, InternalCheckError
from splitcensus.ffield import (
    QuadExt,
    legendre,
    legendre_table,
    require_odd_prime,
    smallest_nonresidue,
)

# int64 products in the blocked Horner stay exact up to this bound
_MAX_KERNEL_PRIME = 1_200_000


@dataclass(frozen=True)
class HyperellipticCurve:
    """Integral model y^2 = f(x) with deg f in {5, 6} and f squarefree."""

    coeffs: tuple[int, ...]  # constant term first
    disc: int
    bad_primes: frozenset[int]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coeff(self) -> int:
        return self.coeffs[-1]

    def is_good(self, p: int) -> bool:
        return p not in self.bad_primes

    def poly_string(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            elif i == 1:
                body = "x" if mag == 1 else f"{mag}x"
            else:
                body = f"x^{i}" if mag == 1 else f"{mag}x^{i}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += sign + body
        return out


@dataclass(frozen=True)
class FrobeniusRecord:
    """One census row: Frobenius coefficients and classification at p."""

    p: int
    a1: int
    a2: int
    delta: int
    delta_small: int
    classification: weil.SplitClassification


_TERM_RE = re.compile(r"^([+-]?)(\d*)(?:\*?x(?:\^(\d+))?)?$")


def _parse_poly_string(text: str) -> list[int]:
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise CurveModelError("empty polynomial")
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise CurveModelError(f"cannot parse polynomial {text!r}")
    coeffs: dict[int, int] = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (not m.group(2) and "x" not in chunk):
            raise CurveModelError(f"cannot parse term {chunk!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        if "x" not in chunk:
            deg = 0
        elif m.group(3) is not None:
            deg = int(m.group(3))
        else:
            deg = 1
        coeffs[deg] = coeffs.get(deg, 0) + sign * mag
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


def parse_curve(text: str) -> HyperellipticCurve:
    """Build a curve from 'x^5+x+1' style text or a 'c0,c1,...' coefficient list."""
    if "," in text:
        try:
            coeffs = [int(c.strip()) for c in text.split(",")]
        except ValueError as exc:
            raise CurveModelError(f"bad coefficient list {text!r}") from exc
    else:
        coeffs = _parse_poly_string(text)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return curve_from_coeffs(coeffs)


def curve_from_coeffs(coeffs: list[int] | tuple[int, ...]) -> HyperellipticCurve:
    degree = len(coeffs) - 1
    if degree not in (5, 6):
        raise CurveModelError(f"f must have degree 5 or 6, got degree {degree}")
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    disc = int(sympy.discriminant(poly))
    if disc == 0:
        raise CurveModelError("f is not squarefree (discriminant vanishes)")
    bad = {2}
    for n in (coeffs[-1], disc):
        bad.update(int(q) for q in sympy.factorint(abs(n)))
    return HyperellipticCurve(coeffs=tuple(coeffs), disc=disc, bad_primes=frozenset(bad))


def _require_good(curve: HyperellipticCurve, p: int) -> None:
    require_odd_prime(p)
    if not curve.is_good(p):
        raise ValueError(f"p = {p} is a bad prime for this model")


def _fp_char_values(coeffs: tuple[int, ...], p: int) -> np.ndarray:
    """legendre(f(x), p) for all x in F_p, via one vectorized Horner pass."""
    tab = legendre_table(p)
    u = np.arange(p, dtype=np.int64)
    fx = np.full(p, coeffs[-1] % p, dtype=np.int64)
    for c in reversed(coeffs[:-1]):
        fx = (fx * u + c) % p
    return tab[fx]


def raw_count_fp(coeffs: tuple[int, ...], p: int) -> int:
    """#C(F_p) for y^2 = f(x) with no good-reduction guard.

    Affine points are sum over x of 1 + legendre(f(x), p); a degree-5 model
    adds one point at infinity, a degree-6 model adds two when lc(f) is a
    nonzero square mod p and none otherwise.
    """
    require_odd_prime(p)
    chi = _fp_char_values(coeffs, p)
    affine = p + int(chi.sum())
    degree = len(coeffs) - 1
    if degree == 5:
        return affine + 1
    return affine + (2 if legendre(coeffs[-1], p) == 1 else 0)


def count_points_fp(curve: HyperellipticCurve, p: int) -> int:
    """#C(F_p) at a good odd prime."""
    _require_good(curve, p)
    return raw_count_fp(curve.coeffs, p)


def _row_coefficient_arrays(
    coeffs: tuple[int, ...], p: int, ns: int
) -> tuple[np.ndarray, np.ndarray]:
    """Arrays Re[m, v-1], Im[m, v-1] with f(u+vt) = sum_m (Re+Im*t)[m](v) u^m.

    Expands f(u + v*t) binomially; powers of t fold into ns^(j//2) factors.
    Index v runs over 1..(p-1)/2 only (conjugate rows are mirrored).
    """
    d = len(coeffs) - 1
    half = (p - 1) // 2
    v = np.arange(1, half + 1, dtype=np.int64)
    vpow = np.ones((d + 1, half), dtype=np.int64)
    for j in range(1, d + 1):
        vpow[j] = (vpow[j - 1] * v) % p
    ns_pow = [pow(ns, k, p) for k in range(d + 1)]
    re = np.zeros((d + 1, half), dtype=np.int64)
    im = np.zeros((d + 1, half), dtype=np.int64)
    for m in range(d + 1):
        for i in range(m, d + 1):
            j = i - m
            c = coeffs[i] * comb(i, m) % p
            if j % 2 == 0:
                re[m] = (re[m] + (c * ns_pow[j // 2] % p) * vpow[j]) % p
            else:
                im[m] = (im[m] + (c * ns_pow[(j - 1) // 2] % p) * vpow[j]) % p
    return re, im


def raw_count_fp2(
    coeffs: tuple[int, ...],
    p: int,
    ns: Optional[int] = None,
    block_elems: int = 4_000_000,
) -> int:
    """#C(F_{p^2}) for y^2 = f(x) with no good-reduction guard."""
    require_odd_prime(p)
    if p > _MAX_KERNEL_PRIME:
        raise ValueError(f"p = {p} exceeds the exact-arithmetic kernel bound")
    if ns is None:
        ns = smallest_nonresidue(p)
    elif legendre(ns, p) != -1:
        raise ValueError(f"ns = {ns} is not a non-residue mod {p}")
    d = len(coeffs) - 1
    tab = legendre_table(p)
    u = np.arange(p, dtype=np.int64)

    # rational x: every nonzero value of F_p is a square in F_{p^2}
    fx = np.full(p, coeffs[-1] % p, dtype=np.int64)
    for c in reversed(coeffs[:-1]):
        fx = (fx * u + c) % p
    chi_sum = int(np.count_nonzero(fx))

    # unreduced Horner values stay below 2^63 for this many steps
    if p < 32_000:
        stride = 3
    else:
        stride = 2
    re_c, im_c = _row_coefficient_arrays(coeffs, p, ns)
    half = (p - 1) // 2
    rows_per_block = max(1, block_elems // p)
    for lo in range(0, half, rows_per_block):
        hi = min(half, lo + rows_per_block)
        re = np.broadcast_to(re_c[d, lo:hi, None], (hi - lo, p)).copy()
        im = np.broadcast_to(im_c[d, lo:hi, None], (hi - lo, p)).copy()
        for k, m in enumerate(range(d - 1, -1, -1)):
            re *= u
            re += re_c[m, lo:hi, None]
            im *= u
            im += im_c[m, lo:hi, None]
            if (k + 1) % stride == 0 or m == 0:
                re %= p
                im %= p
        nrm = (re * re - ns * (im * im)) % p
        chi_sum += 2 * int(tab[nrm].sum())

    affine = p * p + chi_sum
    if d == 5:
        return affine + 1
    # lc mod p is a nonzero element of F_p, hence always a square in F_{p^2};
    # computed through the norm-character rather than assumed
    lc = coeffs[-1] % p
    chi_lc = int(tab[lc * lc % p]) if lc else 0
    return affine + (1 + chi_lc if lc else 0)


def raw_count_fp2_slow(coeffs: tuple[int, ...], p: int, ns: Optional[int] = None) -> int:
    """Reference O(p^2 log p) count using the extension-field character directly."""
    field = QuadExt(p, ns or 0)
    total = 0
    for c0 in range(p):
        for c1 in range(p):
            total += 1 + field.chi(field.eval_poly(coeffs, (c0, c1)))
    d = len(coeffs) - 1
    if d == 5:
        return total + 1
    lc = coeffs[-1] % p
    return total + (1 + field.chi(field.elt(lc)) if lc else 0)


def count_points_fp2(curve: HyperellipticCurve, p: int, ns: Optional[int] = None) -> int:
    """#C(F_{p^2}) at a good odd prime, optionally with a chosen non-residue."""
    _require_good(curve, p)
    return raw_count_fp2(curve.coeffs, p, ns)


def frobenius_record(curve: HyperellipticCurve, p: int) -> FrobeniusRecord:
    """Frobenius coefficients at a good prime: a1 from #C(F_p), a2 from #C(F_{p^2}).

    Convention: #C(F_p) = p + 1 + a1 for P(X) = X^4 + a1 X^3 + ..., and
    #C(F_{p^2}) = p^2 + 1 - (a1^2 - 2*a2). Both the parity of the derived a2
    and the Weil bounds are theorems, so failures raise InternalCheckError.
    """
    n1 = count_points_fp(curve, p)
    n2 = count_points_fp2(curve, p)
    a1 = n1 - p - 1
    t = n2 - p * p - 1 + a1 * a1
    if t % 2:
        raise InternalCheckError(
            f"odd second power sum at p={p}: counts ({n1}, {n2}) are inconsistent"
        )
    a2 = t // 2
    quartic = weil.validate(p, a1, a2)
    if quartic is None:
        raise InternalCheckError(
            f"point counts at p={p} give (a1, a2) = ({a1}, {a2}) "
            f"outside the Weil bounds: {weil.rejection_reason(p, a1, a2)}"
        )
    d = weil.discriminants(quartic)
    return FrobeniusRecord(
        p=p,
        a1=a1,
        a2=a2,
        delta=d.delta,
        delta_small=d.delta_small,
        classification=weil.classify(quartic),
    )
