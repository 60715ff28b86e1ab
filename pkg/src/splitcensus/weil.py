"""Degree-4 Weil polynomials X^4 + a1*X^3 + a2*X^2 + q*a1*X + q^2.

Covers coefficient-bound validity, the two discriminants, the
absolute-simplicity classification with its full reason set, the two
split shapes over a real-multiplication surface, extremal point counts,
and reciprocal-quartic factorization mod an odd prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

from splitcensus.ffield import (
    is_square_int,
    is_square_padic,
    legendre,
    require_odd_prime,
    sqrt_mod,
)

A1_EXCEPTION_NAMES = ("zero", "p_plus_a2", "twice_a2", "three_a2_minus_p")


@dataclass(frozen=True)
class WeilQuartic:
    """Coefficients of X^4 + a1*X^3 + a2*X^2 + q*a1*X + q^2, q an odd prime."""

    q: int
    a1: int
    a2: int

    def coeffs(self) -> tuple[int, int, int, int, int]:
        """Monic coefficient tuple, leading term first."""
        return (1, self.a1, self.a2, self.q * self.a1, self.q * self.q)

    def value_at_one(self) -> int:
        """P(1): the group order of a corresponding abelian surface."""
        return 1 + self.a1 + self.a2 + self.q * self.a1 + self.q * self.q


@dataclass(frozen=True)
class Discriminants:
    delta: int
    delta_small: int


def rejection_reason(q: int, a1: int, a2: int) -> Optional[str]:
    """None if (q, a1, a2) satisfies the Weil coefficient bounds, else why not.

    All comparisons are exact: |a1| <= 4*sqrt(q) becomes a1^2 <= 16q, the
    lower bound 2|a1|sqrt(q) - 2q <= a2 becomes a2 + 2q >= 0 together with
    4*a1^2*q <= (a2 + 2q)^2, and a2 <= a1^2/4 + 2q becomes 4*a2 <= a1^2 + 8q.
    """
    require_odd_prime(q, "q")
    if a1 * a1 > 16 * q:
        return f"a1^2 = {a1 * a1} exceeds 16q = {16 * q}"
    if 4 * a2 > a1 * a1 + 8 * q:
        return f"4*a2 = {4 * a2} exceeds a1^2 + 8q = {a1 * a1 + 8 * q}"
    s = a2 + 2 * q
    if s < 0 or 4 * a1 * a1 * q > s * s:
        return f"lower bound fails: 4*a1^2*q = {4 * a1 * a1 * q} > (a2+2q)^2 = {s * s}"
    return None


def validate(q: int, a1: int, a2: int) -> Optional[WeilQuartic]:
    """The quartic if the coefficients satisfy the Weil bounds, else None."""
    if rejection_reason(q, a1, a2) is not None:
        return None
    return WeilQuartic(q, a1, a2)


def discriminants(w: WeilQuartic) -> Discriminants:
    """delta = a1^2 - 4*a2 + 8q and delta_small = (a2 + 2q)^2 - 4q*a1^2."""
    d = w.a1 * w.a1 - 4 * w.a2 + 8 * w.q
    ds = (w.a2 + 2 * w.q) ** 2 - 4 * w.q * w.a1 * w.a1
    assert (d - (w.a1 * w.a1 - 4 * w.a2)) % 8 == 0
    return Discriminants(delta=d, delta_small=ds)


@dataclass(frozen=True)
class RMForm:
    """A product-of-quadratics shape: 'square' is (X^2+b1*X+p)^2,
    'mixed' is (X^2+b1*X+p)(X^2-b1*X+p)."""

    kind: Literal["square", "mixed"]
    b1: int


def rm_split_form(w: WeilQuartic) -> Optional[RMForm]:
    """Detect the square/mixed quadratic shapes; square wins the b1 = 0 tie."""
    p = w.q
    if w.a1 % 2 == 0:
        b1 = w.a1 // 2
        if w.a2 == b1 * b1 + 2 * p and b1 * b1 <= 4 * p:
            return RMForm("square", b1)
    if w.a1 == 0:
        b1sq = 2 * p - w.a2
        b1 = is_square_int(b1sq)
        if b1 is not None and b1 * b1 <= 4 * p:
            return RMForm("mixed", b1)
    return None


def extremal_check(w: WeilQuartic) -> Optional[int]:
    """+1 or -1 when the quartic is (X^2 +- floor(2*sqrt(p))*X + p)^2, else None.

    When it fires, P(1) = (p + 1 +- floor(2*sqrt(p)))^2 is asserted.
    """
    form = rm_split_form(w)
    if form is None or form.kind != "square":
        return None
    m = math.isqrt(4 * w.q)
    if abs(form.b1) != m:
        return None
    sign = 1 if form.b1 > 0 else -1
    expected = (w.q + 1 + form.b1) ** 2
    if w.value_at_one() != expected:
        raise AssertionError(
            f"extremal quartic {w} has P(1) = {w.value_at_one()}, expected {expected}"
        )
    return sign


@dataclass(frozen=True)
class SplitClassification:
    """Verdict plus every fired necessary condition for non-simplicity.

    ``a1_exceptions`` lists which members of {0, p+a2, 2*a2, 3*(a2-p)} equal
    a1^2; ``a2_multiple`` is the integer i when a2 = i*p; ``padic_branch``
    marks records whose verdict was decided by the p | a2 valuation branch
    (see module docs), so downstream reports can audit that reading.
    """

    abs_simple: bool
    delta_square_nonzero: bool
    delta_zero: bool
    a2_multiple: Optional[int]
    a1_exceptions: tuple[str, ...]
    padic_branch: bool
    rm_form: Optional[RMForm]
    extremal_sign: Optional[int]

    def reasons(self) -> tuple[str, ...]:
        out = []
        if self.delta_square_nonzero:
            out.append("delta_square_nonzero")
        if self.delta_zero:
            out.append("delta_zero")
        if self.a2_multiple is not None:
            out.append(f"a2_multiple:{self.a2_multiple}")
        out.extend(f"a1_exception:{name}" for name in self.a1_exceptions)
        if self.padic_branch:
            out.append("padic_branch")
        return tuple(out)


def classify(w: WeilQuartic) -> SplitClassification:
    """Absolute-simplicity verdict for a validated quartic with q = p prime.

    AbsolutelySimple iff delta is not a square in Z (negatives are
    non-squares) and either [p does not divide a2 and a1^2 avoids
    {0, p+a2, 2*a2, 3*(a2-p)}] or [p divides a2, p does not divide a1, and
    delta_small is not a square in Z_p].
    """
    p = w.q
    d = discriminants(w)
    delta_is_square = is_square_int(d.delta) is not None
    delta_zero = d.delta == 0
    delta_square_nonzero = delta_is_square and not delta_zero

    a2_multiple = w.a2 // p if w.a2 % p == 0 else None

    a1sq = w.a1 * w.a1
    targets = (0, p + w.a2, 2 * w.a2, 3 * (w.a2 - p))
    a1_exceptions = tuple(
        name for name, t in zip(A1_EXCEPTION_NAMES, targets) if a1sq == t
    )

    if a2_multiple is None:
        cond_ii = not a1_exceptions
        padic_branch = False
    else:
        cond_ii = w.a1 % p != 0 and not is_square_padic(d.delta_small, p)
        # the valuation branch decides the verdict only when delta already
        # failed to be a square; otherwise the verdict is settled without it
        padic_branch = not delta_is_square

    abs_simple = (not delta_is_square) and cond_ii

    form = rm_split_form(w)
    return SplitClassification(
        abs_simple=abs_simple,
        delta_square_nonzero=delta_square_nonzero,
        delta_zero=delta_zero,
        a2_multiple=a2_multiple,
        a1_exceptions=a1_exceptions,
        padic_branch=padic_branch,
        rm_form=form,
        extremal_sign=extremal_check(w),
    )


@dataclass(frozen=True)
class QuarticFactorization:
    """Factorization type of X^4+a1X^3+a2X^2+g*a1X+g^2 over F_l.

    symbol is the Legendre symbol of delta = a1^2 - 4*a2 + 8g mod l:
    +1 gives two distinct quadratics (betas has the two middle
    coefficients), 0 gives a squared quadratic (one beta), -1 none.
    """

    symbol: int
    betas: tuple[int, ...]


def factor_reciprocal_mod_ell(a1: int, a2: int, gamma: int, ell: int) -> QuarticFactorization:
    """Factor the reciprocal quartic with multiplier gamma over F_ell.

    In the non-trivial cases the returned quadratics X^2 + beta*X + gamma
    multiply back to the input; this is re-verified on every call.
    """
    require_odd_prime(ell, "ell")
    gamma %= ell
    if gamma == 0:
        raise ValueError("multiplier gamma must be invertible mod ell")
    a1 %= ell
    a2 %= ell
    delta = (a1 * a1 - 4 * a2 + 8 * gamma) % ell
    sym = legendre(delta, ell)
    inv2 = pow(2, ell - 2, ell)
    if sym == 1:
        u = sqrt_mod(delta, ell)
        b1 = (a1 + u) * inv2 % ell
        b2 = (a1 - u) * inv2 % ell
        if b1 == b2 or (b1 + b2) % ell != a1 or (b1 * b2 + 2 * gamma) % ell != a2:
            raise AssertionError(f"bad split factorization for ({a1},{a2},{gamma}) mod {ell}")
        return QuarticFactorization(symbol=1, betas=tuple(sorted((b1, b2))))
    if sym == 0:
        b = a1 * inv2 % ell
        if (2 * b) % ell != a1 or (b * b + 2 * gamma) % ell != a2:
            raise AssertionError(f"bad square factorization for ({a1},{a2},{gamma}) mod {ell}")
        return QuarticFactorization(symbol=0, betas=(b,))
    return QuarticFactorization(symbol=-1, betas=())
