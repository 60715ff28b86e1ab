"""Exhaustive verification of 4x4 symplectic-similitude counting at small
odd primes: full enumeration of GSp4(F_l) by symplectic basis completion,
an independent brute-force scan at l = 3, conjugacy and characteristic
polynomial tallies, exceptional class sizes, and the equal-determinant
pair group GL2 x_det GL2 with its trace-diagonal subsets.

Enumeration scheme: a matrix M lies in the multiplier-gamma fiber iff its
columns satisfy <c1,c3> = <c2,c4> = gamma and the four cross pairings
vanish, where <u,v> = u^T J v. Choosing c1 != 0, then c3 in the affine
solution space of <c1,c3> = gamma, the orthogonal complement W of
span(c1,c3) is a 2-dimensional symplectic space; with a normalized basis
(w1, w2) the remaining columns are c2 = a*w1 + b*w2, c4 = c*w1 + d*w2
over all 2x2 (a,b,c,d) with ad - bc = gamma. Tally keys use the
characteristic polynomial coefficients a1 = -tr(M), a2 = (tr^2 - tr(M^2))/2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from splitcensus.errors import InternalCheckError
from splitcensus.ffield import legendre, require_odd_prime

SUPPORTED_ELL = (3, 5, 7)
FAST_ELL = (3, 5)


def group_order(ell: int) -> int:
    """|GSp4(F_l)| = l^4 (l-1)(l^2-1)(l^4-1)."""
    return ell**4 * (ell - 1) * (ell**2 - 1) * (ell**4 - 1)


def projective_order(ell: int) -> int:
    """|GSp4(F_l) / scalars| = l^4 (l^2-1)(l^4-1)."""
    return ell**4 * (ell**2 - 1) * (ell**4 - 1)


@dataclass
class GroupTally:
    """Exact counts of G^gamma(l) elements by charpoly key (gamma, a1, a2)."""

    ell: int
    order: int
    counts: dict[tuple[int, int, int], int]
    spot_checks: int = 0

    @property
    def fiber_order(self) -> int:
        return self.order // (self.ell - 1)

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "order": self.order,
            "spot_checks": self.spot_checks,
            "counts": {
                f"{g},{a1},{a2}": n
                for (g, a1, a2), n in sorted(self.counts.items())
            },
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GroupTally":
        counts = {}
        for key, n in d["counts"].items():
            g, a1, a2 = (int(t) for t in key.split(","))
            counts[(g, a1, a2)] = int(n)
        return cls(ell=int(d["ell"]), order=int(d["order"]), counts=counts)


def _symp(u, v, ell: int) -> int:
    return (u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]) % ell


def _charpoly_int(m: list[list[int]]) -> tuple[int, int, int, int]:
    """Exact charpoly coefficients (a1, a2, a3, a4) of a 4x4 integer matrix
    via Newton's identities; X^4 + a1 X^3 + a2 X^2 + a3 X + a4."""

    def matmul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)]
            for i in range(4)
        ]

    def trace(a):
        return sum(a[i][i] for i in range(4))

    m2 = matmul(m, m)
    m3 = matmul(m2, m)
    m4 = matmul(m3, m)
    p1, p2, p3, p4 = trace(m), trace(m2), trace(m3), trace(m4)
    e1 = p1
    e2 = (e1 * p1 - p2) // 2
    e3 = (e2 * p1 - e1 * p2 + p3) // 3
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) // 4
    return (-e1, e2, -e3, e4)


def enumerate_gsp4(
    ell: int, allow_slow: bool = False, seed: int = 0, sample_rate: float = 1e-4
) -> GroupTally:
    """Enumerate every element of GSp4(F_l) and tally characteristic polynomials.

    l = 7 (1.66e9 elements) is refused unless ``allow_slow``. A seeded
    random sample of roughly ``sample_rate`` of all elements is rebuilt as
    an explicit matrix and checked against M^T J M = gamma*J and the
    reciprocal charpoly shape.
    """
    if ell not in SUPPORTED_ELL:
        raise ValueError(f"supported ell are {SUPPORTED_ELL}, got {ell}")
    if ell not in FAST_ELL and not allow_slow:
        raise ValueError(f"ell = {ell} requires allow_slow=True")

    inv2 = pow(2, ell - 2, ell)
    inv = [0] + [pow(k, ell - 2, ell) for k in range(1, ell)]
    units = range(1, ell)

    # (a,b,c,d) with ad - bc = gamma, grouped by gamma
    quad_lists: dict[int, list[tuple[int, int, int, int]]] = {g: [] for g in units}
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        det = (a * d - b * c) % ell
        if det:
            quad_lists[det].append((a, b, c, d))
    quads = {g: np.array(quad_lists[g], dtype=np.int64) for g in units}
    nq = ell * (ell * ell - 1)

    vecs = [v for v in itertools.product(range(ell), repeat=4) if any(v)]
    n1 = len(vecs)
    nc3 = ell**3
    block = nc3 * nq
    order = group_order(ell)
    assert order == (ell - 1) * n1 * block

    rng = np.random.default_rng(seed)
    n_samples = max(1, int(order * sample_rate))
    samples = np.sort(rng.integers(0, order, size=n_samples, dtype=np.int64))
    spot_checks = 0

    counts = {g: np.zeros((ell, ell), dtype=np.int64) for g in units}
    t3_grid = list(itertools.product(range(ell), repeat=3))

    for gi, g in enumerate(units):
        Q = quads[g]
        qa, qb, qc, qd = Q[:, 0], Q[:, 1], Q[:, 2], Q[:, 3]
        for c1i, c1 in enumerate(vecs):
            # functional w -> <c1, w> as a row vector r1
            r1 = ((-c1[2]) % ell, (-c1[3]) % ell, c1[0], c1[1])
            piv = next(i for i in range(4) if r1[i])
            ker: list[tuple[int, ...]] = []
            pinv = inv[r1[piv]]
            for i in range(4):
                if i == piv:
                    continue
                w = [0, 0, 0, 0]
                w[i] = 1
                w[piv] = (-r1[i] * pinv) % ell
                ker.append(tuple(w))
            x0 = [0, 0, 0, 0]
            x0[piv] = g * pinv % ell

            c3_rows, w1_rows, w2_rows = [], [], []
            for t1, t2, t3 in t3_grid:
                c3 = tuple(
                    (x0[i] + t1 * ker[0][i] + t2 * ker[1][i] + t3 * ker[2][i]) % ell
                    for i in range(4)
                )
                r3 = ((-c3[2]) % ell, (-c3[3]) % ell, c3[0], c3[1])
                s = [
                    (r3[0] * k[0] + r3[1] * k[1] + r3[2] * k[2] + r3[3] * k[3]) % ell
                    for k in ker
                ]
                pj = 0 if s[0] else (1 if s[1] else 2)
                sinv = inv[s[pj]]
                basis = []
                for i in range(3):
                    if i == pj:
                        continue
                    coef = (-s[i] * sinv) % ell
                    basis.append(
                        tuple((ker[i][j] + coef * ker[pj][j]) % ell for j in range(4))
                    )
                w1, w2 = basis
                e = _symp(w1, w2, ell)
                einv = inv[e]
                w2 = tuple(x * einv % ell for x in w2)
                c3_rows.append(c3)
                w1_rows.append(w1)
                w2_rows.append(w2)

            C3 = np.array(c3_rows, dtype=np.int64)
            W1 = np.array(w1_rows, dtype=np.int64)
            W2 = np.array(w2_rows, dtype=np.int64)

            # component arrays of c2 and c4, shape (nc3, nq)
            c2 = [(qa[None, :] * W1[:, k:k + 1] + qb[None, :] * W2[:, k:k + 1]) % ell
                  for k in range(4)]
            c4 = [(qc[None, :] * W1[:, k:k + 1] + qd[None, :] * W2[:, k:k + 1]) % ell
                  for k in range(4)]
            tr = (c1[0] + C3[:, 2:3] + c2[1] + c4[3]) % ell
            tr2 = (
                c1[0] * c1[0]
                + C3[:, 2:3] ** 2
                + c2[1] * c2[1]
                + c4[3] * c4[3]
                + 2
                * (
                    c2[0] * c1[1]
                    + C3[:, 0:1] * c1[2]
                    + c4[0] * c1[3]
                    + C3[:, 1:2] * c2[2]
                    + c4[1] * c2[3]
                    + c4[2] * C3[:, 3:4]
                )
            ) % ell
            a1 = (-tr) % ell
            a2 = (tr * tr - tr2) * inv2 % ell
            idx = (a1 * ell + a2).ravel()
            counts[g] += np.bincount(idx, minlength=ell * ell).reshape(ell, ell)

            base = (gi * n1 + c1i) * block
            lo = np.searchsorted(samples, base)
            hi = np.searchsorted(samples, base + block)
            for flat in samples[lo:hi]:
                off = int(flat) - base
                c3i, qi = divmod(off, nq)
                _spot_check(
                    ell, g, c1, c3_rows[c3i], w1_rows[c3i], w2_rows[c3i],
                    quad_lists[g][qi],
                )
                spot_checks += 1

    tally: dict[tuple[int, int, int], int] = {}
    total = 0
    for g in units:
        for a1v in range(ell):
            for a2v in range(ell):
                n = int(counts[g][a1v, a2v])
                tally[(g, a1v, a2v)] = n
                total += n
    if total != order:
        raise InternalCheckError(
            f"enumerated {total} elements of GSp4(F_{ell}), expected {order}"
        )
    return GroupTally(ell=ell, order=order, counts=tally, spot_checks=spot_checks)


def _spot_check(ell, g, c1, c3, w1, w2, quad) -> None:
    a, b, c, d = quad
    c2 = tuple((a * w1[k] + b * w2[k]) % ell for k in range(4))
    c4 = tuple((c * w1[k] + d * w2[k]) % ell for k in range(4))
    cols = (c1, c2, c3, c4)
    m = [[cols[j][i] for j in range(4)] for i in range(4)]
    # M^T J M = gamma * J, entrywise through the column pairings
    expect = {(0, 2): g, (1, 3): g, (0, 1): 0, (0, 3): 0, (1, 2): 0, (2, 3): 0}
    for (i, j), val in expect.items():
        if _symp(cols[i], cols[j], ell) != val:
            raise InternalCheckError(
                f"symplectic pairing <c{i+1},c{j+1}> != {val} for sampled element"
            )
    a1, a2, a3, a4 = (x % ell for x in _charpoly_int(m))
    if a3 != g * a1 % ell or a4 != g * g % ell:
        raise InternalCheckError("sampled element has non-reciprocal charpoly")


def scan_gsp4_l3(chunk: int = 1 << 20) -> GroupTally:
    """Independent tally of GSp4(F_3) by scanning all 3^16 matrices.

    Filters on the six column pairings (the full M^T J M = gamma*J identity,
    using its antisymmetry), then tallies charpolys of survivors.
    """
    ell = 3
    inv2 = pow(2, ell - 2, ell)
    n_total = ell**16
    powers = ell ** np.arange(16, dtype=np.int64)
    counts = {g: np.zeros((ell, ell), dtype=np.int64) for g in (1, 2)}
    total = 0
    for lo in range(0, n_total, chunk):
        n = np.arange(lo, min(n_total, lo + chunk), dtype=np.int64)
        digits = ((n[:, None] // powers[None, :]) % ell).astype(np.int32)
        # row-major entries: M[i][j] = digits[:, 4*i + j]; column j = M[:, j]
        col = [digits[:, j::4] for j in range(4)]  # col[j][:, i] = M[i][j]

        def pair(i, j):
            u, v = col[i], col[j]
            return (
                u[:, 0] * v[:, 2] + u[:, 1] * v[:, 3]
                - u[:, 2] * v[:, 0] - u[:, 3] * v[:, 1]
            ) % ell

        gam = pair(0, 2)
        ok = gam != 0
        ok &= pair(1, 3) == gam
        for i, j in ((0, 1), (0, 3), (1, 2), (2, 3)):
            ok &= pair(i, j) == 0
        m = digits[ok].reshape(-1, 4, 4).astype(np.int64)
        if not len(m):
            continue
        gok = gam[ok]
        tr = np.einsum("nii->n", m) % ell
        tr2 = np.einsum("nij,nji->n", m, m) % ell
        a1 = (-tr) % ell
        a2 = (tr * tr - tr2) * inv2 % ell
        total += len(m)
        for g in (1, 2):
            sel = gok == g
            idx = a1[sel] * ell + a2[sel]
            counts[g] += np.bincount(idx, minlength=ell * ell).reshape(ell, ell)
    order = group_order(3)
    if total != order:
        raise InternalCheckError(f"scan found {total} elements, expected {order}")
    tally = {
        (g, a1, a2): int(counts[g][a1, a2])
        for g in (1, 2)
        for a1 in range(3)
        for a2 in range(3)
    }
    return GroupTally(ell=3, order=order, counts=tally)


# ---------------------------------------------------------------------------
# Derived tallies and checks


@dataclass(frozen=True)
class ConjClassTally:
    """Sizes of the Legendre-symbol classes of delta in the projective group."""

    ell: int
    c1: int
    c0: int
    cm1: int

    @property
    def total(self) -> int:
        return self.c1 + self.c0 + self.cm1


def delta_key(gamma: int, a1: int, a2: int, ell: int) -> int:
    return (a1 * a1 - 4 * a2 + 8 * gamma) % ell


def conj_tallies(tally: GroupTally) -> ConjClassTally:
    """Split |P(l)| by the Legendre symbol of delta; divisions must be exact."""
    ell = tally.ell
    sums = {1: 0, 0: 0, -1: 0}
    for (g, a1, a2), n in tally.counts.items():
        sums[legendre(delta_key(g, a1, a2, ell), ell)] += n
    out = {}
    for sym, total in sums.items():
        if total % (ell - 1):
            raise InternalCheckError(
                f"class sum {total} for symbol {sym} not divisible by {ell - 1}"
            )
        out[sym] = total // (ell - 1)
    t = ConjClassTally(ell=ell, c1=out[1], c0=out[0], cm1=out[-1])
    if t.total != projective_order(ell):
        raise InternalCheckError("Legendre classes do not partition P(l)")
    # realized asymptotic shapes, in exact integers
    if abs(t.c0 - ell**9) > 8 * ell**8:
        raise InternalCheckError(f"|c0 - l^9| too large at l={ell}: {t.c0}")
    if abs(2 * t.c1 - ell**10) > 16 * ell**9:
        raise InternalCheckError(f"|c1 - l^10/2| too large at l={ell}: {t.c1}")
    return t


@dataclass(frozen=True)
class FiberCheckReport:
    """Deviation of charpoly fiber sizes from l^8, measured exactly."""

    ell: int
    n_keys: int
    min_count: int
    max_count: int
    max_deviation_constant: float  # max |count - l^8| / l^7

    def within(self, c: float) -> bool:
        return self.max_deviation_constant <= c


def charpoly_fiber_check(tally: GroupTally) -> FiberCheckReport:
    ell = tally.ell
    center = ell**8
    worst = 0
    lo = hi = center
    for n in tally.counts.values():
        lo = min(lo, n)
        hi = max(hi, n)
        worst = max(worst, abs(n - center))
    if sum(tally.counts.values()) != tally.order:
        raise InternalCheckError("fiber counts do not sum to the group order")
    return FiberCheckReport(
        ell=ell,
        n_keys=len(tally.counts),
        min_count=lo,
        max_count=hi,
        max_deviation_constant=worst / ell**7,
    )


def exceptional_class_sizes(tally: GroupTally) -> dict[str, int]:
    """Exact sizes of the exceptional conjugation-invariant subsets of G(l).

    Keys: 'delta_zero' for delta = 0; 'a2_ip:<i>' for a2 = i*gamma with
    -2 <= i <= 6; 'a1_zero', 'a1sq_gamma_plus_a2', 'a1sq_twice_a2',
    'a1sq_three_a2_minus_gamma' for the square exceptions.
    """
    ell = tally.ell
    sizes: dict[str, int] = {"delta_zero": 0}
    for i in range(-2, 7):
        sizes[f"a2_ip:{i}"] = 0
    for name in ("a1_zero", "a1sq_gamma_plus_a2", "a1sq_twice_a2",
                 "a1sq_three_a2_minus_gamma"):
        sizes[name] = 0
    for (g, a1, a2), n in tally.counts.items():
        if delta_key(g, a1, a2, ell) == 0:
            sizes["delta_zero"] += n
        for i in range(-2, 7):
            if a2 == i * g % ell:
                sizes[f"a2_ip:{i}"] += n
        a1sq = a1 * a1 % ell
        if a1 == 0:
            sizes["a1_zero"] += n
        if a1sq == (g + a2) % ell:
            sizes["a1sq_gamma_plus_a2"] += n
        if a1sq == 2 * a2 % ell:
            sizes["a1sq_twice_a2"] += n
        if a1sq == 3 * (a2 - g) % ell:
            sizes["a1sq_three_a2_minus_gamma"] += n
    bound = 16 * tally.ell**10
    for name, size in sizes.items():
        if size > bound:
            raise InternalCheckError(f"exceptional set {name} has size {size} > 16*l^10")
    return sizes


# ---------------------------------------------------------------------------
# Conjugacy classes of GSp4(F_3) by orbit partition


def _encode(mats: np.ndarray, ell: int) -> np.ndarray:
    powers = ell ** np.arange(16, dtype=np.int64)
    return mats.reshape(-1, 16) @ powers


def _decode(codes: np.ndarray, ell: int) -> np.ndarray:
    powers = ell ** np.arange(16, dtype=np.int64)
    return ((codes[:, None] // powers[None, :]) % ell).reshape(-1, 4, 4)


def _transvection(v: tuple[int, int, int, int], ell: int) -> np.ndarray:
    """T_v = I - v v^T J: x -> x + <x,v> v, a multiplier-1 element."""
    j = np.zeros((4, 4), dtype=np.int64)
    j[0, 2] = j[1, 3] = 1
    j[2, 0] = j[3, 1] = -1
    vv = np.outer(np.array(v, dtype=np.int64), np.array(v, dtype=np.int64))
    return (np.eye(4, dtype=np.int64) - vv @ j) % ell


def _generators_l3() -> list[np.ndarray]:
    vs = [
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
        (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1),
        (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1),
    ]
    gens = [_transvection(v, 3) for v in vs]
    gens.append(np.diag([1, 1, 2, 2]).astype(np.int64))  # multiplier-2 element
    return gens


def _inverse_mod(m: np.ndarray, ell: int) -> np.ndarray:
    import sympy

    inv = sympy.Matrix(m.tolist()).inv_mod(ell)
    return np.array(inv.tolist(), dtype=np.int64) % ell


@dataclass(frozen=True)
class ClassNumberReport:
    ell: int
    closure_size: int
    class_count: int
    projective_class_bound: int  # |G^#| * 4 / |Lambda|
    cube_constant: float  # class_count / ell^3


def class_number(ell: int = 3) -> ClassNumberReport:
    """Exact conjugacy class count of GSp4(F_3) by orbit partition.

    The generating set (ten symplectic transvections plus one multiplier-2
    diagonal) is verified by BFS closure reaching the full group order.
    """
    if ell != 3:
        raise ValueError("class_number is implemented for ell = 3 only")
    gens = _generators_l3()
    order = group_order(3)

    identity = np.eye(4, dtype=np.int64)[None, :, :]
    visited: set[int] = {int(_encode(identity, 3)[0])}
    frontier = identity
    while len(frontier):
        images = []
        for g in gens:
            images.append(np.einsum("nij,jk->nik", frontier, g) % 3)
        codes = _encode(np.concatenate(images), 3)
        fresh = [c for c in set(codes.tolist()) if c not in visited]
        visited.update(fresh)
        frontier = _decode(np.array(sorted(fresh), dtype=np.int64), 3) if fresh else np.empty((0, 4, 4), dtype=np.int64)
    if len(visited) != order:
        raise InternalCheckError(
            f"generator closure has {len(visited)} elements, expected {order}"
        )

    pairs = [(g, _inverse_mod(g, 3)) for g in gens]
    unassigned = set(visited)
    class_count = 0
    while unassigned:
        seed_code = next(iter(unassigned))
        orbit = {seed_code}
        frontier = _decode(np.array([seed_code], dtype=np.int64), 3)
        while len(frontier):
            images = []
            for g, ginv in pairs:
                images.append(
                    np.einsum("ij,njk,kl->nil", ginv, frontier, g) % 3
                )
            codes = _encode(np.concatenate(images), 3)
            fresh = [c for c in set(codes.tolist()) if c not in orbit]
            orbit.update(fresh)
            frontier = _decode(np.array(sorted(fresh), dtype=np.int64), 3) if fresh else np.empty((0, 4, 4), dtype=np.int64)
        unassigned -= orbit
        class_count += 1

    return ClassNumberReport(
        ell=3,
        closure_size=order,
        class_count=class_count,
        projective_class_bound=class_count * 4 // 2,
        cube_constant=class_count / 27,
    )


# ---------------------------------------------------------------------------
# The equal-determinant pair group GL2 x_det GL2 and the diagonal torus


@dataclass
class PairGroupTally:
    """Orders and trace-diagonal subset sizes for the pair group at l."""

    ell: int
    g_order: int
    t_order: int
    c_rm: int
    c_cm: int
    gl2_fibers: dict[tuple[int, int], int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "g_order": self.g_order,
            "t_order": self.t_order,
            "c_rm": self.c_rm,
            "c_cm": self.c_cm,
            "gl2_fibers": {f"{t},{d}": n for (t, d), n in sorted(self.gl2_fibers.items())},
        }


def pair_group_order_formula(ell: int) -> int:
    return (ell - 1) ** 3 * ell**2 * (ell + 1) ** 2


def enumerate_pairs(ell: int) -> PairGroupTally:
    """Scan all l^4 2x2 matrices once; tally GL2 charpoly fibers and derive
    the pair-group order, the trace-diagonal subset, and the torus analogue.

    gl2_fibers is keyed by (t, d) for charpoly X^2 + t*X + d, i.e.
    t = -tr(N), d = det(N)."""
    require_odd_prime(ell, "ell")
    fibers: dict[tuple[int, int], int] = {}
    det_totals = [0] * ell
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        det = (a * d - b * c) % ell
        if det == 0:
            continue
        t = (-(a + d)) % ell
        fibers[(t, det)] = fibers.get((t, det), 0) + 1
        det_totals[det] += 1
    gl2_order = (ell * ell - 1) * (ell * ell - ell)
    if sum(det_totals) != gl2_order:
        raise InternalCheckError("GL2 scan missed elements")

    g_order = sum(n * n for n in det_totals[1:])

    pair_sum = sum(n * n for n in fibers.values())
    if pair_sum % (ell - 1):
        raise InternalCheckError("trace-diagonal pair count not divisible by l-1")
    c_rm = pair_sum // (ell - 1)

    units = range(1, ell)
    t_count = 0
    cm_count = 0
    for l1, l2, m1 in itertools.product(units, repeat=3):
        m2 = l1 * l2 * pow(m1, ell - 2, ell) % ell
        t_count += 1
        if (l1 + l2) % ell == (m1 + m2) % ell:
            cm_count += 1
    if t_count != (ell - 1) ** 3:
        raise InternalCheckError("torus enumeration size mismatch")
    if cm_count % (ell - 1):
        raise InternalCheckError("torus trace-diagonal count not divisible by l-1")

    return PairGroupTally(
        ell=ell,
        g_order=g_order,
        t_order=t_count,
        c_rm=c_rm,
        c_cm=cm_count // (ell - 1),
        gl2_fibers=fibers,
    )


def pair_class_number(ell: int = 3) -> int:
    """Conjugacy class count of the equal-determinant pair group at l = 3,
    by conjugating every element with the whole group."""
    if ell != 3:
        raise ValueError("pair_class_number is implemented for ell = 3 only")
    mats = []
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if (a * d - b * c) % 3:
            mats.append((a, b, c, d))
    arr = np.array(mats, dtype=np.int64)
    det = (arr[:, 0] * arr[:, 3] - arr[:, 1] * arr[:, 2]) % 3
    by_det = {dv: arr[det == dv] for dv in (1, 2)}

    elems = []
    for dv in (1, 2):
        ms = [tuple(int(x) for x in row) for row in by_det[dv]]
        for m1 in ms:
            for m2 in ms:
                elems.append((m1, m2))
    if len(elems) != pair_group_order_formula(3):
        raise InternalCheckError("pair group enumeration size mismatch")

    def inv2x2(m):
        a, b, c, d = m
        di = pow((a * d - b * c) % 3, 3 - 2, 3)
        return (d * di % 3, (-b) * di % 3, (-c) * di % 3, a * di % 3)

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3,
                (c * e + d * g) % 3, (c * f + d * h) % 3)

    conjugators = [(g1, g2, inv2x2(g1), inv2x2(g2)) for (g1, g2) in elems]

    def code(pair):
        v = 0
        for x in pair[0] + pair[1]:
            v = v * 3 + int(x)
        return v

    seen: set[int] = set()
    classes = 0
    for x1, x2 in elems:
        if code((x1, x2)) in seen:
            continue
        classes += 1
        for g1, g2, i1, i2 in conjugators:
            y = (mul(mul(i1, x1), g1), mul(mul(i2, x2), g2))
            seen.add(code(y))
    return classes
