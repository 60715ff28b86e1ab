"""Prime sweep over a fixed curve: per-prime Frobenius records, the
necessary-condition counters, decade checkpoints, extremal primes, trend
ratios, and the empirical Chebotarev comparison against group tallies.

The per-condition counters form a superset bound, not a split count: a
record can fire several conditions, and the absolute-simplicity verdict
is exact only up to the valuation-branch reading audited by the
``padic_branch`` flag.
"""

from __future__ import annotations

import csv
import io
import math
import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from splitcensus.curve import FrobeniusRecord, HyperellipticCurve, frobenius_record
from splitcensus.weil import A1_EXCEPTION_NAMES, RMForm, SplitClassification

CSV_COLUMNS = (
    "p",
    "a1",
    "a2",
    "delta",
    "delta_small",
    "delta_sq_flag",
    "delta_zero_flag",
    "a2_ip_flag",
    "a1_exc_flag",
    "padic_flag",
    "abs_simple",
    "rm_form",
    "extremal_sign",
)

A2_MULTIPLE_RANGE = tuple(range(-2, 7))

REPORT_NOTE = (
    "counters are necessary-condition tallies over good degree-1 primes; "
    "not_abs_simple is an upper-bound surrogate for split-prime counts"
)


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a numpy sieve."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


@dataclass
class Counters:
    """Monotone condition counters accumulated over the sweep."""

    good_primes: int = 0
    delta_square_nonzero: int = 0
    delta_zero: int = 0
    a2_ip: dict[int, int] = field(
        default_factory=lambda: {i: 0 for i in A2_MULTIPLE_RANGE}
    )
    a1_exceptions: dict[str, int] = field(
        default_factory=lambda: {name: 0 for name in A1_EXCEPTION_NAMES}
    )
    padic_branch: int = 0
    not_abs_simple: int = 0
    rm_square_form: int = 0
    rm_mixed_form: int = 0

    def absorb(self, c: SplitClassification) -> None:
        self.good_primes += 1
        if c.delta_square_nonzero:
            self.delta_square_nonzero += 1
        if c.delta_zero:
            self.delta_zero += 1
        if c.a2_multiple is not None and c.a2_multiple in self.a2_ip:
            self.a2_ip[c.a2_multiple] += 1
        for name in c.a1_exceptions:
            self.a1_exceptions[name] += 1
        if c.padic_branch:
            self.padic_branch += 1
        if not c.abs_simple:
            self.not_abs_simple += 1
        if c.rm_form is not None:
            if c.rm_form.kind == "square":
                self.rm_square_form += 1
            else:
                self.rm_mixed_form += 1

    def condition_total(self) -> int:
        return (
            self.delta_square_nonzero
            + self.delta_zero
            + sum(self.a2_ip.values())
            + sum(self.a1_exceptions.values())
            + self.padic_branch
        )

    def snapshot(self, x: int) -> "Checkpoint":
        return Checkpoint(
            x=x,
            good_primes=self.good_primes,
            not_abs_simple=self.not_abs_simple,
            delta_square_nonzero=self.delta_square_nonzero,
            delta_zero=self.delta_zero,
            a2_ip_total=sum(self.a2_ip.values()),
            a1_exception_total=sum(self.a1_exceptions.values()),
            padic_branch=self.padic_branch,
        )


@dataclass(frozen=True)
class Checkpoint:
    x: int
    good_primes: int
    not_abs_simple: int
    delta_square_nonzero: int
    delta_zero: int
    a2_ip_total: int
    a1_exception_total: int
    padic_branch: int

    def condition_total(self) -> int:
        return (
            self.delta_square_nonzero
            + self.delta_zero
            + self.a2_ip_total
            + self.a1_exception_total
            + self.padic_branch
        )


@dataclass
class CensusReport:
    curve: str
    xmax: int
    counters: Counters
    skipped_bad_primes: list[int]
    extremal: list[tuple[int, int]]  # (p, sign)
    checkpoints: list[Checkpoint]
    note: str = REPORT_NOTE

    @property
    def total_good_primes(self) -> int:
        return self.counters.good_primes

    def to_json_dict(self) -> dict:
        c = self.counters
        return {
            "curve": self.curve,
            "xmax": self.xmax,
            "note": self.note,
            "total_good_primes": c.good_primes,
            "skipped_bad_primes": self.skipped_bad_primes,
            "delta_square_nonzero": c.delta_square_nonzero,
            "delta_zero": c.delta_zero,
            "a2_ip": {str(i): n for i, n in sorted(c.a2_ip.items())},
            "a1_exceptions": dict(c.a1_exceptions),
            "padic_branch": c.padic_branch,
            "not_abs_simple": c.not_abs_simple,
            "non_jacobian_surrogate_max": c.not_abs_simple,
            "rm_square_form": c.rm_square_form,
            "rm_mixed_form": c.rm_mixed_form,
            "extremal": [{"p": p, "sign": "+" if s > 0 else "-"} for p, s in self.extremal],
            "checkpoints": [
                {
                    "x": cp.x,
                    "good_primes": cp.good_primes,
                    "not_abs_simple": cp.not_abs_simple,
                    "delta_square_nonzero": cp.delta_square_nonzero,
                    "delta_zero": cp.delta_zero,
                    "a2_ip_total": cp.a2_ip_total,
                    "a1_exception_total": cp.a1_exception_total,
                    "padic_branch": cp.padic_branch,
                }
                for cp in self.checkpoints
            ],
        }


_WORKER_CURVE: Optional[HyperellipticCurve] = None


def _init_worker(curve: HyperellipticCurve) -> None:
    global _WORKER_CURVE
    _WORKER_CURVE = curve


def _worker_record(p: int) -> FrobeniusRecord:
    assert _WORKER_CURVE is not None
    return frobenius_record(_WORKER_CURVE, p)


def run_census(
    curve: HyperellipticCurve,
    xmax: int,
    checkpoints: Sequence[int] = (100, 1_000, 10_000),
    workers: int = 1,
    sink: Optional[Callable[[FrobeniusRecord], None]] = None,
) -> CensusReport:
    """Sweep all odd primes p <= xmax, classify each good one, fold counters.

    Records are folded strictly in increasing-p order whatever the worker
    count, so the report and any sink output are deterministic. ``sink``
    receives each record as it is merged, keeping memory independent of
    pi(xmax).
    """
    if xmax < 2:
        raise ValueError("xmax must be at least 2")
    all_primes = primes_up_to(xmax)
    skipped = [p for p in all_primes if p in curve.bad_primes]
    good = [p for p in all_primes if p > 2 and p not in curve.bad_primes]

    counters = Counters()
    extremal: list[tuple[int, int]] = []
    marks: list[Checkpoint] = []
    pending = sorted(x for x in set(checkpoints) if 2 <= x <= xmax)

    def fold(rec: FrobeniusRecord) -> None:
        nonlocal pending
        while pending and rec.p > pending[0]:
            marks.append(counters.snapshot(pending.pop(0)))
        counters.absorb(rec.classification)
        sign = rec.classification.extremal_sign
        if sign is not None:
            extremal.append((rec.p, sign))
        if sink is not None:
            sink(rec)

    if workers <= 1 or len(good) < 4:
        for p in good:
            fold(frobenius_record(curve, p))
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers, initializer=_init_worker, initargs=(curve,)) as pool:
            for rec in pool.imap(_worker_record, good, chunksize=16):
                fold(rec)
    for x in pending:
        marks.append(counters.snapshot(x))

    return CensusReport(
        curve=curve.poly_string(),
        xmax=xmax,
        counters=counters,
        skipped_bad_primes=skipped,
        extremal=extremal,
        checkpoints=marks,
    )


def trend_table(report: CensusReport) -> list[tuple[int, int, float]]:
    """(x, not_abs_simple(x), count normalized by sqrt(x)/ln x) per checkpoint."""
    if not report.checkpoints:
        raise ValueError("census report has no checkpoints")
    rows = []
    for cp in report.checkpoints:
        ratio = cp.not_abs_simple * math.log(cp.x) / math.sqrt(cp.x)
        rows.append((cp.x, cp.not_abs_simple, ratio))
    return rows


# ---------------------------------------------------------------------------
# CSV interchange


def rm_form_str(form: Optional[RMForm]) -> str:
    if form is None:
        return ""
    return ("sq:" if form.kind == "square" else "mx:") + str(form.b1)


def record_to_row(rec: FrobeniusRecord) -> list:
    c = rec.classification
    return [
        rec.p,
        rec.a1,
        rec.a2,
        rec.delta,
        rec.delta_small,
        int(c.delta_square_nonzero),
        int(c.delta_zero),
        int(c.a2_multiple is not None),
        int(bool(c.a1_exceptions)),
        int(c.padic_branch),
        int(c.abs_simple),
        rm_form_str(c.rm_form),
        "" if c.extremal_sign is None else ("+" if c.extremal_sign > 0 else "-"),
    ]


class CsvSink:
    """Streams census records as CSV rows in the canonical column order."""

    def __init__(self, stream: io.TextIOBase):
        self._writer = csv.writer(stream, lineterminator="\n")
        self._writer.writerow(CSV_COLUMNS)

    def __call__(self, rec: FrobeniusRecord) -> None:
        self._writer.writerow(record_to_row(rec))


@dataclass(frozen=True)
class CsvRow:
    p: int
    a1: int
    a2: int
    delta: int
    delta_small: int
    abs_simple: bool


def read_census_csv(stream: Iterable[str]) -> list[CsvRow]:
    reader = csv.reader(stream)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected census CSV header: {header}")
    rows = []
    for row in reader:
        rows.append(
            CsvRow(
                p=int(row[0]),
                a1=int(row[1]),
                a2=int(row[2]),
                delta=int(row[3]),
                delta_small=int(row[4]),
                abs_simple=bool(int(row[10])),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Empirical equidistribution against group tallies


@dataclass(frozen=True)
class ClassDeviation:
    gamma: int
    a1: int
    a2: int
    observed: int
    fiber_size: int
    expected_fraction: float
    deviation: float


@dataclass
class EquidistReport:
    ell: int
    total: int
    classes: list[ClassDeviation]
    max_deviation: float
    chi_square: float

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "total": self.total,
            "max_deviation": self.max_deviation,
            "chi_square": self.chi_square,
            "classes": [
                {
                    "gamma": c.gamma,
                    "a1": c.a1,
                    "a2": c.a2,
                    "observed": c.observed,
                    "fiber_size": c.fiber_size,
                    "expected_fraction": c.expected_fraction,
                    "deviation": c.deviation,
                }
                for c in self.classes
            ],
        }


def equidistribution(
    records: Iterable[FrobeniusRecord | CsvRow], ell: int, tally
) -> EquidistReport:
    """Compare census (p, a1, a2) mod ell frequencies with group predictions.

    Conditional on gamma = p mod ell, the predicted fraction of the class
    (a1, a2) mod ell is tally(gamma, a1, a2) / |fiber of gamma|.
    """
    if ell != tally.ell:
        raise ValueError(f"tally is for ell = {tally.ell}, not {ell}")
    observed: dict[tuple[int, int, int], int] = {}
    fiber_n: dict[int, int] = {g: 0 for g in range(1, ell)}
    total = 0
    for rec in records:
        if rec.p % ell == 0:
            continue
        key = (rec.p % ell, rec.a1 % ell, rec.a2 % ell)
        observed[key] = observed.get(key, 0) + 1
        fiber_n[key[0]] += 1
        total += 1
    if total == 0:
        raise ValueError("no census primes coprime to ell")

    fiber_order = tally.order // (ell - 1)
    classes = []
    max_dev = 0.0
    chi2 = 0.0
    for gamma in range(1, ell):
        n = fiber_n[gamma]
        for a1 in range(ell):
            for a2 in range(ell):
                exp_frac = tally.counts.get((gamma, a1, a2), 0) / fiber_order
                obs = observed.get((gamma, a1, a2), 0)
                dev = abs(obs / n - exp_frac) if n else 0.0
                max_dev = max(max_dev, dev)
                if n and exp_frac > 0:
                    chi2 += (obs - n * exp_frac) ** 2 / (n * exp_frac)
                classes.append(
                    ClassDeviation(
                        gamma=gamma,
                        a1=a1,
                        a2=a2,
                        observed=obs,
                        fiber_size=n,
                        expected_fraction=exp_frac,
                        deviation=dev,
                    )
                )
    return EquidistReport(
        ell=ell, total=total, classes=classes, max_deviation=max_dev, chi_square=chi2
    )
