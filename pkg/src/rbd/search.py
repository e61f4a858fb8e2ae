"""Search of the rational-base parameter space.

Enumerates primitive coprime bases (a, b) ordered by a + b, filters
perfect-power redundancies, and drives the descent over the enumeration
until a factor turns up or a work budget runs out.  An experimental
multiplier sweep factors m*N for caller-supplied multipliers m and maps
any divisor found back onto N.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Iterator

import gmpy2

from .descent import (
    DescentStats,
    Exhausted,
    FactorOutcome,
    Found,
    GcdBudget,
    RationalBase,
    rbd_factor,
)


@dataclass
class SearchConfig:
    """Knobs for the base-search driver.

    total_gcd_budget caps the number of gcd probes across all bases; the
    driver may overshoot by at most one probe window for the descent that
    notices exhaustion.  With deterministic=True the reported base is the
    earliest in enumeration order that succeeds, regardless of workers.
    """

    max_sum: int = 1000
    iteration_cap_per_base: int | None = None
    total_gcd_budget: int | None = None
    multipliers: tuple[int, ...] = field(default_factory=tuple)
    deterministic: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_sum < 3:
            raise ValueError("max_sum must be >= 3")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.multipliers = tuple(int(m) for m in self.multipliers)
        if any(m < 1 for m in self.multipliers):
            raise ValueError("multipliers must be >= 1")
        if self.iteration_cap_per_base is not None and self.iteration_cap_per_base < 1:
            raise ValueError("iteration_cap_per_base must be >= 1")
        if self.total_gcd_budget is not None and self.total_gcd_budget < 0:
            raise ValueError("total_gcd_budget must be nonnegative")


@dataclass(frozen=True)
class SearchReport:
    """Result of a driver run.  For Exhausted outcomes the embedded stats
    aggregate the work over every base tried."""

    outcome: FactorOutcome
    base_used: RationalBase | None
    multiplier_used: int | None
    bases_tried: int
    total_gcd_calls: int


def is_perfect_power_pair(a: int, b: int) -> bool:
    """True when a = a0**k and b = b0**k for some k >= 2, so a/b is a power
    of a smaller base.  Note 1 = 1**k, hence (a, 1) is flagged exactly when
    a is a perfect power."""
    if not a > b >= 1:
        raise ValueError("require a > b >= 1")
    for k in range(2, a.bit_length() + 1):
        _, exact_a = gmpy2.iroot(a, k)
        if not exact_a:
            continue
        _, exact_b = gmpy2.iroot(b, k)
        if exact_b:
            return True
    return False


def enumerate_primitive_bases(max_sum: int) -> Iterator[RationalBase]:
    """Yield primitive coprime bases (a, b), ordered by s = a + b ascending
    and b ascending within each s, for 3 <= s <= max_sum."""
    if max_sum < 3:
        raise ValueError("max_sum must be >= 3")
    for s in range(3, max_sum + 1):
        for b in range(1, s // 2 + 1):
            a = s - b
            if math.gcd(a, b) != 1:
                continue
            if is_perfect_power_pair(a, b):
                continue
            yield RationalBase(a, b)


def coprime_density(max_sum: int) -> tuple[int, int]:
    """(coprime pairs, total pairs) over the enumeration loop before the
    perfect-power filter.  The ratio tends to 6/pi**2 ~ 0.6079."""
    if max_sum < 10:
        raise ValueError("max_sum must be >= 10")
    coprime = 0
    total = 0
    for s in range(3, max_sum + 1):
        for b in range(1, s // 2 + 1):
            total += 1
            if math.gcd(s - b, b) == 1:
                coprime += 1
    return coprime, total


def vulnerability_condition(c: int, n: int, q: int, a: int, b: int) -> bool:
    """Strict test c*n*q < a*b: whether a typical prime near c*(a/b)**n at
    this scale is detectable with this base (constructed instances can
    still beat it)."""
    if min(c, n, q, a, b) < 1:
        raise ValueError("all arguments must be >= 1")
    return c * n * q < a * b


def search_factor(n: int, config: SearchConfig) -> SearchReport:
    """Run the descent over enumerate_primitive_bases(config.max_sum) until
    a factor is found, the bases are exhausted, or the gcd budget runs out.
    """
    n = int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    bases = list(enumerate_primitive_bases(config.max_sum))
    budget = (
        GcdBudget(config.total_gcd_budget)
        if config.total_gcd_budget is not None
        else None
    )
    if config.workers > 1:
        return _search_parallel(n, bases, config, budget)

    tried = 0
    total_calls = 0
    total_iters = 0
    for base in bases:
        if budget is not None and budget.exhausted:
            break
        tried += 1
        out = rbd_factor(
            n,
            base,
            max_iterations=config.iteration_cap_per_base,
            gcd_budget=budget,
        )
        total_calls += out.stats.gcd_calls
        total_iters += out.stats.iterations
        if isinstance(out, Found):
            return SearchReport(out, base, None, tried, total_calls)
    aggregate = Exhausted(DescentStats(total_iters, total_calls))
    return SearchReport(aggregate, None, None, tried, total_calls)


def _search_parallel(
    n: int,
    bases: list[RationalBase],
    config: SearchConfig,
    budget: GcdBudget | None,
) -> SearchReport:
    """Fan bases out over worker threads in enumeration order.

    The first hit raises a cancellation flag that stops in-flight descents
    at their next iteration.  In deterministic mode a hit is only accepted
    once every earlier base has resolved, so the reported base matches the
    single-worker run; scanned-ahead work still shows up in the counters.
    """
    cancel = threading.Event()
    outcomes: dict[int, FactorOutcome] = {}
    started: set[int] = set()
    lock = threading.Lock()

    def task(idx: int, base: RationalBase) -> tuple[int, FactorOutcome | None]:
        if cancel.is_set():
            return idx, None
        with lock:
            started.add(idx)
        out = rbd_factor(
            n,
            base,
            max_iterations=config.iteration_cap_per_base,
            gcd_budget=budget,
            cancel=cancel,
        )
        return idx, out

    found: dict[int, Found] = {}
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        pending = {pool.submit(task, i, b) for i, b in enumerate(bases)}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                idx, out = fut.result()
                if out is None:
                    continue
                outcomes[idx] = out
                if isinstance(out, Found):
                    found[idx] = out
            if found:
                best = min(found)
                if not config.deterministic or all(
                    i in outcomes for i in range(best)
                ):
                    cancel.set()
            if budget is not None and budget.exhausted:
                cancel.set()
        # Once the flag is up every queued task no-ops and every running
        # descent stops at its next iteration, so the drain is quick and all
        # performed work lands in the counters.

    total_calls = sum(o.stats.gcd_calls for o in outcomes.values())
    total_iters = sum(o.stats.iterations for o in outcomes.values())
    tried = len(started)
    if found:
        best = min(found)
        return SearchReport(found[best], bases[best], None, tried, total_calls)
    aggregate = Exhausted(DescentStats(total_iters, total_calls))
    return SearchReport(aggregate, None, None, tried, total_calls)


def multiplier_sweep(n: int, config: SearchConfig) -> SearchReport:
    """Experimental: search m*n for each configured multiplier m and map a
    found divisor g back onto n via gcd(g, n).  A divisor absorbed entirely
    by the multiplier is not a hit and the sweep moves on."""
    n = int(n)
    if not config.multipliers:
        raise ValueError("config.multipliers must be nonempty")
    tried = 0
    total_calls = 0
    total_iters = 0
    for m in config.multipliers:
        report = search_factor(m * n, config)
        tried += report.bases_tried
        total_calls += report.total_gcd_calls
        total_iters += report.outcome.stats.iterations
        if isinstance(report.outcome, Found):
            candidate = math.gcd(report.outcome.factor, n)
            if 1 < candidate < n:
                out = Found(candidate, n // candidate, report.outcome.stats)
                return SearchReport(out, report.base_used, m, tried, total_calls)
    aggregate = Exhausted(DescentStats(total_iters, total_calls))
    return SearchReport(aggregate, None, None, tried, total_calls)
