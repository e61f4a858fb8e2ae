"""Rational-base descent core.

Given a composite N and a reduced rational base a/b > 1, the descent
repeatedly replaces Q by floor(b*Q/a).  If N has a prime factor p close to
c*(a/b)**n for small integers c and n, then after n steps Q lands within a
provably bounded distance of the integer multiple c*q of the cofactor, and
a short window of gcd probes extracts a nontrivial divisor.

Everything here is exact integer arithmetic: operands routinely exceed
1000 bits, so no floating point is allowed anywhere.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpz


@dataclass(frozen=True)
class RationalBase:
    """Reduced rational base a/b with a > b >= 1 and gcd(a, b) == 1."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not (self.a > self.b >= 1):
            raise ValueError(f"base requires a > b >= 1, got {self.a}/{self.b}")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"base {self.a}/{self.b} is not reduced")

    @classmethod
    def parse(cls, text: str) -> "RationalBase":
        """Parse 'a/b', with '/b' optional ('10' means 10/1)."""
        parts = text.strip().split("/")
        if len(parts) not in (1, 2) or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"cannot parse base {text!r}; expected 'a/b' or 'a'")
        a = int(parts[0])
        b = int(parts[1]) if len(parts) == 2 else 1
        return cls(a, b)

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class DescentStats:
    """Work accounting for one descent run.

    iterations counts executed descent steps; gcd_calls never exceeds
    (2J+1) * iterations for J = search_radius(base).
    """

    iterations: int
    gcd_calls: int
    success_iteration: int | None = None
    success_offset: int | None = None


@dataclass(frozen=True)
class Found:
    factor: int
    cofactor: int
    stats: DescentStats


@dataclass(frozen=True)
class Exhausted:
    stats: DescentStats


FactorOutcome = Found | Exhausted


@dataclass(frozen=True)
class DescentWitness:
    """Exact-integer residues certifying where a structured descent lands.

    For an instance N = p*q with p = floor(c*a**n/b**n) + delta:

    - target_remainder = c*a**n mod b**n, the numerator (over b**n) of the
      fractional part discarded when the target prime is floored;
    - landing_offset   = Q_n - c*q, the probe offset the window search must
      reach (|landing_offset| <= search_radius(base) whenever the
      hypotheses hold);
    - truncation_num   = b**n*N - a**n*Q_n, the numerator (over a**n) of
      the accumulated floor-truncation error, which stays within
      [0, a/(a-b)).
    """

    p: int
    q: int
    c: int
    n: int
    base: RationalBase
    delta: int
    target_remainder: int
    landing_offset: int
    truncation_num: int


class GcdBudget:
    """Thread-safe cap on total gcd probes across descents.

    Enforcement is per-iteration: a descent notices exhaustion only after
    finishing an iteration, so the total may overshoot the limit by at most
    2J+1 for the last in-flight descent.
    """

    def __init__(self, limit: int):
        if limit < 0:
            raise ValueError("budget limit must be nonnegative")
        self.limit = limit
        self._used = 0
        self._lock = threading.Lock()

    def charge(self, calls: int) -> bool:
        """Record spent calls; False once the budget is used up."""
        with self._lock:
            self._used += calls
            return self._used < self.limit

    @property
    def used(self) -> int:
        return self._used

    @property
    def exhausted(self) -> bool:
        return self._used >= self.limit


def search_radius(base: RationalBase) -> int:
    """Probe window half-width J = 2 + ceil(a / (a-b)), exactly."""
    a, b = base.a, base.b
    return 2 + -(-a // (a - b))


def descend_once(q: int, base: RationalBase) -> int:
    """One descent step: floor(b*q / a).  Strictly decreasing for q >= 1."""
    return base.b * q // base.a


def iter_descent(n: int, base: RationalBase):
    """Yield successive descent values Q_1, Q_2, ... starting from Q_0 = n,
    ending with (and including) the first value below 2."""
    a, b = mpz(base.a), mpz(base.b)
    q = mpz(n)
    while True:
        q = b * q // a
        yield int(q)
        if q < 2:
            return


def rbd_factor(
    n: int,
    base: RationalBase,
    max_iterations: int | None = None,
    gcd_budget: "int | GcdBudget | None" = None,
    cancel: "threading.Event | None" = None,
) -> FactorOutcome:
    """Run the rational-base descent on n with a fixed base.

    After each descent step the window j = 0, +1, -1, ..., +J, -J is probed
    with g = gcd(|Q - j|, n) (a zero probe value counts as no hit) and the
    first g with 1 < g < n is returned together with its cofactor.  The
    returned factor is whatever the gcd produces; tiny divisors are
    perfectly valid hits.  Exhausted means the descent ran below 2, or an
    optional iteration cap / gcd budget / cancellation stopped it.
    """
    n = int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    if isinstance(gcd_budget, int):
        gcd_budget = GcdBudget(gcd_budget)
    if gcd_budget is not None and gcd_budget.exhausted:
        return Exhausted(DescentStats(0, 0))

    a, b = mpz(base.a), mpz(base.b)
    radius = search_radius(base)
    window_cost = 2 * radius + 1
    nz = mpz(n)
    q = nz
    gcd = gmpy2.gcd
    iterations = 0
    calls = 0
    while True:
        if cancel is not None and cancel.is_set():
            return Exhausted(DescentStats(iterations, calls))
        q = b * q // a
        iterations += 1
        if q < 2:
            return Exhausted(DescentStats(iterations, calls))
        g = gcd(q, nz)
        calls += 1
        if 1 < g < nz:
            stats = DescentStats(iterations, calls, iterations, 0)
            return Found(int(g), int(nz // g), stats)
        hit = 0
        for j in range(1, radius + 1):
            g = gcd(q - j, nz)
            calls += 1
            if 1 < g < nz:
                hit = j
                break
            g = gcd(q + j, nz)
            calls += 1
            if 1 < g < nz:
                hit = -j
                break
        if hit:
            stats = DescentStats(iterations, calls, iterations, hit)
            return Found(int(g), int(nz // g), stats)
        if max_iterations is not None and iterations >= max_iterations:
            return Exhausted(DescentStats(iterations, calls))
        if gcd_budget is not None and not gcd_budget.charge(window_cost):
            return Exhausted(DescentStats(iterations, calls))


def approximation_delta(p: int, c: int, n: int, base: RationalBase) -> int:
    """Defect of p against its rational-power target: p - floor(c*a**n/b**n)."""
    if c < 1 or n < 1:
        raise ValueError("require c >= 1 and n >= 1")
    return p - int(c * mpz(base.a) ** n // mpz(base.b) ** n)


def hypothesis_holds(p: int, q: int, c: int, n: int, base: RationalBase) -> bool:
    """Exact-integer test of the factoring guarantee's two hypotheses:
    a**n > q*b**n and |delta| * q * b**n < a**n.  No rounding anywhere."""
    if p < 2 or q < 2:
        raise ValueError("require p >= 2 and q >= 2")
    an = mpz(base.a) ** n
    qbn = q * mpz(base.b) ** n
    if an <= qbn:
        return False
    return abs(approximation_delta(p, c, n, base)) * qbn < an


def descent_witness(p: int, q: int, c: int, n: int, base: RationalBase) -> DescentWitness:
    """Run exactly n descent steps on N = p*q and return the landing
    residues.  Requires hypothesis_holds; then |landing_offset| is
    guaranteed to stay within search_radius(base)."""
    if not hypothesis_holds(p, q, c, n, base):
        raise ValueError("instance violates the descent hypotheses")
    a, b = mpz(base.a), mpz(base.b)
    big_n = mpz(p) * q
    qk = big_n
    for _ in range(n):
        qk = b * qk // a
    an = a ** n
    bn = b ** n
    return DescentWitness(
        p=p,
        q=q,
        c=c,
        n=n,
        base=base,
        delta=approximation_delta(p, c, n, base),
        target_remainder=int(c * an % bn),
        landing_offset=int(qk - c * q),
        truncation_num=int(bn * big_n - an * qk),
    )


def predicted_max_iterations(n: int, base: RationalBase) -> int:
    """Smallest k with a**k > n * b**k; the descent from n reaches a value
    below 2 within k+1 steps."""
    n = int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    pa = mpz(1)
    pb = mpz(n)
    k = 0
    while pa <= pb:
        pa *= base.a
        pb *= base.b
        k += 1
    return k
