"""Arbitrary-precision number-theory utilities.

Primality testing (deterministic below 2**64, BPSW plus randomized strong
rounds above), next-prime scanning, exact integer roots, an instrumented
gcd, and small-factor refinement used to split descent outputs further.
All functions are pure; counters are caller-supplied, never global.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpz

# Witnesses proving primality for every n < 3.3 * 10**24 (covers 2**64).
_DETERMINISTIC_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Random strong rounds on top of BPSW for large candidates.
_EXTRA_STRONG_ROUNDS = 32

_TRIAL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
    229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389,
    397, 401, 409, 419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467,
    479, 487, 491, 499, 503, 509, 521, 523, 541, 547, 557, 563, 569, 571,
    577, 587, 593, 599, 601, 607, 613, 617, 619, 631, 641, 643, 647, 653,
    659, 661, 673, 677, 683, 691, 701, 709, 719, 727, 733, 739, 743, 751,
    757, 761, 769, 773, 787, 797, 809, 811, 821, 823, 827, 829, 839, 853,
    857, 859, 863, 877, 881, 883, 887, 907, 911, 919, 929, 937, 941, 947,
    953, 967, 971, 977, 983, 991, 997,
)

TRIAL_DIVISION_BOUND = 10 ** 6
DEFAULT_RHO_BUDGET = 1 << 24


def _strong_round(n: "mpz", d: "mpz", s: int, base: int) -> bool:
    """One strong (Miller-Rabin) round for odd n > 2 with n-1 = d * 2**s."""
    x = gmpy2.powmod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = (x * x) % n
        if x == n - 1:
            return True
    return False


def _selfridge_params(n: "mpz") -> tuple[int, int, int] | None:
    """First D in 5, -7, 9, -11, ... with Jacobi(D|n) == -1; None if a
    Jacobi of zero reveals a factor."""
    d = 5
    while True:
        j = gmpy2.jacobi(d, n)
        if j == -1:
            return d, 1, (1 - d) // 4
        if j == 0 and abs(d) != n:
            return None
        d = -d - 2 if d > 0 else -d + 2


def _strong_lucas_round(n: "mpz") -> bool:
    """Strong Lucas probable-prime round with Selfridge parameters.

    Assumes n is odd, > 2, and not a perfect square.
    """
    params = _selfridge_params(n)
    if params is None:
        return False
    d, p, q = params

    k = n + 1
    s = (k & -k).bit_length() - 1
    k >>= s

    # Binary ladder for U_k, V_k mod n, tracking Q**k.
    u, v = mpz(0), mpz(2)
    qk = mpz(1)
    inv2 = (n + 1) >> 1  # 2**-1 mod n for odd n
    for bit in bin(k)[2:]:
        u, v = (u * v) % n, (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if bit == "1":
            u, v = ((u + v) * inv2) % n, ((d * u + p * v) * inv2) % n
            qk = (qk * q) % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = (qk * qk) % n
    return False


def is_probable_prime(n: int) -> bool:
    """Primality test: deterministic for n < 2**64, BPSW plus 32 seeded
    strong rounds above (false-positive rate below 4**-32).
    """
    n = int(n)
    if n < 2:
        return False
    for p in _TRIAL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    nz = mpz(n)
    d = nz - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    if n < 1 << 64:
        return all(_strong_round(nz, d, s, w) for w in _DETERMINISTIC_WITNESSES)
    if not _strong_round(nz, d, s, 2):
        return False
    if gmpy2.is_square(nz):
        return False
    if not _strong_lucas_round(nz):
        return False
    rng = random.Random(n)  # reproducible bases, still 4**-32 per round
    for _ in range(_EXTRA_STRONG_ROUNDS):
        if not _strong_round(nz, d, s, rng.randrange(2, n - 1)):
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest probable prime strictly greater than n."""
    n = int(n)
    if n < 2:
        return 2
    cand = n + 1 if n % 2 == 0 else n + 2
    while not is_probable_prime(cand):
        cand += 2
    return cand


def integer_nth_root(x: int, k: int) -> tuple[int, bool]:
    """Floor k-th root of x plus an exactness flag: root**k == x."""
    if k < 1:
        raise ValueError("root index k must be >= 1")
    if x < 0:
        raise ValueError("x must be nonnegative")
    root, exact = gmpy2.iroot(mpz(x), k)
    return int(root), bool(exact)


@dataclass
class GcdCounter:
    """Mutable accumulator for gcd-call accounting."""

    count: int = 0


def counted_gcd(x: int, y: int, counter: GcdCounter) -> int:
    """gcd(|x|, y), bumping the counter by exactly one.

    gcd(0, y) == y by convention.
    """
    counter.count += 1
    return int(gmpy2.gcd(x, y))


def modinv(a: int, m: int) -> int:
    """Inverse of a modulo m via the extended Euclidean algorithm."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    g, x = _extended_gcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m} (gcd={g})")
    return x % m


def _extended_gcd(a: int, b: int) -> tuple[int, int]:
    """Returns (g, x) with a*x == g (mod b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_x, x = x, old_x - quot * x
    return old_r, old_x


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    """All primes below TRIAL_DIVISION_BOUND (sieve, cached)."""
    limit = TRIAL_DIVISION_BOUND
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, gmpy2.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i in range(limit) if sieve[i])


PROVEN_SMALL = "proven-small"
PROBABLE_PRIME = "probable-prime"
COMPOSITE_UNSPLIT = "composite-unsplit"


@dataclass(frozen=True)
class FactorEntry:
    factor: int
    multiplicity: int
    certainty: str


@dataclass(frozen=True)
class PartialFactorization:
    """Possibly partial factorization; the product over factor**multiplicity
    always equals the input."""

    input: int
    factors: tuple[FactorEntry, ...]

    def product(self) -> int:
        out = 1
        for entry in self.factors:
            out *= entry.factor ** entry.multiplicity
        return out


def _brent_rho(n: int, budget: int) -> int:
    """Pollard rho with Brent cycling and batched gcd products.

    Returns a nontrivial factor of composite n, or 0 if the iteration
    budget runs out.  Deterministic: restart parameters come from a PRNG
    seeded by n.
    """
    nz = mpz(n)
    if nz % 2 == 0:
        return 2
    rng = random.Random(n ^ 0x5DEECE66D)
    spent = 0
    while spent < budget:
        y = mpz(rng.randrange(1, n - 1))
        c = mpz(rng.randrange(1, n - 1))
        m = 128
        g, r, q = mpz(1), 1, mpz(1)
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % nz
            k = 0
            while k < r and g == 1:
                ys = y
                step = min(m, r - k)
                for _ in range(step):
                    y = (y * y + c) % nz
                    q = (q * abs(x - y)) % nz
                g = gmpy2.gcd(q, nz)
                k += step
                spent += step
            r <<= 1
        if g == nz:
            # Batch overshot; backtrack one step at a time.
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % nz
                g = gmpy2.gcd(abs(x - ys), nz)
        if 1 < g < nz:
            return int(g)
    return 0


def small_factor_refine(n: int, rho_budget: int = DEFAULT_RHO_BUDGET) -> PartialFactorization:
    """Split n by trial division below 10**6 and a Brent-rho stage.

    Factors found by trial division are proven; everything else is labelled
    probable-prime or composite-unsplit.  The product invariant holds
    exactly regardless of how far the splitting gets.
    """
    n = int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    counts: dict[int, int] = {}
    certainty: dict[int, str] = {}

    def add(f: int, label: str) -> None:
        counts[f] = counts.get(f, 0) + 1
        certainty[f] = label

    m = n
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            add(p, PROVEN_SMALL)
            m //= p
    if 1 < m < TRIAL_DIVISION_BOUND ** 2:
        # No factor below 10**6 and m < 10**12: m is prime by trial division.
        add(m, PROVEN_SMALL if m < TRIAL_DIVISION_BOUND else PROBABLE_PRIME)
        m = 1

    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_probable_prime(x):
            add(x, PROBABLE_PRIME)
            continue
        d = _brent_rho(x, rho_budget)
        if d == 0:
            add(x, COMPOSITE_UNSPLIT)
        else:
            stack.append(d)
            stack.append(x // d)

    entries = tuple(
        FactorEntry(f, counts[f], certainty[f]) for f in sorted(counts)
    )
    return PartialFactorization(input=n, factors=entries)
