"""Structured-semiprime generation and the RSA backdoor pipeline.

gen_structured_semiprime builds semiprimes certified to satisfy the
descent's factoring hypotheses; gen_backdoored_rsa plants such a prime
inside an RSA modulus, and rsa_crack recovers plaintexts by factoring the
modulus with the base search.  Plaintexts are raw big-endian bytes; no
padding scheme (this is a research artifact, not a crypto library).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

from gmpy2 import mpz

from .descent import (
    DescentWitness,
    RationalBase,
    approximation_delta,
    descent_witness,
    hypothesis_holds,
)
from .numutil import is_probable_prime, modinv
from .search import Found, SearchConfig, SearchReport, multiplier_sweep, search_factor


class GenerationError(RuntimeError):
    """No admissible prime in the window; retry with larger n or fewer q bits."""


class NotFactoredError(RuntimeError):
    """The base search exhausted its space or budget without a factor."""


class DegenerateKeyError(RuntimeError):
    """gcd(e, phi) != 1, so the private exponent does not exist."""


@dataclass(frozen=True)
class StructuredInstance:
    """Semiprime N = p*q with p = floor(c*a**n/b**n) + delta, certified to
    satisfy the descent hypotheses (so the base (a, b) factors it)."""

    N: int
    p: int
    q: int
    c: int
    n: int
    delta: int
    base: RationalBase

    def __post_init__(self) -> None:
        if self.p == self.q:
            raise ValueError("p and q must be distinct")
        if self.N != self.p * self.q:
            raise ValueError("N != p*q")
        if self.p <= self.c:
            raise ValueError("require p > c")
        if self.delta != approximation_delta(self.p, self.c, self.n, self.base):
            raise ValueError("recorded delta does not match p")
        if not (is_probable_prime(self.p) and is_probable_prime(self.q)):
            raise ValueError("p and q must be (probable) primes")
        if not hypothesis_holds(self.p, self.q, self.c, self.n, self.base):
            raise ValueError("instance violates the descent hypotheses")

    def witness(self) -> DescentWitness:
        return descent_witness(self.p, self.q, self.c, self.n, self.base)


@dataclass(frozen=True)
class RsaKeyMaterial:
    n: int
    e: int
    d: int
    p: int
    q: int
    phi: int

    def __post_init__(self) -> None:
        if self.n != self.p * self.q:
            raise ValueError("n != p*q")
        if self.phi != (self.p - 1) * (self.q - 1):
            raise ValueError("phi != (p-1)*(q-1)")
        if math.gcd(self.e, self.phi) != 1:
            raise ValueError("gcd(e, phi) != 1")
        if self.e * self.d % self.phi != 1:
            raise ValueError("e*d != 1 mod phi")


def _random_prime(bits: int, rng: random.Random) -> int:
    """Random probable prime with exactly `bits` bits, reproducible from rng."""
    if bits < 2:
        raise ValueError("bits must be >= 2")
    while True:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(cand):
            return cand


def _primes_near(target: int, max_abs_delta: int, floor: int, avoid: int) -> Iterator[int]:
    """Yield probable primes p with |p - target| <= max_abs_delta, smallest
    displacement first (target, target+1, target-1, ...), skipping values
    at or below `floor` and the single excluded value `avoid`."""
    for d in range(max_abs_delta + 1):
        candidates = (target,) if d == 0 else (target + d, target - d)
        for cand in candidates:
            if cand <= floor or cand < 2 or cand == avoid:
                continue
            if is_probable_prime(cand):
                yield cand


def gen_structured_semiprime(
    base: RationalBase,
    n: int,
    c: int,
    q_bits: int,
    seed: int,
) -> StructuredInstance:
    """Draw a random q_bits-bit prime q (seeded), then search outward from
    T = floor(c*a**n/b**n) for a prime p inside the admissible window
    |p - T| * q * b**n < a**n.  The returned instance is certified.

    Raises GenerationError when the window holds no usable prime.
    """
    if c < 1 or n < 1:
        raise ValueError("require c >= 1 and n >= 1")
    an = mpz(base.a) ** n
    bn = mpz(base.b) ** n
    if an <= (1 << q_bits) * bn:
        raise ValueError(
            f"(a/b)**n too small for {q_bits}-bit cofactors; raise n or shrink q_bits"
        )
    rng = random.Random(seed)
    q = _random_prime(q_bits, rng)
    target = int(c * an // bn)
    max_abs_delta = int((an - 1) // (q * bn))
    for p in _primes_near(target, max_abs_delta, floor=c, avoid=q):
        return StructuredInstance(
            N=p * q,
            p=p,
            q=q,
            c=c,
            n=n,
            delta=p - target,
            base=base,
        )
    raise GenerationError(
        f"no admissible prime within {max_abs_delta} of the target; "
        "retry with larger n or smaller q_bits"
    )


def gen_backdoored_rsa(
    modulus_bits: int,
    base: RationalBase,
    seed: int,
    e: int = 65537,
) -> RsaKeyMaterial:
    """RSA key whose prime p sits near c*(a/b)**n, making n = p*q
    recoverable by the base search.

    p gets ~3/4 of the modulus bits (c and n are fitted so the target has
    exactly that size); q is a random prime of the remaining bits, below
    (a/b)**n.  Retries draws until gcd(e, phi) == 1.
    """
    if modulus_bits < 128:
        raise ValueError("modulus_bits must be >= 128")
    p_bits = 3 * modulus_bits // 4
    q_bits = modulus_bits - p_bits

    # Largest n with (a/b)**n <= 2**(p_bits-1), then the smallest c lifting
    # the target into [2**(p_bits-1), 2**p_bits).
    n = 1
    while mpz(base.a) ** (n + 1) <= (mpz(2) ** (p_bits - 1)) * mpz(base.b) ** (n + 1):
        n += 1
    an = mpz(base.a) ** n
    bn = mpz(base.b) ** n
    c = int((mpz(2) ** (p_bits - 1) * bn + an - 1) // an)
    target = int(c * an // bn)

    rng = random.Random(seed)
    for _ in range(64):
        q = _random_prime(q_bits, rng)
        if q * bn >= an:
            raise GenerationError("cofactor q does not fit below (a/b)**n")
        max_abs_delta = int((an - 1) // (q * bn))
        p = None
        for cand in _primes_near(target, max_abs_delta, floor=c, avoid=q):
            if math.gcd(e, cand - 1) == 1:
                p = cand
                break
        if p is None:
            raise GenerationError("no admissible prime near the target")
        phi = (p - 1) * (q - 1)
        if math.gcd(e, phi) != 1:
            continue  # q - 1 shares a factor with e; redraw q
        return RsaKeyMaterial(n=p * q, e=e, d=modinv(e, phi), p=p, q=q, phi=phi)
    raise GenerationError("could not reach gcd(e, phi) == 1; try another seed")


def rsa_encrypt(message: bytes, key: RsaKeyMaterial) -> int:
    """Textbook RSA: interpret message as a big-endian integer m < n and
    return m**e mod n."""
    m = int.from_bytes(message, "big")
    if m >= key.n:
        raise ValueError("message does not fit below the modulus")
    return pow(m, key.e, key.n)


def rsa_decrypt(ciphertext: int, key: RsaKeyMaterial) -> bytes:
    """Inverse of rsa_encrypt given the private exponent."""
    m = pow(ciphertext, key.d, key.n)
    return m.to_bytes((m.bit_length() + 7) // 8, "big")


def crack_key(n: int, e: int, config: SearchConfig) -> tuple[RsaKeyMaterial, SearchReport]:
    """Factor n with the base search (or the multiplier sweep when the
    config carries multipliers) and rebuild the private key."""
    report = multiplier_sweep(n, config) if config.multipliers else search_factor(n, config)
    if not isinstance(report.outcome, Found):
        raise NotFactoredError("not factored: base search exhausted")
    p = report.outcome.factor
    q = report.outcome.cofactor
    phi = (p - 1) * (q - 1)
    if math.gcd(e, phi) != 1:
        raise DegenerateKeyError("degenerate key: gcd(e, phi) != 1")
    d = modinv(e, phi)
    return RsaKeyMaterial(n=n, e=e, d=d, p=p, q=q, phi=phi), report


def rsa_crack(n: int, e: int, ciphertext: int, config: SearchConfig) -> bytes:
    """End-to-end break: factor n, derive d, decrypt, re-encode big-endian.

    The bytes come back raw (m = 0 decodes to b""); validating that they
    are printable is the caller's concern.
    """
    key, _ = crack_key(n, e, config)
    m = pow(ciphertext, key.d, key.n)
    return m.to_bytes((m.bit_length() + 7) // 8, "big")
