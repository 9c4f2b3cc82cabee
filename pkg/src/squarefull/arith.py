"""Exact integer arithmetic: factorization and multiplicative functions.

Everything here is pure and exact.  Counting loops elsewhere rely on the
guarantee that nothing in this module ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

_SIEVE_LIMIT = 1 << 16


def _build_sieve(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


SMALL_PRIMES: list[int] = _build_sieve(_SIEVE_LIMIT)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # these witnesses are known to be exact far beyond 2^64
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of odd composite n with no factor <= 2^16."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as (prime, exponent) pairs, primes increasing.

    factorize(1) == [].  Trial division by a fixed sieve covers everything
    at desk scale; the rho fallback keeps the stated domain n <= 2^63 total.
    """
    if n <= 0:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n >> 63:
        raise ValueError(f"factorize requires n <= 2^63, got {n}")
    out: list[tuple[int, int]] = []
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        if n < _SIEVE_LIMIT * _SIEVE_LIMIT or is_prime(n):
            out.append((n, 1))
        else:
            rest: dict[int, int] = {}
            stack = [n]
            while stack:
                m = stack.pop()
                if is_prime(m):
                    rest[m] = rest.get(m, 0) + 1
                    continue
                d = _pollard_rho(m)
                stack.extend((d, m // d))
            out.extend(sorted(rest.items()))
    out.sort()
    return out


@dataclass(frozen=True)
class Modulus:
    """A positive modulus with its factorization and derived functions."""

    q: int
    factors: tuple[tuple[int, int], ...]
    phi: int
    omega: int
    tau: int
    mu: int

    def __int__(self) -> int:
        return self.q

    def __str__(self) -> str:
        return str(self.q)


@lru_cache(maxsize=4096)
def modulus(q: int) -> Modulus:
    """Build (and cache) the Modulus record for q >= 1."""
    if q < 1:
        raise ValueError(f"modulus requires q >= 1, got {q}")
    factors = tuple(factorize(q))
    phi = 1
    tau = 1
    mu = 1
    for p, e in factors:
        phi *= (p - 1) * p ** (e - 1)
        tau *= e + 1
        mu = 0 if e >= 2 else -mu
    return Modulus(q=q, factors=factors, phi=phi, omega=len(factors), tau=tau, mu=mu)


def as_modulus(q: int | Modulus) -> Modulus:
    return q if isinstance(q, Modulus) else modulus(q)


def euler_phi(m: int | Modulus) -> int:
    return as_modulus(m).phi


def mod_inverse(a: int, q: int) -> int:
    """The inverse of a mod q, normalized to 1 <= result <= q."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    try:
        inv = pow(a % q, -1, q)
    except ValueError:
        raise ValueError(f"{a} is not invertible mod {q}") from None
    return inv if inv else q  # q == 1 gives residue 0, report it as 1


@dataclass(frozen=True)
class CrtFactor:
    """One coprime prime-power component p^e of q.

    cofactor = q // p^e and cofactor_inv is its inverse mod p^e, so that
    x == sum(x_i * cofactor * cofactor_inv) mod q reconstructs residues and
    S(a, b; q) factors as a product of S(a*cofactor_inv, b*cofactor_inv; p^e).
    """

    modulus: int
    cofactor: int
    cofactor_inv: int


def crt_split(q: int | Modulus) -> list[CrtFactor]:
    m = as_modulus(q)
    out = []
    for p, e in m.factors:
        pe = p**e
        s = m.q // pe
        out.append(CrtFactor(modulus=pe, cofactor=s, cofactor_inv=mod_inverse(s, pe)))
    return out


def crt_combine(q: int | Modulus, residues: list[int]) -> int:
    """Recombine one residue per crt_split component into a residue mod q."""
    m = as_modulus(q)
    parts = crt_split(m)
    if len(residues) != len(parts):
        raise ValueError("one residue per prime-power component required")
    x = 0
    for r, f in zip(residues, parts):
        x += r * f.cofactor * f.cofactor_inv
    return x % m.q


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def mobius_sieve(limit: int) -> list[int]:
    """mu(n) for 0 <= n <= limit (mu[0] = 0)."""
    mu = [1] * (limit + 1)
    mu[0] = 0
    primes = []
    is_comp = bytearray(limit + 1)
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > limit:
                break
            is_comp[i * p] = 1
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def squarefree_sieve(limit: int) -> bytearray:
    """flags[n] == 1 iff n is squarefree, for 0 <= n <= limit."""
    flags = bytearray([1]) * (limit + 1)
    if limit >= 0:
        flags[0] = 0
    p = 2
    while p * p <= limit:
        step = p * p
        flags[step::step] = bytearray(len(flags[step::step]))
        p += 1
    return flags


def icbrt(n: int) -> int:
    """Largest t with t^3 <= n (n >= 0), exact for big ints."""
    if n < 0:
        raise ValueError("icbrt requires n >= 0")
    if n == 0:
        return 0
    t = int(round(n ** (1.0 / 3.0)))
    while t > 0 and t * t * t > n:
        t -= 1
    while (t + 1) ** 3 <= n:
        t += 1
    return t


def iroot(n: int, k: int) -> int:
    """Largest t with t^k <= n (n >= 0, k >= 1), exact for big ints."""
    if n < 0 or k < 1:
        raise ValueError("iroot requires n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    t = int(round(n ** (1.0 / k)))
    t = max(t, 1)
    while t > 0 and t**k > n:
        t -= 1
    while (t + 1) ** k <= n:
        t += 1
    return t
