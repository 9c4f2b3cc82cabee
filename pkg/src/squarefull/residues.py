"""Counting k-th power residues among units: N_k(n; q) for k in {2, 3}.

Includes the twisted partial sums over b <= u and their fluctuation around
the mean phi(q)/q * u, stored in exact integer arithmetic (scaled by q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import Modulus, as_modulus

_TABLE_LIMIT = 10**6


@lru_cache(maxsize=256)
def root_count_table(q: int, k: int) -> np.ndarray:
    """cnt[r] = #{x mod q : gcd(x, q) = 1, x^k == r (mod q)} by enumeration."""
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    if q > _TABLE_LIMIT:
        raise ValueError(f"enumeration table capped at q <= {_TABLE_LIMIT}, got {q}")
    x = np.arange(q, dtype=np.int64)
    units = np.gcd(x, q) == 1
    if q == 1:
        units = np.array([True])
    powers = (x[units] ** k) % q
    cnt = np.bincount(powers, minlength=q).astype(np.int64)
    cnt.setflags(write=False)
    return cnt


def _root_count_prime_power(n: int, p: int, e: int, k: int) -> int:
    """Closed-form unit solution count of x^k == n mod p^e."""
    pe = p**e
    n %= pe
    if n % p == 0:
        return 0
    if k == 2:
        if p == 2:
            if e == 1:
                return 1
            if e == 2:
                return 2 if n % 4 == 1 else 0
            return 4 if n % 8 == 1 else 0
        # odd p: Euler criterion, count stable under Hensel lifting
        return 2 if pow(n, (p - 1) // 2, p) == 1 else 0
    # k == 3
    if p == 3:
        if e == 1:
            return 1
        phi = 2 * 3 ** (e - 1)
        return 3 if pow(n, phi // 3, pe) == 1 else 0
    if p % 3 != 1:
        return 1  # cubing is a bijection on the units
    return 3 if pow(n, (p - 1) // 3, p) == 1 else 0


def root_count(n: int, q: int | Modulus, k: int) -> int:
    """N_k(n; q): units x mod q with x^k == n, zero when gcd(n, q) > 1."""
    m = as_modulus(q)
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    n %= m.q
    if m.q == 1:
        return 1
    if m.q <= _TABLE_LIMIT:
        return int(root_count_table(m.q, k)[n])
    total = 1
    for p, e in m.factors:
        c = _root_count_prime_power(n, p, e, k)
        if c == 0:
            return 0
        total *= c
    return total


def _twisted_counts(l: int, q: int, k: int) -> np.ndarray:
    """cnt_l[j] = N_k(l * (j+1); q) for j = 0..q-1."""
    cnt = root_count_table(q, k)
    b = np.arange(1, q + 1, dtype=np.int64)
    return cnt[(l * b) % q]


def partial_sum(l: int, q: int | Modulus, k: int, u: int) -> int:
    """Exact sum of N_k(l*b; q) over 1 <= b <= u; needs gcd(l, q) = 1."""
    m = as_modulus(q)
    if math.gcd(l, m.q) != 1:
        raise ValueError(f"l = {l} must be coprime to q = {m.q}")
    if u <= 0:
        return 0
    full, rem = divmod(u, m.q)
    total = full * m.phi
    if rem:
        total += int(_twisted_counts(l % m.q, m.q, k)[:rem].sum())
    return total


@dataclass(frozen=True)
class FluctuationProfile:
    """One period of F(u) = sum_{b<=u} N_k(l b; q) - phi(q)/q * u.

    scaled[j] holds q*F(j+1) for j = 0..q-1 as exact integers; F itself is
    linear with slope -phi/q between integers and F(q) = 0.
    """

    q: Modulus
    l: int
    k: int
    scaled: np.ndarray  # q * F(u) at u = 1..q
    max_abs_scaled: int

    @property
    def max_abs(self) -> Fraction:
        return Fraction(self.max_abs_scaled, self.q.q)

    def value(self, u: int) -> Fraction:
        """F(u) at an integer point, using periodicity for u outside [1, q]."""
        if u == 0:
            return Fraction(0)
        r = u % self.q.q
        return Fraction(int(self.scaled[r - 1]) if r else 0, self.q.q)

    def sup_abs_scaled(self) -> int:
        """q * sup_{u real} |F(u)|, exact (F is piecewise linear)."""
        s = self.scaled
        return max(int(np.abs(s).max()), int(np.abs(s - self.q.phi).max()))


def fluctuation_profile(l: int, q: int | Modulus, k: int) -> FluctuationProfile:
    m = as_modulus(q)
    if math.gcd(l, m.q) != 1:
        raise ValueError(f"l = {l} must be coprime to q = {m.q}")
    cnt_l = _twisted_counts(l % m.q, m.q, k)
    u = np.arange(1, m.q + 1, dtype=np.int64)
    scaled = m.q * np.cumsum(cnt_l) - m.phi * u
    if scaled[-1] != 0:
        raise AssertionError("full-period fluctuation must vanish")
    scaled.setflags(write=False)
    return FluctuationProfile(
        q=m, l=l % m.q, k=k, scaled=scaled, max_abs_scaled=int(np.abs(scaled).max())
    )


def max_fluctuation_over_l(q: int | Modulus, k: int) -> int:
    """max over units l of q * max_u |F(u)|, vectorized over all l at once."""
    m = as_modulus(q)
    if m.q == 1:
        return 0
    cnt = np.asarray(root_count_table(m.q, k))
    b = np.arange(1, m.q + 1, dtype=np.int64)
    ls = np.nonzero(np.gcd(np.arange(m.q), m.q) == 1)[0]
    mat = cnt[(ls[:, None] * b[None, :]) % m.q]
    scaled = m.q * np.cumsum(mat, axis=1) - m.phi * b[None, :]
    return int(np.abs(scaled).max())
