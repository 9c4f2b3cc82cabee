"""The complete exponential sum S(a, b; q) over units n of e((a n^2 + b nbar^3)/q).

Three routes to the same number: direct summation, multiplicative splitting
into prime powers by the reciprocity substitution, and the stationary-phase
closed form at prime powers p^beta, beta >= 2.  Every value is wrapped with
the square-root cancellation bound 25^omega(q) gcd(a,b,q)^(1/2) q^(1/2) it
must satisfy; a violation raises immediately instead of propagating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import Modulus, as_modulus, crt_split, is_prime, mod_inverse
from .vecmod import mod_pow_vec, unit_residues

_DIRECT_LIMIT = 10**7
_ENUM_LIMIT = 1 << 22  # cap on p^alpha enumeration in stationary_points
_FSUM_LIMIT = 1 << 18


@lru_cache(maxsize=64)
def _roots_of_unity(q: int) -> np.ndarray:
    w = np.exp(2j * np.pi * np.arange(q) / q)
    w.setflags(write=False)
    return w


def _phases(a: int, b: int, q: int) -> np.ndarray:
    """(a n^2 + b nbar^3) mod q over all units n, as exact integers."""
    m = as_modulus(q)
    units = unit_residues(m.q)
    inv = mod_pow_vec(units, m.phi - 1, m.q) if m.q > 1 else units
    return (a % m.q * (units * units % m.q) + b % m.q * mod_pow_vec(inv, 3, m.q)) % m.q


def _direct_value(a: int, b: int, q: int) -> complex:
    if q == 1:
        return 1 + 0j
    terms = _roots_of_unity(q)[_phases(a, b, q)]
    if terms.size <= _FSUM_LIMIT:
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return complex(terms.real.sum(), terms.imag.sum())


@dataclass(frozen=True)
class BoundCertificate:
    """The multiplicative square-root bound plus per-factor diagnostics."""

    lemma: float  # 25^omega(q) * gcd(a,b,q)^(1/2) * q^(1/2)
    per_factor: tuple[tuple[int, int, float | None], ...]  # (p, beta, sharp bound)


def bound_certificate(a: int, b: int, q: int | Modulus) -> BoundCertificate:
    m = as_modulus(q)
    g = math.gcd(a, math.gcd(b, m.q))
    lemma = 25.0**m.omega * math.sqrt(g) * math.sqrt(m.q)
    per = []
    for p, beta in m.factors:
        if a % p == 0 and b % p == 0:
            sharp = None  # stated only for gcd(a, b, p) = 1
        elif beta == 1:
            sharp = 2.0 * math.sqrt(p)
        elif beta % 2 == 0:
            sharp = 5.0 * float(p ** (beta // 2))
        else:
            sharp = 25.0 * p ** (beta // 2) * math.sqrt(p)
        per.append((p, beta, sharp))
    return BoundCertificate(lemma=lemma, per_factor=tuple(per))


def certified_bound(a: int, b: int, q: int | Modulus) -> float:
    return bound_certificate(a, b, q).lemma


@dataclass(frozen=True)
class ExpSumValue:
    a: int
    b: int
    q: Modulus
    value: complex
    method: str
    certified_bound: float


def _wrap(a: int, b: int, m: Modulus, value: complex, method: str) -> ExpSumValue:
    bound = certified_bound(a, b, m)
    if abs(value) > bound + 1e-6 * m.q:
        raise ArithmeticError(
            f"|S({a},{b};{m.q})| = {abs(value):.6g} exceeds certified bound {bound:.6g}"
        )
    return ExpSumValue(a=a % m.q, b=b % m.q, q=m, value=value, method=method, certified_bound=bound)


def s_direct(a: int, b: int, q: int | Modulus) -> ExpSumValue:
    """Direct O(q) evaluation; phases reduced in integer arithmetic first."""
    m = as_modulus(q)
    if m.q > _DIRECT_LIMIT:
        raise ValueError(f"direct summation capped at q <= {_DIRECT_LIMIT}")
    return _wrap(a, b, m, _direct_value(a, b, m.q), "direct")


def stationary_points(a: int, b: int, p: int, alpha: int) -> list[int]:
    """Units y mod p^alpha with 2 a y^5 == 3 b (mod p^alpha).

    Enumeration keeps every branch (p = 2 with even b, p = 3 with 3 | a,
    insolvable quintics) exact; cost is O(p^alpha).
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    pa = p**alpha
    if pa > _ENUM_LIMIT:
        raise ValueError(f"stationary enumeration capped at p^alpha <= {_ENUM_LIMIT}")
    y = np.arange(1, pa + 1, dtype=np.int64)
    if p <= pa:
        y = y[y % p != 0]
    cond = (2 * a % pa * mod_pow_vec(y, 5, pa) - 3 * b) % pa == 0
    return [int(t) for t in y[cond]]


def _gauss_factor(d: int, t: int, p: int) -> complex:
    """G = sum_z e((d z^2 + t z)/p) with the square-root bound asserted."""
    z = np.arange(1, p + 1, dtype=np.int64)
    g = complex(np.sum(_roots_of_unity(p)[(d * z * z + t * z) % p]))
    if (2 * d) % p != 0 and abs(g) > math.sqrt(p) + 1e-9 * p:
        raise ArithmeticError(f"quadratic Gauss factor bound violated at p={p}, d={d}, t={t}")
    return g


def s_prime_power(a: int, b: int, p: int, beta: int) -> ExpSumValue:
    """S(a, b; p^beta) by stationary phase for beta >= 2.

    beta = 1 and the degenerate case p | gcd(a, b) fall back to direct
    summation (the reduction to a lower exponent is deliberately not used).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if beta < 1:
        raise ValueError("beta must be >= 1")
    q = p**beta
    m = as_modulus(q)
    a %= q
    b %= q
    if beta == 1 or (a % p == 0 and b % p == 0):
        return _wrap(a, b, m, _direct_value(a, b, q), "direct")
    alpha = beta // 2
    pa = p**alpha
    total = 0j
    w = _roots_of_unity(q)
    for y in stationary_points(a, b, p, alpha):
        g = (a * pow(y, 5, q) + b) * pow(y, -3, q) % q
        if beta % 2 == 0:
            total += w[g]
        else:
            d = (a + 6 * b * pow(y, -5, p)) % p
            n_int = 2 * a * y**5 - 3 * b  # divisible by p^alpha by construction
            t = (n_int // pa) * pow(y, -4, p) % p
            total += w[g] * _gauss_factor(d, t, p)
    return _wrap(a, b, m, pa * total, "stationary")


def s_factored(a: int, b: int, q: int | Modulus) -> ExpSumValue:
    """S(a, b; q) as a product over its prime-power components."""
    m = as_modulus(q)
    value = 1 + 0j
    for part in crt_split(m):
        p, beta = next(iter(as_modulus(part.modulus).factors))
        sbar = part.cofactor_inv % part.modulus
        value *= s_prime_power(a * sbar, b * sbar, p, beta).value
    return _wrap(a, b, m, value, "factored")


# ---------------------------------------------------------------------------
# bulk evaluators for the exhaustive verification sweeps


def s_direct_table(q: int) -> np.ndarray:
    """S(a, b; q) for every pair, as one 2-D inverse FFT of the pair histogram."""
    if q == 1:
        return np.ones((1, 1), dtype=np.complex128)
    units = unit_residues(q)
    inv = mod_pow_vec(units, as_modulus(q).phi - 1, q)
    u = units * units % q
    v = mod_pow_vec(inv, 3, q)
    hist = np.zeros((q, q), dtype=np.float64)
    np.add.at(hist, (u, v), 1.0)
    return np.fft.ifft2(hist) * (q * q)


@lru_cache(maxsize=8)
def _gauss_factor_table(p: int) -> np.ndarray:
    """G[d, t] for all residues d, t mod p."""
    z = np.arange(1, p + 1, dtype=np.int64)
    d = np.arange(p, dtype=np.int64)[:, None, None]
    t = np.arange(p, dtype=np.int64)[None, :, None]
    phases = (d * (z * z)[None, None, :] + t * z[None, None, :]) % p
    return _roots_of_unity(p)[phases].sum(axis=2)


def subtract_stationary(s: np.ndarray, p: int, beta: int) -> None:
    """Subtract the stationary-phase reconstruction from a full S table in place.

    After the call, entries at pairs with gcd(a, b, p) = 1 should be numerical
    noise; entries at degenerate pairs are meaningless and must be masked by
    the caller.
    """
    if beta < 2:
        raise ValueError("stationary evaluation needs beta >= 2")
    q = p**beta
    if s.shape != (q, q):
        raise ValueError("table shape does not match p^beta")
    alpha = beta // 2
    pa = p**alpha
    odd = beta % 2 == 1
    w = _roots_of_unity(q)
    gtab = _gauss_factor_table(p) if odd else None
    flat = s.reshape(-1)
    a_all = np.arange(q, dtype=np.int64)
    inv3 = mod_inverse(3, pa) % pa if p != 3 else None
    for y in range(1, pa + 1):
        if y % p == 0:
            continue
        y5q = pow(y, 5, q)
        invy3 = pow(y, -3, q)
        if p != 3:
            wcls = 2 * pow(y, 5, pa) * inv3 % pa
            a_sel = a_all
            bcls = wcls * a_all % pa
            step = pa
        else:
            c = 2 * pow(y, 5, pa) * a_all % pa
            keep = c % 3 == 0
            a_sel = a_all[keep]
            step = max(pa // 3, 1)
            bcls = (c[keep] // 3) % step
        if odd:
            iy5 = pow(y, -5, p)
            iy4 = pow(y, -4, p)
        for t in range(q // step):
            b_vec = bcls + t * step
            g = (a_sel * y5q + b_vec) % q * invy3 % q
            vals = pa * w[g]
            if odd:
                d_vec = (a_sel + 6 * b_vec * iy5) % p
                n_int = 2 * a_sel * y**5 - 3 * b_vec
                t_vec = (n_int // pa) * iy4 % p
                vals = vals * gtab[d_vec, t_vec]
            flat[a_sel * q + b_vec] -= vals


def stationary_defect(p: int, beta: int) -> tuple[float, int]:
    """(max |direct - stationary| over gcd(a,b,p)=1 pairs, number of pairs)."""
    q = p**beta
    s = s_direct_table(q)
    subtract_stationary(s, p, beta)
    amod = np.arange(q) % p == 0
    degenerate = np.logical_and(amod[:, None], amod[None, :])
    err = np.abs(s)
    err[degenerate] = 0.0
    return float(err.max()), int(q * q - degenerate.sum())
