"""Headline counters: pairs a^2 b^3 <= X and squarefull n <= x in a residue
class, their brute-force oracles, main terms, and the exact Moebius identity
tying the two together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import Modulus, as_modulus, factorize, icbrt, iroot, mobius_sieve, squarefree_sieve
from .constants import c_constant, d_constant, euler_factors, zeta_em
from .geometry import _curve_targets, _sqrt_struct
from .vecmod import mod_pow_vec

_X_LIMIT = 1 << 60
_VEC_THRESHOLD = 4096  # switch the b-loop to numpy above this many terms


def _check_args(x: int, l: int, m: Modulus) -> None:
    if x < 0 or x > _X_LIMIT:
        raise ValueError(f"x must lie in [0, 2^60], got {x}")
    if math.gcd(l, m.q) != 1:
        raise ValueError(f"l = {l} must be coprime to q = {m.q}")


def _isqrt_vec(v: np.ndarray) -> np.ndarray:
    s = np.sqrt(v.astype(np.float64)).astype(np.int64)
    for _ in range(2):
        s += (s + 1) ** 2 <= v
        s -= s * s > v
    return s


@lru_cache(maxsize=4)
def _sf_flags_pow2(limit: int) -> bytes:
    return bytes(squarefree_sieve(limit))


def _sf_flags(limit: int) -> bytes:
    # round the sieve up to a power of two so repeated calls share one table
    return _sf_flags_pow2(1 << max(limit - 1, 1).bit_length())


def _count_pairs(x: int, l: int, m: Modulus, squarefree_b: bool) -> int:
    """Pairs a, b >= 1 with a^2 b^3 <= x and a^2 b^3 == l (mod q);
    b restricted to squarefree values when squarefree_b is set."""
    if x < 1:
        return 0
    q = m.q
    bmax = icbrt(x)
    flags = _sf_flags(max(bmax, 1)) if squarefree_b else None
    if q == 1:
        if bmax <= _VEC_THRESHOLD:
            return sum(
                math.isqrt(x // b**3)
                for b in range(1, bmax + 1)
                if not squarefree_b or flags[b]
            )
        b = np.arange(1, bmax + 1, dtype=np.int64)
        if squarefree_b:
            b = b[np.frombuffer(flags, dtype=np.uint8)[1 : bmax + 1].astype(bool)]
        return int(_isqrt_vec(x // (b * b * b)).sum())
    targets = _curve_targets(l % q, q)
    xs, starts = _sqrt_struct(q)
    if bmax <= _VEC_THRESHOLD:
        total = 0
        for b in range(1, bmax + 1):
            if squarefree_b and not flags[b]:
                continue
            r = targets[b % q]
            if r < 0:
                continue
            mtop = math.isqrt(x // b**3)
            for xr in xs[starts[r] : starts[r + 1]]:
                total += (mtop - int(xr)) // q + 1
        return total
    b = np.arange(1, bmax + 1, dtype=np.int64)
    if squarefree_b:
        b = b[np.frombuffer(flags, dtype=np.uint8)[1 : bmax + 1].astype(bool)]
    r_t = targets[b % q]
    keep = r_t >= 0
    b = b[keep]
    r_t = r_t[keep]
    if b.size == 0:
        return 0
    mtop = _isqrt_vec(x // (b * b * b))
    lens = starts[r_t + 1] - starts[r_t]
    total_roots = int(lens.sum())
    if total_roots == 0:
        return 0
    grp = np.repeat(np.arange(len(b)), lens)
    intra = np.arange(total_roots) - np.repeat(
        np.concatenate(([0], np.cumsum(lens)[:-1])), lens
    )
    roots = xs[starts[r_t][grp] + intra]
    return int(((mtop[grp] - roots) // q + 1).sum())


def s_pairs_exact(x: int, l: int, q: int | Modulus) -> int:
    """#{(a, b): a, b >= 1, a^2 b^3 <= x, a^2 b^3 == l (mod q)}."""
    m = as_modulus(q)
    _check_args(x, l, m)
    return _count_pairs(x, l, m, squarefree_b=False)


def squarefull_exact(x: int, l: int, q: int | Modulus) -> int:
    """#{n <= x squarefull, n == l (mod q)} via the unique n = a^2 b^3 form."""
    m = as_modulus(q)
    _check_args(x, l, m)
    return _count_pairs(x, l, m, squarefree_b=True)


def s_pairs_oracle(x: int, l: int, q: int | Modulus) -> int:
    """Literal double loop over (a, b) with multiplication tests only."""
    m = as_modulus(q)
    _check_args(x, l, m)
    l %= m.q
    total = 0
    a = 1
    while a * a <= x:
        aa = a * a
        b = 1
        while aa * b**3 <= x:
            if aa * b**3 % m.q == l:
                total += 1
            b += 1
        a += 1
    return total


@lru_cache(maxsize=4)
def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return spf


def _is_squarefull_spf(n: int, spf: np.ndarray) -> bool:
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e < 2:
            return False
    return True


def squarefull_oracle(x: int, l: int, q: int | Modulus) -> int:
    """Independent count: factorize every n == l (mod q) and test exponents."""
    m = as_modulus(q)
    if x > 10**7:
        raise ValueError("oracle capped at x <= 10^7")
    _check_args(x, l, m)
    l %= m.q
    start = l if l >= 1 else m.q
    total = 0
    if x >= start and x > 50_000:
        spf = _spf_table(x)
        for n in range(start, x + 1, m.q):
            if n == 1 or _is_squarefull_spf(n, spf):
                total += 1
        return total
    for n in range(start, x + 1, m.q):
        if n == 1 or min(e for _, e in factorize(n)) >= 2:
            total += 1
    return total


def squarefull_numbers(x: int) -> list[int]:
    """All squarefull n <= x, ascending."""
    out = []
    flags = squarefree_sieve(max(icbrt(x), 1))
    for b in range(1, icbrt(x) + 1):
        if not flags[b]:
            continue
        b3 = b**3
        for a in range(1, math.isqrt(x // b3) + 1):
            out.append(a * a * b3)
    return sorted(out)


@lru_cache(maxsize=1)
def _zeta_refs() -> tuple[float, float]:
    return zeta_em(3.0), zeta_em(2.0)


def main_terms(
    x: int, l: int, q: int | Modulus, kind: str, tol: float = 1e-8
) -> tuple[float, float]:
    """The x^(1/2) and x^(1/3) main-term values for one count."""
    m = as_modulus(q)
    c, _ = c_constant(l, m, tol)
    d, _ = d_constant(l, m, tol)
    sqx = math.sqrt(x)
    cbx = x ** (1.0 / 3.0)
    if kind == "pairs":
        return c * sqx / m.q, d * cbx / m.q
    if kind == "squarefull":
        z3, z2 = _zeta_refs()
        f3, f2 = euler_factors(m)
        return c / z3 * float(f3) * sqx / m.q, d / z2 * float(f2) * cbx / m.q
    raise ValueError(f"kind must be 'pairs' or 'squarefull', got {kind!r}")


@dataclass(frozen=True)
class CountReport:
    kind: str
    x: int
    q: Modulus
    l: int
    exact: int
    main1: float
    main2: float
    residual: float
    normalized: dict[str, float]

    @staticmethod
    def scales(x: int, q: int) -> dict[str, float]:
        return {
            "x^(1/6) q^(1/12)": x ** (1 / 6) * q ** (1 / 12),
            "x^(1/5) / q^(1/5)": x ** (1 / 5) / q ** (1 / 5),
            "x^(1/5)": x ** (1 / 5),
        }


def count_report(kind: str, x: int, l: int, q: int | Modulus, tol: float = 1e-8) -> CountReport:
    m = as_modulus(q)
    if kind == "pairs":
        exact = s_pairs_exact(x, l, m)
    elif kind == "squarefull":
        exact = squarefull_exact(x, l, m)
    else:
        raise ValueError(f"kind must be 'pairs' or 'squarefull', got {kind!r}")
    m1, m2 = main_terms(x, l, m, kind, tol)
    resid = exact - m1 - m2
    scales = CountReport.scales(x, m.q)
    return CountReport(
        kind=kind,
        x=x,
        q=m,
        l=l % m.q,
        exact=exact,
        main1=m1,
        main2=m2,
        residual=resid,
        normalized={k: resid / v for k, v in scales.items()},
    )


class MobiusCheck(NamedTuple):
    equal: bool
    squarefull_side: int
    mobius_side: int


def mobius_identity_check(x: int, l: int, q: int | Modulus) -> MobiusCheck:
    """Exact identity: the squarefull count equals the Moebius-weighted sum of
    pair counts at x / d^6 with the class twisted by d^(-6)."""
    m = as_modulus(q)
    _check_args(x, l, m)
    lhs = squarefull_exact(x, l, m)
    dmax = iroot(x, 6) if x >= 1 else 0
    mu = mobius_sieve(max(dmax, 1))
    rhs = 0
    for d in range(1, dmax + 1):
        if mu[d] == 0 or math.gcd(d, m.q) != 1:
            continue
        twist = l * pow(d, -6, m.q) % m.q
        rhs += mu[d] * s_pairs_exact(x // d**6, twist, m)
    return MobiusCheck(equal=lhs == rhs, squarefull_side=lhs, mobius_side=rhs)
