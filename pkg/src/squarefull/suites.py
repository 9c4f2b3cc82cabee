"""Named verification suites: exhaustive bound checks, oracle equivalences,
and frozen-constant regression scans.

Each suite is deterministic (fixed seeds, fixed grids) and returns a
SuiteResult; the CLI and the acceptance tests run the same code.  FROZEN
holds empirical maxima of normalized residuals measured once on this grid
(regenerate with calibrate_frozen_bounds); suites fail when a value exceeds
its frozen ceiling by more than 1%.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith import SMALL_PRIMES, as_modulus, divisors, modulus
from .characters import character_table, gauss_sum, gauss_sum_row
from .constants import c_constant, d_constant, zeta_em
from .counting import (
    main_terms,
    mobius_identity_check,
    s_pairs_exact,
    s_pairs_oracle,
    squarefull_exact,
    squarefull_oracle,
)
from .expsum import s_direct, s_direct_table, s_factored, s_prime_power, stationary_defect
from .geometry import Box, box_count, build_partition, verify_tiling
from .residues import partial_sum, root_count_table

# Empirical maxima of the normalized error quantities, measured once on the
# deterministic grids below (see calibrate_frozen_bounds).  The asymptotic
# O-constants are not reproducible ground truth; these regression ceilings
# are the declared acceptance, with 1% headroom checked by the suites.
FROZEN = {
    "lemma1": 0.3607,  # sum gcd * |geometric sum| vs d(q) q log q
    "lemma2": 1.7700,  # max fluctuation vs q^0.6
    "theorem2": 0.2064,  # squarefull-count residual vs x^(1/5)
    "theorem3": 0.2236,  # pair-count residual vs its two-term scale
    "theorem4": 0.4219,  # box-count residual vs (K+L)/q^0.4 + q^0.6
}
_HEADROOM = 1.01


@dataclass(frozen=True)
class SuiteResult:
    name: str
    ok: bool
    checked: int
    failures: tuple[str, ...]
    elapsed: float
    notes: tuple[str, ...] = ()

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        line = f"{status} {self.name}: {self.checked} checks in {self.elapsed:.1f}s"
        if self.failures:
            line += f"; {len(self.failures)} failures, first: {self.failures[0]}"
        return line


def _finish(
    name: str,
    t0: float,
    checked: int,
    failures: list[str],
    notes: list[str] | None = None,
    max_failures: int = 12,
) -> SuiteResult:
    return SuiteResult(
        name=name,
        ok=not failures,
        checked=checked,
        failures=tuple(failures[:max_failures]),
        elapsed=time.time() - t0,
        notes=tuple(notes or ()),
    )


# -- criterion 1: full-period sums -------------------------------------------


def suite_full_sum(qmax: int = 500) -> SuiteResult:
    """Every full period of N_k(l b; q) over b sums to exactly phi(q)."""
    t0 = time.time()
    failures: list[str] = []
    checked = 0
    for q in range(1, qmax + 1):
        m = modulus(q)
        for k in (2, 3):
            if int(np.asarray(root_count_table(q, k)).sum()) != m.phi:
                failures.append(f"sum of N_{k}(n;{q}) != phi")
            checked += 1
        for l in range(q if q > 1 else 1):
            if math.gcd(l, q) != 1:
                continue
            for k in (2, 3):
                if partial_sum(l, m, k, q) != m.phi:
                    failures.append(f"partial_sum(l={l}, q={q}, k={k}, u={q}) != phi")
                checked += 1
    return _finish("full-sum", t0, checked, failures)


# -- criteria 2 and 3: exhaustive exponential-sum bounds ---------------------


def _spot_check_table(table: np.ndarray, q: int, rng: random.Random, n: int = 8) -> list[str]:
    """Tie the FFT bulk table to the direct evaluator on sample pairs."""
    out = []
    for _ in range(n):
        a, b = rng.randrange(q), rng.randrange(q)
        d = s_direct(a, b, q).value
        if abs(table[a, b] - d) > 1e-6 * q + 1e-9:
            out.append(f"bulk table disagrees with direct at (a,b,q)=({a},{b},{q})")
    return out


def suite_weil(pmax: int = 300) -> SuiteResult:
    """|S(a,b;p)| <= 2 gcd(a,b,p)^(1/2) sqrt(p) + 1e-5, exhaustive 5 <= p <= pmax.

    This constant-2 form has counterexamples; they are reported here, not
    hidden by a wider tolerance.  The constant-25 multiplicative bound that
    the library certifies against does hold on the whole range.
    """
    t0 = time.time()
    rng = random.Random(300)
    failures: list[str] = []
    notes: list[str] = []
    checked = 0
    n_viol = 0
    worst = (0.0, (0, 0, 0))
    ok3 = True
    for p in [p for p in SMALL_PRIMES if 5 <= p <= pmax]:
        table = s_direct_table(p)
        failures.extend(_spot_check_table(table, p, rng, n=4))
        mag = np.abs(table)
        g = np.ones((p, p))
        g[0, 0] = p
        bound = 2.0 * np.sqrt(g) * math.sqrt(p) + 1e-5
        viol = np.argwhere(mag > bound)
        checked += p * p
        n_viol += len(viol)
        if (mag > 3.0 * np.sqrt(g) * math.sqrt(p) + 1e-5).any():
            ok3 = False
        if len(viol):
            a, b = viol[0]
            if len(failures) < 12:
                failures.append(
                    f"|S({a},{b};{p})| = {mag[a, b]:.6f} > 2*sqrt({p}) bound {bound[a, b]:.6f}"
                )
            ratios = mag[viol[:, 0], viol[:, 1]] / math.sqrt(p)
            i = int(np.argmax(ratios))
            if ratios[i] > worst[0]:
                worst = (float(ratios[i]), (p, int(viol[i, 0]), int(viol[i, 1])))
    if n_viol:
        notes.append(f"{n_viol} violating pairs; constant 2 is empirically false")
        notes.append(f"worst |S|/sqrt(p) = {worst[0]:.4f} at (p,a,b) = {worst[1]}")
        notes.append(f"constant 3 {'holds' if ok3 else 'also fails'} on this range")
    return SuiteResult(
        name="weil",
        ok=n_viol == 0 and not failures,
        checked=checked,
        failures=tuple(failures[:12]),
        elapsed=time.time() - t0,
        notes=tuple(notes),
    )


def _prime_power_moduli(limit: int) -> list[tuple[int, int]]:
    out = []
    for p in SMALL_PRIMES:
        if p * p > limit:
            break
        beta = 2
        while p**beta <= limit:
            out.append((p, beta))
            beta += 1
    return sorted(out, key=lambda t: t[0] ** t[1])


def suite_prime_power_bounds(limit: int = 3000) -> SuiteResult:
    """|S(a,b;p^beta)| <= 5 p^alpha (even beta) or 25 p^(alpha+1/2) (odd),
    exhaustive over gcd(a,b,p) = 1 and p^beta <= limit."""
    t0 = time.time()
    rng = random.Random(3000)
    failures: list[str] = []
    checked = 0
    for p, beta in _prime_power_moduli(limit):
        q = p**beta
        alpha = beta // 2
        bound = 5.0 * p**alpha if beta % 2 == 0 else 25.0 * p**alpha * math.sqrt(p)
        table = s_direct_table(q)
        failures.extend(_spot_check_table(table, q, rng, n=4))
        mag = np.abs(table)
        amod = np.arange(q) % p == 0
        mag[np.logical_and(amod[:, None], amod[None, :])] = 0.0
        checked += q * q
        if mag.max() > bound + 1e-5:
            a, b = np.unravel_index(int(np.argmax(mag)), mag.shape)
            failures.append(f"|S({a},{b};{p}^{beta})| = {mag.max():.6f} > {bound:.6f}")
    return _finish("prime-power-bounds", t0, checked, failures)


# -- criterion 4: reciprocity ------------------------------------------------


def suite_reciprocity(samples: int = 500, qmax: int = 10**5) -> SuiteResult:
    """s_factored == s_direct: exhaustive at q = 15 and 45, then random triples."""
    t0 = time.time()
    failures: list[str] = []
    checked = 0
    for q in (15, 45):
        for a in range(q):
            for b in range(q):
                d = s_direct(a, b, q).value
                f = s_factored(a, b, q).value
                checked += 1
                if abs(d - f) > 1e-6 * q:
                    failures.append(f"exhaustive: ({a},{b},{q}) differ by {abs(d - f):.2e}")
    rng = random.Random(415)
    for _ in range(samples):
        q = rng.randrange(1, qmax + 1)
        a, b = rng.randrange(q), rng.randrange(q)
        d = s_direct(a, b, q).value
        f = s_factored(a, b, q).value
        checked += 1
        if abs(d - f) > 1e-5 * q:
            failures.append(f"random: ({a},{b},{q}) differ by {abs(d - f):.2e}")
    return _finish("reciprocity", t0, checked, failures)


# -- criterion 5: stationary-phase evaluator ---------------------------------


def suite_stationary(limit: int = 5000) -> SuiteResult:
    """Stationary-phase values match direct sums for every coprime pair at
    every prime power p^beta <= limit with beta >= 2."""
    t0 = time.time()
    rng = random.Random(5000)
    failures: list[str] = []
    checked = 0
    for p, beta in _prime_power_moduli(limit):
        q = p**beta
        err, n_pairs = stationary_defect(p, beta)
        checked += n_pairs
        if err > 1e-5 * q:
            failures.append(f"bulk defect {err:.3e} > 1e-5*q at p^beta = {p}^{beta}")
        for _ in range(6):
            a, b = rng.randrange(q), rng.randrange(q)
            if a % p == 0 and b % p == 0:
                continue
            v1 = s_prime_power(a, b, p, beta).value
            v2 = s_direct(a, b, q).value
            checked += 1
            if abs(v1 - v2) > 1e-5 * q:
                failures.append(f"scalar: ({a},{b},{p}^{beta}) differ by {abs(v1 - v2):.2e}")
    return _finish("stationary", t0, checked, failures)


# -- criterion 6: constants ---------------------------------------------------


def suite_constants(qmax: int = 200) -> SuiteResult:
    """C and D at q = 1 equal the zeta oracle; twisting l by squares (for C)
    or cubes (for D) leaves the constants fixed within 2e-8."""
    t0 = time.time()
    failures: list[str] = []
    checked = 0
    c1, _ = c_constant(0, 1)
    d1, _ = d_constant(0, 1)
    if abs(c1 - zeta_em(1.5)) > 1e-6:
        failures.append(f"C(1) = {c1!r} != zeta(3/2) within 1e-6")
    if abs(d1 - zeta_em(2.0 / 3.0)) > 1e-6:
        failures.append(f"D(1) = {d1!r} != zeta(2/3) within 1e-6")
    checked += 2
    rng = random.Random(200)
    for q in range(2, qmax + 1):
        units = [x for x in range(1, q) if math.gcd(x, q) == 1]
        for _ in range(2):
            l = rng.choice(units)
            a = rng.choice(units)
            c0, _ = c_constant(l, q)
            c2, _ = c_constant(l * a * a % q, q)
            d0, _ = d_constant(l, q)
            d3, _ = d_constant(l * pow(a, 3, q) % q, q)
            checked += 2
            if abs(c0 - c2) > 2e-8:
                failures.append(f"C twist broken at q={q}, l={l}, a={a}: {abs(c0 - c2):.2e}")
            if abs(d0 - d3) > 2e-8:
                failures.append(f"D twist broken at q={q}, l={l}, a={a}: {abs(d0 - d3):.2e}")
    return _finish("constants", t0, checked, failures)


# -- criterion 7: Moebius identity --------------------------------------------


def suite_mobius(points: int = 30) -> SuiteResult:
    """Exact integer identity between the squarefull count and the
    Moebius-weighted pair counts, on a deterministic 30-point grid."""
    t0 = time.time()
    rng = random.Random(30)
    failures: list[str] = []
    checked = 0
    xs = [int(round(10 ** (2 + 6 * i / (points - 1)))) for i in range(points)]
    for x in xs:
        q = rng.randrange(1, 101)
        units = [l for l in range(q) if math.gcd(l, q) == 1] or [0]
        l = rng.choice(units)
        res = mobius_identity_check(x, l, q)
        checked += 1
        if not res.equal:
            failures.append(f"x={x}, q={q}, l={l}: {res.squarefull_side} != {res.mobius_side}")
    return _finish("mobius", t0, checked, failures)


# -- criterion 8: oracle equivalence ------------------------------------------


def suite_oracles(xmax: int = 10**4, qmax: int = 20) -> SuiteResult:
    """Counting formulas match literal brute force at every x <= xmax."""
    t0 = time.time()
    failures: list[str] = []
    checked = 0
    # squarefull indicator by factorization, once
    sf_flag = bytearray(xmax + 1)
    sf_flag[1] = 1
    for n in range(2, xmax + 1):
        m = n
        good = True
        for p in SMALL_PRIMES:
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                if e < 2:
                    good = False
                    break
        if m > 1:
            good = False  # leftover prime appears to the first power
        sf_flag[n] = 1 if good else 0
    # every pair value a^2 b^3 <= xmax by literal double loop
    pair_vals: list[int] = []
    a = 1
    while a * a <= xmax:
        b = 1
        while a * a * b**3 <= xmax:
            pair_vals.append(a * a * b**3)
            b += 1
        a += 1
    pair_vals.sort()
    for q in range(1, qmax + 1):
        for l in range(q if q > 1 else 1):
            if math.gcd(l, q) != 1:
                continue
            sf_prefix = 0
            pair_iter = 0
            pair_prefix = 0
            for x in range(1, xmax + 1):
                if x % q == l % q and sf_flag[x]:
                    sf_prefix += 1
                while pair_iter < len(pair_vals) and pair_vals[pair_iter] <= x:
                    if pair_vals[pair_iter] % q == l % q:
                        pair_prefix += 1
                    pair_iter += 1
                checked += 2
                if squarefull_exact(x, l, q) != sf_prefix:
                    failures.append(f"squarefull mismatch at x={x}, q={q}, l={l}")
                if s_pairs_exact(x, l, q) != pair_prefix:
                    failures.append(f"pairs mismatch at x={x}, q={q}, l={l}")
                if len(failures) > 12:
                    return _finish("oracles", t0, checked, failures)
    # the oracle operations themselves, end to end, on sampled triples
    rng = random.Random(8)
    for _ in range(120):
        q = rng.randrange(1, qmax + 1)
        units = [l for l in range(q) if math.gcd(l, q) == 1] or [0]
        l = rng.choice(units)
        x = rng.randrange(0, xmax + 1)
        checked += 2
        if squarefull_exact(x, l, q) != squarefull_oracle(x, l, q):
            failures.append(f"squarefull_oracle mismatch at x={x}, q={q}, l={l}")
        if s_pairs_exact(x, l, q) != s_pairs_oracle(x, l, q):
            failures.append(f"s_pairs_oracle mismatch at x={x}, q={q}, l={l}")
    return _finish("oracles", t0, checked, failures)


# -- criterion 9: tiling -------------------------------------------------------


def suite_tiling() -> SuiteResult:
    """Partitions at X = 2^30 and 2^40 tile exactly; a perturbed rectangle
    is detected; the piece total matches a brute-force region count."""
    t0 = time.time()
    failures: list[str] = []
    checked = 0
    lam, mu = Fraction(1, 12), Fraction(1, 6)
    for x in (2**30, 2**40):
        for depth in (1, 2, 3):
            pieces = build_partition(x, lam, mu, depth)
            rep = verify_tiling(pieces)
            checked += 1
            if not (rep.disjoint and rep.covering):
                failures.append(f"X=2^{x.bit_length() - 1}, J={depth}: {rep.mismatches[:1]}")
            if sum(rep.point_counts.values()) != rep.region_points:
                failures.append(f"X=2^{x.bit_length() - 1}, J={depth}: piece totals off")
    # brute-force region count, multiplication tests only
    x = 2**30
    pieces = build_partition(x, lam, mu, 2)
    brute = 0
    a = pieces.a_lo + 1
    while True:
        b = pieces.b_floor + 1
        if a * a * b**3 > x:
            break
        while a * a * b**3 <= x:
            brute += 1
            b += 1
        a += 1
    rep = verify_tiling(pieces)
    checked += 1
    if brute != rep.region_points:
        failures.append(f"brute-force region count {brute} != {rep.region_points}")
    # fault injection: endpoint bumps must be caught
    for bump in ("a_hi", "b_hi"):
        bad_rect = replace(pieces.rects[0], **{bump: getattr(pieces.rects[0], bump) + 1})
        bad = replace(pieces, rects=(bad_rect,) + pieces.rects[1:])
        rep_bad = verify_tiling(bad)
        checked += 1
        if rep_bad.disjoint and rep_bad.covering:
            failures.append(f"fault injection on {bump} went undetected")
        elif not rep_bad.mismatches:
            failures.append(f"fault on {bump} detected but no witness reported")
    return _finish("tiling", t0, checked, failures)


# -- criterion 10: frozen empirical bounds -------------------------------------


def _lemma1_grid() -> list[int]:
    return list(range(2, 201)) + list(range(210, 2001, 10))


def _lemma1_value(q: int) -> float:
    """max over L of sum_n gcd(n,q) |sum_{b<=L} e(-n b / q)| / (d(q) q log q)."""
    m = modulus(q)
    n = np.arange(1, q, dtype=np.int64)
    g = np.gcd(n, q).astype(np.float64)
    denom = np.abs(np.sin(np.pi * n / q))
    worst = 0.0
    lengths = sorted(
        {1, 2, 3, 5, 8, 13, q // 8, q // 4, q // 2, 3 * q // 4, q - 1} - {0}
    )
    for length in lengths:
        mag = np.abs(np.sin(np.pi * n * length / q)) / denom
        s = float(np.dot(g, mag))
        worst = max(worst, s / (m.tau * q * math.log(q)))
    return worst


def _lemma2_value(q: int) -> float:
    """max over l, k of the peak fluctuation |F|, normalized by q^0.6."""
    cnt2 = np.asarray(root_count_table(q, 2), dtype=np.int16)
    cnt3 = np.asarray(root_count_table(q, 3), dtype=np.int16)
    b = np.arange(1, q + 1, dtype=np.int32)
    ls = np.nonzero(np.gcd(np.arange(q, dtype=np.int32), q) == 1)[0].astype(np.int32)
    idx = ls[:, None] * b[None, :] % q
    phi = modulus(q).phi
    worst = 0
    mean = phi * b.astype(np.int32)  # q * (phi/q) * b stays well inside int32
    for cnt in (cnt2, cnt3):
        cum = np.cumsum(cnt[idx], axis=1, dtype=np.int32)
        scaled = q * cum  # in place of exact rationals: q*F(u) = q*cum - phi*u
        scaled -= mean
        np.abs(scaled, out=scaled)
        worst = max(worst, int(scaled.max()))
    return worst / q / q**0.6


def _theorem2_points() -> list[tuple[int, int, int]]:
    pts = []
    for q, ls in ((7, [1, 2, 3, 4, 5, 6]), (101, [1, 5, 23, 50, 100])):
        for l in ls:
            for x in (10**5, 10**6, 10**7, 10**8, 10**9, 10**10):
                pts.append((x, l, q))
    return pts


def _theorem2_value(x: int, l: int, q: int) -> float:
    exact = squarefull_exact(x, l, q)
    m1, m2 = main_terms(x, l, q, "squarefull")
    return abs(exact - m1 - m2) / x**0.2


def _theorem3_value(x: int) -> float:
    q, l, mu = 11, 4, 0.19
    exact = s_pairs_exact(x, l, q)
    m1, m2 = main_terms(x, l, q, "pairs")
    scale = x ** (0.5 - 1.5 * mu) / q**0.45 + min(x**mu, math.sqrt(q)) * q**0.05
    return abs(exact - m1 - m2) / scale


def _theorem4_boxes(q: int, n: int = 200) -> list[Box]:
    rng = random.Random(q * 7919)
    return [
        Box(rng.randrange(10**6), rng.randrange(10**6), rng.randrange(1, 3 * q), rng.randrange(1, 3 * q))
        for _ in range(n)
    ]


def _theorem4_value(q: int) -> float:
    worst = 0.0
    for box in _theorem4_boxes(q):
        rep = box_count(1, q, box)
        scale = (box.k + box.l) / q**0.4 + q**0.6
        worst = max(worst, abs(rep.residual) / scale)
    return worst


def _frozen_scans() -> dict[str, float]:
    vals = {}
    vals["lemma1"] = max(_lemma1_value(q) for q in _lemma1_grid())
    vals["lemma2"] = max(_lemma2_value(q) for q in range(2, 2001))
    vals["theorem2"] = max(_theorem2_value(x, l, q) for x, l, q in _theorem2_points())
    vals["theorem3"] = max(_theorem3_value(10**k) for k in range(4, 10))
    vals["theorem4"] = max(_theorem4_value(q) for q in (101, 1009, 10007))
    return vals


def suite_frozen_bounds() -> SuiteResult:
    """Normalized residual maxima stay within 1% of their frozen ceilings."""
    t0 = time.time()
    failures: list[str] = []
    notes: list[str] = []
    vals = _frozen_scans()
    for name, value in vals.items():
        notes.append(f"{name}: observed {value:.4f}, frozen {FROZEN[name]:.4f}")
        if value > FROZEN[name] * _HEADROOM:
            failures.append(f"{name}: {value:.4f} exceeds frozen {FROZEN[name]:.4f} by >1%")
    return _finish("frozen-bounds", t0, len(vals), failures, notes)


def calibrate_frozen_bounds() -> dict[str, float]:
    """Recompute the scan maxima; paste the output into FROZEN."""
    return _frozen_scans()


# -- criterion 11: full boxes ----------------------------------------------------


def suite_full_box(qmax: int = 1000, per_q: int = 10) -> SuiteResult:
    """A q-by-q box contains exactly phi(q) curve points, any coprime l."""
    t0 = time.time()
    rng = random.Random(11)
    failures: list[str] = []
    checked = 0
    for q in range(1, qmax + 1):
        m = modulus(q)
        units = [l for l in range(q) if math.gcd(l, q) == 1] or [0]
        sample = units if len(units) <= per_q else rng.sample(units, per_q)
        for l in sample:
            rep = box_count(l, m, Box(0, 0, q, q))
            checked += 1
            if rep.exact != m.phi:
                failures.append(f"box_count(0,0,{q},{q}; l={l}) = {rep.exact} != {m.phi}")
    return _finish("full-box", t0, checked, failures)


# -- extra: the working Gauss-sum bound ----------------------------------------


def suite_gauss(qmax: int = 150) -> SuiteResult:
    """|sum_x chi(x) e(nx/q)| <= gcd(n,q) d(gcd(n,q)) sqrt(q) for all chi and
    1 <= n < q, exhaustive up to qmax (FFT rows, spot-checked directly)."""
    t0 = time.time()
    rng = random.Random(12)
    failures: list[str] = []
    checked = 0
    for q in range(1, qmax + 1):
        table = character_table(q)
        gs = {d: d * len(divisors(d)) for d in divisors(q)}
        bound = np.array([gs[math.gcd(n, q)] for n in range(q)]) * math.sqrt(q) + 1e-6
        for chi in table.chars:
            row = gauss_sum_row(table, chi)
            mag = np.abs(row)
            checked += q - 1
            bad = np.nonzero(mag[1:] > bound[1:])[0]
            if bad.size:
                n = int(bad[0]) + 1
                failures.append(f"q={q}, chi={chi}, n={n}: |G| = {mag[n]:.4f} > {bound[n]:.4f}")
        chi = table.chars[rng.randrange(len(table.chars))]
        n = rng.randrange(q)
        if abs(gauss_sum_row(table, chi)[n] - gauss_sum(table, chi, n)) > 1e-8 * q:
            failures.append(f"gauss row/direct mismatch at q={q}")
        checked += 1
    return _finish("gauss", t0, checked, failures)


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "full-sum": suite_full_sum,
    "weil": suite_weil,
    "prime-power-bounds": suite_prime_power_bounds,
    "reciprocity": suite_reciprocity,
    "stationary": suite_stationary,
    "constants": suite_constants,
    "mobius": suite_mobius,
    "oracles": suite_oracles,
    "tiling": suite_tiling,
    "frozen-bounds": suite_frozen_bounds,
    "full-box": suite_full_box,
    "gauss": suite_gauss,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    return SUITES[name]()
