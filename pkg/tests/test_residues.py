import math
from fractions import Fraction

import numpy as np
import pytest

from squarefull.arith import modulus
from squarefull.residues import (
    fluctuation_profile,
    partial_sum,
    root_count,
    root_count_table,
)


def brute_root_count(n, q, k):
    return sum(1 for x in range(1, q + 1) if math.gcd(x, q) == 1 and pow(x, k, q) == n % q)


def test_root_count_examples():
    assert root_count(1, modulus(8), 2) == 4
    assert root_count(2, modulus(4), 2) == 0
    assert root_count(1, modulus(9), 3) == 3


def test_root_count_rejects_bad_k():
    with pytest.raises(ValueError):
        root_count(1, modulus(8), 4)


def test_root_count_vs_brute_force():
    for q in (1, 2, 3, 4, 8, 9, 12, 16, 27, 36, 49, 100):
        for k in (2, 3):
            for n in range(q):
                assert root_count(n, modulus(q), k) == brute_root_count(n, q, k)


def test_root_count_closed_forms_match_tables():
    # the prime-power closed forms are an independent route to the same counts
    from squarefull.residues import _root_count_prime_power

    for p, e in [(2, 1), (2, 2), (2, 3), (2, 5), (3, 1), (3, 2), (3, 4), (5, 1), (5, 3), (7, 2), (13, 1)]:
        q = p**e
        tab = root_count_table(q, 2), root_count_table(q, 3)
        for n in range(q):
            for k in (2, 3):
                expected = int(tab[k - 2][n]) if math.gcd(n, q) == 1 else 0
                assert _root_count_prime_power(n, p, e, k) == expected, (p, e, n, k)


def test_multiplicativity():
    pairs = [(q1, q2) for q1 in range(2, 56) for q2 in range(q1 + 1, 3000 // q1 + 1) if math.gcd(q1, q2) == 1]
    for q1, q2 in pairs[::7]:  # deterministic thinning, still hundreds of pairs
        q = q1 * q2
        for k in (2, 3):
            t = np.asarray(root_count_table(q, k))
            t1 = np.asarray(root_count_table(q1, k))
            t2 = np.asarray(root_count_table(q2, k))
            n = np.arange(q)
            assert np.array_equal(t, t1[n % q1] * t2[n % q2]), (q1, q2, k)


def test_twist_invariance():
    for q in (5, 8, 9, 16, 45, 90):
        for k in (2, 3):
            t = np.asarray(root_count_table(q, k))
            for a in range(1, q):
                if math.gcd(a, q) != 1:
                    continue
                n = np.arange(q)
                assert np.array_equal(t[pow(a, k, q) * n % q], t)


def test_nagell_bound_exhaustive():
    for q in range(1, 3001):
        m = modulus(q)
        for k in (2, 3):
            assert int(np.asarray(root_count_table(q, k)).max()) <= 2 ** (m.omega + 1) * k


def test_partial_sum_full_period_is_phi():
    for q in (1, 2, 7, 8, 12, 45, 128, 360):
        m = modulus(q)
        for l in range(q if q > 1 else 1):
            if math.gcd(l, q) != 1:
                continue
            assert partial_sum(l, m, 2, q) == m.phi
            assert partial_sum(l, m, 3, q) == m.phi


def test_partial_sum_examples_and_wraparound():
    assert partial_sum(0, modulus(1), 3, 7) == 7
    brute = sum(brute_root_count(3 * b % 7, 7, 2) for b in range(1, 4))
    assert partial_sum(3, modulus(7), 2, 3) == brute
    # u > q uses whole periods plus a partial one
    for u in (0, 1, 6, 7, 13, 14, 100):
        brute = sum(brute_root_count(3 * b % 7, 7, 2) for b in range(1, u + 1))
        assert partial_sum(3, modulus(7), 2, u) == brute


def test_partial_sum_requires_coprime_l():
    with pytest.raises(ValueError):
        partial_sum(2, modulus(4), 2, 3)


def test_fluctuation_profile_basics():
    prof = fluctuation_profile(0, modulus(1), 2)
    assert prof.max_abs == 0 and prof.value(1) == 0
    for q, l, k in [(16, 1, 2), (7, 3, 2), (45, 2, 3), (12, 5, 3)]:
        prof = fluctuation_profile(l, modulus(q), k)
        assert prof.value(q) == 0  # full period closes exactly
        assert prof.value(q + 3) == prof.value(3)  # periodicity
        # independent recomputation, pure python
        m = modulus(q)
        worst = Fraction(0)
        for u in range(1, q + 1):
            s = sum(brute_root_count(l * b % q, q, k) for b in range(1, u + 1))
            f = Fraction(q * s - m.phi * u, q)
            assert prof.value(u) == f
            worst = max(worst, abs(f))
        assert prof.max_abs == worst


def test_sup_abs_covers_interior():
    prof = fluctuation_profile(1, modulus(16), 2)
    m = modulus(16)
    # between integers F decreases by phi/q, so the sup adds at most that
    assert prof.sup_abs_scaled() >= prof.max_abs_scaled
    assert prof.sup_abs_scaled() <= prof.max_abs_scaled + m.phi
