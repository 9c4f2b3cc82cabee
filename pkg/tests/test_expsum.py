import cmath
import math
import random

import numpy as np
import pytest

from squarefull.arith import modulus
from squarefull.expsum import (
    ExpSumValue,
    _wrap,
    bound_certificate,
    certified_bound,
    s_direct,
    s_direct_table,
    s_factored,
    s_prime_power,
    stationary_defect,
    stationary_points,
)


def brute_sum(a, b, q):
    total = 0j
    for n in range(1, q + 1):
        if math.gcd(n, q) != 1:
            continue
        nbar = pow(n, -1, q)
        total += cmath.exp(2j * cmath.pi * ((a * n * n + b * nbar**3) % q) / q)
    return total


def test_s_direct_examples():
    for q in (1, 4, 12, 45):
        v = s_direct(0, 0, q)
        assert abs(v.value - modulus(q).phi) < 1e-6 * max(q, 1)
    assert abs(s_direct(1, 1, 4).value) < 1e-9
    assert abs(s_direct(1, 0, 5).value - (math.sqrt(5) - 1)) < 1e-6


def test_s_direct_vs_independent_brute():
    rng = random.Random(11)
    for _ in range(25):
        q = rng.randrange(1, 200)
        a, b = rng.randrange(q), rng.randrange(q)
        assert abs(s_direct(a, b, q).value - brute_sum(a, b, q)) < 1e-9 * max(q, 10)


def test_stationary_points_examples():
    assert len(stationary_points(1, 1, 7, 1)) == 1
    for alpha in (1, 2, 3, 4):
        assert stationary_points(1, 1, 2, alpha) == []
    assert stationary_points(1, 1, 11, 1) == []  # insolvable quintic: 0 of {0, 5}
    assert len(stationary_points(7, 1, 11, 1)) == 5  # solvable quintic branch
    # p = 2 with even b: the halved congruence has solutions
    assert len(stationary_points(1, 2, 2, 3)) > 0
    # p = 3 with 3 || a: solutions exist despite 3 | a
    assert len(stationary_points(3, 1, 3, 2)) > 0


def test_stationary_points_match_definition():
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([2, 3, 5, 7, 11])
        alpha = rng.randrange(1, 4)
        pa = p**alpha
        a, b = rng.randrange(pa), rng.randrange(pa)
        got = stationary_points(a, b, p, alpha)
        want = [y for y in range(1, pa + 1) if y % p and (2 * a * y**5 - 3 * b) % pa == 0]
        assert got == want


def test_s_prime_power_examples():
    v = s_prime_power(1, 1, 2, 2)
    assert v.method == "stationary" and abs(v.value) < 1e-9
    assert abs(s_direct(1, 1, 4).value - v.value) < 1e-9
    for a in range(1, 7):
        for b in range(1, 7):
            v = s_prime_power(a, b, 7, 2)
            assert abs(v.value) <= 5 * 7 + 1e-5


def test_s_prime_power_degenerate_falls_back_to_direct():
    v = s_prime_power(7, 14, 7, 2)
    assert v.method == "direct"
    assert abs(v.value - brute_sum(7, 14, 49)) < 1e-9 * 49


def test_s_prime_power_matches_direct_small():
    for p, beta in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)]:
        q = p**beta
        for a in range(q):
            for b in range(q):
                if a % p == 0 and b % p == 0:
                    continue
                assert (
                    abs(s_prime_power(a, b, p, beta).value - s_direct(a, b, q).value)
                    <= 1e-6 * q
                ), (p, beta, a, b)


def test_s_prime_power_rejects_composite():
    with pytest.raises(ValueError):
        s_prime_power(1, 1, 6, 2)


def test_s_factored_examples():
    v = s_factored(0, 0, 12)
    assert abs(v.value - 4) < 1e-6
    for a in range(15):
        for b in range(15):
            assert abs(s_factored(a, b, 15).value - s_direct(a, b, 15).value) < 1e-6 * 15
    # prime power: same value as the stationary evaluator
    assert abs(s_factored(3, 5, 49).value - s_prime_power(3, 5, 7, 2).value) < 1e-9


def test_s_factored_random_moduli():
    rng = random.Random(99)
    for _ in range(40):
        q = rng.randrange(2, 2000)
        a, b = rng.randrange(q), rng.randrange(q)
        assert abs(s_factored(a, b, q).value - s_direct(a, b, q).value) < 1e-5 * q


def test_certified_bound_values():
    assert certified_bound(1, 1, 7) == pytest.approx(25 * math.sqrt(7))
    assert certified_bound(0, 0, 1) == pytest.approx(1.0)
    assert certified_bound(1, 2, 45) == pytest.approx(25**2 * math.sqrt(45))
    cert = bound_certificate(1, 1, 7)
    assert cert.per_factor == ((7, 1, pytest.approx(2 * math.sqrt(7))),)
    cert = bound_certificate(2, 4, 4)  # gcd(a, b, 2) = 2: no sharp claim
    assert cert.per_factor[0][2] is None


def test_every_value_respects_its_bound():
    rng = random.Random(4)
    for _ in range(60):
        q = rng.randrange(1, 500)
        a, b = rng.randrange(q), rng.randrange(q)
        v = s_direct(a, b, q)
        assert abs(v.value) <= v.certified_bound + 1e-6 * q


def test_wrap_raises_on_bound_violation():
    with pytest.raises(ArithmeticError):
        _wrap(1, 1, modulus(7), complex(1000.0, 0.0), "direct")


def test_bulk_table_matches_direct():
    rng = random.Random(2)
    for q in (7, 12, 45, 128):
        table = s_direct_table(q)
        for _ in range(10):
            a, b = rng.randrange(q), rng.randrange(q)
            assert abs(table[a, b] - s_direct(a, b, q).value) < 1e-8 * q


def test_stationary_defect_small():
    for p, beta in [(2, 2), (2, 5), (3, 3), (5, 2), (7, 2), (3, 4)]:
        err, n_pairs = stationary_defect(p, beta)
        q = p**beta
        assert err <= 1e-6 * q
        assert n_pairs == q * q - (q // p) ** 2


def test_expsumvalue_fields():
    v = s_direct(3, 4, 10)
    assert isinstance(v, ExpSumValue)
    assert v.a == 3 and v.b == 4 and v.q.q == 10 and v.method == "direct"
