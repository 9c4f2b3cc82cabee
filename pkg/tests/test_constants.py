import math
from fractions import Fraction

import numpy as np
import pytest

from squarefull.arith import mobius_sieve, modulus
from squarefull.constants import (
    c_constant,
    constants_result,
    d_constant,
    euler_factors,
    zeta_em,
)
from squarefull.residues import root_count


def test_zeta_em_against_pi_squared():
    assert abs(zeta_em(2.0) - math.pi**2 / 6) < 1e-12


def test_zeta_em_against_partial_sum_bracket():
    # independent bracket: sum to N plus integral bounds on the tail
    for s in (3.0, 1.5):
        n = 2 * 10**6
        partial = float(np.sum(np.arange(1, n + 1, dtype=np.float64) ** (-s)))
        lo = partial + n ** (1 - s) / (s - 1) * (1 + 1 / n) ** (1 - s)  # integral from n+1
        hi = partial + n ** (1 - s) / (s - 1)
        assert lo - 1e-12 <= zeta_em(s) <= hi + 1e-12


def test_c_constant_is_zeta_at_q1():
    c, tail = c_constant(0, modulus(1), 1e-8)
    assert tail <= 1e-8
    assert abs(c - zeta_em(1.5)) < 1e-6


def test_d_constant_is_zeta_at_q1():
    d, tail = d_constant(0, modulus(1), 1e-8)
    assert tail <= 1e-8
    assert abs(d - zeta_em(2.0 / 3.0)) < 1e-6


def test_c_constant_q4_term_oracle():
    # N_2(b; 4) is 2 exactly on b == 1 (mod 4), so C = 2 sum b^(-3/2) there
    assert root_count(1, modulus(4), 2) == 2
    assert root_count(3, modulus(4), 2) == 0
    b = np.arange(1, 10**6 + 1, 4, dtype=np.float64)
    partial = 2.0 * float(np.sum(b**-1.5))
    # tail bracket by integrals: 2 * sum_{b > B, b=1 mod 4} b^(-3/2)
    big = 10**6 + 1
    hi = 2.0 * 2.0 / 4.0 * (big - 4) ** -0.5
    lo = 2.0 * 2.0 / 4.0 * (big + 4) ** -0.5
    c, tail = c_constant(1, modulus(4), 1e-10)
    assert partial + lo - 1e-9 <= c <= partial + hi + 1e-9


def test_c_twist_invariance():
    for q, l, a in [(5, 2, 3), (16, 7, 5), (45, 4, 7), (97, 11, 23)]:
        c0, t0 = c_constant(l, modulus(q), 1e-9)
        c1, t1 = c_constant(l * a * a % q, modulus(q), 1e-9)
        assert abs(c0 - c1) <= 2e-9 + t0 + t1


def test_d_twist_invariance():
    for q, l, a in [(5, 2, 3), (16, 7, 5), (45, 4, 7)]:
        d0, t0 = d_constant(l, modulus(q), 1e-9)
        d1, t1 = d_constant(l * pow(a, 3, q) % q, modulus(q), 1e-9)
        assert abs(d0 - d1) <= 2e-9 + t0 + t1


def test_d_constant_riemann_quadrature():
    # closed-form interval sums against a fine Riemann sum on [1, U]
    q, l = 2, 1
    m = modulus(q)
    u_stop = 2 * 10**5 + 1
    # midpoint rule, 10^6 samples, grid aligned with the integer jump points
    du = (u_stop - 1) / 10**6  # exactly 1/5 per sample, 5 samples per unit
    u = 1.0 + du / 2 + du * np.arange(10**6)
    floor_u = np.floor(u).astype(np.int64)
    a_of_u = (floor_u + 1) // 2  # number of odd integers <= u
    f = a_of_u - m.phi / m.q * u
    riemann = float(np.sum(f * u ** (-5.0 / 3.0)) * du)
    # closed-form per-interval sums over the same range
    n = np.arange(1, u_stop, dtype=np.float64)
    a_n = (np.arange(1, u_stop, dtype=np.int64) + 1) // 2
    closed = float(
        np.sum(1.5 * a_n * (n ** (-2.0 / 3.0) - (n + 1) ** (-2.0 / 3.0)))
        - 3.0 * (m.phi / m.q) * (u_stop ** (1.0 / 3.0) - 1.0)
    )
    assert abs(riemann - closed) < 1e-4
    # and d_constant itself agrees once the analytic tail is attached
    d, tail = d_constant(l, m, 1e-10)
    sup_f = 1.0  # |#odds <= u  -  u/2| <= 1 for all u
    tail_cap = (2.0 / 3.0) * sup_f * 1.5 * u_stop ** (-2.0 / 3.0)
    assert abs(d - (-2.0 * m.phi / m.q + (2.0 / 3.0) * closed)) <= tail_cap + 1e-6


def test_refinement_stability():
    for q, l in [(7, 3), (45, 2)]:
        c1, t1 = c_constant(l, modulus(q), 1e-7)
        c2, t2 = c_constant(l, modulus(q), 1e-7 / 16)
        assert abs(c1 - c2) <= t1 + t2
        d1, s1 = d_constant(l, modulus(q), 1e-7)
        d2, s2 = d_constant(l, modulus(q), 1e-7 / 16)
        assert abs(d1 - d2) <= s1 + s2


def test_tolerance_validation():
    with pytest.raises(ValueError):
        c_constant(1, modulus(5), 0.0)
    with pytest.raises(ValueError):
        c_constant(2, modulus(4), 1e-8)  # gcd(l, q) > 1


def test_euler_factors_examples():
    assert euler_factors(modulus(1)) == (Fraction(1), Fraction(1))
    assert euler_factors(modulus(2)) == (Fraction(8, 7), Fraction(4, 3))
    f3, f2 = euler_factors(modulus(6))
    assert f3 == Fraction(8, 7) * Fraction(27, 26)
    assert f2 == Fraction(4, 3) * Fraction(9, 8)


def test_mobius_zeta_identity():
    d0 = 10**4
    mu = mobius_sieve(d0)
    for q in (1, 2, 6, 30):
        m = modulus(q)
        partial = sum(
            Fraction(mu[d], d**3) for d in range(1, d0 + 1) if math.gcd(d, q) == 1
        )
        f3, _ = euler_factors(m)
        target = 1.0 / zeta_em(3.0) * float(f3)
        assert abs(float(partial) - target) <= 2.0 / d0**2


def test_constants_result_bundle():
    r = constants_result(3, modulus(7), 1e-8)
    assert r.c > 0 and r.c_tail <= 1e-8 and r.d_tail <= 1e-8
    assert r.euler3 == Fraction(343, 342)
    # weak positivity: C is at least the first positive term of its series
    first_b = next(
        b for b in range(1, 7 * 8) if root_count(3 * b % 7, modulus(7), 2) > 0
    )
    assert r.c >= root_count(3 * first_b % 7, modulus(7), 2) * first_b**-1.5 - 1e-8
