import math

import numpy as np
import pytest

from squarefull.arith import modulus
from squarefull.characters import character_table, gauss_sum, gauss_sum_row, torsion_subgroup
from squarefull.residues import root_count


def test_table_sizes_and_principal_first():
    for q in (1, 2, 3, 8, 5, 16, 24, 45, 97, 360):
        t = character_table(q)
        assert len(t.chars) == modulus(q).phi
        assert t.chars[0] == tuple([0] * len(t.generators))
        assert all(t.value(t.chars[0], x) == 1 for x in range(q) if math.gcd(x, q) == 1)


def test_q1_trivial():
    t = character_table(1)
    assert t.chars == ((),)
    assert t.value((), 0) == 1


def test_q8_characters_real():
    t = character_table(8)
    assert len(t.chars) == 4
    for chi in t.chars:
        for x in range(8):
            assert abs(t.value(chi, x).imag) < 1e-12


def test_q5_character_orders():
    t = character_table(5)
    assert sorted(t.char_order(chi) for chi in t.chars) == [1, 2, 4, 4]


def test_size_cap():
    with pytest.raises(ValueError):
        character_table(10**5 + 1)


def test_orthogonality():
    for q in (5, 8, 12, 45, 91):
        t = character_table(q)
        phi = modulus(q).phi
        rows = np.array([t.values_row(chi) for chi in t.chars])
        gram = rows @ rows.conj().T
        assert np.allclose(gram, phi * np.eye(phi), atol=1e-6 * phi)


def test_torsion_examples():
    assert len(torsion_subgroup(character_table(8), 2)) == 4
    assert len(torsion_subgroup(character_table(5), 3)) == 1
    assert len(torsion_subgroup(character_table(7), 3)) == 3


def test_torsion_sums_count_roots():
    for q in (1, 4, 7, 8, 9, 15, 16, 36, 45, 60):
        t = character_table(q)
        for k in (2, 3):
            g = torsion_subgroup(t, k)
            for y in range(q if q > 1 else 1):
                if math.gcd(y, q) != 1:
                    continue
                s = sum(t.value(chi, y) for chi in g)
                rc = root_count(y, modulus(q), k)
                assert abs(s.real - rc) < 1e-6 and abs(s.imag) < 1e-6


def test_gauss_sum_principal_prime():
    for p in (5, 7, 11, 13):
        t = character_table(p)
        v = gauss_sum(t, t.chars[0], 1)
        assert abs(v - (-1)) < 1e-9


def test_gauss_sum_quadratic_magnitude():
    t = character_table(5)
    chi = next(c for c in t.chars if t.char_order(c) == 2)
    assert abs(abs(gauss_sum(t, chi, 1)) - math.sqrt(5)) < 1e-6


def test_gauss_sum_nonprincipal_at_zero():
    for q in (5, 8, 12):
        t = character_table(q)
        for chi in t.chars[1:]:
            assert abs(gauss_sum(t, chi, 0)) < 1e-6


def test_gauss_row_matches_direct():
    for q in (7, 12, 45):
        t = character_table(q)
        for chi in (t.chars[0], t.chars[-1]):
            row = gauss_sum_row(t, chi)
            for n in range(q):
                assert abs(row[n] - gauss_sum(t, chi, n)) < 1e-9 * max(q, 10)


def test_working_gauss_bound_small():
    # |G(chi, n)| <= gcd(n,q) d(gcd(n,q)) sqrt(q); the full sweep is the
    # 'gauss' suite, this pins a representative prefix
    from squarefull.suites import suite_gauss

    res = suite_gauss(qmax=60)
    assert res.ok, res.failures
