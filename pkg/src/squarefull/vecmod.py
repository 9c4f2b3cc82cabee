"""Vectorized modular arithmetic on int64 numpy arrays.

Safe for moduli up to ~3e9 (products stay below 2^63).
"""

from __future__ import annotations

import numpy as np

from .arith import as_modulus


def mod_pow_vec(base: np.ndarray, exp: int, q: int) -> np.ndarray:
    """base**exp mod q elementwise, by square-and-multiply."""
    if exp < 0:
        raise ValueError("negative exponents not supported here")
    if q == 1:
        return np.zeros_like(base)
    result = np.ones_like(base)
    b = base % q
    while exp:
        if exp & 1:
            result = result * b % q
        b = b * b % q
        exp >>= 1
    return result


def unit_residues(q: int) -> np.ndarray:
    """All residues coprime to q, ascending (q = 1 gives [0])."""
    if q == 1:
        return np.zeros(1, dtype=np.int64)
    n = np.arange(q, dtype=np.int64)
    return n[np.gcd(n, q) == 1]


def inverse_table(q: int) -> np.ndarray:
    """inv[n] = n^(-1) mod q for units, 0 for non-units."""
    m = as_modulus(q)
    if m.q == 1:
        return np.zeros(1, dtype=np.int64)
    units = unit_residues(m.q)
    inv = np.zeros(m.q, dtype=np.int64)
    inv[units] = mod_pow_vec(units, m.phi - 1, m.q)
    return inv
