"""Dirichlet characters mod q, their k-torsion, and twisted Gauss sums.

Characters are exponent vectors over a fixed generator basis of the unit
group; complex values are materialized lazily so the table stays O(phi(q)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .arith import Modulus, as_modulus, crt_split, factorize, mod_inverse

_TABLE_LIMIT = 10**5


def _primitive_root(p: int) -> int:
    """Smallest primitive root mod an odd prime p."""
    targets = [(p - 1) // f for f, _ in factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, t, p) != 1 for t in targets):
            return g
        g += 1


def _local_generators(p: int, e: int) -> list[tuple[int, int]]:
    """Generators with orders for the cyclic pieces of (Z/p^e)*."""
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(3, 2)]
        return [(2**e - 1, 2), (5, 2 ** (e - 2))]
    g = _primitive_root(p)
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return [(g % p**e, (p - 1) * p ** (e - 1))]


@dataclass(frozen=True)
class CharacterTable:
    """All phi(q) Dirichlet characters mod q; the principal one is first."""

    q: Modulus
    generators: tuple[tuple[int, int], ...]  # (generator mod q, order)
    chars: tuple[tuple[int, ...], ...]  # exponent vectors over the generators
    dlog: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.generators)

    def value(self, chi: tuple[int, ...], x: int) -> complex:
        """chi(x), zero off the units."""
        x %= self.q.q
        t = self.dlog.get(x)
        if t is None:
            return 0j
        phase = sum(a * ti / o for a, ti, o in zip(chi, t, self.orders))
        return complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase))

    def char_order(self, chi: tuple[int, ...]) -> int:
        return math.lcm(1, *(o // math.gcd(o, a) for a, o in zip(chi, self.orders)))

    @cached_property
    def _dlog_matrix(self) -> np.ndarray:
        """T[x, i] = i-th discrete log of x (arbitrary off units, masked)."""
        t = np.zeros((self.q.q, len(self.generators)), dtype=np.int64)
        for x, vec in self.dlog.items():
            t[x] = vec
        return t

    @cached_property
    def _unit_mask(self) -> np.ndarray:
        mask = np.zeros(self.q.q, dtype=bool)
        mask[list(self.dlog)] = True
        return mask

    def values_row(self, chi: tuple[int, ...]) -> np.ndarray:
        """chi(x) for x = 0..q-1 as one complex vector."""
        w = np.array([a / o for a, o in zip(chi, self.orders)])
        phase = self._dlog_matrix @ w
        row = np.exp(2j * np.pi * phase)
        row[~self._unit_mask] = 0.0
        return row


def character_table(q: int | Modulus) -> CharacterTable:
    m = as_modulus(q)
    if m.q > _TABLE_LIMIT:
        raise ValueError(f"character table capped at q <= {_TABLE_LIMIT}, got {m.q}")
    gens: list[tuple[int, int]] = []
    for part in crt_split(m):
        pe = part.modulus
        eps = part.cofactor * part.cofactor_inv  # idempotent: 1 mod pe, 0 elsewhere
        for g, order in _local_generators(*next(iter(factorize(pe)))):
            gens.append(((1 + (g - 1) * eps) % m.q, order))
    # odometer walk enumerates the whole unit group in O(phi(q))
    orders = [o for _, o in gens]
    dlog: dict[int, tuple[int, ...]] = {}
    powers = [[pow(g, k, m.q) for k in range(o)] for g, o in gens]
    for combo in itertools.product(*(range(o) for o in orders)):
        x = 1 % m.q
        for k, table in zip(combo, powers):
            x = x * table[k] % m.q
        dlog[x] = combo
    if len(dlog) != m.phi:
        raise AssertionError("generator basis failed to enumerate the unit group")
    chars = tuple(itertools.product(*(range(o) for o in orders)))
    return CharacterTable(q=m, generators=tuple(gens), chars=chars, dlog=dlog)


def torsion_subgroup(table: CharacterTable, k: int) -> list[tuple[int, ...]]:
    """All characters chi with chi^k principal."""
    return [
        chi
        for chi in table.chars
        if all(k * a % o == 0 for a, o in zip(chi, table.orders))
    ]


def gauss_sum(table: CharacterTable, chi: tuple[int, ...], n: int) -> complex:
    """sum_x chi(x) e(n x / q), direct with compensated accumulation."""
    q = table.q.q
    total = 0j
    comp = 0j
    tau = 2 * math.pi / q
    for x, t in table.dlog.items():
        phase = sum(a * ti / o for a, ti, o in zip(chi, t, table.orders))
        ang = 2 * math.pi * phase + tau * (n * x % q)
        term = complex(math.cos(ang), math.sin(ang))
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def gauss_sum_row(table: CharacterTable, chi: tuple[int, ...]) -> np.ndarray:
    """gauss_sum(table, chi, n) for every n = 0..q-1 via one FFT."""
    vals = table.values_row(chi)
    return np.fft.ifft(vals) * table.q.q
