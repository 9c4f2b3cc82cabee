"""Lattice points on a^2 b^3 == l (mod q) in boxes, and the dyadic tiling
of the region {a > X^lam, b > X^mu, a^2 b^3 <= X}.

Tiling cut points are values c * 2^(e) with rational c and rational e; every
endpoint and curve bound is floored through exact big-integer comparisons, so
membership never touches floating point and the partition can be verified to
be an exact set partition of the integer points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import Modulus, as_modulus, icbrt
from .vecmod import inverse_table, mod_pow_vec

__all__ = [
    "Box",
    "BoxCountReport",
    "box_count",
    "region_area",
    "Rect",
    "CurveRegion",
    "PartitionPieces",
    "build_partition",
    "TilingReport",
    "verify_tiling",
]


# -- box counts --------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Integer box A < a <= A+K, B < b <= B+L."""

    a0: int
    b0: int
    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1 or self.a0 < 0 or self.b0 < 0:
            raise ValueError("box needs non-negative corner and positive sides")


@dataclass(frozen=True)
class BoxCountReport:
    q: Modulus
    l: int
    box: Box
    exact: int
    main_term: float
    residual: float


@lru_cache(maxsize=64)
def _sqrt_struct(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Square roots mod q grouped by target: roots of r are
    xs[starts[r]:starts[r+1]]."""
    x = np.arange(q, dtype=np.int64)
    sq = x * x % q
    order = np.argsort(sq, kind="stable")
    starts = np.searchsorted(sq[order], np.arange(q + 1))
    return x[order], starts


def sqrt_lists(q: int, r: int) -> list[int]:
    xs, starts = _sqrt_struct(q)
    return [int(t) for t in xs[starts[r] : starts[r + 1]]]


@lru_cache(maxsize=64)
def _curve_targets(l: int, q: int) -> np.ndarray:
    """t[rb] = l * rb^(-3) mod q for unit rb, else -1."""
    inv = inverse_table(q)
    t = l % q * mod_pow_vec(inv, 3, q) % q
    t[inv == 0] = -1
    if q == 1:
        t[0] = 0
    return t


def _class_count(lo: int, length: int, r: int, q: int) -> int:
    """#{n == r (mod q), lo < n <= lo + length}."""
    return (lo + length - r) // q - (lo - r) // q


def box_count(l: int, q: int | Modulus, box: Box) -> BoxCountReport:
    """Exact number of (a, b) in the box with a^2 b^3 == l (mod q)."""
    m = as_modulus(q)
    if math.gcd(l, m.q) != 1:
        raise ValueError(f"l = {l} must be coprime to q = {m.q}")
    if m.q == 1:
        exact = box.k * box.l
    else:
        targets = _curve_targets(l % m.q, m.q)
        xs, starts = _sqrt_struct(m.q)
        rb = np.arange(m.q, dtype=np.int64)
        mult = (box.b0 + box.l - rb) // m.q - (box.b0 - rb) // m.q
        sel = np.nonzero((targets >= 0) & (mult > 0))[0]
        r_t = targets[sel]
        lens = starts[r_t + 1] - starts[r_t]
        total = int(lens.sum())
        if total:
            grp = np.repeat(np.arange(len(sel)), lens)
            intra = np.arange(total) - np.repeat(
                np.concatenate(([0], np.cumsum(lens)[:-1])), lens
            )
            roots = xs[starts[r_t][grp] + intra]
            cnt_a = (box.a0 + box.k - roots) // m.q - (box.a0 - roots) // m.q
            exact = int((mult[sel][grp] * cnt_a).sum())
        else:
            exact = 0
    main = m.phi * box.k * box.l / m.q**2
    return BoxCountReport(q=m, l=l % m.q, box=box, exact=exact, main_term=main, residual=exact - main)


# -- region area -------------------------------------------------------------


def region_area(x: int, lam: Fraction | float, mu: Fraction | float) -> float:
    """Area of {(a,b): a > x^lam, b > x^mu, a^2 b^3 <= x} by the closed form
    2 x^(1/2 - mu/2) - 3 x^(1/3 + lam/3) + x^(lam + mu); empty region gives 0."""
    lam = Fraction(lam)
    mu = Fraction(mu)
    if lam + Fraction(3, 2) * mu >= Fraction(1, 2):
        return 0.0
    lx = math.log(x)

    def xp(e: Fraction) -> float:
        return math.exp(lx * float(e))

    return 2.0 * xp(Fraction(1, 2) - mu / 2) - 3.0 * xp(Fraction(1, 3) + lam / 3) + xp(lam + mu)


# -- exact comparisons with c * 2^(p/r) --------------------------------------


def _pow2_cmp(coeff: Fraction, exp2: Fraction, n: Fraction) -> int:
    """sign of coeff * 2^exp2 - n, exact (coeff > 0)."""
    if n <= 0:
        return 1
    p, r = exp2.numerator, exp2.denominator
    lhs = coeff**r
    rhs = n**r
    if p >= 0:
        lhs *= 1 << p
    else:
        rhs *= 1 << (-p)
    return (lhs > rhs) - (lhs < rhs)


def _pow2_floor(coeff: Fraction, exp2: Fraction) -> int:
    """floor(coeff * 2^exp2), exact."""
    t = max(int(float(coeff) * 2.0 ** float(exp2)), 0)
    while _pow2_cmp(coeff, exp2, Fraction(t)) < 0:
        t -= 1
    while _pow2_cmp(coeff, exp2, Fraction(t + 1)) >= 0:
        t += 1
    return t


def _curve_floor_at(coeff: Fraction, exp2: Fraction, x: int) -> int:
    """Largest b >= 0 with b^3 * (coeff * 2^exp2)^2 <= x."""
    lo, hi = 0, icbrt(x) + 1
    # b admissible iff coeff^2 * 2^(2 exp2) <= x / b^3
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _pow2_cmp(coeff * coeff, 2 * exp2, Fraction(x, mid**3)) <= 0:
            lo = mid
        else:
            hi = mid - 1
    return lo


# -- partition pieces --------------------------------------------------------


@dataclass(frozen=True)
class Rect:
    """Integer rectangle a_lo < a <= a_hi, b_lo < b <= b_hi."""

    label: str
    a_lo: int
    a_hi: int
    b_lo: int
    b_hi: int

    def count(self) -> int:
        return max(0, self.a_hi - self.a_lo) * max(0, self.b_hi - self.b_lo)

    def b_interval(self, a: int, x: int) -> tuple[int, int] | None:
        if self.a_lo < a <= self.a_hi and self.b_hi > self.b_lo:
            return (self.b_lo, self.b_hi)
        return None


@dataclass(frozen=True)
class CurveRegion:
    """{a_lo < a <= a_hi, b > b_lo, a^2 b^3 <= x}: a leftover sliver."""

    label: str
    a_lo: int
    a_hi: int
    b_lo: int

    def b_interval(self, a: int, x: int) -> tuple[int, int] | None:
        if self.a_lo < a <= self.a_hi:
            top = icbrt(x // (a * a))
            if top > self.b_lo:
                return (self.b_lo, top)
        return None


@dataclass(frozen=True)
class PartitionPieces:
    x: int
    lam: Fraction
    mu: Fraction
    depth: int  # J
    columns: int  # I
    a_lo: int  # floor(x^lam)
    a_hi: int  # floor(x^(1/2 - 3 mu/2))
    b_floor: int  # floor(x^mu)
    rects: tuple[Rect, ...]
    leftovers: tuple[CurveRegion, ...]

    @property
    def pieces(self) -> tuple:
        return self.rects + self.leftovers


def build_partition(x: int, lam: Fraction | float, mu: Fraction | float, depth: int) -> PartitionPieces:
    """Dyadic column-and-stack tiling of the region to subdivision depth J.

    Columns double in width from x^lam; each carries one big rectangle under
    the curve, then J rounds of halving fill the leftover slivers with 2^(j-1)
    rectangles, leaving 2^J curve-bounded slivers per column.  Cut points need
    not be integers: everything is floored exactly.
    """
    if x < 2 or x & (x - 1):
        raise ValueError("x must be a power of two >= 2")
    lam = Fraction(lam)
    mu = Fraction(mu)
    if not (0 < lam < Fraction(1, 5)) or not (0 < mu < Fraction(1, 5)):
        raise ValueError("lambda and mu must lie in (0, 1/5)")
    if depth < 1:
        raise ValueError("depth J must be >= 1")
    x0 = x.bit_length() - 1
    e_lam = x0 * lam
    e_edge = x0 * (Fraction(1, 2) - Fraction(3, 2) * mu)
    n_cols = max(1, math.ceil(e_edge - e_lam))
    a_lo = _pow2_floor(Fraction(1), e_lam)
    a_hi = _pow2_floor(Fraction(1), e_edge)
    b_floor = _pow2_floor(Fraction(1), x0 * mu)

    def cut(i: int, num: int, den: int) -> Fraction:
        # a-cut 2^(i-1) (1 + num/den) x^lam as the coefficient of 2^e_lam
        return Fraction(2) ** (i - 1) * (1 + Fraction(num, den))

    rects: list[Rect] = []
    leftovers: list[CurveRegion] = []
    for i in range(1, n_cols + 1):
        col_lo = _pow2_floor(cut(i, 0, 1), e_lam)
        if i < n_cols:
            col_hi = _pow2_floor(cut(i, 1, 1), e_lam)
            rects.append(
                Rect(
                    label=f"R[{i}]",
                    a_lo=col_lo,
                    a_hi=col_hi,
                    b_lo=b_floor,
                    b_hi=max(_curve_floor_at(cut(i, 1, 1), e_lam, x), b_floor),
                )
            )
        for j in range(1, depth + 1):
            den = 1 << j
            for k in range(1, (1 << (j - 1)) + 1):
                rects.append(
                    Rect(
                        label=f"R[{i},{j},{k}]",
                        a_lo=_pow2_floor(cut(i, 2 * k - 2, den), e_lam),
                        a_hi=_pow2_floor(cut(i, 2 * k - 1, den), e_lam),
                        b_lo=max(_curve_floor_at(cut(i, 2 * k, den), e_lam, x), b_floor),
                        b_hi=max(_curve_floor_at(cut(i, 2 * k - 1, den), e_lam, x), b_floor),
                    )
                )
        den = 1 << depth
        for k in range(1, (1 << (depth - 1)) + 1):
            leftovers.append(
                CurveRegion(
                    label=f"S[{i},{k}]",
                    a_lo=_pow2_floor(cut(i, 2 * k - 2, den), e_lam),
                    a_hi=_pow2_floor(cut(i, 2 * k - 1, den), e_lam),
                    b_lo=max(_curve_floor_at(cut(i, 2 * k - 1, den), e_lam, x), b_floor),
                )
            )
            leftovers.append(
                CurveRegion(
                    label=f"S'[{i},{k}]",
                    a_lo=_pow2_floor(cut(i, 2 * k - 1, den), e_lam),
                    a_hi=_pow2_floor(cut(i, 2 * k, den), e_lam),
                    b_lo=max(_curve_floor_at(cut(i, 2 * k, den), e_lam, x), b_floor),
                )
            )
    # clip every a-interval in the last column at the region edge
    clipped_rects = tuple(
        replace(r, a_hi=min(r.a_hi, a_hi), a_lo=min(r.a_lo, a_hi)) for r in rects
    )
    clipped_left = tuple(
        replace(s, a_hi=min(s.a_hi, a_hi), a_lo=min(s.a_lo, a_hi)) for s in leftovers
    )
    return PartitionPieces(
        x=x,
        lam=lam,
        mu=mu,
        depth=depth,
        columns=n_cols,
        a_lo=a_lo,
        a_hi=a_hi,
        b_floor=b_floor,
        rects=clipped_rects,
        leftovers=clipped_left,
    )


@dataclass(frozen=True)
class TilingReport:
    disjoint: bool
    covering: bool
    point_counts: dict[str, int] = field(repr=False)
    region_points: int = 0
    mismatches: tuple[str, ...] = ()


def verify_tiling(pieces: PartitionPieces, max_mismatches: int = 8) -> TilingReport:
    """Scan every a-column of the region and check the piece b-intervals
    concatenate exactly from the b-floor to the curve."""
    x = pieces.x
    counts: dict[str, int] = {p.label: 0 for p in pieces.pieces}
    mism: list[str] = []
    disjoint = True
    covering = True
    region_points = 0
    a_stop = max(
        pieces.a_hi, max((p.a_hi for p in pieces.pieces), default=pieces.a_hi)
    )
    for a in range(pieces.a_lo + 1, a_stop + 1):
        top = icbrt(x // (a * a))
        top = max(top, pieces.b_floor)
        region_points += top - pieces.b_floor
        ivs = []
        for p in pieces.pieces:
            iv = p.b_interval(a, x)
            if iv is not None:
                ivs.append((iv[0], iv[1], p.label))
                counts[p.label] += iv[1] - iv[0]
        ivs.sort()
        cursor = pieces.b_floor
        for lo, hi, label in ivs:
            if lo < cursor:
                disjoint = False
                if len(mism) < max_mismatches:
                    mism.append(f"a={a}: {label} overlaps below b={cursor}")
            elif lo > cursor:
                covering = False
                if len(mism) < max_mismatches:
                    mism.append(f"a={a}: gap b in ({cursor}, {lo}]")
            cursor = max(cursor, hi)
        if cursor != top:
            covering = False
            if len(mism) < max_mismatches:
                mism.append(f"a={a}: column ends at b={cursor}, region top is {top}")
    return TilingReport(
        disjoint=disjoint,
        covering=covering,
        point_counts=counts,
        region_points=region_points,
        mismatches=tuple(mism),
    )
