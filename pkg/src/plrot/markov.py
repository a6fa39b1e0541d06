"""Height and uniform Markov partitions.

The grid of size m cuts the circle into I_i = [i/m, (i+1)/m]. A map is
Markov for the grid when each I_i either stretches linearly over n**k
consecutive grid intervals, or sits in a strip of n**k consecutive grid
intervals that is mapped linearly onto one grid interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import HeightNotFound, NotMarkov
from .plmap import PLCircleMap, evaluate, validate_map


@dataclass(frozen=True)
class Expand:
    k: int
    target_start: int


@dataclass(frozen=True)
class Identity:
    target: int


@dataclass(frozen=True)
class ContractMember:
    k: int
    strip_start: int
    position: int
    target: int


Entry = Union[Expand, Identity, ContractMember]


@dataclass(frozen=True)
class MarkovTable:
    base: int
    m: int
    entries: tuple[Entry, ...]

    def strips(self) -> list[tuple[int, int, int]]:
        """Contraction strips as (start, k, target), ordered by start."""
        return [
            (e.strip_start, e.k, e.target)
            for e in self.entries
            if isinstance(e, ContractMember) and e.position == 0
        ]

    def covered(self, i: int) -> list[int]:
        """Grid intervals meeting the interior of t(I_i), in circle order."""
        e = self.entries[i]
        if isinstance(e, Expand):
            return [(e.target_start + j) % self.m for j in range(self.base**e.k)]
        return [e.target]

    def to_map(self) -> PLCircleMap:
        n, m = self.base, self.m
        raw = []
        for i, e in enumerate(self.entries):
            if isinstance(e, Expand):
                raw.append((Fraction(i, m), e.k, Fraction(e.target_start, m)))
            elif isinstance(e, Identity):
                raw.append((Fraction(i, m), 0, Fraction(e.target, m)))
            else:
                raw.append((Fraction(i, m), -e.k, Fraction(e.target, m) + Fraction(e.position, m * n**e.k)))
        return validate_map(raw, n)


def _grid_rows(t: PLCircleMap, m: int):
    """Per grid point i/m: (k, Y) where Y = m * n**max(-k, 0) * t(i/m) mod that scale.

    Y is an integer exactly when the image lands on the (sub)grid the Markov
    condition asks for; otherwise the row is None. Worked out piece by piece
    in integers, since t is affine on each piece.
    """
    n = t.base
    rows = [None] * m
    count = len(t.pieces)
    for j, p in enumerate(t.pieces):
        left = p.domain_left * m
        right = t.pieces[j + 1].domain_left * m if j + 1 < count else m
        k = p.exponent
        w = n**-k if k < 0 else 1
        step = n**k if k > 0 else 1
        v0 = (p.image_left * m - t._slopes[j] * left) * w
        if v0.denominator != 1:
            continue
        v0 = int(v0)
        mod = m * w
        for i in range(math.ceil(left), math.ceil(right)):
            rows[i] = (k, (v0 + step * i) % mod)
    return rows


def is_markov(t: PLCircleMap, m: int) -> bool:
    if m < 1:
        raise ValueError("m must be >= 1")
    n = t.base
    scaled = [b * m for b in t.break_points]
    if any(b.denominator != 1 for b in scaled):
        return False
    breaks = [int(b) for b in scaled]
    for i, row in enumerate(_grid_rows(t, m)):
        if row is None:
            return False
        k, y = row
        if k >= 0:
            continue
        width = n**-k
        start = i - y % width
        if any(0 < (b - start) % m < width for b in breaks):
            return False
    return True


def _lcm_candidate(t: PLCircleMap) -> int:
    breaks = t.break_points
    if not breaks:
        return evaluate(t, 0).denominator
    dens = [b.denominator for b in breaks] + [evaluate(t, b).denominator for b in breaks]
    return math.lcm(*dens)


def height(t: PLCircleMap) -> int:
    """Least m whose uniform grid is Markov for ``t``.

    Every Markov grid must contain the break points and their images, so
    the lcm of their denominators is a lower bound; it is also Markov.
    Both facts are re-checked here rather than trusted.
    """
    m = _lcm_candidate(t)
    if not is_markov(t, m):
        raise HeightNotFound(f"lcm candidate {m} is not Markov for {t!r}")
    for d in range(1, m):
        if m % d == 0 and is_markov(t, d):
            raise HeightNotFound(f"grid {d} < {m} is Markov; lcm argument violated")
    return m


def markov_table(t: PLCircleMap, m: int) -> MarkovTable:
    if not is_markov(t, m):
        raise NotMarkov(f"grid of size {m} is not Markov for this map")
    n = t.base
    entries: list[Entry] = []
    for i, (k, y) in enumerate(_grid_rows(t, m)):
        if k > 0:
            entries.append(Expand(k, y))
        elif k == 0:
            entries.append(Identity(y))
        else:
            width = n**-k
            target, position = divmod(y, width)
            entries.append(ContractMember(-k, (i - position) % m, position, target))
    return MarkovTable(n, m, tuple(entries))
