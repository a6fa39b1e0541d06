"""Piecewise-linear circle homeomorphisms with slopes in n^Z.

Points of the circle are exact :class:`fractions.Fraction` values in [0, 1).
A map is stored in normal form: a tuple of :class:`Piece` records whose
``domain_left`` values start at 0 and strictly increase, where consecutive
pieces always differ in exponent (0 itself is kept as a cut even when the
slope does not change there).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import (
    BaseMismatch,
    BaseTooSmall,
    Discontinuity,
    NoPeriodUpTo,
    NotBijective,
    NotCovering,
    SlopeNotPowerOfN,
)

Rational = Fraction

__all__ = [
    "Rational",
    "Piece",
    "PLCircleMap",
    "FixedPointSet",
    "OracleResult",
    "validate_map",
    "from_intervals",
    "identity",
    "rotation",
    "evaluate",
    "evaluate_lift",
    "compose",
    "invert",
    "power",
    "fixed_point_set",
    "rotation_number_oracle",
    "rotation_number_float",
    "power_exponent",
]


class Piece(NamedTuple):
    domain_left: Fraction
    exponent: int
    image_left: Fraction


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact data")
    return Fraction(value)


def power_exponent(ratio: Fraction, n: int) -> int | None:
    """Return k with ratio == n**k, or None when no such integer exists."""
    if ratio <= 0:
        return None
    sign = 1
    if ratio < 1:
        ratio, sign = 1 / ratio, -1
    if ratio.denominator != 1:
        return None
    v, k = ratio.numerator, 0
    while v % n == 0:
        v //= n
        k += 1
    return sign * k if v == 1 else None


def _slope(n: int, k: int) -> Fraction:
    return Fraction(n) ** k


class PLCircleMap:
    """An orientation-preserving PL homeomorphism of R/Z, slopes powers of ``base``.

    Instances are immutable and compare equal exactly when they describe
    the same function. Build them with :func:`validate_map` or
    :func:`from_intervals`.
    """

    __slots__ = ("base", "pieces", "_lefts", "_slopes", "_lift_lefts", "_rights")

    def __init__(self, base: int, pieces: Iterable[Piece]):
        self.base = base
        self.pieces = tuple(pieces)
        self._lefts = [p.domain_left for p in self.pieces]
        self._rights = self._lefts[1:] + [Fraction(1)]
        self._slopes = [_slope(base, p.exponent) for p in self.pieces]
        lift = [self.pieces[0].image_left]
        for i in range(1, len(self.pieces)):
            lift.append(lift[-1] + self._slopes[i - 1] * (self._lefts[i] - self._lefts[i - 1]))
        self._lift_lefts = lift

    def __eq__(self, other):
        if not isinstance(other, PLCircleMap):
            return NotImplemented
        return self.base == other.base and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.base, self.pieces))

    def __repr__(self):
        body = ", ".join(f"({p.domain_left}, {p.exponent}, {p.image_left})" for p in self.pieces)
        return f"PLCircleMap(base={self.base}, [{body}])"

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __matmul__(self, other: "PLCircleMap") -> "PLCircleMap":
        return compose(self, other)

    @property
    def break_points(self) -> list[Fraction]:
        """Points where the derivative genuinely jumps (may include 0)."""
        out = []
        for i, p in enumerate(self.pieces):
            if p.exponent != self.pieces[i - 1].exponent:
                out.append(p.domain_left)
        return out

    def piece_index(self, x: Fraction) -> int:
        """Index of the piece containing ``x`` (right-continuous, x in [0,1))."""
        return bisect_right(self._lefts, x) - 1

    def piece_domain(self, i: int) -> tuple[Fraction, Fraction]:
        return self._lefts[i], self._rights[i]

    def lift_affine(self, i: int) -> tuple[Fraction, Fraction]:
        """(slope, intercept) of the canonical lift on piece ``i``'s domain."""
        s = self._slopes[i]
        return s, self._lift_lefts[i] - s * self._lefts[i]

    def is_identity(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0].exponent == 0 and self.pieces[0].image_left == 0


def _normalize(base: int, raw: list[tuple[Fraction, int, Fraction]]) -> PLCircleMap:
    if not isinstance(base, int) or base < 2:
        raise BaseTooSmall(f"base must be an integer >= 2, got {base!r}")
    if not raw:
        raise NotCovering("a map needs at least one piece")
    pieces = []
    for a, k, b in raw:
        if isinstance(k, bool) or not isinstance(k, int):
            raise SlopeNotPowerOfN(f"exponent {k!r} is not an integer")
        a = _frac(a)
        if not 0 <= a < 1:
            raise NotCovering(f"domain_left {a} outside [0,1)")
        pieces.append((a, k, _frac(b) % 1))
    pieces.sort(key=lambda p: p[0])
    count = len(pieces)
    total = Fraction(0)
    for i, (a, k, b) in enumerate(pieces):
        nxt = pieces[(i + 1) % count]
        right = nxt[0] if i + 1 < count else nxt[0] + 1
        if right <= a:
            raise NotCovering(f"pieces overlap at {a}")
        length = _slope(base, k) * (right - a)
        if (b + length - nxt[2]) % 1 != 0:
            raise Discontinuity(
                f"piece at {a} ends at image {(b + length) % 1}, next piece starts at {nxt[2]}"
            )
        total += length
    if total != 1:
        raise NotBijective(f"image lengths sum to {total}, not 1")
    if pieces[0][0] != 0:
        a, k, b = pieces[-1]
        pieces.insert(0, (Fraction(0), k, (b + _slope(base, k) * (1 - a)) % 1))
    merged = [pieces[0]]
    for p in pieces[1:]:
        if p[1] != merged[-1][1]:
            merged.append(p)
    return PLCircleMap(base, (Piece(*p) for p in merged))


def validate_map(pieces, base: int) -> PLCircleMap:
    """Validate raw ``(domain_left, exponent, image_left)`` pieces.

    Pieces may come in any order and the last one may wrap through 0.
    Mappings with those keys are accepted as well as tuples.
    """
    raw = []
    for p in pieces:
        if isinstance(p, dict):
            raw.append((p["domain_left"], p["exponent"], p["image_left"]))
        else:
            raw.append(tuple(p))
    return _normalize(base, raw)


def from_intervals(base: int, intervals) -> PLCircleMap:
    """Build a map from ``(domain_left, domain_right, image_left, image_right)``.

    Endpoints may be any rationals (intervals such as [-1/5, 0] are fine);
    the slope of each piece is derived and must be a power of ``base``.
    """
    if not isinstance(base, int) or base < 2:
        raise BaseTooSmall(f"base must be an integer >= 2, got {base!r}")
    items = []
    for dl, dr, il, ir in intervals:
        dl, dr, il, ir = map(_frac, (dl, dr, il, ir))
        if dr <= dl:
            raise NotCovering(f"empty or reversed domain [{dl}, {dr}]")
        if ir <= il:
            raise NotBijective(f"image [{il}, {ir}] is not positively oriented")
        shift = math.floor(dl)
        items.append((dl - shift, dr - shift, il, ir))
    items.sort()
    if not items:
        raise NotCovering("no intervals given")
    if sum(dr - dl for dl, dr, _, _ in items) != 1:
        raise NotCovering("domain intervals do not tile the circle")
    for i, (dl, dr, _, _) in enumerate(items):
        if (dr - items[(i + 1) % len(items)][0]) % 1 != 0:
            raise NotCovering(f"gap or overlap after {dr}")
    raw = []
    for i, (dl, dr, il, ir) in enumerate(items):
        k = power_exponent((ir - il) / (dr - dl), base)
        if k is None:
            raise SlopeNotPowerOfN(f"slope {(ir - il) / (dr - dl)} on [{dl}, {dr}] is not a power of {base}")
        if (ir - items[(i + 1) % len(items)][2]) % 1 != 0:
            raise Discontinuity(f"image of {dr} is {ir % 1}, next piece starts at {items[(i + 1) % len(items)][2] % 1}")
        raw.append((dl, k, il))
    return _normalize(base, raw)


def identity(base: int = 2) -> PLCircleMap:
    return _normalize(base, [(Fraction(0), 0, Fraction(0))])


def rotation(amount, base: int = 2) -> PLCircleMap:
    return _normalize(base, [(Fraction(0), 0, _frac(amount))])


def evaluate(t: PLCircleMap, x) -> Fraction:
    x = _frac(x) % 1
    i = t.piece_index(x)
    p = t.pieces[i]
    return (p.image_left + t._slopes[i] * (x - p.domain_left)) % 1


def evaluate_lift(t: PLCircleMap, x) -> Fraction:
    """Canonical lift: commutes with x -> x+1 and sends 0 into [0, 1)."""
    x = _frac(x)
    f = math.floor(x)
    y = x - f
    i = t.piece_index(y)
    return t._lift_lefts[i] + t._slopes[i] * (y - t._lefts[i]) + f


def invert(t: PLCircleMap) -> PLCircleMap:
    return _normalize(t.base, [(p.image_left, -p.exponent, p.domain_left) for p in t.pieces])


def compose(s: PLCircleMap, t: PLCircleMap) -> PLCircleMap:
    """Return s o t (apply t first)."""
    if s.base != t.base:
        raise BaseMismatch(f"cannot compose base {s.base} with base {t.base}")
    t_inv = invert(t)
    cuts = set(t._lefts)
    cuts.update(evaluate(t_inv, a) for a in s._lefts)
    raw = []
    for c in sorted(cuts):
        y = evaluate(t, c)
        k = t.pieces[t.piece_index(c)].exponent + s.pieces[s.piece_index(y)].exponent
        raw.append((c, k, evaluate(s, y)))
    return _normalize(s.base, raw)


def power(t: PLCircleMap, j: int) -> PLCircleMap:
    if j < 0:
        return power(invert(t), -j)
    result = identity(t.base)
    square = t
    while j:
        if j & 1:
            result = compose(square, result)
        j >>= 1
        if j:
            square = compose(square, square)
    return result


@dataclass(frozen=True)
class FixedPointSet:
    """Isolated fixed points and pointwise-fixed arcs stored as (left, length)."""

    points: tuple[Fraction, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __bool__(self):
        return bool(self.points or self.intervals)

    def first(self) -> Fraction:
        candidates = list(self.points) + [left for left, _ in self.intervals]
        return min(candidates)


def _in_arc(x, left, length):
    return (x - left) % 1 <= length


def fixed_point_set(t: PLCircleMap) -> FixedPointSet:
    points = set()
    arcs = []
    for i, (a, r) in enumerate(zip(t._lefts, t._rights)):
        s, c = t.lift_affine(i)
        if s == 1:
            if c.denominator == 1:
                arcs.append([a, r])
            continue
        ga, gr = (s - 1) * a + c, (s - 1) * r + c
        lo, hi = min(ga, gr), max(ga, gr)
        for j in range(math.ceil(lo), math.floor(hi) + 1):
            points.add(((j - c) / (s - 1)) % 1)
    merged = []
    for arc in arcs:
        if merged and merged[-1][1] == arc[0]:
            merged[-1][1] = arc[1]
        else:
            merged.append(arc)
    if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == 1:
        last = merged.pop()
        merged[0] = [last[0] - 1, merged[0][1]]
    intervals = []
    for a, r in merged:
        if r - a >= 1:
            intervals.append((Fraction(0), Fraction(1)))
        else:
            intervals.append((a % 1, r - a))
    intervals.sort()
    isolated = sorted(x for x in points if not any(_in_arc(x, a, ln) for a, ln in intervals))
    return FixedPointSet(tuple(isolated), tuple(intervals))


class OracleResult(NamedTuple):
    rotation_number: Fraction
    least_period: int
    witness: Fraction


def rotation_number_oracle(t: PLCircleMap, q_max: int | None = None) -> OracleResult:
    """Brute force: find the least q for which t**q has a fixed point.

    Cost grows quickly with q; meant for cross-checking small cases.
    When ``q_max`` is omitted it defaults to base**height * height.
    """
    if q_max is None:
        from .markov import height

        m = height(t)
        q_max = t.base**m * m
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    current = t
    for q in range(1, q_max + 1):
        if q > 1:
            current = compose(t, current)
        fixed = fixed_point_set(current)
        if fixed:
            x = fixed.first()
            y = x
            for _ in range(q):
                y = evaluate_lift(t, y)
            p = y - x
            assert p.denominator == 1
            return OracleResult(Fraction(int(p), q) % 1, q, x)
    raise NoPeriodUpTo(q_max)


def rotation_number_float(t: PLCircleMap, iterations: int) -> float:
    """Truncated Poincare limit lift^N(0)/N in floating point.

    The lift error is at most 1/N; float round-off adds a little on top.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    # keep whole turns apart from the fractional image so that y - floor(y)
    # never cancels; otherwise round-off can push an orbit across a
    # semi-stable fixed point and add spurious turns
    lefts = [float(a) for a in t._lefts]
    turns = [math.floor(v) for v in t._lift_lefts]
    starts = [float(v - math.floor(v)) for v in t._lift_lefts]
    slopes = [float(s) for s in t._slopes]
    whole, x = 0, 0.0
    for _ in range(iterations):
        i = bisect_right(lefts, x) - 1
        y = starts[i] + slopes[i] * (x - lefts[i])
        f = math.floor(y)
        whole += turns[i] + f
        x = y - f
    return ((whole + x) / iterations) % 1.0
