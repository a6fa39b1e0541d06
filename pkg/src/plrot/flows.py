"""Abstract Thompson-like flows and generators for the worked example families.

An :class:`AbstractTrack` is a train track with integer edge weights and no
circle map behind it. Switch valences may differ; only sinks whose two
ends have the same valence are split.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateParams, InputError, InvalidLeafCount
from .plmap import PLCircleMap, from_intervals, power_exponent, rotation, validate_map
from .tracks import Kind, SplitTrace, Track


class AbstractTrack(Track):
    def __init__(self, meta: dict | None = None):
        super().__init__()
        self.meta = dict(meta or {})

    def weight(self, content) -> int:
        return content

    def infinitesimal(self):
        return 0


@dataclass(frozen=True)
class FlowCycle:
    weight: int
    direction: str
    edges: tuple[int, ...]


@dataclass(frozen=True)
class FlowReport:
    circles: tuple[int, ...]
    cycles: tuple[FlowCycle, ...]
    stuck: tuple[int, ...]
    splits: int


def analyze_flow(track: AbstractTrack, trace: SplitTrace | None = None) -> FlowReport:
    """Split every equal-valence sink, then read off circles and cycles.

    Sinks joining switches of different valence are left alone and listed
    in ``stuck``; no attracting cycle is reported through them.
    """
    work = track.copy()
    work.check()
    trace = work.split_all(trace)
    work.check()
    stuck = tuple(work.sinks())
    circles = tuple(work.edges[eid].content for eid in work.circles())
    cycles = []
    for cyc in work.attracting_cycles():
        if not cyc.coherent:
            continue
        cycles.append(
            FlowCycle(
                weight=work.cycle_content(cyc),
                direction="forward" if cyc.forward else "backward",
                edges=cyc.edges,
            )
        )
    return FlowReport(circles, tuple(cycles), stuck, trace.splits)


# example families


def example41(amount, base: int = 2) -> PLCircleMap:
    """Rigid rotation; its height is the reduced denominator of ``amount``."""
    return rotation(Fraction(amount), base)


def example42(k: int, s: int) -> PLCircleMap:
    """Four-piece map of height 2**k + s + 2 whose only periodic orbit is long."""
    if k < 1 or s < 0:
        raise DegenerateParams("need k >= 1 and s >= 0")
    if (k, s) == (1, 0):
        raise DegenerateParams("(k, s) = (1, 0) is excluded")
    m = 2**k + s + 2
    F = lambda a: Fraction(a, m)  # noqa: E731
    return from_intervals(
        2,
        [
            (F(0), F(2**k), F(2**k), F(2**k + 1)),
            (F(2**k), F(2**k + s), F(2**k + 1), F(2**k + s + 1)),
            (F(2**k + s), F(2**k + s + 1), F(2**k + s + 1), F(2**k + s + 1 + 2**k)),
            (F(-1), F(0), F(2**k - 1), F(2**k)),
        ]
        if s > 0
        else [
            (F(0), F(2**k), F(2**k), F(2**k + 1)),
            (F(2**k), F(2**k + 1), F(2**k + 1), F(2**k + 1 + 2**k)),
            (F(-1), F(0), F(2**k - 1), F(2**k)),
        ],
    )


def example43(r1: int, r2: int, r3: int) -> AbstractTrack:
    """Nested-sink flow whose final circle has weight r1 * r3 * 2**r2.

    The middle edge carries weight r1. Around it sit r2 trivalent pairs
    (c_i below, x_i above); the side branch a_i leaves x_i on its left
    port and enters c_i on its right port, which is what makes each split
    double the inner edge instead of splitting off a loop. Two bushy
    switches with r3 branches close it up, joined with a one-step twist so
    the last split yields a single circle. All edges other than the middle
    one are weight-0 connectors; ``meta['m']`` records r1 + 3*r2 + r3,
    counting each connector as one slot.
    """
    if min(r1, r2, r3) < 1:
        raise DegenerateParams("r1, r2, r3 must all be >= 1")
    tr = AbstractTrack({"family": "4.3", "r1": r1, "r2": r2, "r3": r3, "m": r1 + 3 * r2 + r3})
    c = [tr.new_switch(Kind.CONTRACTION, 2, 1) for _ in range(r2)]
    x = [tr.new_switch(Kind.EXPANSION, 1, 2) for _ in range(r2)]
    s_minus = tr.new_switch(Kind.CONTRACTION, r3, 1)
    s_plus = tr.new_switch(Kind.EXPANSION, 1, r3)

    middle = tr.new_edge(r1)
    tr.attach_tail(middle, c[0], 0)
    tr.attach_head(middle, x[0], 0)
    for i in range(r2):
        below = tr.new_edge(0)
        tr.attach_tail(below, c[i + 1] if i + 1 < r2 else s_minus, 0)
        tr.attach_head(below, c[i], 0)
        above = tr.new_edge(0)
        tr.attach_tail(above, x[i], 1)
        tr.attach_head(above, x[i + 1] if i + 1 < r2 else s_plus, 0)
        side = tr.new_edge(0)
        tr.attach_tail(side, x[i], 0)
        tr.attach_head(side, c[i], 1)
    for j in range(r3):
        twist = tr.new_edge(0)
        tr.attach_tail(twist, s_plus, j)
        tr.attach_head(twist, s_minus, (j + 1) % r3)
    tr.check()
    return tr


def gen_example(family: str, **params):
    family = str(family)
    if family == "4.1":
        return example41(params["amount"], params.get("base", 2))
    if family == "4.2":
        return example42(params["k"], params["s"])
    if family == "4.3":
        return example43(params["r1"], params["r2"], params["r3"])
    raise InputError(f"unknown example family {family!r}")


# random generalized Thompson elements


def tree_leaves(tree, n: int) -> list[tuple[Fraction, Fraction]]:
    """Leaf intervals (left, length) of a nested-tuple n-ary subdivision tree.

    ``None`` is a leaf; an internal node is a tuple of n subtrees.
    """
    out = []

    def walk(node, left, length):
        if node is None:
            out.append((left, length))
            return
        if len(node) != n:
            raise InvalidLeafCount(f"internal node with {len(node)} children in an {n}-ary tree")
        step = length / n
        for j, child in enumerate(node):
            walk(child, left + j * step, step)

    walk(tree, Fraction(0), Fraction(1))
    return out


def element_from_trees(n: int, source, target, offset: int = 0) -> PLCircleMap:
    """Send the i-th source leaf affinely onto the (i + offset)-th target leaf."""
    src, dst = tree_leaves(source, n), tree_leaves(target, n)
    if len(src) != len(dst):
        raise InvalidLeafCount(f"trees have {len(src)} and {len(dst)} leaves")
    L = len(src)
    raw = []
    for i, (a, la) in enumerate(src):
        b, lb = dst[(i + offset) % L]
        raw.append((a, power_exponent(lb / la, n), b))
    return validate_map(raw, n)


def random_tree(n: int, leaf_count: int, rng: random.Random):
    if leaf_count < 1 or (leaf_count - 1) % (n - 1):
        raise InvalidLeafCount(f"{leaf_count} leaves cannot come from {n}-ary subdivision")
    tree = None
    for _ in range((leaf_count - 1) // (n - 1)):
        tree = _split_leaf(tree, rng.randrange(_count_leaves(tree)), n)
    return tree


def _count_leaves(tree) -> int:
    return 1 if tree is None else sum(_count_leaves(c) for c in tree)


def _split_leaf(tree, index, n):
    if tree is None:
        return (None,) * n
    children = list(tree)
    for j, child in enumerate(children):
        size = _count_leaves(child)
        if index < size:
            children[j] = _split_leaf(child, index, n)
            return tuple(children)
        index -= size
    raise IndexError(index)


def gen_random(n: int, leaf_count: int, seed) -> PLCircleMap:
    rng = random.Random(f"{n}:{leaf_count}:{seed}")
    source = random_tree(n, leaf_count, rng)
    target = random_tree(n, leaf_count, rng)
    offset = rng.randrange(leaf_count)
    return element_from_trees(n, source, target, offset)
