"""Exact rotation numbers by building and splitting the train track of a map.

Pipeline: height -> Markov table -> track -> resolved track -> sinkless
track -> circles and attracting cycles -> exact periodic orbit.

Edge content here is a tuple of items, each either a grid interval index
or :data:`INFINITESIMAL`; periods are counted in interval items only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, RealizationMismatch
from .markov import ContractMember, Expand, Identity, MarkovTable, height, markov_table
from .plmap import PLCircleMap
from .tracks import Cycle, Kind, SplitTrace, Track


class _Infinitesimal:
    def __repr__(self):
        return "INFINITESIMAL"

    def __reduce__(self):
        return "INFINITESIMAL"


INFINITESIMAL = _Infinitesimal()


class TrainTrack(Track):
    def __init__(self, base: int):
        super().__init__()
        self.base = base

    def weight(self, content) -> int:
        return sum(1 for item in content if item is not INFINITESIMAL)

    def infinitesimal(self):
        return (INFINITESIMAL,)

    def intervals(self, content) -> tuple[int, ...]:
        return tuple(item for item in content if item is not INFINITESIMAL)

    def interval_multiplicity(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for e in self.edges.values():
            for item in self.intervals(e.content):
                counts[item] = counts.get(item, 0) + 1
        return counts

    def infinitesimal_edges(self) -> list[int]:
        return sorted(e.id for e in self.edges.values() if not self.intervals(e.content))

    def edge_label(self, e) -> str:
        items = self.intervals(e.content)
        if len(items) <= 6:
            body = ",".join(f"I{i}" for i in items) or "eps"
        else:
            body = f"{len(items)} intervals"
        return f"e{e.id}: {body}"


def build_track(table: MarkovTable) -> TrainTrack:
    """Glue one oriented interval edge per grid interval following the table.

    Expansions and contraction strips become switches; identity entries are
    concatenated straight through, so no two-valent junction survives.
    """
    m, n = table.m, table.base
    tt = TrainTrack(n)
    for i in range(m):
        tt.new_edge((i,))
    links = []
    for i, entry in enumerate(table.entries):
        if isinstance(entry, Expand):
            sid = tt.new_switch(Kind.EXPANSION, 1, n**entry.k)
            tt.attach_head(i, sid, 0)
            for port, j in enumerate(table.covered(i)):
                tt.attach_tail(j, sid, port)
        elif isinstance(entry, Identity):
            links.append((i, entry.target))
        elif isinstance(entry, ContractMember) and entry.position == 0:
            width = n**entry.k
            sid = tt.new_switch(Kind.CONTRACTION, width, 1)
            for port in range(width):
                tt.attach_head((i + port) % m, sid, port)
            tt.attach_tail(entry.target, sid, 0)
    tt.splice(links)
    tt.check()
    return tt


def resolve(tau: TrainTrack) -> TrainTrack:
    out = tau.copy()
    out.resolve(out.base)
    out.check()
    return out


def contracting_direction(tau: Track, sid: int) -> tuple[int, bool, int]:
    return tau.contracting_direction(sid)


def find_sink(tau: Track) -> int | None:
    return tau.find_sink()


def split_sink(tau: Track, eid: int) -> Track:
    out = tau.copy()
    out.split_sink(eid)
    out.check()
    return out


def split_all(tau0: TrainTrack, trace: SplitTrace | None = None) -> TrainTrack:
    out = tau0.copy()
    out.split_all(trace)
    out.check()
    return out


@dataclass(frozen=True)
class RawOrbit:
    itinerary: tuple[int, ...]
    kind: str  # "circle", "forward" or "backward"


@dataclass(frozen=True)
class Classification:
    circles: tuple[RawOrbit, ...]
    cycles: tuple[RawOrbit, ...]


def classify(final: TrainTrack) -> Classification:
    if final.find_sink() is not None:
        raise ConsistencyError("classify needs a sinkless track")
    circles = tuple(RawOrbit(final.intervals(final.edges[eid].content), "circle") for eid in final.circles())
    cycles = []
    on_cycle = set()
    for cyc in final.attracting_cycles():
        if not cyc.coherent:
            raise ConsistencyError(f"incoherent contracting cycle through switches {cyc.switches}")
        on_cycle.update(cyc.switches)
        items = final.intervals(final.cycle_content(cyc))
        if not items:
            raise ConsistencyError("attracting cycle carries no interval")
        cycles.append(RawOrbit(items, "forward" if cyc.forward else "backward"))
    for switches, edges in final.components():
        has_circle = any(final.edges[e].is_circle for e in edges)
        if not has_circle and not (switches & on_cycle):
            raise ConsistencyError("component without a circle or attracting cycle")
    return Classification(circles, tuple(cycles))


@dataclass(frozen=True)
class Orbit:
    itinerary: tuple[int, ...]
    interval_count: int
    direction: str | None  # None for circles
    point: Fraction
    rotation_number: Fraction
    return_slope: Fraction


@dataclass(frozen=True)
class DynamicsReport:
    base: int
    height: int
    circles: tuple[Orbit, ...]
    cycles: tuple[Orbit, ...]
    rotation_number: Fraction
    least_period: int
    periodic_point: Fraction
    bound: int

    @property
    def orbits(self) -> tuple[Orbit, ...]:
        return self.circles + self.cycles


def _follow_itinerary(t: PLCircleMap, m: int, itinerary):
    """Compose the lift branches of t along a cyclic interval itinerary.

    Returns (slope, intercept, shift, lo, hi): the composite lift is
    x -> slope*x + intercept on [lo, hi], the set of points of the first
    interval whose orbit follows the itinerary and lands back in the first
    interval translated by the integer ``shift``.

    Works in grid units u = m*x. The realized window is pushed forward one
    step at a time and intersected with the next interval; since every
    branch is increasing, pulling the final window back gives [lo, hi].
    Window ends and the composite intercept are kept as integers over one
    shared denominator, which is much cheaper than Fraction arithmetic.
    """
    branches = {}
    for i in set(itinerary):
        s, c = t.lift_affine(t.piece_index(Fraction(i, m)))
        c = c * m
        branches[i] = (s.numerator, s.denominator, c.numerator, c.denominator)
    first = itinerary[0]
    den, lo_n, hi_n, b_n = 1, first, first + 1, 0
    a_num = a_den = 1
    shift = 0
    q = len(itinerary)
    for j in range(q):
        sn, sd, cn, cd = branches[itinerary[j]]
        back = shift * m
        new = math.lcm(den * sd, cd)
        f, g = new // (den * sd), new // cd
        off = cn * g + back * new
        lo_n = sn * (lo_n - back * den) * f + off
        y_hi = sn * (hi_n - back * den) * f + off
        b_n = sn * (b_n - back * den) * f + off
        a_num, a_den = a_num * sn, a_den * sd
        den = new
        nxt = itinerary[(j + 1) % q]
        z = (lo_n - nxt * den) // (m * den)
        if lo_n >= (nxt + 1 + z * m) * den:
            z += 1
        k_lo = (nxt + z * m) * den
        realized = lo_n < y_hi
        lo_n, hi_n = max(lo_n, k_lo), min(y_hi, k_lo + den)
        if lo_n > hi_n or (lo_n == hi_n and realized):
            raise RealizationMismatch(f"itinerary step {itinerary[j]} -> {nxt} is not realized")
        shift = z
        common = math.gcd(den, lo_n, hi_n, b_n)
        if common > 1:
            den, lo_n, hi_n, b_n = den // common, lo_n // common, hi_n // common, b_n // common
    a = Fraction(a_num, a_den)
    lo = Fraction((lo_n - b_n) * a_den, den * a_num * m)
    hi = Fraction((hi_n - b_n) * a_den, den * a_num * m)
    return a, Fraction(b_n, den * m), shift, lo, hi


def _solve(t: PLCircleMap, m: int, raw: RawOrbit) -> Orbit:
    a, b, p, lo, hi = _follow_itinerary(t, m, raw.itinerary)
    q = len(raw.itinerary)
    if raw.kind == "circle":
        if a != 1 or b != p or not lo < hi:
            raise RealizationMismatch("circle itinerary does not return by the identity")
        x = lo
    else:
        if raw.kind == "forward" and not a < 1:
            raise RealizationMismatch(f"forward cycle has return slope {a}")
        if raw.kind == "backward" and not a > 1:
            raise RealizationMismatch(f"backward cycle has return slope {a}")
        x = (p - b) / (a - 1)
        if not lo <= x <= hi:
            raise RealizationMismatch(f"fixed point {x} outside its itinerary window [{lo}, {hi}]")
    return Orbit(
        itinerary=raw.itinerary,
        interval_count=q,
        direction=None if raw.kind == "circle" else raw.kind,
        point=x,
        rotation_number=Fraction(p, q) % 1,
        return_slope=a,
    )


def extract_dynamics(t: PLCircleMap, m: int, classification: Classification) -> DynamicsReport:
    circles = tuple(_solve(t, m, r) for r in classification.circles)
    cycles = tuple(_solve(t, m, r) for r in classification.cycles)
    orbits = circles + cycles
    if not orbits:
        raise RealizationMismatch("no circle or cycle found")
    rots = {o.rotation_number for o in orbits}
    if len(rots) != 1:
        raise RealizationMismatch(f"orbits disagree on the rotation number: {sorted(rots)}")
    rot = rots.pop()
    return DynamicsReport(
        base=t.base,
        height=m,
        circles=circles,
        cycles=cycles,
        rotation_number=rot,
        least_period=rot.denominator,
        periodic_point=orbits[0].point % 1,
        bound=t.base**m * m,
    )


@dataclass
class PipelineResult:
    map: PLCircleMap
    height: int
    table: MarkovTable
    tau: TrainTrack
    tau0: TrainTrack
    final: TrainTrack
    trace: SplitTrace = field(repr=False)
    classification: Classification
    report: DynamicsReport


def run_pipeline(t: PLCircleMap) -> PipelineResult:
    m = height(t)
    table = markov_table(t, m)
    tau = build_track(table)
    tau0 = resolve(tau)
    trace = SplitTrace()
    final = split_all(tau0, trace)
    classification = classify(final)
    report = extract_dynamics(t, m, classification)
    return PipelineResult(t, m, table, tau, tau0, final, trace, classification, report)


def rotation_number_exact(t: PLCircleMap) -> DynamicsReport:
    return run_pipeline(t).report
