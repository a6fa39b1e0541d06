"""Oriented train tracks with ordered switch ports.

A switch has one isolated side and one branched side. For a contraction
switch the branches are incoming and the isolated edge leaves; for an
expansion switch the isolated edge arrives and the branches leave. Port
order on the branched side is the transverse (left to right) order.

Edge tails attach to a switch's ``outs`` and heads to its ``ins``. An edge
with neither tail nor head is a closed circle. The track mutates in place;
callers that need to keep a stage around take a :meth:`Track.copy` first.

Edge content is opaque to this module: subclasses say how to join two
contents and how much a content weighs.
"""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import ConsistencyError, FreeEnd, NotASink


class Kind(enum.Enum):
    CONTRACTION = "contraction"
    EXPANSION = "expansion"


@dataclass
class Switch:
    id: int
    kind: Kind
    ins: list = field(default_factory=list)
    outs: list = field(default_factory=list)

    @property
    def branches(self) -> int:
        return len(self.ins) if self.kind is Kind.CONTRACTION else len(self.outs)

    @property
    def valence(self) -> int:
        return len(self.ins) + len(self.outs)


@dataclass
class Edge:
    id: int
    content: Any
    tail: tuple[int, int] | None = None
    head: tuple[int, int] | None = None

    @property
    def is_circle(self) -> bool:
        return self.tail is None and self.head is None


@dataclass(frozen=True)
class Cycle:
    """Periodic part of the contracting-direction walk v -> a(v)."""

    switches: tuple[int, ...]
    edges: tuple[int, ...]
    forward: bool
    coherent: bool


@dataclass
class SplitTrace:
    """Bookkeeping for a run of sink splits (one row per state)."""

    switch_counts: list[int] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)
    split_edges: list[int] = field(default_factory=list)

    @property
    def splits(self) -> int:
        return len(self.split_edges)


class Track:
    def __init__(self):
        self.switches: dict[int, Switch] = {}
        self.edges: dict[int, Edge] = {}
        self._next_switch = 0
        self._next_edge = 0

    # content protocol
    def join(self, a, b):
        return a + b

    def weight(self, content) -> int:
        raise NotImplementedError

    def infinitesimal(self):
        raise NotImplementedError

    # construction
    def new_edge(self, content) -> int:
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = Edge(eid, content)
        return eid

    def new_switch(self, kind: Kind, n_in: int, n_out: int) -> int:
        sid = self._next_switch
        self._next_switch += 1
        self.switches[sid] = Switch(sid, kind, [None] * n_in, [None] * n_out)
        return sid

    def attach_tail(self, eid: int, sid: int, port: int):
        self.edges[eid].tail = (sid, port)
        self.switches[sid].outs[port] = eid

    def attach_head(self, eid: int, sid: int, port: int):
        self.edges[eid].head = (sid, port)
        self.switches[sid].ins[port] = eid

    def copy(self):
        return copy.deepcopy(self)

    # queries
    def total_weight(self) -> int:
        return sum(self.weight(e.content) for e in self.edges.values())

    def circles(self) -> list[int]:
        return sorted(e.id for e in self.edges.values() if e.is_circle)

    def check(self):
        """Assert exact port occupancy."""
        for s in self.switches.values():
            for port, eid in enumerate(s.ins):
                if eid is None or self.edges[eid].head != (s.id, port):
                    raise ConsistencyError(f"switch {s.id} in-port {port} is inconsistent")
            for port, eid in enumerate(s.outs):
                if eid is None or self.edges[eid].tail != (s.id, port):
                    raise ConsistencyError(f"switch {s.id} out-port {port} is inconsistent")
            if s.kind is Kind.CONTRACTION and len(s.outs) != 1:
                raise ConsistencyError(f"contraction switch {s.id} needs exactly one outgoing edge")
            if s.kind is Kind.EXPANSION and len(s.ins) != 1:
                raise ConsistencyError(f"expansion switch {s.id} needs exactly one incoming edge")
        for e in self.edges.values():
            if (e.tail is None) != (e.head is None):
                raise ConsistencyError(f"edge {e.id} has a dangling end")
            if e.tail is not None:
                sid, port = e.tail
                if self.switches[sid].outs[port] != e.id:
                    raise ConsistencyError(f"edge {e.id} tail not registered")
                sid, port = e.head
                if self.switches[sid].ins[port] != e.id:
                    raise ConsistencyError(f"edge {e.id} head not registered")

    def components(self) -> list[tuple[set[int], set[int]]]:
        """Connected components as (switch ids, edge ids)."""
        parent = {("e", e): ("e", e) for e in self.edges}
        parent.update({("s", s): ("s", s) for s in self.switches})

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges.values():
            for end in (e.tail, e.head):
                if end is not None:
                    parent[find(("e", e.id))] = find(("s", end[0]))
        groups: dict = {}
        for node in parent:
            groups.setdefault(find(node), []).append(node)
        out = []
        for nodes in groups.values():
            out.append(({i for k, i in nodes if k == "s"}, {i for k, i in nodes if k == "e"}))
        out.sort(key=lambda c: (min(c[1]) if c[1] else -1, min(c[0]) if c[0] else -1))
        return out

    # rewriting
    def splice(self, links):
        """Concatenate edges along ``(a, b)`` links, head of a into tail of b.

        Linked ends must already be detached. Chains keep the id of their
        first edge; closed chains become circles keyed by their lowest id.
        """
        succ = dict(links)
        pred = {b: a for a, b in links}
        involved = sorted(set(succ) | set(pred))
        done = set()
        for eid in involved:
            if eid in pred or eid in done:
                continue
            chain = [eid]
            while chain[-1] in succ:
                chain.append(succ[chain[-1]])
            self._merge(chain, closed=False)
            done.update(chain)
        for eid in involved:
            if eid in done:
                continue
            chain = [eid]
            while succ[chain[-1]] != eid:
                chain.append(succ[chain[-1]])
            self._merge(chain, closed=True)
            done.update(chain)

    def _merge(self, chain, closed):
        first = self.edges[chain[0]]
        content = first.content
        for eid in chain[1:]:
            content = self.join(content, self.edges[eid].content)
        first.content = content
        if closed:
            first.tail = first.head = None
        else:
            first.head = self.edges[chain[-1]].head
            if first.head is not None:
                sid, port = first.head
                self.switches[sid].ins[port] = first.id
        for eid in chain[1:]:
            del self.edges[eid]

    def resolve(self, n: int):
        """Replace every switch with more than n branches by an n-ary tree."""
        for sid in sorted(self.switches):
            s = self.switches[sid]
            p = s.branches
            if p <= n:
                continue
            depth, size = 0, 1
            while size < p:
                size *= n
                depth += 1
            if size != p:
                raise ConsistencyError(f"switch {sid} has {p} branches, not a power of {n}")
            if s.kind is Kind.CONTRACTION:
                level = list(s.ins)
                while len(level) > n:
                    nxt = []
                    for g in range(0, len(level), n):
                        child = self.new_switch(Kind.CONTRACTION, n, 1)
                        for port, eid in enumerate(level[g:g + n]):
                            self.attach_head(eid, child, port)
                        link = self.new_edge(self.infinitesimal())
                        self.attach_tail(link, child, 0)
                        nxt.append(link)
                    level = nxt
                s.ins = [None] * n
                for port, eid in enumerate(level):
                    self.attach_head(eid, sid, port)
            else:
                level = list(s.outs)
                while len(level) > n:
                    nxt = []
                    for g in range(0, len(level), n):
                        child = self.new_switch(Kind.EXPANSION, 1, n)
                        for port, eid in enumerate(level[g:g + n]):
                            self.attach_tail(eid, child, port)
                        link = self.new_edge(self.infinitesimal())
                        self.attach_head(link, child, 0)
                        nxt.append(link)
                    level = nxt
                s.outs = [None] * n
                for port, eid in enumerate(level):
                    self.attach_tail(eid, sid, port)

    def contracting_direction(self, sid: int) -> tuple[int, bool, int]:
        """Return (edge id, forward?, a(v)) for the isolated edge at ``sid``.

        ``forward`` is True when the direction from v to a(v) agrees with
        the edge's orientation, which happens at contraction switches.
        """
        s = self.switches[sid]
        if s.kind is Kind.CONTRACTION:
            eid = s.outs[0]
            end = self.edges[eid].head
            forward = True
        else:
            eid = s.ins[0]
            end = self.edges[eid].tail
            forward = False
        if end is None:
            raise FreeEnd(f"isolated edge {eid} at switch {sid} has no far switch")
        return eid, forward, end[0]

    def is_sink(self, eid: int) -> bool:
        e = self.edges.get(eid)
        if e is None or e.tail is None:
            return False
        return (
            self.switches[e.tail[0]].kind is Kind.CONTRACTION
            and self.switches[e.head[0]].kind is Kind.EXPANSION
        )

    def sinks(self) -> Iterator[int]:
        for eid in sorted(self.edges):
            if self.is_sink(eid):
                yield eid

    def sink_is_balanced(self, eid: int) -> bool:
        e = self.edges[eid]
        return self.switches[e.tail[0]].branches == self.switches[e.head[0]].branches

    def find_sink(self) -> int | None:
        """Lowest-id sink whose two endpoint switches have equal valence."""
        for eid in self.sinks():
            if self.sink_is_balanced(eid):
                return eid
        return None

    def split_sink(self, eid: int):
        if not self.is_sink(eid):
            raise NotASink(f"edge {eid} is not a sink")
        if not self.sink_is_balanced(eid):
            raise NotASink(f"sink {eid} joins switches of different valence")
        e = self.edges[eid]
        v = self.switches.pop(e.tail[0])
        w = self.switches.pop(e.head[0])
        incoming, outgoing = list(v.ins), list(w.outs)
        for b in incoming:
            self.edges[b].head = None
        for c in outgoing:
            self.edges[c].tail = None
        e.tail = e.head = None
        copies = [eid] + [self.new_edge(e.content) for _ in range(len(incoming) - 1)]
        links = [(b, cp) for b, cp in zip(incoming, copies)]
        links += [(cp, c) for cp, c in zip(copies, outgoing)]
        self.splice(links)

    def split_all(self, trace: SplitTrace | None = None) -> SplitTrace:
        trace = trace if trace is not None else SplitTrace()
        trace.switch_counts.append(len(self.switches))
        trace.weights.append(self.total_weight())
        while (eid := self.find_sink()) is not None:
            self.split_sink(eid)
            trace.split_edges.append(eid)
            trace.switch_counts.append(len(self.switches))
            trace.weights.append(self.total_weight())
        return trace

    def attracting_cycles(self) -> list[Cycle]:
        """All periodic cycles of v -> a(v), each reported once.

        Walks are memoized so the whole pass is linear in the switch count.
        """
        nxt = {}
        for sid in self.switches:
            nxt[sid] = self.contracting_direction(sid)
        state: dict[int, int] = {}
        cycles = []
        for start in sorted(self.switches):
            if start in state:
                continue
            path = []
            x = start
            while x not in state:
                state[x] = 1
                path.append(x)
                x = nxt[x][2]
            if state[x] == 1:
                cyc = path[path.index(x):]
                k = cyc.index(min(cyc))
                cyc = cyc[k:] + cyc[:k]
                kinds = {self.switches[s].kind for s in cyc}
                cycles.append(
                    Cycle(
                        switches=tuple(cyc),
                        edges=tuple(nxt[s][0] for s in cyc),
                        forward=self.switches[cyc[0]].kind is Kind.CONTRACTION,
                        coherent=len(kinds) == 1,
                    )
                )
            for s in path:
                state[s] = 2
        return cycles

    def cycle_content(self, cycle: Cycle):
        """Content of a coherent cycle read in the direction of the edges."""
        order = cycle.edges if cycle.forward else tuple(reversed(cycle.edges))
        content = self.edges[order[0]].content
        for eid in order[1:]:
            content = self.join(content, self.edges[eid].content)
        return content

    def edge_label(self, e: Edge) -> str:
        return f"e{e.id} w={self.weight(e.content)}"

    def to_dot(self, name: str = "track") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for s in sorted(self.switches.values(), key=lambda s: s.id):
            shape = "invtriangle" if s.kind is Kind.CONTRACTION else "triangle"
            lines.append(f'  s{s.id} [shape={shape}, label="{s.kind.value[0].upper()}{s.id}"];')
        for e in sorted(self.edges.values(), key=lambda e: e.id):
            label = self.edge_label(e)
            if e.is_circle:
                lines.append(f'  c{e.id} [shape=circle, label="", width=0.15];')
                lines.append(f'  c{e.id} -> c{e.id} [label="{label}"];')
                continue
            (ts, tp), (hs, hp) = e.tail, e.head
            attrs = [f'label="{label}"']
            if len(self.switches[ts].outs) > 1:
                attrs.append(f'taillabel="{tp}"')
            if len(self.switches[hs].ins) > 1:
                attrs.append(f'headlabel="{hp}"')
            lines.append(f"  s{ts} -> s{hs} [{', '.join(attrs)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
