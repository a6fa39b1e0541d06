"""JSON documents for maps, Markov tables, tracks and reports.

Rationals are always strings matching ``-?D+`` or ``-?D+/D+`` (D a decimal
digit), for example ``"3/8"``, ``"-1/2"`` or ``"0"``. They are parsed
exactly and written back in lowest terms. A map document is::

    {"base": 2,
     "pieces": [{"domain_left": "0", "exponent": -1, "image_left": "0"}, ...]}

``exponent`` is a JSON integer k, the slope on that piece being base**k.
Documents are written with two-space indentation, keys in a fixed order
and a trailing newline, so normal forms round-trip byte for byte.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import ConsistencyError, FormatError
from .flows import AbstractTrack
from .markov import ContractMember, Expand, Identity, MarkovTable
from .plmap import PLCircleMap, validate_map
from .tracks import Edge, Kind, Switch
from .traintrack import DynamicsReport, Orbit, TrainTrack

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise FormatError(f"rational must be a string like 'p/q', got {text!r}")
    text = str(text)
    if not _RATIONAL.fullmatch(text):
        raise FormatError(f"bad rational literal {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise FormatError(f"zero denominator in {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{what} must be an integer, got {value!r}")
    return value


def map_to_doc(t: PLCircleMap) -> dict:
    return {
        "base": t.base,
        "pieces": [
            {
                "domain_left": format_rational(p.domain_left),
                "exponent": p.exponent,
                "image_left": format_rational(p.image_left),
            }
            for p in t.pieces
        ],
    }


def map_from_doc(doc) -> PLCircleMap:
    try:
        base = _int(doc["base"], "base")
        pieces = doc["pieces"]
        raw = [
            (parse_rational(p["domain_left"]), _int(p["exponent"], "exponent"), parse_rational(p["image_left"]))
            for p in pieces
        ]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed map document: {exc!r}") from exc
    return validate_map(raw, base)


def table_to_doc(table: MarkovTable) -> dict:
    entries = []
    for e in table.entries:
        if isinstance(e, Expand):
            entries.append({"type": "expand", "k": e.k, "target_start": e.target_start})
        elif isinstance(e, Identity):
            entries.append({"type": "identity", "target": e.target})
        else:
            entries.append(
                {"type": "contract", "k": e.k, "strip_start": e.strip_start, "position": e.position, "target": e.target}
            )
    return {"base": table.base, "m": table.m, "entries": entries}


def table_from_doc(doc) -> MarkovTable:
    try:
        entries = []
        for e in doc["entries"]:
            kind = e["type"]
            if kind == "expand":
                entries.append(Expand(_int(e["k"], "k"), _int(e["target_start"], "target_start")))
            elif kind == "identity":
                entries.append(Identity(_int(e["target"], "target")))
            elif kind == "contract":
                entries.append(
                    ContractMember(
                        _int(e["k"], "k"),
                        _int(e["strip_start"], "strip_start"),
                        _int(e["position"], "position"),
                        _int(e["target"], "target"),
                    )
                )
            else:
                raise FormatError(f"unknown entry type {kind!r}")
        return MarkovTable(_int(doc["base"], "base"), _int(doc["m"], "m"), tuple(entries))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed table document: {exc!r}") from exc


def _end(end):
    return None if end is None else {"switch": end[0], "port": end[1]}


def track_to_doc(track) -> dict:
    """Serialize an abstract track, or a train track with its interval items."""
    switches = [
        {"id": s.id, "kind": s.kind.value, "valence": s.valence, "ins": list(s.ins), "outs": list(s.outs)}
        for s in sorted(track.switches.values(), key=lambda s: s.id)
    ]
    edges = []
    for e in sorted(track.edges.values(), key=lambda e: e.id):
        row = {"id": e.id, "weight": track.weight(e.content)}
        if isinstance(track, TrainTrack):
            row["intervals"] = list(track.intervals(e.content))
        row["tail"] = _end(e.tail)
        row["head"] = _end(e.head)
        edges.append(row)
    doc = {"switches": switches, "edges": edges}
    if isinstance(track, AbstractTrack) and track.meta:
        doc["meta"] = track.meta
    return doc


def track_from_doc(doc) -> AbstractTrack:
    """Load an abstract track; switch port lists must agree with edge ends."""
    try:
        tr = AbstractTrack(doc.get("meta"))
        for s in doc["switches"]:
            kind = Kind(s["kind"])
            ins, outs = list(s["ins"]), list(s["outs"])
            if len(ins) + len(outs) != _int(s["valence"], "valence"):
                raise FormatError(f"switch {s['id']} valence disagrees with its ports")
            sid = _int(s["id"], "switch id")
            if sid in tr.switches:
                raise FormatError(f"duplicate switch id {sid}")
            tr.switches[sid] = Switch(sid, kind, [None] * len(ins), [None] * len(outs))
            tr._next_switch = max(tr._next_switch, sid + 1)
        for e in doc["edges"]:
            eid = _int(e["id"], "edge id")
            weight = _int(e["weight"], "weight")
            if weight < 0:
                raise FormatError(f"edge {eid} has negative weight")
            if eid in tr.edges:
                raise FormatError(f"duplicate edge id {eid}")
            tr.edges[eid] = Edge(eid, weight)
            tr._next_edge = max(tr._next_edge, eid + 1)
            if (e["tail"] is None) != (e["head"] is None):
                raise FormatError(f"edge {eid} has exactly one free end")
            if e["tail"] is not None:
                tr.attach_tail(eid, e["tail"]["switch"], e["tail"]["port"])
                tr.attach_head(eid, e["head"]["switch"], e["head"]["port"])
        for s in doc["switches"]:
            if list(s["ins"]) != tr.switches[s["id"]].ins or list(s["outs"]) != tr.switches[s["id"]].outs:
                raise FormatError(f"switch {s['id']} port lists disagree with edge ends")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed track document: {exc!r}") from exc
    try:
        tr.check()
    except ConsistencyError as exc:
        raise FormatError(str(exc)) from exc
    return tr


def _orbit_doc(o: Orbit) -> dict:
    doc = {
        "itinerary": list(o.itinerary),
        "interval_count": o.interval_count,
        "point": format_rational(o.point),
        "rotation_number": format_rational(o.rotation_number),
        "return_slope": format_rational(o.return_slope),
    }
    if o.direction is not None:
        doc["direction"] = o.direction
    return doc


def report_to_doc(report: DynamicsReport) -> dict:
    return {
        "base": report.base,
        "height": report.height,
        "rotation_number": format_rational(report.rotation_number),
        "least_period": report.least_period,
        "periodic_point": format_rational(report.periodic_point),
        "bound": report.bound,
        "circles": [_orbit_doc(o) for o in report.circles],
        "cycles": [_orbit_doc(o) for o in report.cycles],
    }


def load_document(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def load_map(path) -> PLCircleMap:
    return map_from_doc(load_document(path))


def load_track(path) -> AbstractTrack:
    return track_from_doc(load_document(path))


def write_document(path, doc):
    Path(path).write_text(dumps(doc))
