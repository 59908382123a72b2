"""Alternating link diagrams on the torus in TLD form.

A diagram is a 4-valent torus map whose vertices are crossings, plus an
over-marker at each crossing picking out the strand that passes on top.
Slots are numbered counterclockwise, so the over strand occupies two
opposite slots and is recorded by their common parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    Dart,
    Face,
    MapEdge,
    MapError,
    TLDError,
    TorusMap,
    Vec,
    check_tld_header,
    parse_dart_token,
    parse_int,
    tld_lines,
    vadd,
    vneg,
)

IDENTITY_LATTICE = ((1, 0), (0, 1))


@dataclass
class TorusDiagram:
    map: TorusMap
    over: dict  # crossing id -> parity in {0, 1} of the over strand's slots
    lattice: tuple = IDENTITY_LATTICE

    @property
    def crossings(self) -> list:
        return list(self.map.valences)

    def is_over(self, d: Dart) -> bool:
        v, s = d
        return s % 2 == self.over[v]

    def canonical_form(self) -> tuple:
        return self.map.canonical_form(dart_key=lambda d: 1 if self.is_over(d) else 0)


@dataclass
class FaceColoring:
    faces: list
    color: dict  # face index -> "shaded" | "white"

    def shaded(self, face_index: int) -> bool:
        return self.color[face_index] == "shaded"


# -- parsing and serialization ----------------------------------------------


def parse_diagram(text: str) -> TorusDiagram:
    lines = check_tld_header(tld_lines(text))
    over: dict = {}
    decl_line: dict = {}
    edges = []
    lattice = IDENTITY_LATTICE
    used: dict = {}
    for ln, fields in lines:
        kind = fields[0]
        if kind == "crossing":
            if len(fields) != 4 or fields[2] != "over":
                raise TLDError(ln, "expected 'crossing <id> over <slot>'")
            cid = fields[1]
            if cid in over:
                raise TLDError(ln, f"duplicate crossing id {cid!r}")
            slot = parse_int(fields[3], ln, "over slot")
            if not 0 <= slot < 4:
                raise TLDError(ln, f"over slot must be 0..3, got {slot}")
            over[cid] = slot % 2
            decl_line[cid] = ln
        elif kind == "edge":
            if len(fields) != 5:
                raise TLDError(ln, "expected 'edge a.s b.t dx dy'")
            a = parse_dart_token(fields[1], ln)
            b = parse_dart_token(fields[2], ln)
            shift = (parse_int(fields[3], ln, "dx"), parse_int(fields[4], ln, "dy"))
            if a == b:
                raise TLDError(ln, f"edge glues dart {fields[1]} to itself")
            for d in (a, b):
                if d in used:
                    raise TLDError(
                        ln, f"dart {d[0]}.{d[1]} already used on line {used[d]}"
                    )
                used[d] = ln
            edges.append((a, b, shift, ln))
        elif kind == "lattice":
            if len(fields) != 5:
                raise TLDError(ln, "expected 'lattice ax ay bx by'")
            nums = [parse_int(t, ln, "lattice entry") for t in fields[1:]]
            lattice = ((nums[0], nums[1]), (nums[2], nums[3]))
        elif kind == "vertex":
            raise TLDError(ln, "vertex lines describe tilings, expected crossings")
        else:
            raise TLDError(ln, f"unknown directive {kind!r}")
    for a, b, _, ln in edges:
        for v, s in (a, b):
            if v not in over:
                raise TLDError(ln, f"edge endpoint names undeclared crossing {v!r}")
            if not 0 <= s < 4:
                raise TLDError(ln, f"slot {s} out of range 0..3")
    for cid, ln in decl_line.items():
        for s in range(4):
            if (cid, s) not in used:
                raise TLDError(ln, f"dart {cid}.{s} is not covered by any edge")
    tmap = TorusMap({c: 4 for c in over}, [(a, b, sh) for a, b, sh, _ in edges])
    return TorusDiagram(tmap, over, lattice)


def serialize_diagram(diagram: TorusDiagram) -> str:
    out = ["tld 1"]
    for cid in sorted(diagram.over):
        out.append(f"crossing {cid} over {diagram.over[cid]}")
    out.extend(_serialize_edges(diagram.map))
    if diagram.lattice != IDENTITY_LATTICE:
        (ax, ay), (bx, by) = diagram.lattice
        out.append(f"lattice {ax} {ay} {bx} {by}")
    return "\n".join(out) + "\n"


def _serialize_edges(tmap: TorusMap) -> list:
    rows = []
    for e in tmap.edges:
        a, b, shift = e.a, e.b, e.shift
        if b < a:
            a, b, shift = b, a, vneg(shift)
        rows.append((a, b, shift))
    rows.sort()
    return [
        f"edge {a[0]}.{a[1]} {b[0]}.{b[1]} {sh[0]} {sh[1]}" for a, b, sh in rows
    ]


# -- strands and alternation --------------------------------------------------


def strand_next(diagram: TorusDiagram, d: Dart) -> Dart:
    """Follow the strand: cross the edge, leave by the opposite slot."""
    w, s = diagram.map.opposite(d)
    return (w, (s + 2) % 4)


def strand_orbits(diagram: TorusDiagram) -> list:
    orbits = []
    seen = set()
    for d0 in diagram.map.darts():
        if d0 in seen:
            continue
        orbit = []
        d = d0
        while True:
            seen.add(d)
            orbit.append(d)
            d = strand_next(diagram, d)
            if d == d0:
                break
        orbits.append(orbit)
    return orbits


def link_component_count(diagram: TorusDiagram) -> int:
    # each component is traced once in each direction
    n = len(strand_orbits(diagram))
    if n % 2:
        raise MapError("strand orbits do not pair up into components")
    return n // 2


def is_alternating(diagram: TorusDiagram) -> bool:
    for orbit in strand_orbits(diagram):
        passages = []
        for d in orbit:
            w, s = diagram.map.opposite(d)
            passages.append(s % 2 == diagram.over[w])
        n = len(passages)
        if n % 2:
            return False
        if any(passages[i] == passages[(i + 1) % n] for i in range(n)):
            return False
    return True


# -- checkerboard coloring ----------------------------------------------------


def trace_faces(diagram: TorusDiagram) -> FaceColoring:
    """Faces with the checkerboard coloring induced by the over-markers.

    The corner between slots s and s+1 at a crossing is shaded exactly
    when s has the crossing's over parity.  For an alternating diagram
    this rule is globally consistent.
    """
    tmap = diagram.map
    color: dict = {}
    for d in tmap.darts():
        f = tmap.face_of[d][0]
        c = "shaded" if diagram.is_over(d) else "white"
        if color.setdefault(f, c) != c:
            raise MapError(
                "over-markers induce no consistent checkerboard coloring"
            )
    return FaceColoring(tmap.faces, color)


# -- reducedness ----------------------------------------------------------------


def is_reduced(diagram: TorusDiagram) -> bool:
    """No face lift touches a crossing lift at two of its four corners."""
    tmap = diagram.map
    for c in diagram.crossings:
        corners = set()
        for s in range(4):
            f, i = tmap.face_of[(c, s)]
            corners.add((f, tmap.faces[f].offsets[i]))
        if len(corners) != 4:
            return False
    return True


# -- validation -----------------------------------------------------------------


def validate_basic(diagram: TorusDiagram) -> list:
    """Intrinsic checks; window-bounded tangle checks live elsewhere."""
    problems = []
    tmap = diagram.map
    if len(diagram.over) < 2:
        problems.append("fewer than 2 crossings")
    if not tmap.is_connected():
        problems.append("diagram is not connected")
        return problems
    chi = tmap.euler_characteristic()
    if chi != 0:
        problems.append(f"euler characteristic {chi}, expected 0")
    bad_faces = [f.index for f in tmap.faces if f.holonomy != (0, 0)]
    if bad_faces:
        problems.append("some face boundary has nonzero net translation")
    if not bad_faces and chi == 0 and not tmap.fills_torus():
        problems.append("loop translations span a proper sublattice")
    if problems:
        return problems
    if not is_alternating(diagram):
        problems.append("diagram is not alternating")
    if not is_reduced(diagram):
        problems.append("diagram is not reduced")
    return problems


# -- bigon collapse ---------------------------------------------------------------


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


def collapse_bigons(diagram: TorusDiagram):
    """Fuse each chain of bigon faces into a single edge.

    Returns the resulting tiling graph with face colors inherited from
    the diagram's checkerboard coloring and, as a matching hint, the set
    of edges that came from exactly two parallel diagram edges.
    """
    from .tiling import TilingGraph

    tmap = diagram.map
    coloring = trace_faces(diagram)
    bigons = [f for f in tmap.faces if f.degree == 2]

    edge_uf = _UnionFind(range(len(tmap.edges)))
    slot_uf = _UnionFind(tmap.darts())
    for f in bigons:
        d1, d2 = f.darts
        edge_uf.union(tmap.edge_index(d1), tmap.edge_index(d2))
        for v, s in (d1, d2):
            slot_uf.union((v, s), (v, (s + 1) % tmap.valences[v]))

    # new rotation: each vertex keeps one slot per fused arc, in the old
    # cyclic order
    new_slot: dict = {}
    new_valence: dict = {}
    arc_end: dict = {}
    for v, val in tmap.valences.items():
        reps = []
        for s in range(val):
            r = slot_uf.find((v, s))
            if r not in reps:
                reps.append(r)
        if len(reps) < 2:
            raise MapError(f"bigon collapse leaves vertex {v!r} with one slot")
        for s in range(val):
            new_slot[(v, s)] = reps.index(slot_uf.find((v, s)))
            if slot_uf.find((v, s)) != slot_uf.find((v, (s + 1) % val)):
                arc_end[(v, new_slot[(v, s)])] = (v, s)
        new_valence[v] = len(reps)

    classes: dict = {}
    for i in range(len(tmap.edges)):
        classes.setdefault(edge_uf.find(i), []).append(i)

    new_edges = []
    doubled = set()
    for root in sorted(classes, key=lambda r: min(classes[r])):
        members = classes[root]
        ends = set()
        for i in members:
            e = tmap.edges[i]
            ends.add((e.a[0], new_slot[e.a]))
            ends.add((e.b[0], new_slot[e.b]))
        if len(ends) != 2:
            raise MapError("fused bigon chain has a degenerate endpoint set")
        d0 = min(tmap.edges[i].a for i in members)
        a_new = (d0[0], new_slot[d0])
        b_old = tmap.opposite(d0)
        b_new = (b_old[0], new_slot[b_old])
        shift = tmap.shift_from(d0)
        for i in members:
            e = tmap.edges[i]
            sa = tmap.shift_from(e.a)
            if (e.a[0], new_slot[e.a]) == a_new:
                ok = sa == shift
            else:
                ok = sa == vneg(shift)
            if not ok:
                raise MapError("fused parallel edges carry different translations")
        if len(members) == 2:
            doubled.add(len(new_edges))
        new_edges.append(MapEdge(a_new, b_new, shift))

    new_map = TorusMap(new_valence, new_edges)

    # colors: the surviving corner at (v, new slot) is the old corner at
    # the arc's last old slot, whose face was not a bigon
    new_colors: dict = {}
    for d in new_map.darts():
        nf = new_map.face_of[d][0]
        old_d = arc_end[d]
        c = coloring.color[tmap.face_of[old_d][0]]
        if new_colors.setdefault(nf, c) != c:
            raise MapError("bigon collapse produced inconsistent face colors")
    for f in new_map.faces:
        if f.degree == 2:
            raise MapError("bigon collapse left a bigon face")

    return TilingGraph(new_map, new_colors, doubled_hint=doubled, lattice=diagram.lattice)
