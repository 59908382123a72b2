"""Tiling graphs on the torus and their alternating links.

A tiling graph is what is left of a link diagram after collapsing its
bigons: vertices of valence 3 or 4 with 2-colored faces.  Going the
other way, doubling a perfect matching on the 3-valent vertices and
choosing over-markers from the shading realizes an alternating link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    MapError,
    TLDError,
    TorusMap,
    check_tld_header,
    parse_dart_token,
    parse_int,
    tld_lines,
)
from .develop import Developed, develop, normalized_tau

IDENTITY_LATTICE = ((1, 0), (0, 1))

FOUR_VALENT_TYPES = {
    "4.4.4.4": (4, 4, 4, 4),
    "3.6.3.6": (3, 6, 3, 6),
    "3.3.6.6": (3, 3, 6, 6),
    "3.4.6.4": (3, 4, 6, 4),
    "3.4.4.6": (3, 4, 4, 6),
}

THREE_VALENT_POLYGONS = (3, 4, 6, 8, 12)


@dataclass
class TilingGraph:
    map: TorusMap
    colors: Optional[dict] = None  # face index -> "shaded" | "white"
    doubled_hint: Optional[set] = None  # edges that came from doubled pairs
    lattice: tuple = IDENTITY_LATTICE

    @property
    def vertices(self) -> list:
        return list(self.map.valences)

    def canonical_form(self) -> tuple:
        colors = self.colors

        def key(d):
            if colors is None:
                return 0
            return 1 if colors[self.map.face_of[d][0]] == "shaded" else 0

        return self.map.canonical_form(dart_key=key)


# -- parsing and serialization ------------------------------------------------


def parse_tiling(text: str) -> TilingGraph:
    lines = check_tld_header(tld_lines(text))
    valence: dict = {}
    decl_line: dict = {}
    edges = []
    lattice = IDENTITY_LATTICE
    used: dict = {}
    for ln, fields in lines:
        kind = fields[0]
        if kind == "vertex":
            if len(fields) != 4 or fields[2] != "valence":
                raise TLDError(ln, "expected 'vertex <id> valence <n>'")
            vid = fields[1]
            if vid in valence:
                raise TLDError(ln, f"duplicate vertex id {vid!r}")
            val = parse_int(fields[3], ln, "valence")
            if not 2 <= val <= 12:
                raise TLDError(ln, f"valence must be 2..12, got {val}")
            valence[vid] = val
            decl_line[vid] = ln
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
        elif kind == "crossing":
            raise TLDError(ln, "crossing lines describe diagrams, expected vertices")
        else:
            raise TLDError(ln, f"unknown directive {kind!r}")
    for a, b, _, ln in edges:
        for v, s in (a, b):
            if v not in valence:
                raise TLDError(ln, f"edge endpoint names undeclared vertex {v!r}")
            if not 0 <= s < valence[v]:
                raise TLDError(ln, f"slot {s} out of range at vertex {v!r}")
    for vid, ln in decl_line.items():
        for s in range(valence[vid]):
            if (vid, s) not in used:
                raise TLDError(ln, f"dart {vid}.{s} is not covered by any edge")
    tmap = TorusMap(valence, [(a, b, sh) for a, b, sh, _ in edges])
    return TilingGraph(tmap, lattice=lattice)


def serialize_tiling(tiling: TilingGraph) -> str:
    from .diagram import _serialize_edges

    out = ["tld 1"]
    for vid in sorted(tiling.map.valences):
        out.append(f"vertex {vid} valence {tiling.map.valences[vid]}")
    out.extend(_serialize_edges(tiling.map))
    if tiling.lattice != IDENTITY_LATTICE:
        (ax, ay), (bx, by) = tiling.lattice
        out.append(f"lattice {ax} {ay} {bx} {by}")
    return "\n".join(out) + "\n"


# -- vertex classification -----------------------------------------------------


@dataclass
class VertexTypeReport:
    vertex_types: dict  # vertex -> tuple of corner face degrees, ccw
    semi_regular: bool
    failures: list


def _cyclic_min(seq: tuple) -> tuple:
    n = len(seq)
    variants = []
    for rev in (seq, tuple(reversed(seq))):
        for i in range(n):
            variants.append(rev[i:] + rev[:i])
    return min(variants)


def classify_vertices(tiling: TilingGraph) -> VertexTypeReport:
    """Match every vertex against the allowed semi-regular corner types.

    4-valent vertices must realize one of the five admissible types; the
    near-miss 3.4.3.12 satisfies the flat angle sum but is rejected.
    3-valent vertices must surround allowed polygons whose regular
    corner angles sum to a flat vertex.
    """
    from fractions import Fraction

    for degs in FOUR_VALENT_TYPES.values():
        assert sum(Fraction(1, n) for n in degs) == 1
    tmap = tiling.map
    four_types = {_cyclic_min(t) for t in FOUR_VALENT_TYPES.values()}
    types = {}
    failures = []
    for v, val in tmap.valences.items():
        corner = tuple(
            tmap.faces[tmap.corner_face((v, s))].degree for s in range(val)
        )
        types[v] = corner
        if val == 4:
            if _cyclic_min(corner) not in four_types:
                failures.append(f"vertex {v}: type {corner} is not semi-regular")
        elif val == 3:
            if any(n not in THREE_VALENT_POLYGONS for n in corner):
                failures.append(f"vertex {v}: polygon degrees {corner} not allowed")
            elif sum(Fraction(2, n) for n in corner) != 1:
                failures.append(f"vertex {v}: corner angles of {corner} do not fit")
        else:
            failures.append(f"vertex {v}: valence {val} is not 3 or 4")
    return VertexTypeReport(types, not failures, failures)


@dataclass
class CensusReport:
    vertices: int
    edges: int
    faces: int
    face_census: dict
    identities: list  # (description, bool)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.identities)


def check_census(tiling: TilingGraph) -> CensusReport:
    tmap = tiling.map
    v = len(tmap.valences)
    e = len(tmap.edges)
    f = len(tmap.faces)
    census = tmap.face_degree_census()
    val_sum = sum(tmap.valences.values())
    ids = [
        ("V - E + F = 0", v - e + f == 0),
        ("2E = sum of valences", 2 * e == val_sum),
        ("corner count = sum of valences", sum(n * c for n, c in census.items()) == val_sum),
    ]
    if all(x == 4 for x in tmap.valences.values()):
        ids.append(("E = 2V", e == 2 * v))
        ids.append(("F = V", f == v))
        if classify_vertices(tiling).semi_regular:
            ids.append(("T = 2H", census.get(3, 0) == 2 * census.get(6, 0)))
    return CensusReport(v, e, f, census, ids)


# -- perfect matching on the 3-valent vertices -----------------------------------


def matchings(tiling: TilingGraph):
    """All sets of disjoint edges covering exactly the 3-valent vertices,
    in the deterministic order of backtracking over edge indices."""
    tmap = tiling.map
    targets = [v for v, val in tmap.valences.items() if val == 3]
    incident: dict = {v: [] for v in targets}
    for i, e in enumerate(tmap.edges):
        u, w = e.a[0], e.b[0]
        if u == w:
            continue
        if u in incident and w in incident:
            incident[u].append(i)
            incident[w].append(i)

    covered: set = set()
    chosen: list = []

    def extend():
        rest = [v for v in targets if v not in covered]
        if not rest:
            yield sorted(chosen)
            return
        v = rest[0]
        for i in incident[v]:
            e = tmap.edges[i]
            other = e.b[0] if e.a[0] == v else e.a[0]
            if other in covered:
                continue
            covered.add(v)
            covered.add(other)
            chosen.append(i)
            yield from extend()
            chosen.pop()
            covered.discard(v)
            covered.discard(other)

    yield from extend()


def perfect_matching(tiling: TilingGraph) -> Optional[list]:
    """First matching found by the deterministic search, or None."""
    for m in matchings(tiling):
        return m
    return None


def colorable_matching(tiling: TilingGraph) -> Optional[tuple]:
    """First matching that admits a checkerboard coloring, with the colors."""
    for m in matchings(tiling):
        try:
            return m, derive_colors(tiling, m)
        except MapError:
            continue
    return None


# -- face coloring ------------------------------------------------------------------


class _ParityUF:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 0 for x in items}

    def root(self, x):
        par = 0
        while self.parent[x] != x:
            par ^= self.parity[x]
            x = self.parent[x]
        return x, par

    def union(self, x, y, rel) -> bool:
        rx, px = self.root(x)
        ry, py = self.root(y)
        if rx == ry:
            return (px ^ py) == rel
        self.parent[rx] = ry
        self.parity[rx] = px ^ py ^ rel
        return True


def derive_colors(tiling: TilingGraph, matching: list) -> dict:
    """Shaded/white face colors compatible with the matching.

    At a 4-valent vertex corner colors alternate.  At a matched 3-valent
    vertex the two corners beside the matched edge agree and the third
    corner, where the bigon of the realized link will sit, differs.
    """
    tmap = tiling.map
    mslot: dict = {}
    for i in matching:
        e = tmap.edges[i]
        mslot[e.a[0]] = e.a[1]
        mslot[e.b[0]] = e.b[1]
    uf = _ParityUF(range(len(tmap.faces)))
    for v, val in tmap.valences.items():
        cf = [tmap.corner_face((v, s)) for s in range(val)]
        if val == 4:
            constraints = [(cf[s], cf[(s + 1) % 4], 1) for s in range(4)]
        elif val == 3:
            if v not in mslot:
                raise MapError(f"3-valent vertex {v!r} is not covered by the matching")
            m = mslot[v]
            constraints = [
                (cf[m], cf[(m + 2) % 3], 0),
                (cf[m], cf[(m + 1) % 3], 1),
            ]
        else:
            raise MapError(f"vertex {v!r} has valence {val}, expected 3 or 4")
        for a, b, rel in constraints:
            if not uf.union(a, b, rel):
                raise MapError("faces admit no consistent checkerboard coloring")
    anchor = tmap.corner_face((next(iter(tmap.valences)), 0))
    base: dict = {}
    r, p = uf.root(anchor)
    base[r] = p
    for f in range(len(tmap.faces)):
        r, p = uf.root(f)
        base.setdefault(r, p)
    return {
        f: ("shaded" if uf.root(f)[1] == base[uf.root(f)[0]] else "white")
        for f in range(len(tmap.faces))
    }


# -- link realization -----------------------------------------------------------------


def realize_link(tiling: TilingGraph, matching: Optional[list] = None):
    """Double the matched edges into bigons and put over-markers on the
    crossings so that every over strand has shaded corners beside it.

    When no matching is given, stored doubling hints win, then the first
    matching that admits a checkerboard coloring."""
    from .diagram import TorusDiagram, is_alternating

    tmap = tiling.map
    for v, val in tmap.valences.items():
        if val not in (3, 4):
            raise MapError(f"vertex {v!r} has valence {val}, expected 3 or 4")
    three = {v for v, val in tmap.valences.items() if val == 3}
    colors = tiling.colors
    if matching is None:
        if tiling.doubled_hint is not None:
            matching = sorted(tiling.doubled_hint)
        elif colors is not None:
            matching = perfect_matching(tiling)
            if matching is None:
                raise MapError("tiling has no perfect matching on 3-valent vertices")
        else:
            found = colorable_matching(tiling)
            if found is None:
                raise MapError(
                    "tiling has no colorable perfect matching on 3-valent vertices"
                )
            matching, colors = found
    mset = set(matching)
    mslot: dict = {}
    for i in mset:
        e = tmap.edges[i]
        u, w = e.a[0], e.b[0]
        if u == w:
            raise MapError("matched edge is a loop")
        for v, s in (e.a, e.b):
            if v not in three:
                raise MapError(f"matched edge touches 4-valent vertex {v!r}")
            if v in mslot:
                raise MapError(f"vertex {v!r} is matched twice")
            mslot[v] = s
    if set(mslot) != three:
        missing = sorted(three - set(mslot))
        raise MapError(f"matching misses 3-valent vertices {missing}")

    if colors is None:
        colors = derive_colors(tiling, sorted(mset))

    def new_slot(v, s):
        if v in mslot and s > mslot[v]:
            return s + 1
        return s

    new_edges = []
    for i, e in enumerate(tmap.edges):
        (u, a), (w, b), h = e.a, e.b, e.shift
        na, nb = new_slot(u, a), new_slot(w, b)
        if i in mset:
            new_edges.append(((u, na), (w, nb + 1), h))
            new_edges.append(((u, na + 1), (w, nb), h))
        else:
            new_edges.append(((u, na), (w, nb), h))
    new_map = TorusMap({v: 4 for v in tmap.valences}, new_edges)

    def corner_color(v, t):
        if v in mslot:
            m = mslot[v]
            if t == m:
                side = colors[tmap.corner_face((v, m))]
                return "white" if side == "shaded" else "shaded"
            if t == m + 1:
                return colors[tmap.corner_face((v, m))]
            if t > m + 1:
                return colors[tmap.corner_face((v, t - 1))]
            return colors[tmap.corner_face((v, t))]
        return colors[tmap.corner_face((v, t))]

    over: dict = {}
    for v in tmap.valences:
        shaded_slots = [t for t in range(4) if corner_color(v, t) == "shaded"]
        if len(shaded_slots) != 2 or (shaded_slots[1] - shaded_slots[0]) != 2:
            raise MapError(
                f"colors at vertex {v!r} do not alternate around the crossing"
            )
        over[v] = shaded_slots[0] % 2

    link = TorusDiagram(new_map, over, tiling.lattice)
    if not is_alternating(link):
        raise MapError("realized link failed the alternation check")
    return link


# -- right-angled recognition -----------------------------------------------------------


@dataclass
class RightAngledReport:
    verdict: str  # "square-weave" | "triaxial" | "not-right-angled"
    reason: str
    witness_angle: Optional[float] = None
    witness_edge: Optional[int] = None

    @property
    def right_angled(self) -> bool:
        return self.verdict != "not-right-angled"


def right_angled_class(tiling: TilingGraph) -> RightAngledReport:
    """Decide whether every torihedral dihedral angle is a right angle.

    The candidate angle along an edge between faces of degrees m and n
    is pi*(1/m + 1/n); it equals pi/2 exactly for square-square and
    triangle-hexagon edges, so only the two right-angled families pass.
    """
    tmap = tiling.map
    if any(val != 4 for val in tmap.valences.values()):
        return RightAngledReport(
            "not-right-angled",
            "3-valent vertices force bigons, whose angles cannot be right",
        )
    pairs = set()
    for i, e in enumerate(tmap.edges):
        m = tmap.faces[tmap.face_of[e.a][0]].degree
        n = tmap.faces[tmap.face_of[e.b][0]].degree
        angle = math.pi * (1.0 / m + 1.0 / n)
        if abs(angle - math.pi / 2) > 1e-12:
            return RightAngledReport(
                "not-right-angled",
                f"edge {i} lies between a {m}-gon and an {n}-gon",
                witness_angle=angle,
                witness_edge=i,
            )
        pairs.add((min(m, n), max(m, n)))
    if pairs == {(4, 4)}:
        return RightAngledReport("square-weave", "all edges are square-square")
    if pairs == {(3, 6)}:
        return RightAngledReport("triaxial", "all edges are triangle-hexagon")
    return RightAngledReport(
        "not-right-angled", "mixed right-angle edge types do not close up"
    )


# -- exact layout ---------------------------------------------------------------------------


def layout(tiling: TilingGraph) -> Developed:
    """Develop the tiling with regular unit-edge polygons."""
    tmap = tiling.map
    wedge: dict = {}
    radius: dict = {}
    for f in tmap.faces:
        n = f.degree
        if n < 3:
            raise MapError("layout requires faces of degree at least 3")
        radius[f.index] = 1.0 / (2.0 * math.sin(math.pi / n))
        for d in f.darts:
            wedge[d] = 2.0 * math.pi / n
    return develop(tmap, wedge, radius)


def layout_modulus(tiling: TilingGraph) -> complex:
    dev = layout(tiling)
    return normalized_tau(dev.t1, dev.t2)
