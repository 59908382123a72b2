"""Ideal triangulations of alternating torus link complements.

The complement of an alternating link in the thickened torus splits
into two cone polyhedra over the bigon-collapsed tiling, glued to each
other by rotating every face one edge along its boundary: white faces
rotate clockwise, shaded faces counterclockwise.  Coning each face to
both apexes and splitting the resulting bipyramid along its axis gives
an ideal triangulation whose edges fall into three kinds: horizontal
(between two tiling vertices), vertical (tiling vertex to an apex), and
stellating (the bipyramid axes).  A 3-2 move trades the three
tetrahedra of each triangle bipyramid for two caps, the form the
angle-structure machinery consumes.

Tetrahedron vertices are positional: 0 and 1 are the top and bottom
apexes of the bipyramid (caps keep one apex at position 0), 2 and 3 are
tiling vertices.  Opposite vertex pairs index the three dihedral-angle
slots via edge_slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .diagram import TorusDiagram, _UnionFind, collapse_bigons, validate_basic
from .tiling import TilingGraph

TOP = "+inf"
BOT = "-inf"

_EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class TriangulationError(Exception):
    pass


def edge_slot(p: int, q: int) -> int:
    """Angle slot of the tetrahedron edge between vertex positions p, q.

    Opposite edges share a slot: 01/23 -> 0, 02/13 -> 1, 03/12 -> 2.
    """
    lo, hi = min(p, q), max(p, q)
    if lo == 0:
        return hi - 1
    return {(1, 2): 2, (1, 3): 1, (2, 3): 0}[(lo, hi)]


@dataclass(frozen=True)
class Tetrahedron:
    index: int
    corners: tuple  # four ideal vertex names, positional
    face: int  # tiling face the tetrahedron came from
    kind: str  # "sector" (bipyramid wedge) or "cap" (after a 3-2 move)
    sector: int  # boundary position for sectors; 0 = top, 1 = bottom cap


@dataclass(frozen=True)
class EdgeClass:
    label: str  # "horizontal" | "vertical" | "stellating"
    members: tuple  # ((tet index, (p, q)), ...) sorted

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CuspClass:
    label: str  # "top" | "bot" | "link-<k>"
    members: tuple  # ((tet index, position), ...) sorted


def _perm_is_odd(perm: dict) -> bool:
    seen: set = set()
    cycles = 0
    for start in perm:
        if start in seen:
            continue
        cycles += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = perm[x]
    return (len(perm) - cycles) % 2 == 1


def _add_pairing(pairings: dict, t1: int, tri1: tuple, t2: int, tri2: tuple) -> None:
    for tk, ta, tb in ((0, t1, t2), (1, t2, t1)):
        src, dst = (tri1, tri2) if tk == 0 else (tri2, tri1)
        order = sorted(range(3), key=lambda k: src[k])
        key = (ta, tuple(src[k] for k in order))
        val = (tb, tuple(dst[k] for k in order))
        prev = pairings.get(key)
        if prev is not None and prev != val:
            raise TriangulationError("two gluings claim the same tetrahedron face")
        pairings[key] = val


@dataclass
class IdealTriangulation:
    """Tetrahedra plus face pairings over a 2-colored tiling.

    pairings maps (tet, (a, b, c)) with a < b < c to (tet', (a', b', c'))
    where position a glues to a' and so on; both directions are stored.
    """

    tets: list
    pairings: dict
    tiling: TilingGraph
    moved: bool = False  # True once 3-2 moves have been applied
    _edge_cache: Optional[list] = field(
        default=None, init=False, repr=False, compare=False
    )
    _cusp_cache: Optional[list] = field(
        default=None, init=False, repr=False, compare=False
    )

    def _edge_label(self, tet: int, pair: tuple) -> str:
        names = (self.tets[tet].corners[pair[0]], self.tets[tet].corners[pair[1]])
        apexes = sum(1 for n in names if n in (TOP, BOT))
        return ("horizontal", "vertical", "stellating")[apexes]

    @property
    def edge_classes(self) -> list:
        if self._edge_cache is not None:
            return self._edge_cache
        uf = _UnionFind(
            [(t.index, pair) for t in self.tets for pair in _EDGE_PAIRS]
        )
        for (t1, tri), (t2, img) in self.pairings.items():
            fwd = dict(zip(tri, img))
            for a, b in combinations(tri, 2):
                x, y = fwd[a], fwd[b]
                uf.union((t1, (a, b)), (t2, (min(x, y), max(x, y))))
        groups: dict = {}
        for t in self.tets:
            for pair in _EDGE_PAIRS:
                groups.setdefault(uf.find((t.index, pair)), []).append(
                    (t.index, pair)
                )
        classes = []
        for members in groups.values():
            members.sort()
            labels = {self._edge_label(t, pair) for t, pair in members}
            if len(labels) != 1:
                raise TriangulationError("an edge class mixes edge kinds")
            label = labels.pop()
            if label == "vertical":
                apexes = {
                    n
                    for t, pair in members
                    for n in (self.tets[t].corners[pair[0]], self.tets[t].corners[pair[1]])
                    if n in (TOP, BOT)
                }
                if len(apexes) != 1:
                    raise TriangulationError("a vertical edge class mixes apexes")
            if label == "stellating":
                if len({self.tets[t].face for t, _ in members}) != 1:
                    raise TriangulationError("a stellating edge class spans two faces")
            classes.append(EdgeClass(label, tuple(members)))
        classes.sort(key=lambda c: (c.label, c.members[0]))
        self._edge_cache = classes
        return classes

    @property
    def cusps(self) -> list:
        if self._cusp_cache is not None:
            return self._cusp_cache
        uf = _UnionFind([(t.index, p) for t in self.tets for p in range(4)])
        for (t1, tri), (t2, img) in self.pairings.items():
            for a, b in zip(tri, img):
                uf.union((t1, a), (t2, b))
        groups: dict = {}
        for t in self.tets:
            for p in range(4):
                groups.setdefault(uf.find((t.index, p)), []).append((t.index, p))
        raw = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
        cusps = []
        link = 0
        for members in raw:
            names = {self.tets[t].corners[p] for t, p in members}
            if TOP in names or BOT in names:
                if len(names) != 1:
                    raise TriangulationError("an apex cusp touches the projection level")
                label = "top" if TOP in names else "bot"
            else:
                label = f"link-{link}"
                link += 1
            cusps.append(CuspClass(label, tuple(members)))
        cusps.sort(key=lambda c: (c.label not in ("top", "bot"), c.label))
        self._cusp_cache = cusps
        return cusps

    def link_cusp_count(self) -> int:
        return sum(1 for c in self.cusps if c.label.startswith("link"))

    def check(self) -> None:
        """Structural validation: every face glued once, involution with
        no fixed face, and all gluings orientation-reversing on faces."""
        n = len(self.tets)
        for i, t in enumerate(self.tets):
            if t.index != i:
                raise TriangulationError("tetrahedron indices are out of order")
        if len(self.pairings) != 4 * n:
            raise TriangulationError("face pairing table has the wrong size")
        for t in range(n):
            for tri in combinations(range(4), 3):
                if (t, tri) not in self.pairings:
                    raise TriangulationError("a tetrahedron face is not glued")
        for (t1, tri), (t2, img) in self.pairings.items():
            if t1 == t2 and tri == tuple(sorted(img)):
                raise TriangulationError("a face is glued to itself")
            back_key = (t2, tuple(sorted(img)))
            bt, bimg = self.pairings[back_key]
            fwd = dict(zip(tri, img))
            back = dict(zip(back_key[1], bimg))
            if bt != t1 or any(back[fwd[p]] != p for p in tri):
                raise TriangulationError("face pairings are not an involution")
            perm = dict(fwd)
            perm[next(p for p in range(4) if p not in tri)] = next(
                p for p in range(4) if p not in img
            )
            if not _perm_is_odd(perm):
                raise TriangulationError("a face gluing reverses orientation")


# -- the two cone polyhedra -----------------------------------------------------


@dataclass
class Torihedron:
    """One of the two cones over the bigon-collapsed tiling.

    rotation maps each tiling face to the boundary rotation (+1 one step
    counterclockwise for shaded, -1 clockwise for white) its gluing to
    the opposite cone applies.
    """

    side: str  # "upper" | "lower"
    tiling: TilingGraph
    rotation: dict

    @property
    def face_degrees(self) -> list:
        return sorted(f.degree for f in self.tiling.map.faces)


def _rotations(tiling: TilingGraph) -> dict:
    # Faces across a collapsed bigon chain share a color, so the tiling
    # need not checkerboard; each face only needs its own color.
    if tiling.colors is None:
        raise TriangulationError("tiling carries no face 2-coloring")
    rot = {}
    for f in tiling.map.faces:
        color = tiling.colors.get(f.index)
        if color not in ("shaded", "white"):
            raise TriangulationError(f"face {f.index} has no valid color")
        rot[f.index] = 1 if color == "shaded" else -1
    return rot


def build_torihedra(diagram: TorusDiagram) -> tuple:
    """The upper and lower cone polyhedra of an alternating diagram."""
    problems = validate_basic(diagram)
    if problems:
        raise TriangulationError(problems[0])
    tiling = collapse_bigons(diagram)
    rot = _rotations(tiling)
    return (
        Torihedron("upper", tiling, rot),
        Torihedron("lower", tiling, rot),
    )


def glued_edge_classes(upper: Torihedron, lower: Torihedron) -> list:
    """Edge classes of the glued pair, as lists of (side, edge index).

    Each face's boundary edge i on the upper cone is identified with
    edge i+rotation on the lower cone; classes collect the orbits.
    """
    if upper.tiling is not lower.tiling and (
        upper.tiling.canonical_form() != lower.tiling.canonical_form()
    ):
        raise TriangulationError("the two cones are over different tilings")
    tmap = upper.tiling.map
    uf = _UnionFind(
        [(side, i) for side in ("upper", "lower") for i in range(len(tmap.edges))]
    )
    for f in tmap.faces:
        n = f.degree
        for i in range(n):
            e_up = tmap.edge_index(f.darts[i])
            e_dn = tmap.edge_index(f.darts[(i + upper.rotation[f.index]) % n])
            uf.union(("upper", e_up), ("lower", e_dn))
    groups: dict = {}
    for side in ("upper", "lower"):
        for i in range(len(tmap.edges)):
            groups.setdefault(uf.find((side, i)), []).append((side, i))
    classes = [sorted(g) for g in groups.values()]
    classes.sort(key=lambda g: g[0])
    return classes


# -- stellation -------------------------------------------------------------------


def stellate(diagram: TorusDiagram) -> IdealTriangulation:
    """Ideal triangulation of the diagram's complement, one tetrahedron
    per (face, boundary edge) of the bigon-collapsed tiling."""
    problems = validate_basic(diagram)
    if problems:
        raise TriangulationError(problems[0])
    return stellate_tiling(collapse_bigons(diagram))


def stellate_tiling(tiling: TilingGraph) -> IdealTriangulation:
    rot = _rotations(tiling)
    tmap = tiling.map
    for v in tmap.valences:
        if v in (TOP, BOT):
            raise TriangulationError(f"vertex name {v!r} is reserved for the apexes")
    tets = []
    tet_at: dict = {}
    for f in tmap.faces:
        n = f.degree
        if n < 3:
            raise TriangulationError("cannot stellate a face of degree < 3")
        for i in range(n):
            w_i = f.darts[i][0]
            w_j = f.darts[(i + 1) % n][0]
            tet_at[(f.index, i)] = len(tets)
            tets.append(
                Tetrahedron(len(tets), (TOP, BOT, w_i, w_j), f.index, "sector", i)
            )
    pairings: dict = {}
    for f in tmap.faces:
        n = f.degree
        for i in range(n):
            _add_pairing(
                pairings,
                tet_at[(f.index, i)],
                (0, 1, 3),
                tet_at[(f.index, (i + 1) % n)],
                (0, 1, 2),
            )
    for e in tmap.edges:
        fa, ia = tmap.face_of[e.a]
        fb, ib = tmap.face_of[e.b]
        _add_pairing(
            pairings, tet_at[(fa, ia)], (0, 2, 3), tet_at[(fb, ib)], (0, 3, 2)
        )
        na = tmap.faces[fa].degree
        nb = tmap.faces[fb].degree
        _add_pairing(
            pairings,
            tet_at[(fa, (ia - rot[fa]) % na)],
            (1, 2, 3),
            tet_at[(fb, (ib - rot[fb]) % nb)],
            (1, 3, 2),
        )
    out = IdealTriangulation(tets, pairings, tiling)
    out.check()
    return out


# -- 3-2 moves --------------------------------------------------------------------


def three_two_moves(t: IdealTriangulation) -> IdealTriangulation:
    """Replace each triangle bipyramid's three tetrahedra by two caps.

    The caps share the triangle's plane face; the stellating edge of
    each triangle face disappears.  Errors if a triangle bipyramid is
    incomplete or the moves were already applied.
    """
    if t.moved:
        raise TriangulationError("triangle bipyramids were already replaced")
    tmap = t.tiling.map
    tri_faces = [f for f in tmap.faces if f.degree == 3]
    tet_at: dict = {}
    for tet in t.tets:
        if tet.kind == "sector":
            tet_at[(tet.face, tet.sector)] = tet.index
    wall_keys: set = set()
    replaced: dict = {}
    for f in tri_faces:
        wedges = [tet_at.get((f.index, i)) for i in range(3)]
        if None in wedges:
            raise TriangulationError(
                f"triangle bipyramid over face {f.index} is missing a wedge"
            )
        for i in range(3):
            key = (wedges[i], (0, 1, 3))
            want = (wedges[(i + 1) % 3], (0, 1, 2))
            if t.pairings.get(key) != want:
                raise TriangulationError(
                    f"triangle bipyramid over face {f.index} is malformed"
                )
            wall_keys.add(key)
            wall_keys.add(want)
            replaced[wedges[i]] = (f.index, i)
    new_tets = []
    new_index: dict = {}
    for tet in t.tets:
        if tet.index in replaced:
            continue
        new_index[tet.index] = len(new_tets)
        new_tets.append(
            Tetrahedron(len(new_tets), tet.corners, tet.face, tet.kind, tet.sector)
        )
    caps: dict = {}
    for f in tri_faces:
        names = [d[0] for d in f.darts]
        up = len(new_tets)
        new_tets.append(
            Tetrahedron(up, (TOP, names[0], names[1], names[2]), f.index, "cap", 0)
        )
        dn = len(new_tets)
        new_tets.append(
            Tetrahedron(dn, (BOT, names[0], names[2], names[1]), f.index, "cap", 1)
        )
        caps[f.index] = (up, dn)
    # cap position of the triangle's k-th boundary vertex
    up_pos = (1, 2, 3)
    dn_pos = (1, 3, 2)

    def posmap(old_t: int, tri: tuple):
        if old_t not in replaced:
            return new_index[old_t], {p: p for p in tri}
        fidx, i = replaced[old_t]
        up, dn = caps[fidx]
        if tri == (0, 2, 3):
            return up, {0: 0, 2: up_pos[i], 3: up_pos[(i + 1) % 3]}
        if tri == (1, 2, 3):
            return dn, {1: 0, 2: dn_pos[i], 3: dn_pos[(i + 1) % 3]}
        raise TriangulationError(
            "a bipyramid wall is glued to a face outside its bipyramid"
        )

    pairings: dict = {}
    for key, (t2, img) in t.pairings.items():
        if key in wall_keys:
            if (t2, tuple(sorted(img))) not in wall_keys:
                raise TriangulationError(
                    "a bipyramid wall is glued to a face outside its bipyramid"
                )
            continue
        t1, tri = key
        nt1, m1 = posmap(t1, tri)
        nt2, m2 = posmap(t2, tuple(sorted(img)))
        _add_pairing(
            pairings,
            nt1,
            tuple(m1[p] for p in tri),
            nt2,
            tuple(m2[q] for q in img),
        )
    for f in tri_faces:
        up, dn = caps[f.index]
        _add_pairing(pairings, up, (1, 2, 3), dn, (1, 3, 2))
    out = IdealTriangulation(new_tets, pairings, t.tiling, moved=True)
    out.check()
    return out


# -- censuses ---------------------------------------------------------------------


def edge_census(t: IdealTriangulation) -> list:
    """(label, degree) per edge class, with consistency checks.

    Before 3-2 moves: vertical classes have degree twice the tiling
    valence, stellating classes match their face degree, horizontal
    degrees are even (4 when bigon-free, 4+2n across n collapsed
    bigons).  After the moves every class must keep degree >= 3.  The
    class count must equal the tetrahedron count, which pins every cusp
    link to a torus.
    """
    classes = t.edge_classes
    total = sum(c.degree for c in classes)
    if total != 6 * len(t.tets):
        raise TriangulationError("edge incidences do not fill the tetrahedra")
    if len(classes) != len(t.tets):
        raise TriangulationError("edge class count is off for toroidal cusp links")
    if t.moved:
        if any(c.degree < 3 for c in classes):
            raise TriangulationError("an edge class has fewer than 3 incidences")
    else:
        valences = t.tiling.map.valences
        faces = t.tiling.map.faces
        bot_degrees = []
        for c in classes:
            ti, pair = c.members[0]
            names = [t.tets[ti].corners[p] for p in pair]
            if c.label == "vertical":
                if TOP in names:
                    v = names[0] if names[1] == TOP else names[1]
                    vs = {
                        t.tets[m].corners[p]
                        for m, pr in c.members
                        for p in pr
                        if t.tets[m].corners[p] != TOP
                    }
                    if vs != {v} or c.degree != 2 * valences[v]:
                        raise TriangulationError(
                            "an upper vertical class does not match its vertex valence"
                        )
                else:
                    bot_degrees.append(c.degree)
            elif c.label == "stellating":
                if c.degree != faces[t.tets[ti].face].degree:
                    raise TriangulationError(
                        "a stellating class does not match its face degree"
                    )
            else:
                if c.degree < 4 or c.degree % 2:
                    raise TriangulationError("a horizontal class has a bad degree")
        if sorted(bot_degrees) != sorted(2 * v for v in valences.values()):
            raise TriangulationError(
                "lower vertical degrees do not match the vertex valences"
            )
    return [(c.label, c.degree) for c in classes]


def export_json(t: IdealTriangulation) -> dict:
    """JSON-ready dict: tetrahedra, face pairings (each once), edge
    classes, and cusps."""
    pairs = []
    for key in sorted(t.pairings):
        t2, img = t.pairings[key]
        if key <= (t2, tuple(sorted(img))):
            pairs.append(
                {
                    "tet": key[0],
                    "face": list(key[1]),
                    "to_tet": t2,
                    "to_face": list(img),
                }
            )
    return {
        "tetrahedron_count": len(t.tets),
        "moved": t.moved,
        "tetrahedra": [
            {
                "index": tet.index,
                "vertices": list(tet.corners),
                "tiling_face": tet.face,
                "kind": tet.kind,
            }
            for tet in t.tets
        ],
        "face_pairings": pairs,
        "edge_classes": [
            {
                "label": c.label,
                "degree": c.degree,
                "members": [[m, list(pair)] for m, pair in c.members],
            }
            for c in t.edge_classes
        ],
        "cusps": [
            {"label": c.label, "members": [[m, p] for m, p in c.members]}
            for c in t.cusps
        ],
    }
