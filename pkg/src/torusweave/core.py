"""Combinatorial maps on the torus.

A map is stored as a rotation system.  Each vertex has numbered slots
0..valence-1 in counterclockwise order, a dart is a (vertex, slot) pair,
and each edge glues two darts together.  The edge also carries an integer
translation saying which fundamental-domain copy the far endpoint lives
in, so the map describes a graph drawn on the torus R^2 / lattice.

Faces are traced with the face on the left: the successor of a dart d is
sigma^{-1}(alpha(d)), i.e. cross the edge, then rotate one slot clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterator, Optional


class MapError(ValueError):
    pass


class TLDError(ValueError):
    """Malformed TLD input.  Carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.bare_message = message


Dart = tuple
Vec = tuple


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vneg(a: Vec) -> Vec:
    return (-a[0], -a[1])


@dataclass(frozen=True)
class MapEdge:
    """An edge gluing dart a to dart b.

    shift is the lattice offset of b's fundamental-domain copy relative
    to a's copy when the edge is traversed from a to b.
    """

    a: Dart
    b: Dart
    shift: Vec


@dataclass
class Face:
    index: int
    darts: tuple
    # offsets[i] is the lift offset of darts[i]'s base vertex relative to
    # the lift of darts[0]'s base vertex while walking the boundary.
    offsets: tuple
    holonomy: Vec

    @property
    def degree(self) -> int:
        return len(self.darts)


class TorusMap:
    """A rotation system with translation-decorated edges."""

    def __init__(self, valences: dict, edges) -> None:
        self.valences = dict(valences)
        self.edges: list[MapEdge] = []
        self._dart_edge: dict = {}
        for e in edges:
            if isinstance(e, MapEdge):
                a, b, shift = e.a, e.b, e.shift
            else:
                a, b, shift = e
            a = (a[0], int(a[1]))
            b = (b[0], int(b[1]))
            shift = (int(shift[0]), int(shift[1]))
            for v, s in (a, b):
                if v not in self.valences:
                    raise MapError(f"edge endpoint {v}.{s} names unknown vertex {v!r}")
                if not 0 <= s < self.valences[v]:
                    raise MapError(
                        f"slot {s} out of range 0..{self.valences[v] - 1} at vertex {v!r}"
                    )
            if a == b:
                raise MapError(f"edge glues dart {a[0]}.{a[1]} to itself")
            idx = len(self.edges)
            for d in (a, b):
                if d in self._dart_edge:
                    raise MapError(f"dart {d[0]}.{d[1]} is used by two edges")
            self._dart_edge[a] = (idx, False)
            self._dart_edge[b] = (idx, True)
            self.edges.append(MapEdge(a, b, shift))
        for v, val in self.valences.items():
            if val < 1:
                raise MapError(f"vertex {v!r} has valence {val}")
            for s in range(val):
                if (v, s) not in self._dart_edge:
                    raise MapError(f"dart {v}.{s} is not covered by any edge")
        self._faces: Optional[list] = None
        self._face_of: Optional[dict] = None

    # -- darts ---------------------------------------------------------

    def darts(self) -> Iterator[Dart]:
        for v, val in self.valences.items():
            for s in range(val):
                yield (v, s)

    def dart_count(self) -> int:
        return sum(self.valences.values())

    def edge_index(self, d: Dart) -> int:
        return self._dart_edge[d][0]

    def opposite(self, d: Dart) -> Dart:
        idx, is_b = self._dart_edge[d]
        e = self.edges[idx]
        return e.a if is_b else e.b

    def shift_from(self, d: Dart) -> Vec:
        """Lattice offset picked up traversing the edge out of dart d."""
        idx, is_b = self._dart_edge[d]
        e = self.edges[idx]
        return vneg(e.shift) if is_b else e.shift

    def sigma(self, d: Dart) -> Dart:
        v, s = d
        return (v, (s + 1) % self.valences[v])

    def sigma_inv(self, d: Dart) -> Dart:
        v, s = d
        return (v, (s - 1) % self.valences[v])

    def face_next(self, d: Dart) -> Dart:
        return self.sigma_inv(self.opposite(d))

    # -- faces ---------------------------------------------------------

    @property
    def faces(self) -> list:
        if self._faces is None:
            self._trace_faces()
        return self._faces

    @property
    def face_of(self) -> dict:
        """dart -> (face index, position along the boundary)."""
        if self._face_of is None:
            self._trace_faces()
        return self._face_of

    def _trace_faces(self) -> None:
        faces = []
        face_of = {}
        for d0 in self.darts():
            if d0 in face_of:
                continue
            darts = []
            offsets = []
            pos = (0, 0)
            d = d0
            while True:
                face_of[d] = (len(faces), len(darts))
                darts.append(d)
                offsets.append(pos)
                pos = vadd(pos, self.shift_from(d))
                d = self.face_next(d)
                if d == d0:
                    break
            faces.append(Face(len(faces), tuple(darts), tuple(offsets), pos))
        self._faces = faces
        self._face_of = face_of

    def corner_face(self, d: Dart) -> int:
        """Face filling the corner between slots s and s+1 at d = (v, s)."""
        return self.face_of[d][0]

    def face_degree_census(self) -> dict:
        census: dict = {}
        for f in self.faces:
            census[f.degree] = census.get(f.degree, 0) + 1
        return census

    # -- global checks ---------------------------------------------------

    def is_connected(self) -> bool:
        verts = list(self.valences)
        if not verts:
            return False
        seen = {verts[0]}
        queue = [verts[0]]
        while queue:
            v = queue.pop()
            for s in range(self.valences[v]):
                w = self.opposite((v, s))[0]
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(verts)

    def euler_characteristic(self) -> int:
        return len(self.valences) - len(self.edges) + len(self.faces)

    def cycle_holonomies(self) -> list:
        """Loop translations after gauge-fixing lifts along a BFS tree."""
        start = next(iter(self.valences))
        pos = {start: (0, 0)}
        queue = [start]
        while queue:
            v = queue.pop(0)
            for s in range(self.valences[v]):
                d = (v, s)
                w = self.opposite(d)[0]
                if w not in pos:
                    pos[w] = vadd(pos[v], self.shift_from(d))
                    queue.append(w)
        hols = []
        for e in self.edges:
            (v, _), (w, _) = e.a, e.b
            hols.append(vsub(vadd(pos[v], e.shift), pos[w]))
        return hols

    def fills_torus(self) -> bool:
        """True when loop translations generate the full integer lattice."""
        hols = [h for h in self.cycle_holonomies() if h != (0, 0)]
        g = 0
        for i in range(len(hols)):
            for j in range(i + 1, len(hols)):
                det = hols[i][0] * hols[j][1] - hols[i][1] * hols[j][0]
                g = gcd(g, abs(det))
                if g == 1:
                    return True
        return False

    def is_cellular(self) -> bool:
        return (
            self.is_connected()
            and self.euler_characteristic() == 0
            and all(f.holonomy == (0, 0) for f in self.faces)
            and self.fills_torus()
        )

    # -- canonical form --------------------------------------------------

    def canonical_form(self, dart_key: Optional[Callable] = None) -> tuple:
        """Invariant of the decorated map.

        Two maps get the same value exactly when an orientation-preserving
        isomorphism matches them up, allowing vertex relabeling, rotation
        of slot numbering, and re-lifting of vertices (edge translations
        compared only up to the induced gauge).  dart_key, when given,
        decorates each dart with extra data that must match.
        """
        best = None
        for start in sorted(self.darts()):
            sig = self._signature(start, dart_key)
            if best is None or sig < best:
                best = sig
        return best

    def _signature(self, start: Dart, dart_key: Optional[Callable]) -> tuple:
        v0, s0 = start
        number = {v0: 0}
        entry = {v0: s0}
        offset = {v0: (0, 0)}
        order = [v0]
        records = []
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            val = self.valences[v]
            e0 = entry[v]
            records.append((0, val))
            for k in range(val):
                d = (v, (e0 + k) % val)
                w, t = self.opposite(d)
                sh = vadd(offset[v], self.shift_from(d))
                key = 0 if dart_key is None else dart_key(d)
                if w not in number:
                    number[w] = len(order)
                    entry[w] = t
                    offset[w] = sh
                    order.append(w)
                    records.append((1, key, number[w], 0, (0, 0)))
                else:
                    rel = (t - entry[w]) % self.valences[w]
                    gauge = vsub(sh, offset[w])
                    records.append((2, key, number[w], rel, gauge))
        if len(order) != len(self.valences):
            raise MapError("canonical form requires a connected map")
        return tuple(records)


# -- TLD low-level reading -------------------------------------------------


def tld_lines(text: str) -> list:
    """Split TLD text into (line number, fields) pairs, dropping comments."""
    out = []
    for i, raw in enumerate(text.splitlines()):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i + 1, line.split()))
    return out


def check_tld_header(lines: list) -> list:
    """Verify the version line and return the remaining lines."""
    if not lines:
        raise TLDError(1, "empty input, expected 'tld 1' header")
    ln, fields = lines[0]
    if fields != ["tld", "1"]:
        raise TLDError(ln, f"expected 'tld 1' header, got {' '.join(fields)!r}")
    return lines[1:]


def parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise TLDError(line, f"{what} must be an integer, got {token!r}") from None


def parse_dart_token(token: str, line: int) -> Dart:
    if "." not in token:
        raise TLDError(line, f"expected vertex.slot, got {token!r}")
    name, _, slot = token.rpartition(".")
    if not name:
        raise TLDError(line, f"empty vertex id in {token!r}")
    return (name, parse_int(slot, line, "slot"))
