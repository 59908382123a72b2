"""Built-in tilings and their alternating links.

Every entry is generated deterministically from explicit vertex
coordinates: edges join points at unit distance, slots are numbered by
counterclockwise direction, and edge translations are the lattice
coordinates of the far endpoint's copy.  Serializing the realized links
therefore always reproduces the same TLD text.
"""

from __future__ import annotations

import cmath
import math

from .core import MapError, TorusMap
from .diagram import TorusDiagram, serialize_diagram
from .tiling import (
    IDENTITY_LATTICE,
    TilingGraph,
    colorable_matching,
    realize_link,
)

SQRT3 = math.sqrt(3.0)

_SNAP = 1e-6


def _lattice_coords(z: complex, u: complex, v: complex):
    det = u.real * v.imag - u.imag * v.real
    a = (z.real * v.imag - z.imag * v.real) / det
    b = (u.real * z.imag - u.imag * z.real) / det
    return a, b


def _from_geometry(points, u: complex, v: complex, lattice=IDENTITY_LATTICE) -> TilingGraph:
    """Tiling graph of a unit-edge periodic point set.

    points is a list of (name, position); positions that agree modulo
    the lattice spanned by u and v are merged, keeping the first name.
    """
    reps: list = []
    for name, z in points:
        for _, w in reps:
            a, b = _lattice_coords(z - w, u, v)
            if abs(a - round(a)) < _SNAP and abs(b - round(b)) < _SNAP:
                if abs(z - w - round(a) * u - round(b) * v) < _SNAP:
                    break
        else:
            reps.append((name, z))

    names = [name for name, _ in reps]
    pos = dict(reps)
    # darts at each vertex: every unit-distance copy of another vertex
    darts: dict = {name: [] for name in names}
    for name in names:
        p = pos[name]
        for other in names:
            q = pos[other]
            for a in range(-3, 4):
                for b in range(-3, 4):
                    w = q + a * u + b * v
                    if abs(abs(w - p) - 1.0) < _SNAP:
                        ang = math.atan2((w - p).imag, (w - p).real) % (2 * math.pi)
                        darts[name].append((ang, other, (a, b)))
        darts[name].sort()
        for i in range(1, len(darts[name])):
            if darts[name][i][0] - darts[name][i - 1][0] < 1e-9:
                raise MapError(f"degenerate slot directions at {name!r}")

    def slot_of(name, other, shift):
        for i, (_, o, sh) in enumerate(darts[name]):
            if o == other and sh == shift:
                return i
        raise MapError(f"missed dart {name}->{other}@{shift}")

    canon = set()
    for name in names:
        for _, other, (a, b) in darts[name]:
            key = (name, other, a, b)
            flipped = (other, name, -a, -b)
            canon.add(min(key, flipped))
    edges = []
    for name, other, a, b in sorted(canon):
        sa = slot_of(name, other, (a, b))
        sb = slot_of(other, name, (-a, -b))
        edges.append(((name, sa), (other, sb), (a, b)))
    valences = {name: len(darts[name]) for name in names}
    for name, val in valences.items():
        if val not in (3, 4):
            raise MapError(f"catalog vertex {name!r} came out {val}-valent")
    return TilingGraph(TorusMap(valences, edges), lattice=lattice)


# -- entries ----------------------------------------------------------------------


def _square_weave() -> TilingGraph:
    pts = [("a", 0j), ("b", 1 + 0j)]
    return _from_geometry(pts, 1 + 1j, 1 - 1j, lattice=((1, 1), (1, -1)))


def _strip_points(rows: int):
    pts = [("t", 1 + 0j)]
    for m in range(rows + 1):
        y = SQRT3 / 2 + m
        pts.append((f"a{m}", 0.5 + y * 1j))
        pts.append((f"b{m}", 1.5 + y * 1j))
    return pts


def _strips(rows: int, shift: int) -> TilingGraph:
    """One hexagon-triangle strip plus `rows` rows of squares, wrapped
    vertically with a horizontal offset of `shift` half-periods."""
    return _from_geometry(_strip_points(rows), 2 + 0j, shift + (SQRT3 + rows) * 1j)


def _triaxial() -> TilingGraph:
    pts = [
        ("a", 1 + 0j),
        ("b", 0.5 + (SQRT3 / 2) * 1j),
        ("c", 1.5 + (SQRT3 / 2) * 1j),
    ]
    return _from_geometry(pts, 2 + 0j, 1 + SQRT3 * 1j)


def _rhombitrihexagonal() -> TilingGraph:
    scale = SQRT3 + 1
    pts = [(f"v{k}", cmath.exp(1j * math.pi * k / 3)) for k in range(6)]
    return _from_geometry(
        pts, scale * cmath.exp(1j * math.pi / 6), scale * 1j
    )


def _two_aligned_strips() -> TilingGraph:
    pts = []
    for i in range(2):
        dy = i * SQRT3
        pts.append((f"t{i}", 1 + dy * 1j))
        pts.append((f"a{i}", 0.5 + (SQRT3 / 2 + dy) * 1j))
        pts.append((f"b{i}", 1.5 + (SQRT3 / 2 + dy) * 1j))
    return _from_geometry(pts, 2 + 0j, 2 * SQRT3 * 1j)


def _truncated_square() -> TilingGraph:
    t = math.sqrt(2.0) / 2
    d = 1 + math.sqrt(2.0)
    base = [t + 0j, t * 1j, -t + 0j, -t * 1j]
    pts = [(f"p{i}", z) for i, z in enumerate(base)]
    pts += [(f"q{i}", z + d) for i, z in enumerate(base)]
    return _from_geometry(pts, d * (1 + 1j), d * (1 - 1j))


def _honeycomb_two_rows() -> TilingGraph:
    row = SQRT3 / 2 + 1.5j
    pts = [("a0", 0j), ("b0", 1j), ("a1", row), ("b1", row + 1j)]
    return _from_geometry(pts, SQRT3 + 0j, SQRT3 + 3j)


def _truncated_hexagonal() -> TilingGraph:
    r12 = 1.0 / (2.0 * math.sin(math.pi / 12))
    pts = [
        (f"c{k}", r12 * cmath.exp(1j * (math.pi / 12 + k * math.pi / 6)))
        for k in range(12)
    ]
    d = 2 + SQRT3
    return _from_geometry(pts, d + 0j, d * (0.5 + (SQRT3 / 2) * 1j))


def _truncated_trihexagonal() -> TilingGraph:
    r12 = 1.0 / (2.0 * math.sin(math.pi / 12))
    base = [
        (f"c{k}", r12 * cmath.exp(1j * (math.pi / 12 + k * math.pi / 6)))
        for k in range(12)
    ]
    d = 3 + SQRT3
    u = d + 0j
    v = d * (0.5 + (SQRT3 / 2) * 1j)
    domains = [
        (base, u, v),
        (base + [(f"d{k}", z + v) for k, (_, z) in enumerate(base)], u, 2 * v),
        (base + [(f"d{k}", z + u) for k, (_, z) in enumerate(base)], 2 * u, v),
        (base + [(f"d{k}", z + u) for k, (_, z) in enumerate(base)], u + v, u - v),
    ]
    for pts, uu, vv in domains:
        tiling = _from_geometry(pts, uu, vv)
        if colorable_matching(tiling) is not None:
            return tiling
    raise MapError("no domain of the 4.6.12 tiling admits a colorable matching")


_BUILDERS = {
    "square-weave": _square_weave,
    "triaxial": _triaxial,
    "3.4.6.4": _rhombitrihexagonal,
    "3.3.6.6": _two_aligned_strips,
    "3.4.4.6": lambda: _strips(1, 0),
    "4.8.8": _truncated_square,
    "6.6.6": _honeycomb_two_rows,
    "3.12.12": _truncated_hexagonal,
    "4.6.12": _truncated_trihexagonal,
}


def catalog_names() -> list:
    return list(_BUILDERS) + ["Lj:1", "Lj:2", "Lj:3"]


def catalog_tiling(name: str) -> TilingGraph:
    if name in _BUILDERS:
        return _BUILDERS[name]()
    if name.startswith("Lj:"):
        try:
            j = int(name[3:])
        except ValueError:
            raise MapError(f"bad catalog name {name!r}") from None
        if j < 1:
            raise MapError("Lj index must be at least 1")
        return _strips(2 * j, 1)
    raise MapError(f"unknown catalog name {name!r}; see catalog_names()")


def catalog_diagram(name: str) -> TorusDiagram:
    return realize_link(catalog_tiling(name))


def catalog_tld(name: str) -> str:
    return serialize_diagram(catalog_diagram(name))
