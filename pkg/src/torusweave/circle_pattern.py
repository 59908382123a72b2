"""Orthogonal circle patterns for bigon-free alternating torus diagrams.

Each face of the diagram carries a circle through its corners, and
circles of adjacent faces cross at right angles.  Writing r_f for the
radii, the edge between f and g subtends the central angle
2*arctan(r_g/r_f) at the center of f's circle, so the radii are pinned
down by asking every face's central angles to add up to a full turn.
Developing the solved pattern over the torus produces the cusp shape,
and the isosceles triangles cut out by the circle centers hand each
tetrahedron of the stellated triangulation a complex shape parameter,
which is what the gluing equations and the volume sandwich are checked
against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import MapError
from .develop import Developed, develop, normalized_tau
from .diagram import collapse_bigons, validate_basic
from .geometry import lobachevsky, maximize_volume, vol_bipyramid_bound
from .tiling import TilingGraph
from .triangulation import edge_slot, stellate_tiling, three_two_moves


class PatternError(Exception):
    pass


def _pattern_tiling(d) -> TilingGraph:
    if isinstance(d, TilingGraph):
        if d.doubled_hint:
            raise PatternError(
                "the tiling collapsed bigon chains; orthogonal patterns "
                "need a bigon-free diagram"
            )
        tiling = d
    else:
        problems = validate_basic(d)
        if problems:
            raise PatternError(problems[0])
        if any(f.degree == 2 for f in d.map.faces):
            raise PatternError("bigon faces admit no orthogonal circle pattern")
        tiling = collapse_bigons(d)
    for f in tiling.map.faces:
        if f.degree < 3:
            raise PatternError(
                "every face needs degree at least 3 to carry a circle"
            )
    return tiling


def _gd(x: float) -> float:
    """2*atan(exp(x)) without overflowing exp."""
    if x > 0.0:
        return math.pi - 2.0 * math.atan(math.exp(-x))
    return 2.0 * math.atan(math.exp(x))


def solve_radii(d, tol: float = 1e-12, max_iter: int = 50) -> dict:
    """Radii of the orthogonal circle pattern, geometric mean 1.

    Newton iteration in the log radii u_f on the face closing system
    sum over boundary edges of 2*atan(exp(u_g - u_f)) = 2*pi.  The
    Jacobian is a weighted graph Laplacian, so each step is solved on
    the zero-mean slice; steps are halved until the residual drops.
    """
    tiling = _pattern_tiling(d)
    tmap = tiling.map
    faces = tmap.faces
    n = len(faces)
    nbr = [
        [tmap.face_of[tmap.opposite(dd)][0] for dd in f.darts] for f in faces
    ]

    def residual(u):
        out = np.empty(n)
        for i in range(n):
            out[i] = (
                sum(_gd(u[g] - u[i]) for g in nbr[i]) - 2.0 * math.pi
            )
        return out

    u = np.zeros(n)
    F = residual(u)
    nrm = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if nrm < tol:
            break
        L = np.zeros((n, n))
        for i in range(n):
            for g in nbr[i]:
                x = u[g] - u[i]
                c = 1.0 / math.cosh(x) if abs(x) < 700.0 else 0.0
                L[i, i] += c
                L[i, g] -= c
        try:
            step = np.linalg.solve(L + np.ones((n, n)) / n, F)
        except np.linalg.LinAlgError:
            raise PatternError("the face closing system is singular")
        step -= step.mean()
        alpha = 1.0
        accepted = False
        for _ in range(50):
            F1 = residual(u + alpha * step)
            nrm1 = float(np.max(np.abs(F1)))
            if nrm1 <= (1.0 - 0.5 * alpha) * nrm + 1e-15:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
        u = u + alpha * step
        F, nrm = F1, nrm1
    if nrm >= tol:
        raise PatternError(
            "the circle pattern iteration did not converge; the diagram "
            "may fail the cut condition for an orthogonal pattern"
        )
    u -= u.mean()
    return {faces[i].index: math.exp(u[i]) for i in range(n)}


@dataclass
class CirclePattern:
    """A developed orthogonal circle pattern over one torus diagram."""

    tiling: TilingGraph
    radius: dict  # face index -> circle radius
    wedge: dict  # dart -> central angle of its edge at its own face
    developed: Developed
    residual: float  # worst re-traversal mismatch in the development

    @property
    def t1(self) -> complex:
        return self.developed.t1

    @property
    def t2(self) -> complex:
        return self.developed.t2

    @property
    def tau(self) -> complex:
        return normalized_tau(self.developed.t1, self.developed.t2)


def layout_pattern(d, radii=None, tol: float = 1e-9) -> CirclePattern:
    """Develop the circle pattern in the plane and extract the torus
    periods.  radii defaults to solve_radii(d); pass a loose tol to lay
    out a deliberately broken radius vector for diagnosis."""
    tiling = _pattern_tiling(d)
    if radii is None:
        radii = solve_radii(tiling)
    tmap = tiling.map
    rad = {}
    for f in tmap.faces:
        try:
            r = float(radii[f.index])
        except (KeyError, TypeError, ValueError):
            raise PatternError(f"no usable radius for face {f.index}")
        if not (math.isfinite(r) and r > 0.0):
            raise PatternError("face radii must be positive and finite")
        rad[f.index] = r
    wedge = {}
    for f in tmap.faces:
        for dd in f.darts:
            g = tmap.face_of[tmap.opposite(dd)][0]
            wedge[dd] = 2.0 * math.atan2(rad[g], rad[f.index])
    try:
        dev = develop(tmap, wedge, rad, tol=tol)
    except MapError as e:
        raise PatternError(f"the circle pattern does not develop: {e}")
    return CirclePattern(tiling, rad, wedge, dev, dev.max_residual)


@dataclass(frozen=True)
class ShapeAssignment:
    """Tetrahedron shape parameters read off a circle pattern.

    params holds one (z0, z1, z2) triple per tetrahedron, indexed by
    angle slot; classes lists the member parameters of each edge class
    of the triangulation the shapes were built for, in class order.
    """

    params: tuple
    classes: tuple

    def param(self, tet: int, pair: tuple) -> complex:
        return self.params[tet][edge_slot(*pair)]


def shape_parameters(pattern: CirclePattern, t) -> ShapeAssignment:
    """Shapes of the stellated (unmoved) triangulation from the pattern.

    The link triangle of the tetrahedron over (face, boundary edge) is
    isosceles with apex angle A equal to the edge's wedge, so its apex
    parameter is exp(i*A) and the two base parameters follow from the
    standard relation z' = 1/(1 - z).
    """
    if getattr(t, "moved", False):
        raise PatternError(
            "shape parameters need the unmoved stellation, before 3-2 moves"
        )
    pm = pattern.tiling.map
    tm = t.tiling.map
    if tm.valences != pm.valences or tm.edges != pm.edges:
        raise PatternError(
            "the triangulation was not built over this pattern's diagram"
        )
    params = []
    for tet in t.tets:
        if tet.kind != "sector":
            raise PatternError("unexpected cap tetrahedron in an unmoved stellation")
        f = pm.faces[tet.face]
        a = pattern.wedge[f.darts[tet.sector]]
        if not 0.0 < a < math.pi:
            raise PatternError("degenerate link triangle in the circle pattern")
        z0 = cmath.exp(1j * a)
        z1 = 1.0 / (1.0 - z0)
        z2 = 1.0 / (1.0 - z1)
        params.append((z0, z1, z2))
    classes = tuple(
        tuple(params[ti][edge_slot(p, q)] for ti, (p, q) in cls.members)
        for cls in t.edge_classes
    )
    return ShapeAssignment(tuple(params), classes)


@dataclass(frozen=True)
class GluingReport:
    """Violations of the edge gluing and shape consistency conditions.

    bad_classes: (class index, label, |sum of logs - 2 pi i|)
    bad_tets: (tet index, worst |z' * (1 - z) - 1| over the slot cycle)
    bad_modulus: (class index, member position, ||z| - 1|) on classes
        whose members must stay on the unit circle
    bad_orientation: (tet index, slot) with Im z <= 0
    """

    ok: bool
    bad_classes: tuple
    bad_tets: tuple
    bad_modulus: tuple
    bad_orientation: tuple


def verify_gluing(t, shapes: ShapeAssignment, tol: float = 1e-9) -> GluingReport:
    """Check that the shapes solve the gluing equations of t.

    Around every edge class the principal logarithms must add up to
    2*pi*i; within every tetrahedron the three slot values must agree
    with z' = 1/(1 - z); stellating and horizontal parameters must stay
    on the unit circle; and every parameter must lie in the upper half
    plane.
    """
    two_pi_i = 2j * math.pi
    bad_classes = []
    bad_modulus = []
    for idx, (cls, zs) in enumerate(zip(t.edge_classes, shapes.classes)):
        res = abs(sum(cmath.log(z) for z in zs) - two_pi_i)
        if res > tol:
            bad_classes.append((idx, cls.label, res))
        if cls.label in ("stellating", "horizontal"):
            for pos, z in enumerate(zs):
                off = abs(abs(z) - 1.0)
                if off > tol:
                    bad_modulus.append((idx, pos, off))
    bad_tets = []
    bad_orientation = []
    for ti, (z0, z1, z2) in enumerate(shapes.params):
        rel = max(
            abs(z1 * (1.0 - z0) - 1.0),
            abs(z2 * (1.0 - z1) - 1.0),
            abs(z0 * (1.0 - z2) - 1.0),
        )
        if rel > tol:
            bad_tets.append((ti, rel))
        for slot, z in enumerate((z0, z1, z2)):
            if not z.imag > 0.0:
                bad_orientation.append((ti, slot))
    ok = not (bad_classes or bad_tets or bad_modulus or bad_orientation)
    return GluingReport(
        ok,
        tuple(bad_classes),
        tuple(bad_tets),
        tuple(bad_modulus),
        tuple(bad_orientation),
    )


def shape_volume(shapes: ShapeAssignment) -> float:
    """Sum of ideal tetrahedron volumes at the shape parameter angles."""
    return float(
        sum(
            lobachevsky(cmath.phase(z))
            for triple in shapes.params
            for z in triple
        )
    )


def kite_volume(pattern: CirclePattern) -> float:
    """The same total volume accumulated kite by kite.

    Each edge of the diagram spans a right-angled kite between the two
    circle centers, contributing 2*(L(phi_f) + L(phi_g)) where the phi
    are the half wedges.  Agrees with shape_volume by the duplication
    identity of the Lobachevsky function.
    """
    tmap = pattern.tiling.map
    total = 0.0
    for e in tmap.edges:
        total += 2.0 * (
            lobachevsky(0.5 * pattern.wedge[e.a])
            + lobachevsky(0.5 * pattern.wedge[e.b])
        )
    return total


def volume_bounds(d) -> dict:
    """Volume sandwich of the diagram's complement.

    vol_perp comes from the circle pattern shapes, vol_estimate from
    maximizing the angle structure volume after 3-2 moves, vol_diamond
    from one regular ideal bipyramid per face.  The three are returned
    with an equality_flag set when they all agree to 1e-8.
    """
    tiling = _pattern_tiling(d)
    pattern = layout_pattern(tiling)
    t = stellate_tiling(tiling)
    shapes = shape_parameters(pattern, t)
    vol_perp = shape_volume(shapes)
    vol_diamond = vol_bipyramid_bound(tiling)
    _, vol_estimate, boundary = maximize_volume(three_two_moves(t))
    if boundary:
        raise PatternError(
            "the volume maximizer sits on the boundary of the angle polytope"
        )
    if vol_perp > vol_estimate + 1e-8 or vol_estimate > vol_diamond + 1e-8:
        raise PatternError("volume bounds came out inconsistent")
    return {
        "vol_perp": vol_perp,
        "vol_diamond": vol_diamond,
        "vol_estimate": vol_estimate,
        "equality_flag": bool(vol_diamond - vol_perp <= 1e-8),
    }


def pattern_report(pattern: CirclePattern) -> dict:
    """JSON-ready summary: radii, periods, cusp shape, residual."""
    faces = pattern.tiling.map.faces
    tau = pattern.tau
    return {
        "radii": [pattern.radius[f.index] for f in faces],
        "degrees": [f.degree for f in faces],
        "t1": [pattern.t1.real, pattern.t1.imag],
        "t2": [pattern.t2.real, pattern.t2.imag],
        "tau": [tau.real, tau.imag],
        "residual": float(pattern.residual),
    }


def pattern_svg(pattern: CirclePattern, scale: float = 100.0) -> str:
    """Render the pattern as an SVG drawing: every face circle and its
    chord polygon shifted into the base parallelogram spanned by the
    torus periods, repeated over the 8 neighboring cells as a faded
    halo."""
    dev = pattern.developed
    tmap = pattern.tiling.map
    colors = pattern.tiling.colors or {}
    t1, t2 = dev.t1, dev.t2
    det = t1.real * t2.imag - t1.imag * t2.real

    def into_cell(z: complex) -> complex:
        a = (z.real * t2.imag - z.imag * t2.real) / det
        b = (z.imag * t1.real - z.real * t1.imag) / det
        return z - math.floor(a) * t1 - math.floor(b) * t2

    def pt(z: complex) -> str:
        return f"{z.real * scale:.2f},{-z.imag * scale:.2f}"

    shapes = []
    corner_pts = [0j, t1, t1 + t2, t2]
    lo_x = min(z.real for z in corner_pts)
    hi_x = max(z.real for z in corner_pts)
    lo_y = min(z.imag for z in corner_pts)
    hi_y = max(z.imag for z in corner_pts)
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            halo = (i, j) != (0, 0)
            dim = ' stroke-opacity="0.3"' if halo else ""
            for f in tmap.faces:
                c0 = dev.centers[f.index]
                c = into_cell(c0) + i * t1 + j * t2
                shift = c - c0
                r = pattern.radius[f.index]
                stroke = (
                    "#b04a25" if colors.get(f.index) == "shaded" else "#2563b0"
                )
                shapes.append(
                    f'<circle cx="{c.real * scale:.2f}" '
                    f'cy="{-c.imag * scale:.2f}" r="{r * scale:.2f}" '
                    f'fill="none" stroke="{stroke}"{dim}/>'
                )
                ring = [
                    dev.corners[(f.index, k)] + shift for k in range(f.degree)
                ]
                shapes.append(
                    '<polygon points="%s" fill="none" stroke="#333" '
                    'stroke-width="0.8"%s/>' % (" ".join(pt(z) for z in ring), dim)
                )
                if not halo:
                    lo_x = min(lo_x, c.real - r)
                    hi_x = max(hi_x, c.real + r)
                    lo_y = min(lo_y, c.imag - r)
                    hi_y = max(hi_y, c.imag + r)
    shapes.append(
        '<polygon points="%s" fill="none" stroke="#888" '
        'stroke-dasharray="6 4"/>' % " ".join(pt(z) for z in corner_pts)
    )
    pad = 0.45 * max(hi_x - lo_x, hi_y - lo_y)
    vb = (
        f"{(lo_x - pad) * scale:.2f} {-(hi_y + pad) * scale:.2f} "
        f"{(hi_x - lo_x + 2 * pad) * scale:.2f} "
        f"{(hi_y - lo_y + 2 * pad) * scale:.2f}"
    )
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{vb}" width="480" height="480">'
    )
    return "\n".join([head] + shapes + ["</svg>"])
