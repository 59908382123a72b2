"""Hyperbolic volume toolkit for torihedral triangulations.

Everything rests on the Lobachevsky function: volumes of ideal
tetrahedra, closed forms for regular ideal bipyramids, exact volumes of
semi-regular face censuses, and the concave maximization of total
volume over the angle polytope of an ideal triangulation.  Volumes of
complete structures come out of the maximization; the closed forms give
the independent targets they must hit.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import MapError
from .develop import normalized_tau
from .tiling import TilingGraph, classify_vertices, layout_modulus
from .triangulation import edge_slot


class GeometryError(Exception):
    pass


# ---------------------------------------------------------------------------
# The Lobachevsky function and closed-form volumes


def _lobachevsky_coeffs(terms: int = 26) -> tuple:
    """Power series coefficients c_m with L(t) = t - t*log(2t) + sum c_m t^(2m+1).

    Integrating log(sin t / t) term by term gives
    c_m = zeta(2m) / (m (2m+1) pi^(2m)); the pi powers cancel against the
    even zeta values, leaving the exact rationals
    c_m = |B_2m| 4^m / (2 (2m)! m (2m+1)) computed here without rounding.
    """
    bern = [Fraction(1)]
    for m in range(1, 2 * terms + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * bern[j]
        bern.append(-acc / (m + 1))
    coeffs = []
    for m in range(1, terms + 1):
        c = abs(bern[2 * m]) * 4**m / (2 * math.factorial(2 * m) * m * (2 * m + 1))
        coeffs.append(float(c))
    return tuple(coeffs)


_LOB_COEFFS = _lobachevsky_coeffs()


def lobachevsky(theta: float) -> float:
    """The Lobachevsky function, odd and pi-periodic, to 1e-14 absolute error.

    The argument is reduced to [-pi/2, pi/2] first; there the power
    series converges geometrically with ratio at most 1/4, so the
    truncation error sits far below the floating point noise.
    """
    r = math.remainder(theta, math.pi)
    if r == 0.0:
        return 0.0
    a = abs(r)
    x = a * a
    acc = 0.0
    for c in reversed(_LOB_COEFFS):
        acc = acc * x + c
    val = a * (1.0 - math.log(2.0 * a)) + a * x * acc
    return val if r > 0 else -val


def tet_volume(x: float, y: float, z: float) -> float:
    """Volume of the ideal tetrahedron with dihedral angles x, y, z."""
    for v in (x, y, z):
        if not 0.0 < v < math.pi:
            raise GeometryError("dihedral angles must lie strictly between 0 and pi")
    if abs(x + y + z - math.pi) > 1e-9:
        raise GeometryError("dihedral angles of an ideal tetrahedron must sum to pi")
    return lobachevsky(x) + lobachevsky(y) + lobachevsky(z)


def bipyramid_volume(n: int) -> float:
    """Volume of the regular ideal n-bipyramid.

    Stellating from the apex-apex axis cuts it into n tetrahedra with
    angles (2pi/n, pi/2 - pi/n, pi/2 - pi/n).
    """
    if not isinstance(n, int):
        raise GeometryError("the equator size must be an integer")
    if n < 3:
        raise GeometryError("a bipyramid needs at least 3 equatorial vertices")
    return n * (lobachevsky(2.0 * math.pi / n) + 2.0 * lobachevsky(math.pi / 2.0 - math.pi / n))


V_TET = 3.0 * lobachevsky(math.pi / 3.0)
V_OCT = 8.0 * lobachevsky(math.pi / 4.0)
V16 = bipyramid_volume(8)
V24 = bipyramid_volume(12)


# ---------------------------------------------------------------------------
# Angle structures


@dataclass(frozen=True)
class AngleStructure:
    """One dihedral angle per opposite-edge pair of each tetrahedron.

    angles[t] holds the three slot angles of tetrahedron t, so opposite
    edges carry equal angles by construction.
    """

    angles: tuple

    def angle(self, tet: int, pair: tuple) -> float:
        return self.angles[tet][edge_slot(*pair)]


@dataclass
class AngleReport:
    """Verdict of the angle structure conditions, with every violation."""

    ok: bool
    bad_domain: list  # (tet, slot, value) outside (0, pi)
    bad_tets: list  # (tet, angle sum) away from pi
    bad_edges: list  # (class index, label, angle sum) away from 2 pi


def semiregular_angles(t, tiling: TilingGraph) -> AngleStructure:
    """Angles realizing every face bipyramid as the regular ideal one.

    Sector tetrahedra in an n-gon face get apex angle 2pi/n and two
    vertical angles of half the Euclidean corner, (n-2)pi/(2n); cap
    tetrahedra from collapsed triangle bipyramids are regular.
    """
    report = classify_vertices(tiling)
    if not report.semi_regular:
        raise GeometryError("the tiling is not semi-regular: " + report.failures[0])
    if not getattr(t, "moved", False):
        raise GeometryError("replace triangle bipyramids with three_two_moves first")
    if t.tiling.map.face_degree_census() != tiling.map.face_degree_census():
        raise GeometryError("the triangulation was not built over this tiling")
    triples = []
    for tet in t.tets:
        if tet.kind == "cap":
            triples.append((math.pi / 3.0,) * 3)
        else:
            n = tiling.map.faces[tet.face].degree
            half = math.pi / 2.0 - math.pi / n
            triples.append((2.0 * math.pi / n, half, half))
    return AngleStructure(tuple(triples))


def verify_angles(t, a: AngleStructure, tol: float = 1e-9) -> AngleReport:
    """Check positivity, per-tetrahedron sums pi, and edge sums 2 pi."""
    bad_domain = []
    bad_tets = []
    for k, triple in enumerate(a.angles):
        for slot, v in enumerate(triple):
            if not 0.0 < v < math.pi:
                bad_domain.append((k, slot, v))
        s = sum(triple)
        if abs(s - math.pi) > tol:
            bad_tets.append((k, s))
    bad_edges = []
    for i, cls in enumerate(t.edge_classes):
        s = sum(a.angles[ti][edge_slot(p, q)] for ti, (p, q) in cls.members)
        if abs(s - 2.0 * math.pi) > tol:
            bad_edges.append((i, cls.label, s))
    ok = not (bad_domain or bad_tets or bad_edges)
    return AngleReport(ok, bad_domain, bad_tets, bad_edges)


# ---------------------------------------------------------------------------
# Volume maximization over the angle polytope


def _angle_system(tet_count: int, classes) -> tuple:
    """Equality rows: each tetrahedron sums to pi, each edge class to 2 pi."""
    n = 3 * tet_count
    rows = np.zeros((tet_count + len(classes), n))
    rhs = np.empty(tet_count + len(classes))
    for k in range(tet_count):
        rows[k, 3 * k : 3 * k + 3] = 1.0
        rhs[k] = math.pi
    for i, cls in enumerate(classes):
        for ti, (p, q) in cls.members:
            rows[tet_count + i, 3 * ti + edge_slot(p, q)] += 1.0
        rhs[tet_count + i] = 2.0 * math.pi
    return rows, rhs


def _affine_slice(A, b):
    """Particular solution and orthonormal null-space basis of A x = b."""
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    cutoff = s[0] * 1e-12 if s.size else 0.0
    rank = int((s > cutoff).sum())
    coeffs = (U.T @ b)[:rank] / s[:rank]
    p = Vt[:rank].T @ coeffs
    if np.abs(A @ p - b).max() > 1e-8:
        raise GeometryError("the angle equations are inconsistent")
    return p, Vt[rank:].T


def _newton_max(fgh, u, gtol: float, iters: int):
    """Damped Newton ascent for a strictly concave objective."""
    cur = fgh(u)
    if cur is None:
        return u, None, False
    for _ in range(iters):
        f0, g, hess = cur
        if np.abs(g).max() < gtol:
            return u, cur, True
        try:
            step = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError:
            step = g.copy()
        if g @ step <= 0.0:
            step = g.copy()
        alpha, nxt = 1.0, None
        for _ in range(60):
            cand = fgh(u + alpha * step)
            if cand is not None and cand[0] >= f0 + 1e-4 * alpha * (g @ step):
                nxt = cand
                break
            alpha *= 0.5
        if nxt is None:
            return u, cur, False
        u = u + alpha * step
        cur = nxt
    return u, cur, np.abs(cur[1]).max() < gtol


def maximize_volume(t, gtol: float = 1e-10):
    """Maximize total tetrahedron volume over the angle structures of t.

    Equalities are eliminated by a null-space basis and the strictly
    concave objective is climbed by damped Newton from the analytic
    center of the remaining box, with a log-barrier fallback when the
    iterates approach the boundary.  Deterministic throughout.  Returns
    (maximizer, volume, boundary_flag); an interior maximizer realizes
    the complete hyperbolic structure.

    An integer argument means that many tetrahedra with no edge
    identifications at all, each free on its own angle simplex.
    """
    if isinstance(t, int):
        if t < 1:
            raise GeometryError("need at least one tetrahedron")
        tet_count, classes = t, []
    else:
        tet_count, classes = len(t.tets), list(t.edge_classes)
    A, b = _angle_system(tet_count, classes)
    p, basis = _affine_slice(A, b)

    def angles_of(u):
        return p + basis @ u

    def interior(th):
        return th.min() > 1e-12 and th.max() < math.pi - 1e-12

    def make_fgh(mu: float):
        def fgh(u):
            th = angles_of(u)
            if not interior(th):
                return None
            f = sum(lobachevsky(v) for v in th)
            d1 = -np.log(2.0 * np.sin(th))
            d2 = -1.0 / np.tan(th)
            if mu:
                f += mu * float(np.log(th).sum() + np.log(math.pi - th).sum())
                d1 = d1 + mu * (1.0 / th - 1.0 / (math.pi - th))
                d2 = d2 - mu * (1.0 / th**2 + 1.0 / (math.pi - th) ** 2)
            return f, basis.T @ d1, basis.T @ (d2[:, None] * basis)
        return fgh

    if basis.shape[1] == 0:
        u = np.zeros(0)
        if not interior(p):
            raise GeometryError("no strictly interior angle structure exists")
    else:
        u = np.linalg.lstsq(basis, np.full(A.shape[1], math.pi / 3.0) - p, rcond=None)[0]
        if not interior(angles_of(u)):
            u = np.linalg.lstsq(basis, np.full(A.shape[1], math.pi / 4.0) - p, rcond=None)[0]
        if not interior(angles_of(u)):
            raise GeometryError("no strictly interior angle structure was found")

        def center(v):
            th = angles_of(v)
            if not interior(th):
                return None
            f = float(np.log(th).sum() + np.log(math.pi - th).sum())
            d1 = 1.0 / th - 1.0 / (math.pi - th)
            d2 = -(1.0 / th**2 + 1.0 / (math.pi - th) ** 2)
            return f, basis.T @ d1, basis.T @ (d2[:, None] * basis)

        u, _, _ = _newton_max(center, u, 1e-8, 50)
        u, state, done = _newton_max(make_fgh(0.0), u, gtol, 100)
        if not done:
            # barrier path, tightened toward the boundary
            for mu in (1e-3, 1e-5, 1e-7, 1e-9, 1e-11):
                u, _, _ = _newton_max(make_fgh(mu), u, 1e-8, 80)
            u, state, done = _newton_max(make_fgh(0.0), u, gtol, 100)
        theta = angles_of(u)
        near = bool(min(theta.min(), math.pi - theta.max()) < 1e-6)
        if not done and not near:
            raise GeometryError("volume maximization did not converge")
        volume = float(sum(lobachevsky(v) for v in theta))
        triples = tuple(tuple(float(v) for v in theta[3 * k : 3 * k + 3]) for k in range(tet_count))
        return AngleStructure(triples), volume, near

    theta = p
    volume = float(sum(lobachevsky(v) for v in theta))
    near = bool(min(theta.min(), math.pi - theta.max()) < 1e-6)
    triples = tuple(tuple(float(v) for v in theta[3 * k : 3 * k + 3]) for k in range(tet_count))
    return AngleStructure(triples), volume, near


# ---------------------------------------------------------------------------
# Exact volumes and trace field classes from the face census


_BIGON_FREE_DEGREES = (3, 4, 6)
_DOUBLED_DEGREES = (3, 4, 6, 8, 12)


def _census_counts(census: dict, allowed: tuple) -> dict:
    counts = {}
    for deg, cnt in census.items():
        if not isinstance(deg, int) or not isinstance(cnt, int) or cnt < 0:
            raise GeometryError("a face census maps integer degrees to counts")
        if cnt == 0:
            continue
        if deg == 2:
            raise GeometryError("collapse bigons before taking volumes")
        if deg not in allowed:
            raise GeometryError(f"no closed form covers faces of degree {deg}")
        counts[deg] = cnt
    if not counts:
        raise GeometryError("the face census is empty")
    return counts


def _census_pq(census: dict) -> tuple:
    """Volume coordinates (p, q) with vol = p v_tet + q v_oct, bigon-free."""
    counts = _census_counts(census, _BIGON_FREE_DEGREES)
    hexes = counts.get(6, 0)
    tris = counts.get(3, 0)
    squares = counts.get(4, 0)
    if tris != 2 * hexes:
        raise GeometryError("a bigon-free census pairs two triangles with every hexagon")
    return 10 * hexes, squares


@dataclass(frozen=True)
class VolumeReport:
    """Exact volume as rational multiples of the bipyramid constants."""

    terms: tuple  # ((coefficient, constant name), ...)
    value: float
    density: Optional[float]
    field: Optional[str]

    def as_dict(self) -> dict:
        return {
            "terms": [{"coeff": c, "constant_name": k} for c, k in self.terms],
            "value": _printed(self.value),
            "density": None if self.density is None else _printed(self.density),
            "field": self.field,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def _printed(x: float) -> float:
    return float(f"{x:.10g}")


def exact_volume(census: dict, bigons: bool, crossings: Optional[int] = None) -> VolumeReport:
    """Closed-form volume of the link whose collapsed tiling has this census.

    Bigon-free: 10 H v_tet + S v_oct.  With bigons the doubling halves
    each face bipyramid's share: (6H + 2T) v_tet + S v_oct + O v16 + D v24
    for O octagons and D dodecagons.  The density divides by the crossing
    count, which for a bigon-free census is recovered from the handshake
    sum of face degrees.
    """
    if bigons:
        counts = _census_counts(census, _DOUBLED_DEGREES)
        coeffs = {
            "v_tet": 6 * counts.get(6, 0) + 2 * counts.get(3, 0),
            "v_oct": counts.get(4, 0),
            "v16": counts.get(8, 0),
            "v24": counts.get(12, 0),
        }
        field = None
    else:
        p, q = _census_pq(census)
        counts = _census_counts(census, _BIGON_FREE_DEGREES)
        coeffs = {"v_tet": p, "v_oct": q, "v16": 0, "v24": 0}
        field = classify_field(census).label
        if crossings is None:
            crossings = sum(deg * cnt for deg, cnt in counts.items()) // 4
    values = {"v_tet": V_TET, "v_oct": V_OCT, "v16": V16, "v24": V24}
    terms = tuple((coeffs[k], k) for k in ("v_tet", "v_oct", "v16", "v24") if coeffs[k])
    value = float(sum(c * values[k] for c, k in terms))
    density = None if not crossings else value / crossings
    return VolumeReport(terms, value, density, field)


def vol_bipyramid_bound(tiling: TilingGraph) -> float:
    """Upper volume bound: one regular ideal bipyramid per tiling face."""
    return float(sum(bipyramid_volume(f.degree) for f in tiling.map.faces))


@dataclass(frozen=True)
class TraceFieldClass:
    label: str
    arithmetic: bool
    note: str


_CONDITIONAL = "incommensurable (conditional on v_tet, v_oct rational independence)"


def classify_field(census: dict) -> TraceFieldClass:
    """Invariant trace field class of a bigon-free semi-regular census."""
    p, q = _census_pq(census)
    if q > 0 and p == 0:
        return TraceFieldClass("Q(i)", True, "commensurable to the Whitehead link complement")
    if p > 0 and q == 0:
        return TraceFieldClass("Q(i√3)", True, "commensurable to the figure-8 knot complement")
    return TraceFieldClass(
        "Q(i,√3)",
        False,
        "commensurability within this family is conditional on v_tet, v_oct rational independence",
    )


def incommensurable(c1: dict, c2: dict) -> str:
    """Volume-based commensurability verdict for two bigon-free censuses.

    With volumes p v_tet + q v_oct, a nonzero determinant p1 q2 - q1 p2
    forces irrational volume ratio whenever v_tet, v_oct are rationally
    independent, hence the conditional wording.
    """
    p1, q1 = _census_pq(c1)
    p2, q2 = _census_pq(c2)
    if p1 * q2 - q1 * p2 != 0:
        return _CONDITIONAL
    return "volume-compatible"


# ---------------------------------------------------------------------------
# Cusp shapes


def cusp_shape_top(pattern) -> complex:
    """Modulus of the apex cusp torus, from translation holonomies.

    Accepts anything carrying the two holonomies as attributes t1, t2
    (a developed circle pattern or a plane layout), or a tiling, which
    is laid out with regular faces first.
    """
    if isinstance(pattern, TilingGraph):
        try:
            return layout_modulus(pattern)
        except MapError as exc:
            raise GeometryError(str(exc)) from exc
    t1 = getattr(pattern, "t1", None)
    t2 = getattr(pattern, "t2", None)
    if t1 is None or t2 is None:
        raise GeometryError("expected a tiling or a developed pattern with holonomies t1, t2")
    try:
        return normalized_tau(complex(t1), complex(t2))
    except MapError as exc:
        raise GeometryError(str(exc)) from exc
