"""Flat development of a circle configuration over a torus map.

Each face carries a circle of known radius, and each boundary dart a
wedge: the angle its edge subtends at the face's circle center.  The
face's corners all lie on its circle, so once one lift of one face is
placed, crossing an edge places the neighboring circle center across
the shared chord.  Developing the whole map fixes every face up to the
two translations of the torus, which come back as complex periods.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import MapError, TorusMap, vadd, vsub


@dataclass
class Developed:
    map: TorusMap
    centers: list  # per face, complex center of the first-placed lift
    corners: dict  # (face index, boundary position) -> complex
    base_offset: list  # per face, lattice offset of that lift
    t1: complex  # translation realizing lattice step (1, 0)
    t2: complex  # translation realizing lattice step (0, 1)
    max_residual: float

    def shift_vector(self, off) -> complex:
        return off[0] * self.t1 + off[1] * self.t2

    def center_at(self, face: int, off) -> complex:
        return self.centers[face] + self.shift_vector(vsub(off, self.base_offset[face]))

    def corner_at(self, face: int, pos: int, off) -> complex:
        return self.corners[(face, pos)] + self.shift_vector(
            vsub(off, self.base_offset[face])
        )


def normalized_tau(t1: complex, t2: complex) -> complex:
    """Modulus of the torus, oriented to the upper half plane by swapping
    the two periods if needed.  No further reduction is applied."""
    if t1 == 0 or t2 == 0:
        raise MapError("degenerate torus periods")
    tau = t2 / t1
    if abs(tau.imag) < 1e-12:
        raise MapError("torus periods are collinear")
    if tau.imag < 0:
        tau = t1 / t2
    return tau


def develop(tmap: TorusMap, wedge: dict, radius: dict, tol: float = 1e-9) -> Developed:
    """Place one lift of every face; return positions and periods.

    wedge maps each dart to the central angle of its edge at its own
    face, radius maps each face to its circle radius.  Residuals measure
    how far re-encountered lifts land from their first placement.
    """
    faces = tmap.faces
    face_of = tmap.face_of
    n = len(faces)
    centers: list = [None] * n
    base_offset: list = [None] * n
    corners: dict = {}
    max_residual = 0.0

    def place(fi: int, anchor_pos: int, anchor_phi: float, center: complex) -> None:
        nonlocal max_residual
        f = faces[fi]
        deg = f.degree
        phi = anchor_phi
        for step in range(deg):
            k = (anchor_pos + step) % deg
            corners[(fi, k)] = center + radius[fi] * cmath.exp(1j * phi)
            phi += wedge[f.darts[k]]
        max_residual = max(max_residual, abs(phi - anchor_phi - 2 * math.pi))
        centers[fi] = center

    place(0, 0, 0.0, 0j)
    base_offset[0] = (0, 0)
    translations: dict = {}
    queue = [0]
    while queue:
        fi = queue.pop(0)
        f = faces[fi]
        deg = f.degree
        for k, d in enumerate(f.darts):
            y = corners[(fi, k)]  # tail of d
            x = corners[(fi, (k + 1) % deg)]  # head of d
            gi, m = face_of[tmap.opposite(d)]
            rg = radius[gi]
            mid = (x + y) / 2
            half = abs(x - y) / 2
            if half < 1e-12:
                raise MapError("zero-length chord in development")
            h2 = rg * rg - half * half
            if h2 < -tol:
                raise MapError("circle radius smaller than half its chord")
            h = math.sqrt(max(h2, 0.0))
            nrm = 1j * (y - x) / abs(y - x)
            away = centers[fi] - mid
            if abs(away) < 1e-12:
                raise MapError("chord through circle center in development")
            cg = mid + h * nrm
            if (cg - mid).real * away.real + (cg - mid).imag * away.imag > 0:
                cg = mid - h * nrm
            off_g = vsub(
                vadd(vadd(base_offset[fi], f.offsets[k]), tmap.shift_from(d)),
                faces[gi].offsets[m],
            )
            phi_m = cmath.phase(x - cg)
            if centers[gi] is None:
                place(gi, m, phi_m, cg)
                base_offset[gi] = off_g
                r = abs(corners[(gi, (m + 1) % faces[gi].degree)] - y)
                max_residual = max(max_residual, r)
                queue.append(gi)
            else:
                delta = vsub(off_g, base_offset[gi])
                disp = cg - centers[gi]
                if delta == (0, 0):
                    max_residual = max(max_residual, abs(disp))
                    max_residual = max(max_residual, abs(corners[(gi, m)] - x))
                else:
                    if delta in translations:
                        max_residual = max(
                            max_residual, abs(translations[delta] - disp)
                        )
                    else:
                        translations[delta] = disp
                    max_residual = max(
                        max_residual, abs(corners[(gi, m)] + disp - x)
                    )

    if any(c is None for c in centers):
        raise MapError("development requires a connected map")

    rows = []
    rhs = []
    for (a, b), disp in translations.items():
        rows.append([a, 0.0, b, 0.0])
        rows.append([0.0, a, 0.0, b])
        rhs.append(disp.real)
        rhs.append(disp.imag)
    if not rows:
        raise MapError("development found no torus translations")
    mat = np.array(rows)
    vec = np.array(rhs)
    sol, _, rank, _ = np.linalg.lstsq(mat, vec, rcond=None)
    if rank < 4:
        raise MapError("torus translations do not span the lattice")
    t1 = complex(sol[0], sol[1])
    t2 = complex(sol[2], sol[3])
    fit = mat @ sol - vec
    max_residual = max(max_residual, float(np.max(np.abs(fit))) if len(fit) else 0.0)
    if max_residual > tol:
        raise MapError(
            f"development failed to close up (residual {max_residual:.3e})"
        )
    return Developed(tmap, centers, corners, base_offset, t1, t2, max_residual)
