"""Orthogonal circle patterns: radii, layout, shapes, gluing, bounds."""

import cmath
import json
import math

import numpy as np
import pytest

from torusweave import (
    V_OCT,
    V_TET,
    catalog_diagram,
    collapse_bigons,
    cusp_shape_top,
    exact_volume,
    stellate,
    three_two_moves,
)
from torusweave.circle_pattern import (
    CirclePattern,
    PatternError,
    kite_volume,
    layout_pattern,
    pattern_report,
    pattern_svg,
    shape_parameters,
    shape_volume,
    solve_radii,
    verify_gluing,
    volume_bounds,
)

TOPBOT = ("+inf", "-inf")


def closing_residual(d, radii):
    # independent check of the face closing equations
    tmap = collapse_bigons(d).map
    worst = 0.0
    for f in tmap.faces:
        total = sum(
            2.0
            * math.atan(
                radii[tmap.face_of[tmap.opposite(dd)][0]] / radii[f.index]
            )
            for dd in f.darts
        )
        worst = max(worst, abs(total - 2.0 * math.pi))
    return worst


def radii_by_degree(d, radii):
    # faces of one degree must agree; return one representative each
    tmap = collapse_bigons(d).map
    groups = {}
    for f in tmap.faces:
        groups.setdefault(f.degree, []).append(radii[f.index])
    out = {}
    for deg, vals in groups.items():
        assert max(vals) - min(vals) < 1e-12
        out[deg] = vals[0]
    return out


def test_solve_radii_on_the_square_weave():
    d = catalog_diagram("square-weave")
    radii = solve_radii(d)
    assert set(radii) == {0, 1}
    for r in radii.values():
        assert r == pytest.approx(1.0, abs=1e-12)
    assert closing_residual(d, radii) < 1e-12
    again = solve_radii(d)
    assert again == radii


def test_solve_radii_on_the_triaxial_tiling():
    d = catalog_diagram("triaxial")
    radii = solve_radii(d)
    by_deg = radii_by_degree(d, radii)
    assert set(by_deg) == {3, 6}
    r_tri = by_deg[3]
    r_hex = by_deg[6]
    assert r_hex / r_tri == pytest.approx(math.sqrt(3.0), abs=1e-12)
    # geometric mean 1 over faces: r_tri^2 * r_hex = 1
    assert r_tri * r_tri * r_hex == pytest.approx(1.0, abs=1e-12)
    assert closing_residual(d, radii) < 1e-12


def test_solve_radii_ratios_follow_the_closing_system():
    # each triangle borders squares only, each hexagon borders squares
    # only, so closing forces arctan(r4/r3) = pi/3 and arctan(r4/r6) =
    # pi/6, i.e. ratios 1 : sqrt(3) : 3
    d = catalog_diagram("3.4.6.4")
    radii = solve_radii(d)
    by_deg = radii_by_degree(d, radii)
    r3, r4, r6 = by_deg[3], by_deg[4], by_deg[6]
    assert r4 / r3 == pytest.approx(math.sqrt(3.0), abs=1e-10)
    assert r6 / r3 == pytest.approx(3.0, abs=1e-10)
    assert closing_residual(d, radii) < 1e-12


def test_solve_radii_jacobian_is_definite_at_the_solution():
    # the closing system's Jacobian, restricted to zero-mean log radii,
    # must be definite: Cholesky of the regularized Laplacian succeeds
    d = catalog_diagram("3.3.6.6")
    radii = solve_radii(d)
    tmap = collapse_bigons(d).map
    n = len(tmap.faces)
    u = {f.index: math.log(radii[f.index]) for f in tmap.faces}
    L = np.zeros((n, n))
    for f in tmap.faces:
        for dd in f.darts:
            g = tmap.face_of[tmap.opposite(dd)][0]
            c = 1.0 / math.cosh(u[g] - u[f.index])
            L[f.index, f.index] += c
            L[f.index, g] -= c
    assert np.allclose(L, L.T)
    np.linalg.cholesky(L + np.ones((n, n)) / n)


def test_solve_radii_rejections():
    with pytest.raises(PatternError):
        solve_radii(catalog_diagram("4.8.8"))  # bigon faces
    with pytest.raises(PatternError):
        solve_radii(collapse_bigons(catalog_diagram("6.6.6")))  # doubled
    with pytest.raises(PatternError):
        solve_radii(catalog_diagram("3.4.6.4"), max_iter=1)


def test_layout_of_the_weave_pattern():
    d = catalog_diagram("square-weave")
    pattern = layout_pattern(d)
    assert isinstance(pattern, CirclePattern)
    assert pattern.residual < 1e-9
    assert pattern.tau == pytest.approx(1j, abs=1e-9)
    assert cusp_shape_top(pattern) == pytest.approx(1j, abs=1e-9)
    tmap = pattern.tiling.map
    dev = pattern.developed
    for f in tmap.faces:
        for k in range(f.degree):
            onto = abs(dev.corners[(f.index, k)] - dev.centers[f.index])
            assert onto == pytest.approx(pattern.radius[f.index], abs=1e-12)
    # right angles across every edge: the two wedges sum to pi
    for e in tmap.edges:
        assert pattern.wedge[e.a] + pattern.wedge[e.b] == pytest.approx(
            math.pi, abs=1e-12
        )


def test_layout_cusp_shapes_across_the_catalog():
    taus = {
        "square-weave": 1j,
        "triaxial": complex(0.5, math.sqrt(3.0) / 2.0),
    }
    for name, expected in taus.items():
        pattern = layout_pattern(catalog_diagram(name))
        assert pattern.tau == pytest.approx(expected, abs=1e-9)
    for name in ("3.4.6.4", "Lj:1", "Lj:2"):
        pattern = layout_pattern(catalog_diagram(name))
        assert pattern.tau.imag > 0
        assert pattern.residual < 1e-9


def test_layout_rejections():
    d = catalog_diagram("square-weave")
    with pytest.raises(PatternError):
        layout_pattern(d, {0: 1.0, 1: 2.0})  # wedges cannot close
    with pytest.raises(PatternError):
        layout_pattern(d, {0: 1.0})  # missing a face
    with pytest.raises(PatternError):
        layout_pattern(d, {0: 1.0, 1: -2.0})  # nonpositive radius


def test_shape_parameters_on_the_weave():
    d = catalog_diagram("square-weave")
    t = stellate(d)
    shapes = shape_parameters(layout_pattern(d), t)
    assert len(shapes.params) == len(t.tets)
    for z0, z1, z2 in shapes.params:
        assert z0 == pytest.approx(1j, abs=1e-12)
        assert z1 == pytest.approx(0.5 + 0.5j, abs=1e-12)
        assert z2 == pytest.approx(1.0 + 1.0j, abs=1e-12)
        assert z0 * z1 * z2 == pytest.approx(-1.0, abs=1e-12)
    assert shapes.param(0, (0, 1)) == shapes.params[0][0]
    assert shapes.param(0, (2, 3)) == shapes.params[0][0]
    assert shapes.param(0, (1, 3)) == shapes.params[0][1]


def test_shape_parameters_on_the_triaxial_link():
    d = catalog_diagram("triaxial")
    t = stellate(d)
    shapes = shape_parameters(layout_pattern(d), t)
    w = cmath.exp(1j * math.pi / 3.0)
    for tet, (z0, z1, z2) in zip(t.tets, shapes.params):
        if t.tiling.map.faces[tet.face].degree == 6:
            for z in (z0, z1, z2):
                assert z == pytest.approx(w, abs=1e-12)
        else:
            assert z0 == pytest.approx(cmath.exp(2j * math.pi / 3.0), abs=1e-12)
        assert z0 * z1 * z2 == pytest.approx(-1.0, abs=1e-12)


def test_shape_parameters_match_the_developed_triangles():
    # the isosceles closed form must agree with triangles read off the
    # developed corner and center positions
    for name in ("square-weave", "triaxial", "3.4.6.4", "Lj:1"):
        d = catalog_diagram(name)
        t = stellate(d)
        pattern = layout_pattern(d)
        shapes = shape_parameters(pattern, t)
        dev = pattern.developed
        tmap = pattern.tiling.map
        for tet, (z0, z1, z2) in zip(t.tets, shapes.params):
            f = tmap.faces[tet.face]
            c = dev.centers[tet.face]
            u = dev.corners[(tet.face, tet.sector)]
            v = dev.corners[(tet.face, (tet.sector + 1) % f.degree)]
            assert (v - c) / (u - c) == pytest.approx(z0, abs=1e-9)
            assert (c - u) / (v - u) == pytest.approx(z1, abs=1e-9)
            assert (u - v) / (c - v) == pytest.approx(z2, abs=1e-9)


def test_shape_parameters_rejections():
    d = catalog_diagram("square-weave")
    pattern = layout_pattern(d)
    with pytest.raises(PatternError):
        shape_parameters(pattern, three_two_moves(stellate(d)))
    with pytest.raises(PatternError):
        shape_parameters(pattern, stellate(catalog_diagram("triaxial")))


def test_gluing_equations_hold_where_the_pattern_is_complete():
    for name in ("square-weave", "triaxial", "3.4.6.4"):
        d = catalog_diagram(name)
        t = stellate(d)
        shapes = shape_parameters(layout_pattern(d), t)
        report = verify_gluing(t, shapes, tol=1e-10)
        assert report.ok, (name, report)
        # independent accumulation of one class sum
        total = sum(cmath.log(z) for z in shapes.classes[0])
        assert total == pytest.approx(2j * math.pi, abs=1e-10)


def test_gluing_detects_scaling_holonomy_on_other_patterns():
    # the orthogonal pattern of 3.3.6.6 is a genuine right-angled
    # structure but not the complete one: some vertical classes pick up
    # a real (scaling) log component while every angle sum stays 2*pi
    d = catalog_diagram("3.3.6.6")
    t = stellate(d)
    shapes = shape_parameters(layout_pattern(d), t)
    report = verify_gluing(t, shapes, tol=1e-10)
    assert not report.ok
    assert report.bad_tets == ()
    assert report.bad_modulus == ()
    assert report.bad_orientation == ()
    assert report.bad_classes
    for idx, label, _ in report.bad_classes:
        assert label == "vertical"
        total = sum(cmath.log(z) for z in shapes.classes[idx])
        assert total.imag == pytest.approx(2.0 * math.pi, abs=1e-10)
        assert abs(total.real) > 1e-3


def test_gluing_flags_localize_around_a_perturbed_face():
    d = catalog_diagram("3.4.6.4")
    t = stellate(d)
    tmap = t.tiling.map
    tri = next(f for f in tmap.faces if f.degree == 3)
    radii = solve_radii(d)
    radii[tri.index] *= 1.05
    pattern = layout_pattern(d, radii, tol=1.0)
    report = verify_gluing(t, shape_parameters(pattern, t))
    assert not report.ok
    assert report.bad_tets == ()
    assert report.bad_modulus == ()
    assert report.bad_orientation == ()
    neighborhood = {tri.index}
    for dd in tri.darts:
        neighborhood.add(tmap.face_of[tmap.opposite(dd)][0])
    flagged = {idx for idx, _, _ in report.bad_classes}
    stellating_of = {}
    for idx, cls in enumerate(t.edge_classes):
        if cls.label == "stellating":
            stellating_of[t.tets[cls.members[0][0]].face] = idx
        assert cls.label != "horizontal" or idx not in flagged
    # the perturbed face and all its neighbors fail to close
    for fi in neighborhood:
        assert stellating_of[fi] in flagged
    # and the perturbed face is the worst offender
    worst = max(report.bad_classes, key=lambda item: item[2])
    assert worst[0] == stellating_of[tri.index]
    # every flagged class involves the perturbed face or a neighbor
    for idx in flagged:
        faces = {t.tets[ti].face for ti, _ in t.edge_classes[idx].members}
        assert faces & neighborhood


def test_volume_accounting_agreement():
    for name in ("square-weave", "triaxial", "3.4.6.4", "Lj:1"):
        d = catalog_diagram(name)
        pattern = layout_pattern(d)
        shapes = shape_parameters(pattern, stellate(d))
        assert abs(shape_volume(shapes) - kite_volume(pattern)) < 1e-9


def test_volume_bounds_on_the_basic_pair():
    w = volume_bounds(catalog_diagram("square-weave"))
    for key in ("vol_perp", "vol_estimate", "vol_diamond"):
        assert w[key] == pytest.approx(2.0 * V_OCT, abs=1e-8)
    assert w["equality_flag"] is True
    tri = volume_bounds(catalog_diagram("triaxial"))
    for key in ("vol_perp", "vol_estimate", "vol_diamond"):
        assert tri[key] == pytest.approx(10.0 * V_TET, abs=1e-8)
    assert tri["equality_flag"] is True


def test_volume_bounds_on_the_semi_regular_catalog():
    b = volume_bounds(catalog_diagram("3.4.6.4"))
    assert b["vol_perp"] == pytest.approx(20.0 * V_TET, abs=1e-8)
    assert b["vol_estimate"] == pytest.approx(
        10.0 * V_TET + 3.0 * V_OCT, abs=1e-8
    )
    assert b["vol_diamond"] == pytest.approx(b["vol_estimate"], abs=1e-8)
    assert b["equality_flag"] is False
    # the lower gap is genuinely open
    assert b["vol_estimate"] - b["vol_perp"] > 1e-4


def test_volume_bounds_on_a_doubled_free_family_member():
    d = catalog_diagram("Lj:1")
    b = volume_bounds(d)
    tiling = collapse_bigons(d)
    census = {}
    for f in tiling.map.faces:
        census[f.degree] = census.get(f.degree, 0) + 1
    exact = exact_volume(census, bigons=False).value
    assert b["vol_estimate"] == pytest.approx(exact, abs=1e-6)
    assert b["vol_perp"] < b["vol_estimate"]
    assert b["equality_flag"] is False


def test_volume_bounds_reject_bigons():
    with pytest.raises(PatternError):
        volume_bounds(catalog_diagram("4.8.8"))


def test_similarity_invariance():
    d = catalog_diagram("3.4.6.4")
    t = stellate(d)
    radii = solve_radii(d)
    scaled = {fi: 3.7 * r for fi, r in radii.items()}
    p1 = layout_pattern(d, radii)
    p2 = layout_pattern(d, scaled)
    s1 = shape_parameters(p1, t)
    s2 = shape_parameters(p2, t)
    worst = max(
        abs(a - b)
        for pa, pb in zip(s1.params, s2.params)
        for a, b in zip(pa, pb)
    )
    assert worst < 1e-12
    r1 = verify_gluing(t, s1)
    r2 = verify_gluing(t, s2)
    assert r1.ok is r2.ok
    assert [i[:2] for i in r1.bad_classes] == [i[:2] for i in r2.bad_classes]
    assert abs(shape_volume(s1) - shape_volume(s2)) < 1e-12
    assert abs(p1.tau - p2.tau) < 1e-12


def test_pattern_report_is_json_ready():
    pattern = layout_pattern(catalog_diagram("triaxial"))
    rep = pattern_report(pattern)
    parsed = json.loads(json.dumps(rep))
    assert parsed["degrees"].count(3) == 2
    assert parsed["degrees"].count(6) == 1
    assert parsed["tau"][0] == pytest.approx(0.5, abs=1e-9)
    assert parsed["tau"][1] == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-9)
    assert parsed["residual"] < 1e-9
    assert len(parsed["radii"]) == 3


def test_pattern_svg_draws_the_fundamental_domain_with_halo():
    pattern = layout_pattern(catalog_diagram("3.4.6.4"))
    svg = pattern_svg(pattern)
    assert svg.startswith("<svg ")
    assert svg.endswith("</svg>")
    n_faces = len(pattern.tiling.map.faces)
    # base cell plus 8 halo copies
    assert svg.count("<circle ") == 9 * n_faces
    # one chord polygon per drawn face plus the fundamental parallelogram
    assert svg.count("<polygon ") == 9 * n_faces + 1
    assert "stroke-dasharray" in svg
    # halo copies are faded, base cell is not
    assert svg.count("stroke-opacity") == 2 * 8 * n_faces
