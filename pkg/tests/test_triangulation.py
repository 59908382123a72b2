"""Stellated triangulations: shapes, censuses, pairings, and moves."""

import json
from itertools import combinations

import pytest

from torusweave.catalog import catalog_names, catalog_tld
from torusweave.core import TorusMap
from torusweave.diagram import link_component_count, parse_diagram
from torusweave.surgery import replace_crossing_with_tangle, twist_chain_tangle
from torusweave.tiling import TilingGraph
from torusweave.triangulation import (
    BOT,
    TOP,
    IdealTriangulation,
    TriangulationError,
    build_torihedra,
    edge_census,
    edge_slot,
    export_json,
    glued_edge_classes,
    stellate,
    stellate_tiling,
    three_two_moves,
)


def diagram(name):
    return parse_diagram(catalog_tld(name))


def one_bigon_diagram():
    return replace_crossing_with_tangle(
        diagram("square-weave"), "a", twist_chain_tangle(2)
    )


def census_by_label(t):
    out = {}
    for label, deg in edge_census(t):
        out.setdefault(label, []).append(deg)
    return {k: sorted(v) for k, v in out.items()}


def test_edge_slots_pair_opposite_edges():
    assert edge_slot(0, 1) == edge_slot(2, 3) == 0
    assert edge_slot(0, 2) == edge_slot(1, 3) == 1
    assert edge_slot(0, 3) == edge_slot(1, 2) == 2
    assert edge_slot(3, 0) == 2


def test_stellation_shapes():
    for name, count in (("square-weave", 8), ("triaxial", 12), ("3.4.6.4", 24)):
        t = stellate(diagram(name))
        assert len(t.tets) == count
        assert count == 2 * len(t.tiling.map.edges)
        for tet in t.tets:
            assert tet.kind == "sector"
            assert tet.corners[0] == TOP and tet.corners[1] == BOT
        assert not t.moved


def test_weave_edge_census():
    t = stellate(diagram("square-weave"))
    assert census_by_label(t) == {
        "horizontal": [4, 4],
        "stellating": [4, 4],
        "vertical": [8, 8, 8, 8],
    }
    assert len(t.edge_classes) == len(t.tets)


def test_triaxial_edge_census():
    t = stellate(diagram("triaxial"))
    assert census_by_label(t) == {
        "horizontal": [4, 4, 4],
        "stellating": [3, 3, 6],
        "vertical": [8, 8, 8, 8, 8, 8],
    }


def test_one_bigon_makes_a_degree_six_class():
    t = stellate(one_bigon_diagram())
    assert len(t.tets) == 10
    cen = census_by_label(t)
    assert cen["horizontal"] == [4, 6]
    assert cen["stellating"] == sorted(f.degree for f in t.tiling.map.faces)
    assert cen["vertical"] == [6, 6, 6, 6, 8, 8]


def oracle_parity_is_odd(tri, img):
    perm = dict(zip(tri, img))
    perm[next(p for p in range(4) if p not in tri)] = next(
        p for p in range(4) if p not in img
    )
    swaps = 0
    order = list(range(4))
    for i in range(4):
        j = order.index(perm[i])
        if i != j:
            order[i], order[j] = order[j], order[i]
            swaps += 1
    return swaps % 2 == 1


def test_face_pairings_are_a_fixed_point_free_involution():
    for name in ("square-weave", "triaxial"):
        t = stellate(diagram(name))
        assert len(t.pairings) == 4 * len(t.tets)
        for tet in range(len(t.tets)):
            for tri in combinations(range(4), 3):
                t2, img = t.pairings[(tet, tri)]
                assert (t2, tuple(sorted(img))) != (tet, tri)
                bt, bimg = t.pairings[(t2, tuple(sorted(img)))]
                back = dict(zip(sorted(img), bimg))
                assert bt == tet
                assert [back[q] for q in img] == list(tri)
                assert oracle_parity_is_odd(tri, img)


def test_cusps_and_identities_across_the_catalog():
    for name in catalog_names():
        d = diagram(name)
        t = stellate(d)
        labels = [c.label for c in t.cusps]
        assert labels[:2] == ["bot", "top"]
        assert t.link_cusp_count() == link_component_count(d)
        # census runs its own degree verification
        rows = edge_census(t)
        assert len(rows) == len(t.tets)
        assert sum(deg for _, deg in rows) == 6 * len(t.tets)
        tor = sorted(len(c) for c in glued_edge_classes(*build_torihedra(d)))
        assert tor == census_by_label(t)["horizontal"]


def test_three_two_moves_on_triaxial():
    t = stellate(diagram("triaxial"))
    tp = three_two_moves(t)
    assert tp.moved
    assert len(tp.tets) == 10
    assert census_by_label(tp) == {
        "horizontal": [6, 6, 6],
        "stellating": [6],
        "vertical": [6, 6, 6, 6, 6, 6],
    }
    assert [c.label for c in tp.cusps] == [c.label for c in t.cusps]
    kinds = sorted(tet.kind for tet in tp.tets)
    assert kinds == ["cap"] * 4 + ["sector"] * 6


def test_three_two_moves_keep_triangle_free_tilings():
    t = stellate(diagram("square-weave"))
    tp = three_two_moves(t)
    assert tp.moved and len(tp.tets) == 8
    assert census_by_label(tp) == census_by_label(t)


def test_three_two_moves_on_a_mixed_tiling():
    tp = three_two_moves(stellate(diagram("3.4.6.4")))
    assert len(tp.tets) == 22
    assert census_by_label(tp) == {
        "horizontal": [5, 5, 5, 5, 5, 5],
        "stellating": [4, 4, 4, 6],
        "vertical": [7] * 12,
    }
    assert tp.link_cusp_count() == 1


def test_moves_across_the_catalog():
    for name in catalog_names():
        t = stellate(diagram(name))
        triangles = sum(1 for f in t.tiling.map.faces if f.degree == 3)
        tp = three_two_moves(t)
        assert len(tp.tets) == len(t.tets) - triangles
        rows = edge_census(tp)
        assert len(rows) == len(tp.tets)
        assert min(deg for _, deg in rows) >= 3
        assert tp.link_cusp_count() == t.link_cusp_count()


def test_malformed_bipyramids_are_rejected():
    t = stellate(diagram("triaxial"))
    with pytest.raises(TriangulationError):
        three_two_moves(three_two_moves(t))
    # break one stellation wall of a triangle bipyramid
    tampered = dict(t.pairings)
    tri_face = next(f.index for f in t.tiling.map.faces if f.degree == 3)
    wedge = next(
        tet.index for tet in t.tets if tet.face == tri_face and tet.sector == 0
    )
    key = (wedge, (0, 1, 3))
    other = tampered[key]
    tampered[key] = (other[0], (1, 0, 2))
    broken = IdealTriangulation(t.tets, tampered, t.tiling)
    with pytest.raises(TriangulationError):
        three_two_moves(broken)


def test_torihedra_pair():
    d = diagram("square-weave")
    up, dn = build_torihedra(d)
    assert (up.side, dn.side) == ("upper", "lower")
    assert up.tiling is dn.tiling
    assert up.face_degrees == dn.face_degrees == [4, 4]
    assert sorted(up.rotation.values()) == [-1, 1]
    assert sorted(len(c) for c in glued_edge_classes(up, dn)) == [4, 4]

    up, dn = build_torihedra(diagram("triaxial"))
    assert up.face_degrees == [3, 3, 6]
    assert sorted(len(c) for c in glued_edge_classes(up, dn)) == [4, 4, 4]

    up, dn = build_torihedra(one_bigon_diagram())
    assert sorted(len(c) for c in glued_edge_classes(up, dn)) == [4, 6]


def test_reserved_names_and_missing_colors():
    tmap = TorusMap(
        {"+inf": 4, "b": 4},
        [
            (("+inf", 0), ("b", 2), (0, 0)),
            (("+inf", 1), ("b", 3), (0, -1)),
            (("+inf", 2), ("b", 0), (-1, -1)),
            (("+inf", 3), ("b", 1), (-1, 0)),
        ],
    )
    colors = {f.index: ("shaded" if f.index % 2 else "white") for f in tmap.faces}
    with pytest.raises(TriangulationError):
        stellate_tiling(TilingGraph(tmap, colors))
    plain = diagram("square-weave")
    uncolored = TilingGraph(plain.map, None)
    with pytest.raises(TriangulationError):
        stellate_tiling(uncolored)


def test_json_export():
    t = stellate(diagram("square-weave"))
    js = export_json(t)
    assert js["tetrahedron_count"] == 8 and not js["moved"]
    assert len(js["tetrahedra"]) == 8
    assert len(js["face_pairings"]) == 16
    assert sorted(c["label"] for c in js["edge_classes"]) == (
        ["horizontal"] * 2 + ["stellating"] * 2 + ["vertical"] * 4
    )
    assert [c["label"] for c in js["cusps"]] == ["bot", "top", "link-0", "link-1"]
    text = json.dumps(js, sort_keys=True)
    assert json.loads(text) == js
    assert export_json(stellate(diagram("square-weave"))) == js
