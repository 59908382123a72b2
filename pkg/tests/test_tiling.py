import math

import pytest

from torusweave.catalog import (
    catalog_diagram,
    catalog_names,
    catalog_tiling,
    catalog_tld,
)
from torusweave.core import MapError, TLDError, TorusMap
from torusweave.diagram import (
    collapse_bigons,
    link_component_count,
    parse_diagram,
    serialize_diagram,
    validate_basic,
)
from torusweave.tiling import (
    TilingGraph,
    check_census,
    classify_vertices,
    colorable_matching,
    derive_colors,
    layout_modulus,
    parse_tiling,
    perfect_matching,
    realize_link,
    right_angled_class,
    serialize_tiling,
)

SQRT3 = math.sqrt(3.0)

# per catalog entry: vertex count, face census, link components, modulus
CATALOG_FACTS = {
    "square-weave": (2, {4: 2}, 2, 1j),
    "triaxial": (3, {3: 2, 6: 1}, 3, complex(0.5, SQRT3 / 2)),
    "3.4.6.4": (6, {3: 2, 4: 3, 6: 1}, 1, complex(0.5, SQRT3 / 2)),
    "3.3.6.6": (6, {3: 4, 6: 2}, 4, SQRT3 * 1j),
    "3.4.4.6": (5, {3: 2, 4: 2, 6: 1}, 3, (1 + SQRT3) / 2 * 1j),
    "4.8.8": (8, {4: 2, 8: 2}, 4, 1j),
    "6.6.6": (4, {6: 2}, 2, complex(1, SQRT3)),
    "3.12.12": (6, {3: 2, 12: 1}, 1, complex(0.5, SQRT3 / 2)),
    "4.6.12": (12, {4: 3, 6: 2, 12: 1}, 3, complex(0.5, SQRT3 / 2)),
    "Lj:1": (7, {3: 2, 4: 4, 6: 1}, 5, complex(0.5, (SQRT3 + 2) / 2)),
    "Lj:2": (11, {3: 2, 4: 8, 6: 1}, 7, complex(0.5, (SQRT3 + 4) / 2)),
    "Lj:3": (15, {3: 2, 4: 12, 6: 1}, 9, complex(0.5, (SQRT3 + 6) / 2)),
}

VERTEX_TYPE_SETS = {
    "square-weave": {(4, 4, 4, 4)},
    "triaxial": {(3, 6, 3, 6)},
    "3.4.6.4": {(3, 4, 6, 4)},
    "3.3.6.6": {(3, 3, 6, 6), (3, 6, 3, 6)},
    "3.4.4.6": {(3, 4, 4, 6), (3, 6, 3, 6)},
    "4.8.8": {(4, 8, 8)},
    "6.6.6": {(6, 6, 6)},
    "3.12.12": {(3, 12, 12)},
    "4.6.12": {(4, 6, 12)},
    "Lj:1": {(3, 4, 4, 6), (3, 6, 3, 6), (4, 4, 4, 4)},
    "Lj:2": {(3, 4, 4, 6), (3, 6, 3, 6), (4, 4, 4, 4)},
    "Lj:3": {(3, 4, 4, 6), (3, 6, 3, 6), (4, 4, 4, 4)},
}


def cyclic_min(seq):
    variants = []
    for rev in (tuple(seq), tuple(reversed(seq))):
        for i in range(len(rev)):
            variants.append(rev[i:] + rev[:i])
    return min(variants)


def test_catalog_names():
    assert catalog_names() == [
        "square-weave",
        "triaxial",
        "3.4.6.4",
        "3.3.6.6",
        "3.4.4.6",
        "4.8.8",
        "6.6.6",
        "3.12.12",
        "4.6.12",
        "Lj:1",
        "Lj:2",
        "Lj:3",
    ]
    with pytest.raises(MapError):
        catalog_tiling("nonagonal")


def test_catalog_census_and_types():
    for name, (nv, census, _, _) in CATALOG_FACTS.items():
        t = catalog_tiling(name)
        rep = classify_vertices(t)
        assert rep.semi_regular, (name, rep.failures)
        got = {cyclic_min(tp) for tp in rep.vertex_types.values()}
        assert got == VERTEX_TYPE_SETS[name], name
        cen = check_census(t)
        assert cen.ok, (name, cen.identities)
        assert cen.vertices == nv, name
        assert cen.face_census == census, name
        assert cen.vertices - cen.edges + cen.faces == 0


def test_catalog_links_validate():
    for name, (_, _, comps, _) in CATALOG_FACTS.items():
        d = catalog_diagram(name)
        assert validate_basic(d) == [], name
        assert link_component_count(d) == comps, name


def test_catalog_moduli():
    for name, (_, _, _, tau) in CATALOG_FACTS.items():
        got = layout_modulus(catalog_tiling(name))
        assert abs(got - tau) < 1e-9, (name, got, tau)


def test_larger_chain_entries():
    t = catalog_tiling("Lj:4")
    assert check_census(t).face_census == {3: 2, 4: 16, 6: 1}
    assert len(t.map.valences) == 19
    assert abs(layout_modulus(t) - complex(0.5, (SQRT3 + 8) / 2)) < 1e-9
    d = realize_link(t)
    assert validate_basic(d) == []
    assert link_component_count(d) == 11


def test_right_angled_classification():
    assert right_angled_class(catalog_tiling("square-weave")).verdict == "square-weave"
    assert right_angled_class(catalog_tiling("triaxial")).verdict == "triaxial"
    rep = right_angled_class(catalog_tiling("3.4.6.4"))
    assert rep.verdict == "not-right-angled"
    assert abs(rep.witness_angle - 5 * math.pi / 12) < 1e-12
    assert rep.witness_edge is not None
    rep = right_angled_class(catalog_tiling("3.3.6.6"))
    assert abs(rep.witness_angle - math.pi / 3) < 1e-12
    for name in ("4.8.8", "6.6.6", "3.12.12", "4.6.12"):
        rep = right_angled_class(catalog_tiling(name))
        assert rep.verdict == "not-right-angled"
        assert rep.witness_angle is None  # 3-valent: bigons, no angle witness
    assert not right_angled_class(catalog_tiling("Lj:1")).right_angled


def test_weave_tld_text_is_frozen():
    assert catalog_tld("square-weave") == (
        "tld 1\n"
        "crossing a over 0\n"
        "crossing b over 1\n"
        "edge a.0 b.2 0 0\n"
        "edge a.1 b.3 0 -1\n"
        "edge a.2 b.0 -1 -1\n"
        "edge a.3 b.1 -1 0\n"
        "lattice 1 1 1 -1\n"
    )


def test_triaxial_tld_text_is_frozen():
    assert catalog_tld("triaxial") == (
        "tld 1\n"
        "crossing a over 0\n"
        "crossing b over 1\n"
        "crossing c over 0\n"
        "edge a.0 c.3 0 0\n"
        "edge a.1 b.3 0 0\n"
        "edge a.2 c.1 0 -1\n"
        "edge a.3 b.1 1 -1\n"
        "edge b.0 c.2 0 0\n"
        "edge b.2 c.0 -1 0\n"
    )


def test_collapse_realize_roundtrip():
    for name in catalog_names():
        t = catalog_tiling(name)
        d = realize_link(t)
        g = collapse_bigons(d)
        assert g.map.canonical_form() == t.map.canonical_form(), name
        d2 = realize_link(g)
        assert d2.canonical_form() == d.canonical_form(), name


def test_tld_text_roundtrip():
    for name in catalog_names():
        d = parse_diagram(catalog_tld(name))
        assert serialize_diagram(d) == catalog_tld(name), name
        t = catalog_tiling(name)
        text = serialize_tiling(t)
        t2 = parse_tiling(text)
        assert serialize_tiling(t2) == text, name
        assert t2.map.canonical_form() == t.map.canonical_form(), name
        assert t2.lattice == t.lattice, name


def test_matching_search_skips_uncolorable():
    t = catalog_tiling("3.12.12")
    first = perfect_matching(t)
    with pytest.raises(MapError):
        derive_colors(t, first)
    found = colorable_matching(t)
    assert found is not None
    matching, colors = found
    assert matching != first
    by_degree = {}
    for f in t.map.faces:
        by_degree.setdefault(f.degree, set()).add(colors[f.index])
    assert by_degree == {3: {"shaded"}, 12: {"white"}}


def test_doubled_hints_match_search():
    for name in ("4.8.8", "6.6.6", "3.12.12", "4.6.12"):
        t = catalog_tiling(name)
        d = realize_link(t)
        g = collapse_bigons(d)
        found = colorable_matching(t)
        assert found is not None
        three = sum(1 for v in t.map.valences.values() if v == 3)
        assert len(found[0]) * 2 == three, name
        assert len(g.doubled_hint) * 2 == three, name


def test_derived_color_split():
    for name, expect in [
        ("triaxial", {3: {"shaded"}, 6: {"white"}}),
        ("3.4.6.4", {3: {"white"}, 4: {"shaded"}, 6: {"white"}}),
        ("4.6.12", {4: {"white"}, 6: {"shaded"}, 12: {"shaded"}}),
    ]:
        t = catalog_tiling(name)
        found = colorable_matching(t)
        assert found is not None
        colors = found[1]
        by_degree = {}
        for f in t.map.faces:
            by_degree.setdefault(f.degree, set()).add(colors[f.index])
        assert by_degree == expect, name


def test_classify_rejects_other_valences():
    # flat triangular lattice: one 6-valent vertex, two triangle faces
    tmap = TorusMap(
        {"a": 6},
        [
            (("a", 0), ("a", 3), (1, 0)),
            (("a", 1), ("a", 4), (1, 1)),
            (("a", 2), ("a", 5), (0, 1)),
        ],
    )
    t = TilingGraph(tmap)
    assert tmap.face_degree_census() == {3: 2}
    rep = classify_vertices(t)
    assert not rep.semi_regular
    assert any("valence 6" in msg for msg in rep.failures)
    with pytest.raises(MapError):
        realize_link(t)


def test_one_vertex_square_lattice_is_semi_regular():
    tmap = TorusMap(
        {"a": 4},
        [(("a", 0), ("a", 2), (1, 0)), (("a", 1), ("a", 3), (0, 1))],
    )
    t = TilingGraph(tmap)
    rep = classify_vertices(t)
    assert rep.semi_regular
    assert rep.vertex_types == {"a": (4, 4, 4, 4)}
    assert check_census(t).ok
    assert abs(layout_modulus(t) - 1j) < 1e-9


def test_parse_tiling_errors():
    with pytest.raises(TLDError) as e:
        parse_tiling("tld 1\ncrossing a over 0\n")
    assert e.value.line == 2
    with pytest.raises(TLDError) as e:
        parse_tiling("tld 1\nvertex a valence 13\n")
    assert e.value.line == 2
    with pytest.raises(TLDError) as e:
        parse_tiling("tld 1\nvertex a valence 3\nedge a.0 a.1 0 0\n")
    assert e.value.line == 2  # reported at the vertex declaration
    with pytest.raises(TLDError) as e:
        parse_tiling("tld 1\nvertex a valence 3\nedge a.0 b.0 0 0\n")
    assert e.value.line == 3
