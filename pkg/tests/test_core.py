import math

import pytest

from torusweave.core import MapError, TorusMap
from torusweave.develop import develop, normalized_tau


def square_lattice():
    return TorusMap(
        {"a": 4},
        [(("a", 0), ("a", 2), (1, 0)), (("a", 1), ("a", 3), (0, 1))],
    )


def test_map_validation():
    with pytest.raises(MapError):
        TorusMap({"a": 4}, [(("a", 0), ("a", 2), (1, 0))])  # uncovered darts
    with pytest.raises(MapError):
        TorusMap(
            {"a": 4},
            [
                (("a", 0), ("a", 2), (1, 0)),
                (("a", 1), ("a", 2), (0, 1)),
                (("a", 3), ("a", 0), (0, 0)),
            ],
        )
    with pytest.raises(MapError):
        TorusMap({"a": 4}, [(("a", 0), ("a", 0), (1, 0)), (("a", 1), ("a", 3), (0, 1))])


def test_rotation_and_involution():
    m = square_lattice()
    assert m.sigma(("a", 3)) == ("a", 0)
    assert m.sigma_inv(("a", 0)) == ("a", 3)
    assert m.opposite(("a", 0)) == ("a", 2)
    assert m.shift_from(("a", 0)) == (1, 0)
    assert m.shift_from(("a", 2)) == (-1, 0)
    assert len(list(m.darts())) == 4
    assert m.dart_count() == 4


def test_face_trace_square_lattice():
    m = square_lattice()
    assert len(m.faces) == 1
    f = m.faces[0]
    assert f.degree == 4
    assert f.holonomy == (0, 0)
    assert m.euler_characteristic() == 0
    assert m.is_connected()
    assert m.fills_torus()
    assert m.is_cellular()


def test_face_offsets_accumulate_shifts():
    m = square_lattice()
    f = m.faces[0]
    # walking the face boundary returns to the start dart with zero offset
    assert f.offsets[0] == (0, 0)
    assert len(f.offsets) == f.degree


def test_disconnected_map_detected():
    m = TorusMap(
        {"a": 2, "b": 2},
        [
            (("a", 0), ("a", 1), (1, 0)),
            (("b", 0), ("b", 1), (1, 0)),
        ],
    )
    assert not m.is_connected()
    assert not m.is_cellular()


def test_sublattice_detected():
    m = TorusMap(
        {"a": 4},
        [(("a", 0), ("a", 2), (2, 0)), (("a", 1), ("a", 3), (0, 1))],
    )
    assert not m.fills_torus()
    assert not m.is_cellular()


def test_canonical_form_quotients_relabeling():
    m1 = TorusMap(
        {"p": 4, "q": 4},
        [
            (("p", 0), ("q", 2), (0, 0)),
            (("p", 1), ("q", 3), (0, -1)),
            (("p", 2), ("q", 0), (-1, -1)),
            (("p", 3), ("q", 1), (-1, 0)),
        ],
    )
    # same map with renamed vertices, slots at q rotated by one, q
    # re-lifted by (1, 1), and the edge list shuffled with two edges
    # written in the opposite direction
    m2 = TorusMap(
        {"u": 4, "w": 4},
        [
            (("w", 3), ("u", 0), (-1, -1)),
            (("u", 2), ("w", 1), (0, 0)),
            (("u", 1), ("w", 0), (1, 0)),
            (("w", 2), ("u", 3), (0, -1)),
        ],
    )
    assert m1.canonical_form() == m2.canonical_form()


def test_canonical_form_separates_maps():
    m1 = square_lattice()
    m2 = TorusMap(
        {"a": 4},
        [(("a", 0), ("a", 1), (1, 0)), (("a", 2), ("a", 3), (0, 1))],
    )
    assert m1.canonical_form() != m2.canonical_form()


def test_develop_square_lattice():
    m = square_lattice()
    wedge = {d: math.pi / 2 for d in m.darts()}
    radius = {0: 1.0 / math.sqrt(2.0)}
    dev = develop(m, wedge, radius)
    assert dev.max_residual < 1e-9
    tau = normalized_tau(dev.t1, dev.t2)
    assert abs(tau - 1j) < 1e-9
    # the two periods are the unit translations of the lattice, up to a
    # global rotation: |t1| = |t2| = 1 and they are orthogonal
    assert abs(abs(dev.t1) - 1) < 1e-9
    assert abs(abs(dev.t2) - 1) < 1e-9


def test_develop_rejects_bad_wedges():
    m = square_lattice()
    wedge = {d: 1.0 for d in m.darts()}  # does not close up flat
    radius = {0: 1.0}
    with pytest.raises(MapError):
        develop(m, wedge, radius)


def test_normalized_tau_orients_upward():
    assert normalized_tau(1 + 0j, 2j) == 2j
    tau = normalized_tau(1 + 0j, -2j)
    assert tau.imag > 0
