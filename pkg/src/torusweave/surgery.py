"""Local surgeries on alternating torus diagrams.

A tangle is a small alternating fragment with free legs.  Splicing one
into an edge (2 legs) or in place of a crossing (4 legs) preserves all
the intrinsic diagram checks while planting a region that the
window-bounded cut checks are designed to catch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import MapError
from .diagram import TorusDiagram, is_alternating


@dataclass
class Tangle:
    """An alternating fragment.  legs are the unglued darts, in the
    counterclockwise boundary order used when splicing."""

    valences: dict
    over: dict  # base over-parities; splicing may flip all of them
    edges: list  # internal gluings (dart, dart)
    legs: list

    def __post_init__(self):
        used = list(self.legs)
        for a, b in self.edges:
            used.extend((a, b))
        expected = sorted(
            (v, s) for v, val in self.valences.items() for s in range(val)
        )
        if sorted(used) != expected:
            raise MapError("tangle edges and legs do not cover each dart once")


def trefoil_nugget() -> Tangle:
    """Trefoil diagram with one edge cut open: 2 legs, 3 crossings.

    Splicing it into an edge connect-sums a trefoil onto that strand,
    leaving a 2-string cut that isolates more than one crossing."""
    edges = [
        (("t1", 0), ("t2", 3)),
        (("t1", 1), ("t2", 2)),
        (("t2", 0), ("t3", 3)),
        (("t2", 1), ("t3", 2)),
        (("t3", 0), ("t1", 3)),
    ]
    return Tangle(
        {"t1": 4, "t2": 4, "t3": 4},
        {"t1": 0, "t2": 0, "t3": 0},
        edges,
        [("t1", 2), ("t3", 1)],
    )


def wheel_tangle() -> Tangle:
    """Wheel over a 4-cycle: hub c, ring r0..r3, one leg per ring vertex.

    Ring slots: 0 points outward (the leg), 1 to the next ring vertex,
    2 inward to the hub, 3 to the previous ring vertex.  The spliced
    region is bigon-free, is neither a single crossing nor a twist
    chain, and adds a closed ring strand."""
    edges = []
    for i in range(4):
        edges.append(((f"r{i}", 1), (f"r{(i + 1) % 4}", 3)))
        edges.append(((f"r{i}", 2), ("c", i)))
    valences = {"c": 4, "r0": 4, "r1": 4, "r2": 4, "r3": 4}
    over = {"c": 0, "r0": 1, "r1": 0, "r2": 1, "r3": 0}
    return Tangle(valences, over, edges, [(f"r{i}", 0) for i in range(4)])


def twist_chain_tangle(k: int) -> Tangle:
    """Vertical chain of k crossings, consecutive pairs doubled into
    bigons: the region every cut check must accept.

    Slots: 0=NE, 1=NW, 2=SW, 3=SE; legs counterclockwise from NE.  Leg
    darts alternate over/under around the boundary, so the chain splices
    into any crossing of an alternating host; k=1 is the identity
    surgery, even k reroutes the strands through the twist region."""
    if k < 1:
        raise MapError("chain needs at least one crossing")
    edges = []
    for i in range(1, k):
        edges.append(((f"x{i}", 2), (f"x{i + 1}", 1)))
        edges.append(((f"x{i}", 3), (f"x{i + 1}", 0)))
    return Tangle(
        {f"x{i}": 4 for i in range(1, k + 1)},
        {f"x{i}": 0 for i in range(1, k + 1)},
        edges,
        [("x1", 0), ("x1", 1), (f"x{k}", 2), (f"x{k}", 3)],
    )


def _fresh_prefix(diagram: TorusDiagram) -> str:
    prefix = "g"
    while any(c.startswith(prefix) for c in diagram.over):
        prefix += "g"
    return prefix


def _with_markers(valences, edges, over, lattice, flip_names, flipped):
    over2 = dict(over)
    if flipped:
        for c in flip_names:
            over2[c] = 1 - over2[c]
    from .core import TorusMap

    return TorusDiagram(TorusMap(valences, edges), over2, lattice)


def _splice(diagram, valences, edges, over, new_names) -> TorusDiagram:
    """Build the spliced diagram, flipping the new markers if needed."""
    for flipped in (False, True):
        result = _with_markers(
            valences, edges, over, diagram.lattice, new_names, flipped
        )
        if is_alternating(result):
            return result
    raise MapError("spliced tangle cannot be made alternating")


def replace_edge_with_tangle(
    diagram: TorusDiagram, edge_index: int, tangle: Tangle
) -> TorusDiagram:
    if len(tangle.legs) != 2:
        raise MapError("edge replacement needs a 2-leg tangle")
    if not is_alternating(diagram):
        raise MapError("splicing requires an alternating diagram")
    prefix = _fresh_prefix(diagram)

    def ren(d):
        return (prefix + d[0], d[1])

    cut = diagram.map.edges[edge_index]
    edges = []
    for i, e in enumerate(diagram.map.edges):
        if i != edge_index:
            edges.append((e.a, e.b, e.shift))
    edges.extend((ren(a), ren(b), (0, 0)) for a, b in tangle.edges)
    edges.append((cut.a, ren(tangle.legs[0]), cut.shift))
    edges.append((ren(tangle.legs[1]), cut.b, (0, 0)))

    valences = dict(diagram.map.valences)
    over = dict(diagram.over)
    new_names = []
    for name, val in tangle.valences.items():
        valences[prefix + name] = val
        over[prefix + name] = tangle.over[name]
        new_names.append(prefix + name)
    return _splice(diagram, valences, edges, over, new_names)


def replace_crossing_with_tangle(
    diagram: TorusDiagram, crossing, tangle: Tangle
) -> TorusDiagram:
    if len(tangle.legs) != 4:
        raise MapError("crossing replacement needs a 4-leg tangle")
    if crossing not in diagram.over:
        raise MapError(f"no crossing named {crossing!r}")
    if not is_alternating(diagram):
        raise MapError("splicing requires an alternating diagram")
    prefix = _fresh_prefix(diagram)

    def ren(d):
        return (prefix + d[0], d[1])

    def patch(d):
        if d[0] == crossing:
            return ren(tangle.legs[d[1]])
        return d

    edges = []
    for e in diagram.map.edges:
        edges.append((patch(e.a), patch(e.b), e.shift))
    edges.extend((ren(a), ren(b), (0, 0)) for a, b in tangle.edges)

    valences = dict(diagram.map.valences)
    over = dict(diagram.over)
    del valences[crossing]
    del over[crossing]
    new_names = []
    for name, val in tangle.valences.items():
        valences[prefix + name] = val
        over[prefix + name] = tangle.over[name]
        new_names.append(prefix + name)
    return _splice(diagram, valences, edges, over, new_names)
