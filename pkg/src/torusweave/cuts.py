"""Window-bounded cut checks on alternating torus diagrams.

A circle meeting the projection transversely in n strands and bounding
a disk corresponds, in a planar lift, to an edge cut of size n around a
finite connected set of crossing lifts.  Each check lifts the diagram
to a window x window block of fundamental domains, contracts everything
outside the block to a single sink, and runs unit-capacity max-flow
from anchored lifts; the residual graph then gives the innermost
witness region, whose holes are filled so its complement is connected.

Anchoring every crossing (2-strand check) and every edge (4-strand
check) at a centered lift suffices: an offending region always contains
a crossing or an adjacent pair whose innermost enclosing min cut
inherits the offending feature.  Regions wider than the window stay
invisible, so every report records the window it used.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .core import MapError
from .diagram import TorusDiagram

SINK = "outside"
SOURCE = "anchor"


@dataclass
class CutReport:
    """Outcome of one cut check.  ok is True when the check passed; on
    failure the witness names the enclosed crossing lifts and the
    severed edge lifts, each lift as (name, (i, j)) fundamental-domain
    coordinates inside the search window."""

    ok: bool
    window: int
    check: str
    cut_size: int = 0
    inside: list = field(default_factory=list)
    cut_edges: list = field(default_factory=list)
    reason: str = ""


def _check_window(window: int):
    if window < 2:
        raise MapError("window must be at least 2")


def _in_window(window: int, o) -> bool:
    return 0 <= o[0] < window and 0 <= o[1] < window


def _lift_arcs(diagram: TorusDiagram, window: int) -> list:
    """Every lifted edge with at least one endpoint inside the window,
    as (edge_index, a_side_offset, u, v); an endpoint outside the
    window is the contracted SINK.  Lifted self-loops are dropped since
    they can never cross a cut."""
    arcs = []
    for idx, e in enumerate(diagram.map.edges):
        hx, hy = e.shift
        for i in range(window):
            for j in range(window):
                ob = (i + hx, j + hy)
                u = (e.a[0], (i, j))
                if _in_window(window, ob):
                    v = (e.b[0], ob)
                    if u != v:
                        arcs.append((idx, (i, j), u, v))
                else:
                    arcs.append((idx, (i, j), u, SINK))
                oa = (i - hx, j - hy)
                if not _in_window(window, oa):
                    arcs.append((idx, oa, SINK, (e.b[0], (i, j))))
    return arcs


def _max_flow(arcs: list, sources: set, limit: int):
    """Unit-capacity max flow from the merged sources to SINK, by
    shortest augmenting paths, giving up once the flow exceeds limit.
    Returns (flow, residual capacities, adjacency)."""
    cap = defaultdict(int)
    adj = defaultdict(set)
    for _, _, u, v in arcs:
        a = SOURCE if u in sources else u
        b = SOURCE if v in sources else v
        if a == b:
            continue
        cap[(a, b)] += 1
        cap[(b, a)] += 1
        adj[a].add(b)
        adj[b].add(a)
    flow = 0
    while flow <= limit:
        parent = {SOURCE: SOURCE}
        queue = deque([SOURCE])
        while queue and SINK not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if SINK not in parent:
            break
        path = []
        v = SINK
        while v != SOURCE:
            u = parent[v]
            path.append((u, v))
            v = u
        push = min(cap[a] for a in path)
        for u, v in path:
            cap[(u, v)] -= push
            cap[(v, u)] += push
        flow += push
    return flow, cap, adj


def _innermost_region(arcs: list, sources: set, cap, adj) -> set:
    """Source side of the innermost min cut: residual-reachable nodes,
    then holes filled so the complement stays connected to the sink."""
    region = set(sources)
    seen = {SOURCE}
    queue = deque([SOURCE])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen and cap[(u, v)] > 0:
                seen.add(v)
                queue.append(v)
    region |= seen - {SOURCE, SINK}

    full = defaultdict(set)
    nodes = set()
    for _, _, u, v in arcs:
        full[u].add(v)
        full[v].add(u)
        nodes.update((u, v))
    outside = {SINK}
    queue = deque([SINK])
    while queue:
        u = queue.popleft()
        for v in full[u]:
            if v not in outside and v not in region:
                outside.add(v)
                queue.append(v)
    region |= nodes - outside - region - {SINK}
    return region


def _boundary(arcs: list, region: set) -> list:
    cut = []
    for idx, oa, u, v in arcs:
        if (u in region) != (v in region):
            cut.append((idx, oa))
    return sorted(cut)


def _witness(arcs, sources, cap, adj, window, check, reason_fmt) -> CutReport:
    region = _innermost_region(arcs, sources, cap, adj)
    cut = _boundary(arcs, region)
    inside = sorted(region)
    return CutReport(
        False,
        window,
        check,
        len(cut),
        inside,
        cut,
        reason_fmt.format(n=len(cut), k=len(inside)),
    )


def is_weakly_prime(diagram: TorusDiagram, window: int = 3) -> CutReport:
    """Pass iff no circle meeting the projection in 2 strands encloses
    a crossing, searching disk regions up to the given window."""
    _check_window(window)
    arcs = _lift_arcs(diagram, window)
    center = (window // 2, window // 2)
    for c in sorted(diagram.map.valences):
        sources = {(c, center)}
        flow, cap, adj = _max_flow(arcs, sources, 2)
        if flow <= 2:
            return _witness(
                arcs, sources, cap, adj, window, "weakly-prime",
                "a {n}-strand circle encloses {k} crossing lifts around "
                + repr(c),
            )
    return CutReport(
        True, window, "weakly-prime",
        reason="no 2-strand circle encloses a crossing within the window",
    )


def _edge_anchor(e, window: int) -> set:
    """Two lifts of the edge's endpoints, placed as centrally in the
    window as the edge's translation allows."""
    oa = []
    for h in e.shift:
        lo = max(0, -h)
        hi = min(window - 1, window - 1 - h)
        if lo > hi:
            raise MapError(
                f"window {window} too small for an edge translation {e.shift}"
            )
        oa.append((lo + hi) // 2)
    ob = (oa[0] + e.shift[0], oa[1] + e.shift[1])
    return {(e.a[0], (oa[0], oa[1])), (e.b[0], ob)}


def _bigon_pairs(diagram: TorusDiagram) -> set:
    edge_of = {}
    for idx, e in enumerate(diagram.map.edges):
        edge_of[e.a] = idx
        edge_of[e.b] = idx
    pairs = set()
    for face in diagram.map.faces:
        if face.degree == 2:
            pairs.add(frozenset(edge_of[d] for d in face.darts))
    return pairs


def _is_twist_region(arcs: list, region: set, bigon_pairs: set) -> bool:
    """True iff the region is a chain of crossings whose consecutive
    pairs are joined by exactly two parallel edges bounding a bigon,
    with no other internal edges; a single crossing counts."""
    if len(region) == 1:
        return True
    internal = defaultdict(list)
    for idx, oa, u, v in arcs:
        if u in region and v in region:
            internal[frozenset((u, v))].append(idx)
    deg = defaultdict(int)
    for pair, idxs in internal.items():
        if len(idxs) != 2 or frozenset(idxs) not in bigon_pairs:
            return False
        for node in pair:
            deg[node] += 1
    if len(internal) != len(region) - 1:
        return False
    if any(d > 2 for d in deg.values()):
        return False
    if sum(1 for u in region if deg[u] == 1) != 2:
        return False
    start = next(iter(region))
    seen = {start}
    queue = deque([start])
    neighbors = defaultdict(set)
    for pair in internal:
        u, v = tuple(pair)
        neighbors[u].add(v)
        neighbors[v].add(u)
    while queue:
        u = queue.popleft()
        for v in neighbors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen == region


def _four_cut_scan(
    diagram: TorusDiagram, window: int, allow_twists: bool, check: str
) -> CutReport:
    """Anchor every edge and look for a 4-strand circle whose disk side
    is not a single twist region (or, when twists are not allowed, not
    a single crossing; anchored pairs never are)."""
    arcs = _lift_arcs(diagram, window)
    bigons = _bigon_pairs(diagram) if allow_twists else set()
    for e in diagram.map.edges:
        sources = _edge_anchor(e, window)
        flow, cap, adj = _max_flow(arcs, sources, 4)
        if flow > 4:
            continue
        region = _innermost_region(arcs, sources, cap, adj)
        if allow_twists and _is_twist_region(arcs, region, bigons):
            continue
        cut = _boundary(arcs, region)
        what = "a single twist region" if allow_twists else "a single crossing"
        return CutReport(
            False, window, check, len(cut), sorted(region), cut,
            f"a {len(cut)}-strand circle encloses {len(region)} crossing "
            f"lifts that are not {what}",
        )
    what = "a twist region" if allow_twists else "one crossing"
    return CutReport(
        True, window, check,
        reason=f"every 4-strand circle within the window encloses {what}",
    )


def has_cycle_of_tangles(diagram: TorusDiagram, window: int = 3) -> CutReport:
    """Pass (ok=True) iff every circle meeting the projection in 4
    strands and bounding a disk within the window encloses a single
    twist region.  Requires a weakly prime diagram."""
    _check_window(window)
    if not is_weakly_prime(diagram, window).ok:
        raise MapError("cycle-of-tangles check requires a weakly prime diagram")
    return _four_cut_scan(diagram, window, True, "cycle-of-tangles")


def check_bs_condition(diagram: TorusDiagram, window: int = 3) -> CutReport:
    """Verdict for the orthogonal circle pattern construction: every
    2-strand circle bounds a crossing-free disk and every 4-strand
    circle encloses exactly one crossing.  Twist regions are not
    exempt, so diagrams with bigons fail with the enclosing 4-cut as
    witness."""
    _check_window(window)
    wp = is_weakly_prime(diagram, window)
    if not wp.ok:
        return CutReport(
            False, window, "bs-condition", wp.cut_size, wp.inside,
            wp.cut_edges, "not weakly prime: " + wp.reason,
        )
    scan = _four_cut_scan(diagram, window, False, "bs-condition")
    if scan.ok:
        scan.reason = ("weakly prime and every 4-strand circle within "
                       "the window encloses one crossing")
    return scan
