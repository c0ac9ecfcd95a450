"""Coordinates for L-drawings.

An L-drawing places every vertex on an integer point with all x and all y
coordinates distinct; each edge is drawn as a vertical segment leaving the
tail followed by a horizontal segment entering the head.  A port assignment
fixes, per edge, the side the vertical leaves (North/South) and the side
the horizontal enters (East/West); it is realized by coordinates exactly
when the corresponding order constraints hold, so drawing a triangulated
graph reduces to topological orderings of two constraint digraphs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph_model import GraphError, PlaneDigraph

NORTH = "N"
SOUTH = "S"
EAST = "E"
WEST = "W"

# pa: edge id -> (out port, in port)
PortMap = dict[int, tuple[str, str]]


class CyclicConstraint(GraphError):
    """The port assignment admits no drawing: a constraint digraph has a cycle."""


class NotOuterplanar(GraphError):
    """Some vertex is not on the outer face."""


class InconsistentSharedTriangle(GraphError):
    """Parent and child component disagree on a shared triangle edge."""


@dataclass(frozen=True)
class LDrawing:
    """Integer point per vertex; edge polylines are derived from endpoints."""

    points: dict[int, tuple[int, int]]

    def polyline(self, g: PlaneDigraph, e: int) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
        t, h = g.edges[e]
        xt, yt = self.points[t]
        xh, yh = self.points[h]
        return ((xt, yt), (xt, yh), (xh, yh))


@dataclass
class ConstraintDigraphs:
    """X orders vertices left-to-right, Y bottom-to-top."""

    vertices: tuple[int, ...]
    x_edges: list[tuple[int, int]]
    y_edges: list[tuple[int, int]]


def geometric_ports(g: PlaneDigraph, drawing: LDrawing) -> PortMap:
    """The port assignment implied by coordinates."""
    pa: PortMap = {}
    pts = drawing.points
    for e, (t, h) in g.edges.items():
        xt, yt = pts[t]
        xh, yh = pts[h]
        pa[e] = (NORTH if yt < yh else SOUTH, WEST if xt < xh else EAST)
    return pa


def build_xy(g: PlaneDigraph, pa: PortMap) -> ConstraintDigraphs:
    """Constraint digraphs: an X-edge (a, b) forces x(a) < x(b), a Y-edge
    (a, b) forces y(a) < y(b)."""
    xe = []
    ye = []
    for e, (v, w) in g.edges.items():
        out, inp = pa[e]
        xe.append((v, w) if inp == WEST else (w, v))
        ye.append((v, w) if out == NORTH else (w, v))
    return ConstraintDigraphs(g.vertices, xe, ye)


def _topo_ranks(vertices: tuple[int, ...], edges: list[tuple[int, int]], axis: str) -> dict[int, int]:
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    indeg = {v: 0 for v in vertices}
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    heap = [v for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    rank: dict[int, int] = {}
    r = 1
    while heap:
        v = heapq.heappop(heap)
        rank[v] = r
        r += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(rank) != len(vertices):
        raise CyclicConstraint(f"{axis} constraint digraph has a cycle")
    return rank


def coordinates(cd: ConstraintDigraphs) -> LDrawing:
    """Vertex v at (x-rank, y-rank); ranks are permutations of 1..n.
    Ties are broken by vertex id for reproducibility."""
    xr = _topo_ranks(cd.vertices, cd.x_edges, "X")
    yr = _topo_ranks(cd.vertices, cd.y_edges, "Y")
    return LDrawing({v: (xr[v], yr[v]) for v in cd.vertices})


def normalize_outer(drawing: LDrawing, anchors: dict[int, tuple[int, int]]) -> LDrawing:
    """Monotone integer rescale so the anchor vertices land on the template
    positions scaled by n; every coordinate order is preserved."""
    n = len(drawing.points)
    if not anchors:
        return drawing
    scale = max(n, 1)
    fx = _monotone_map(
        sorted(x for x, _ in drawing.points.values()),
        {drawing.points[v][0]: tx * scale for v, (tx, _) in anchors.items()},
    )
    fy = _monotone_map(
        sorted(y for _, y in drawing.points.values()),
        {drawing.points[v][1]: ty * scale for v, (_, ty) in anchors.items()},
    )
    return LDrawing({v: (fx[x], fy[y]) for v, (x, y) in drawing.points.items()})


def _monotone_map(values: list[int], anchor_targets: dict[int, int]) -> dict[int, int]:
    anchors = sorted(anchor_targets)
    targets = [anchor_targets[a] for a in anchors]
    if targets != sorted(targets) or len(set(targets)) != len(targets):
        raise GraphError("template does not preserve the coordinate order")
    out: dict[int, int] = {}
    below = [v for v in values if v < anchors[0]]
    for i, v in enumerate(reversed(below)):
        out[v] = targets[0] - (i + 1)
    for i, a in enumerate(anchors):
        out[a] = targets[i]
        if i + 1 < len(anchors):
            between = [v for v in values if a < v < anchors[i + 1]]
            lo, hi = targets[i], targets[i + 1]
            if hi - lo <= len(between):
                raise GraphError("template gap too small for interior vertices")
            for j, v in enumerate(between):
                out[v] = lo + j + 1
    above = [v for v in values if v > anchors[-1]]
    for i, v in enumerate(above):
        out[v] = targets[-1] + i + 1
    return out


def strip_augmentation(drawing: LDrawing, keep_vertices: set[int]) -> LDrawing:
    """Restrict to the original vertices and compact ranks to 1..n."""
    pts = {v: p for v, p in drawing.points.items() if v in keep_vertices}
    xs = {x: i + 1 for i, x in enumerate(sorted(p[0] for p in pts.values()))}
    ys = {y: i + 1 for i, y in enumerate(sorted(p[1] for p in pts.values()))}
    return LDrawing({v: (xs[x], ys[y]) for v, (x, y) in pts.items()})


def outerplanar_layout(g: PlaneDigraph) -> LDrawing:
    """All vertices on the diagonal, in outer-face order; edge shapes then
    follow from the edge directions alone."""
    outer = g.outer_face()
    order: list[int] = []
    seen: set[int] = set()
    for v in outer.verts:
        if v not in seen:
            seen.add(v)
            order.append(v)
    if len(seen) != len(g.vertices):
        missing = sorted(set(g.vertices) - seen)
        raise NotOuterplanar(f"vertices not on the outer face: {missing[:10]}")
    return LDrawing({v: (i + 1, i + 1) for i, v in enumerate(order)})


def assemble_global(shared_edge_pas: list[PortMap]) -> PortMap:
    """Merge per-component port maps; shared triangle edges must agree."""
    merged: PortMap = {}
    for pa in shared_edge_pas:
        for e, ports in pa.items():
            old = merged.get(e)
            if old is not None and old != ports:
                raise InconsistentSharedTriangle(f"edge {e}: {old} vs {ports}")
            merged[e] = ports
    return merged
