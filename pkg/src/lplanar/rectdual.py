"""Rectangular duals of 4-connected components.

Pipeline per component: subdivide one outer edge so the outer face becomes
a quadrangle (an irreducible triangulation), compute a regular edge
labeling by an incremental sweep, extract integer rectangle coordinates
from the labeling's two transversal structures, and reshape the four outer
rectangles to the configuration matching the prescribed drawing of the
outer triangle.

The regular edge labeling colors every inner edge blue (west-east) or red
(south-north).  The sweep grows a tiling bottom-up: a move places one new
vertex, or a chain of adjacent new vertices, over a contiguous stretch of
the current contour; stretch interiors become red (below) contacts and the
stretch ends blue (side) contacts.  Chains are required whenever a vertex
has only two earlier neighbors, which happens next to the corners.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .decompose import find_separating_triangles
from .graph_model import Dart, GraphError, PlaneDigraph, modality
from .layout import EAST, NORTH, SOUTH, WEST
from .verify import (
    TriangleDirs,
    TrianglePA,
    all_triangle_pas,
    make_triangle,
    triangle_drawing,
)


class NotIrreducible(GraphError):
    """Input violates the irreducible-triangulation precondition."""


class SweepStuck(GraphError):
    """The labeling sweep found no valid move (internal bug signal)."""


COMPASS = (NORTH, EAST, SOUTH, WEST)
CORNERS = ("NW", "NE", "SE", "SW")
CORNER_SLOTS = {"NW": (NORTH, WEST), "NE": (NORTH, EAST), "SE": (SOUTH, EAST), "SW": (SOUTH, WEST)}

# Canonical ports of the edge between two adjacent outer rectangles, by
# corner, corner owner, and edge direction (tail slot, head slot).
CORNER_PORTS: dict[str, dict[str, dict[tuple[str, str], tuple[str, str]]]] = {
    "NW": {
        NORTH: {(NORTH, WEST): (SOUTH, EAST), (WEST, NORTH): (NORTH, WEST)},
        WEST: {(NORTH, WEST): (NORTH, EAST), (WEST, NORTH): (SOUTH, WEST)},
    },
    "NE": {
        NORTH: {(NORTH, EAST): (SOUTH, EAST), (EAST, NORTH): (NORTH, WEST)},
        EAST: {(NORTH, EAST): (SOUTH, WEST), (EAST, NORTH): (NORTH, EAST)},
    },
    "SE": {
        SOUTH: {(SOUTH, EAST): (NORTH, WEST), (EAST, SOUTH): (SOUTH, EAST)},
        EAST: {(SOUTH, EAST): (SOUTH, WEST), (EAST, SOUTH): (NORTH, EAST)},
    },
    "SW": {
        SOUTH: {(SOUTH, WEST): (NORTH, WEST), (WEST, SOUTH): (SOUTH, EAST)},
        WEST: {(SOUTH, WEST): (NORTH, EAST), (WEST, SOUTH): (SOUTH, WEST)},
    },
}


@dataclass(frozen=True)
class OuterShapeClass:
    """Frozen recipe for one realizable outer-triangle drawing: which outer
    edge is subdivided, how the quadrangle maps onto the compass, which
    strip owns each corner of the frame, and the template coordinates."""

    dirs: TriangleDirs
    pa: TrianglePA
    sub_edge: int
    rotation: int
    ownership: tuple[str, str, str, str]  # owners of NW, NE, SE, SW
    template: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    def compass_of_quad(self) -> dict[int, str]:
        """Quad position (0 = triangle vertex sub_edge, 1 = x, ...) -> slot."""
        return {i: COMPASS[(i + self.rotation) % 4] for i in range(4)}


@dataclass
class Subdivision:
    graph: PlaneDigraph
    x: int
    y: int
    chord: int            # edge id between x and y
    halves: tuple[int, int]  # (alpha->x, x->beta) edge ids
    sub_edge: int         # the replaced edge of the component
    compass: dict[str, int]  # slot -> vertex id


@dataclass
class RegularEdgeLabeling:
    graph: PlaneDigraph
    compass: dict[str, int]
    blue: dict[int, tuple[int, int]]  # edge -> (west vertex, east vertex)
    red: dict[int, tuple[int, int]]   # edge -> (south vertex, north vertex)
    outer_cycle: frozenset[int]


@dataclass
class RectangularDual:
    rects: dict[int, tuple[int, int, int, int]]  # v -> (x1, y1, x2, y2)
    bounds: tuple[int, int, int, int]
    compass: dict[str, int]


# ----------------------------------------------------------------------
# the frozen class table
# ----------------------------------------------------------------------


def _pinned_requirements(
    dirs: TriangleDirs, pa: TrianglePA, sub: int
) -> tuple[list[object], list[tuple[int, int, Optional[str], Optional[str]]]]:
    """Quad boundary (clockwise) and per-quad-edge pinned ports.

    Quad positions: 0 = triangle vertex ``sub``, 1 = the subdivision vertex
    x, 2 = vertex sub+1, 3 = vertex sub+2.  Entry i describes the edge
    between positions i and i+1 as (tail position, head position,
    pinned out port or None, pinned in port or None).
    """
    a, b, c = sub, (sub + 1) % 3, (sub + 2) % 3
    quad = [a, "x", b, c]
    edges = []
    # half alpha-x / x-beta along the subdivided edge's direction
    if dirs[sub] > 0:  # a -> b
        edges.append((0, 1, pa[sub][0], None))  # a -> x, out pinned at a
        edges.append((1, 2, None, pa[sub][1]))  # x -> b, in pinned at b
    else:  # b -> a
        edges.append((1, 0, None, pa[sub][1]))  # x -> a
        edges.append((2, 1, pa[sub][0], None))  # b -> x
    e_bc = b  # edge index joining b and c
    if dirs[e_bc] > 0:
        edges.append((2, 3, pa[e_bc][0], pa[e_bc][1]))
    else:
        edges.append((3, 2, pa[e_bc][0], pa[e_bc][1]))
    e_ca = c
    if dirs[e_ca] > 0:
        edges.append((3, 0, pa[e_ca][0], pa[e_ca][1]))
    else:
        edges.append((0, 3, pa[e_ca][0], pa[e_ca][1]))
    return quad, edges


def _solve_frames(dirs: TriangleDirs, pa: TrianglePA) -> list[tuple[int, int, tuple[str, str, str, str]]]:
    """All (sub_edge, rotation, ownership) choices whose corner geometry
    makes every pinned outer port canonical."""
    solutions = []
    for sub in range(3):
        quad, edges = _pinned_requirements(dirs, pa, sub)
        for rot in range(4):
            slot = {i: COMPASS[(i + rot) % 4] for i in range(4)}
            owners: dict[str, str] = {}
            ok = True
            for tail_pos, head_pos, out_pin, in_pin in edges:
                s_tail, s_head = slot[tail_pos], slot[head_pos]
                corner = _corner_of(s_tail, s_head)
                feasible = []
                for owner in CORNER_SLOTS[corner]:
                    out, inp = CORNER_PORTS[corner][owner][(s_tail, s_head)]
                    if (out_pin is None or out == out_pin) and (in_pin is None or inp == in_pin):
                        feasible.append(owner)
                prior = owners.get(corner)
                if prior is not None:
                    feasible = [o for o in feasible if o == prior]
                if not feasible:
                    ok = False
                    break
                owners[corner] = feasible[0]
            if ok:
                ownership = tuple(owners[c] for c in CORNERS)
                solutions.append((sub, rot, ownership))
    return solutions


def _corner_of(s1: str, s2: str) -> str:
    pair = {s1, s2}
    for name, slots in CORNER_SLOTS.items():
        if set(slots) == pair:
            return name
    raise GraphError(f"slots {s1},{s2} are not adjacent")


# which quadrant of a slot vertex the interior must occupy: (y sign,
# x sign) with True meaning the interior coordinate is smaller
_SLOT_INTERIOR = {
    NORTH: (True, True),    # interior below and left of the North strip
    EAST: (False, True),    # above and left
    SOUTH: (False, False),  # above and right
    WEST: (True, False),    # below and right
}


def _interior_samples(dirs: TriangleDirs, template) -> list[tuple[float, float]]:
    """Points inside the triangle drawing, by even-odd ray casting on a
    quarter-integer grid (template coordinates are integers)."""
    poly: list[tuple[float, float]] = []
    for i in range(3):
        a, b = i, (i + 1) % 3
        if dirs[i] > 0:
            t, h = template[a], template[b]
            piece = [t, (t[0], h[1]), h]
        else:
            t, h = template[b], template[a]
            piece = [h, (t[0], h[1]), t]
        poly.extend(piece[:-1])
    samples = []
    xs = [p[0] for p in template]
    ys = [p[1] for p in template]
    k = len(poly)
    step = 0.5  # quarter-offset start keeps samples off the integer grid
    gx = min(xs) + 0.25
    while gx < max(xs):
        gy = min(ys) + 0.25
        while gy < max(ys):
            crossings = 0
            for i in range(k):
                (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % k]
                if x1 == x2:
                    if x1 > gx and min(y1, y2) < gy < max(y1, y2):
                        crossings += 1
            if crossings % 2 == 1:
                samples.append((gx, gy))
            gy += step
        gx += step
    return samples


def _alignment_ok(dirs: TriangleDirs, template, sub: int, rot: int, samples) -> bool:
    """Some interior point must sit in the quadrant each strip's canonical
    rules assume for the inside."""
    quad = [sub, "x", (sub + 1) % 3, (sub + 2) % 3]
    constraints = []
    for pos, vert in enumerate(quad):
        if vert == "x":
            continue
        slot = COMPASS[(pos + rot) % 4]
        y_below, x_left = _SLOT_INTERIOR[slot]
        px, py = template[vert]
        constraints.append((px, py, y_below, x_left))
    for (sx, sy) in samples:
        ok = True
        for px, py, y_below, x_left in constraints:
            if (sy < py) != y_below or (sx < px) != x_left:
                ok = False
                break
        if ok:
            return True
    return False


@lru_cache(maxsize=None)
def shape_class(dirs: TriangleDirs, pa: TrianglePA) -> OuterShapeClass:
    """The frozen OuterShapeClass for a realizable outer-triangle drawing.

    Among the frames whose corner geometry makes the pinned outer ports
    canonical, keep one whose compass aligns with the drawing: each strip
    must see the interior on the side its canonical rules assume.
    """
    drawing = triangle_drawing(dirs, pa)
    if drawing is None:
        raise GraphError(f"outer drawing {dirs} {pa} admits no planar L-drawing")
    template = tuple(drawing.points[v] for v in range(3))
    samples = _interior_samples(dirs, template)
    solutions = [
        (s, r, own)
        for s, r, own in _solve_frames(dirs, pa)
        if _alignment_ok(dirs, template, s, r, samples)
    ]
    if not solutions:
        raise GraphError(f"no aligned frame configuration for {dirs} {pa}")
    sub, rot, ownership = solutions[0]
    return OuterShapeClass(dirs, pa, sub, rot, ownership, template)


@lru_cache(maxsize=1)
def shape_table() -> dict[tuple[TriangleDirs, TrianglePA], OuterShapeClass]:
    """Class entries for every realizable (orientation, port assignment)."""
    table = {}
    for dirs in itertools.product((1, -1), repeat=3):
        for pa in all_triangle_pas():
            if triangle_drawing(dirs, pa) is not None:
                table[(dirs, pa)] = shape_class(dirs, pa)
    return table


# ----------------------------------------------------------------------
# subdivision
# ----------------------------------------------------------------------


def insert_subdivision(
    h: PlaneDigraph,
    outer_cw: list[int],
    outer_edges_cw: list[int],
    shape: OuterShapeClass,
    designated: dict[int, int],
) -> Subdivision:
    """Subdivide the outer edge chosen by the shape class with a vertex x,
    triangulate the resulting inner quadrangle with a chord from x, and
    orient the chord by the modality rules for its other endpoint y.

    ``outer_cw`` lists the outer triangle clockwise aligned with shape.dirs;
    ``outer_edges_cw`` the edge ids, entry i joining outer_cw[i] and
    outer_cw[i+1].  ``designated`` maps 0-modal vertices to a designated
    inner face id of h.
    """
    sub_pos = shape.sub_edge
    e_sub = outer_edges_cw[sub_pos]
    alpha, beta = outer_cw[sub_pos], outer_cw[(sub_pos + 1) % 3]
    t, hd = h.edges[e_sub]
    if {t, hd} != {alpha, beta}:
        raise GraphError("outer edge list does not match the triangle")

    # the inner face at the subdivided edge: (t, hd, y)
    inner_trav = (e_sub, 1) if h.face_of((e_sub, 1)) != h.outer_face_id else (e_sub, -1)
    inner_face = h.compute_faces()[h.face_of(inner_trav)]
    if len(inner_face) != 3:
        raise NotIrreducible("inner face at the outer edge is not a triangle")
    y = next(v for v in inner_face.verts if v not in (t, hd))
    y_designated = designated.get(y)
    y_mod = modality(h, y)

    x = max(h.vertices) + 1
    e1 = max(h.edges) + 1  # t -> x
    e2 = e1 + 1            # x -> hd
    chord = e1 + 2         # x-y chord

    edges = dict(h.edges)
    del edges[e_sub]
    edges[e1] = (t, x)
    edges[e2] = (x, hd)

    rot = {v: list(h.rot[v]) for v in h.vertices}
    _replace_dart(rot[t], (e_sub, 0), (e1, 0))
    _replace_dart(rot[hd], (e_sub, 1), (e2, 1))

    # orient the chord at y
    if y_mod == 0:
        to_y = y_designated == inner_face.id
        if to_y:
            make_out_at_y = not _vertex_is_source(h, y)
        else:
            make_out_at_y = _vertex_is_source(h, y)
        chord_tail_y = make_out_at_y
    else:
        chord_tail_y = _chord_keeps_modality(h, y, inner_face, e_sub)
    if chord_tail_y:
        edges[chord] = (y, x)
    else:
        edges[chord] = (x, y)

    # rotation at x (clockwise): arriving half, chord, leaving half such
    # that the outer face keeps x between t and hd.  Outer face is traced
    # clockwise; inner side gets the chord.
    dx1 = (e1, 1)
    dx2 = (e2, 0)
    dchord_x = (chord, 0 if edges[chord][0] == x else 1)
    if h.face_of((e_sub, 1)) == h.outer_face_id:
        # traversal t->hd lies on the outer face: its reversal is inner
        rot[x] = None  # placeholder, set below
        rot_x = _order_x_rotation(h, e_sub, t, hd, dx1, dx2, dchord_x, outer_is_forward=True)
    else:
        rot_x = _order_x_rotation(h, e_sub, t, hd, dx1, dx2, dchord_x, outer_is_forward=False)
    rot[x] = rot_x

    # chord dart at y goes between the darts of the inner face's corner at y
    dy = (chord, 0 if edges[chord][0] == y else 1)
    k = len(inner_face.travs)
    i_y = inner_face.verts.index(y)
    t_out_y = inner_face.travs[i_y]             # leaves y along the face
    t_in_y = inner_face.travs[(i_y - 1) % k]    # arrives at y
    d_after = h.dart_at_origin(t_out_y)
    rot_y = rot[y]
    pos = rot_y.index(d_after)
    rot_y.insert(pos, dy)

    vertices = list(h.vertices) + [x]
    outer_dart = h.outer_dart
    if outer_dart is not None and outer_dart[0] == e_sub:
        outer_dart = (e1, outer_dart[1]) if outer_dart[1] == 1 else (e1, outer_dart[1])
        # traversal direction along t->x matches the original's direction
        outer_dart = (e1, h.outer_dart[1])
    hx = PlaneDigraph(vertices, edges, {v: tuple(r) for v, r in rot.items()}, outer_dart)

    quadmap = shape.compass_of_quad()
    compass = {
        quadmap[0]: alpha,
        quadmap[1]: x,
        quadmap[2]: beta,
        quadmap[3]: outer_cw[(sub_pos + 2) % 3],
    }
    return Subdivision(hx, x, y, chord, (e1, e2), e_sub, compass)


def _replace_dart(rot: list[Dart], old: Dart, new: Dart) -> None:
    rot[rot.index(old)] = new


def _vertex_is_source(h: PlaneDigraph, v: int) -> bool:
    return all(d[1] == 0 for d in h.rot[v])


def _chord_keeps_modality(h: PlaneDigraph, y: int, face, e_sub: int) -> bool:
    """True if the chord should be directed out of y."""
    k = len(face.travs)
    i_y = face.verts.index(y)
    d_next = h.dart_at_origin(face.travs[i_y])
    d_prev = h.dart_at_target(face.travs[(i_y - 1) % k])
    # inserting between d_prev and d_next (clockwise): direction is safe if
    # it matches one flank
    for out in (True, False):
        if (d_prev[1] == 0) == out or (d_next[1] == 0) == out:
            if _modality_after_insert(h, y, d_prev, out) <= max(2, modality(h, y)):
                return out
    return d_prev[1] == 0


def _modality_after_insert(h: PlaneDigraph, v: int, after: Dart, new_out: bool) -> int:
    seq = []
    for d in h.rot[v]:
        seq.append(d[1] == 0)
        if d == after:
            seq.append(new_out)
    changes = 0
    for i, s in enumerate(seq):
        if s != seq[i - 1]:
            changes += 1
    return changes


def _order_x_rotation(h, e_sub, t, hd, dx1, dx2, dchord_x, outer_is_forward: bool):
    # clockwise rotation at x: the outer face must trace ... t -> x -> hd ...
    # exactly as the original edge did.  x has three darts; the chord sits
    # on the inner side.
    if outer_is_forward:
        # outer trace runs t -> x -> hd; face rule: after arriving at x via
        # (e1,+1), next dart clockwise from dx1 must be dx2.
        return (dx1, dx2, dchord_x)
    # outer trace runs hd -> x -> t: after arriving via (e2,-1) at x the
    # next dart clockwise after dx2 must be dx1.
    return (dx2, dx1, dchord_x)


# ----------------------------------------------------------------------
# regular edge labeling by sweep
# ----------------------------------------------------------------------


def compute_rel(sub: Subdivision) -> RegularEdgeLabeling:
    g = sub.graph
    compass = sub.compass
    _check_irreducible(g, compass)
    seq = _SweepState(g, compass).run()
    blue: dict[int, tuple[int, int]] = {}
    red: dict[int, tuple[int, int]] = {}
    outer_cycle = _outer_cycle_edges(g)
    for kind, e, a, b in seq:
        if e in outer_cycle:
            continue
        if kind == "blue":
            blue[e] = (a, b)
        else:
            red[e] = (a, b)
    rel = RegularEdgeLabeling(g, compass, blue, red, outer_cycle)
    problems = check_rel(rel)
    if problems:
        raise SweepStuck("; ".join(problems[:4]))
    return rel


def _outer_cycle_edges(g: PlaneDigraph) -> frozenset[int]:
    return frozenset(t[0] for t in g.outer_face().travs)


def _check_irreducible(g: PlaneDigraph, compass: dict[str, int]) -> None:
    outer = g.outer_face()
    if len(outer) != 4:
        raise NotIrreducible(f"outer face degree {len(outer)}")
    face_triples = set()
    for f in g.compute_faces():
        if f.id != g.outer_face_id and len(f) != 3:
            raise NotIrreducible(f"inner face of degree {len(f)}")
        if len(f) == 3:
            face_triples.add(f.vertex_set)
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for t, h in g.edges.values():
        adj[t].add(h)
        adj[h].add(t)
    for e, (u, v) in g.edges.items():
        for w in adj[u] & adj[v]:
            if frozenset((u, v, w)) not in face_triples:
                raise NotIrreducible(f"separating triangle {tuple(sorted((u, v, w)))}")
    if set(compass.values()) != set(outer.vertex_set):
        raise NotIrreducible("compass does not match the outer face")


class _SweepState:
    """Grows the tiling bottom-up.  Every move is validated against the
    embedding: the covered stretch must be consecutive in every touched
    rotation, so only moves matching an actual row of faces are taken.
    Greedy selection with depth-first backtracking on dead ends."""

    def __init__(self, g: PlaneDigraph, compass: dict[str, int]) -> None:
        self.g = g
        self.vN = compass[NORTH]
        self.vS = compass[SOUTH]
        self.vW = compass[WEST]
        self.vE = compass[EAST]
        self.adj: dict[int, list[int]] = {v: [g.dart_other(d) for d in g.rot[v]] for v in g.vertices}
        self.rot_nbrs: dict[int, list[int]] = dict(self.adj)
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        self.placed: set[int] = set()
        self.unplaced_deg: dict[int, int] = {}
        self.labels: list[tuple[str, int, int, int]] = []
        self.und: dict[tuple[int, int], int] = {}
        for e, (t, h) in g.edges.items():
            self.und[(t, h) if t < h else (h, t)] = e

    def _edge(self, a: int, b: int) -> int:
        return self.und[(a, b) if a < b else (b, a)]

    def run(self) -> list[tuple[str, int, int, int]]:
        g = self.g
        a, b, c = self.vW, self.vS, self.vE
        self.nxt = {a: b, b: c}
        self.prv = {b: a, c: b}
        self.placed = {a, b, c}
        for v in g.vertices:
            self.unplaced_deg[v] = sum(1 for u in self.adj[v] if u not in self.placed)
        budget = [60 + 30 * g.n()]
        if not self._search(budget):
            raise SweepStuck(
                f"no regular edge labeling found ({g.n() - len(self.placed)} vertices left)"
            )
        return self.labels

    def _search(self, budget: list[int]) -> bool:
        if len(self.placed) == self.g.n():
            return True
        if budget[0] <= 0:
            return False
        budget[0] -= 1
        for move in self._moves():
            undo = self._apply(move)
            if self._search(budget):
                return True
            self._undo(undo)
        return False

    def _moves(self):
        last = len(self.placed) == self.g.n() - 1
        for v in sorted(self.g.vertices):
            if v in self.placed:
                continue
            if (v == self.vN) != last:
                continue
            yield from self._try_move(v)

    def _cyclic_run_ok(self, v: int, expected: list[int]) -> bool:
        """expected must be a consecutive run in v's clockwise rotation."""
        nbrs = self.rot_nbrs[v]
        k = len(nbrs)
        if len(expected) > k:
            return False
        try:
            i = nbrs.index(expected[0])
        except ValueError:
            return False
        return all(nbrs[(i + j) % k] == expected[j] for j in range(len(expected)))

    def _contour_run(self, v: int) -> Optional[list[int]]:
        cn = [u for u in self.adj[v] if u in self.placed]
        if not cn:
            return None
        cs = set(cn)
        start = cn[0]
        while self.prv.get(start) in cs:
            start = self.prv[start]
        run = [start]
        cur = start
        while self.nxt.get(cur) in cs:
            cur = self.nxt[cur]
            run.append(cur)
        if len(run) != len(cs):
            return None  # not contiguous on the contour
        return run

    def _try_move(self, v1: int):
        run = self._contour_run(v1)
        if run is None or len(run) < 2:
            return
        c_l = run[0]
        if c_l in (self.vS, self.vE):
            return
        # single move: run = [c_l, mids..., c_r]
        if len(run) >= 3 and run[-1] != self.vS:
            mids = run[1:-1]
            if all(self.unplaced_deg[m] == 1 for m in mids):
                move = (c_l, [v1], run[-1], [list(mids)])
                if self._move_valid(move):
                    yield move
        # chain move: members share one floor vertex with each neighbor
        members = [v1]
        floors = [run[1:]]
        prev = v1
        for _ in range(self.g.n() + 4):
            floor = floors[-1]
            if not floor:
                return
            mids_core = floor[1:-1] if len(members) > 1 else floor[:-1]
            if any(self.unplaced_deg[m] != 1 for m in mids_core):
                return
            shared = floor[-1]
            if self.unplaced_deg[shared] < 2:
                return
            # the next member follows prev in the middle's clockwise rotation
            nbrs = self.rot_nbrs[shared]
            nxt_member = nbrs[(nbrs.index(prev) + 1) % len(nbrs)]
            if nxt_member in self.placed or nxt_member in members:
                return
            if nxt_member == self.vN or nxt_member not in self.adj[prev]:
                return
            run2 = self._contour_run(nxt_member)
            if run2 is None or run2[0] != shared:
                return
            members.append(nxt_member)
            prev = nxt_member
            if len(run2) >= 2 and run2[-1] != self.vS:
                mids2 = run2[1:-1]
                if all(self.unplaced_deg[m] == 1 for m in mids2):
                    move = (c_l, list(members), run2[-1], floors + [run2[:-1]])
                    if self._move_valid(move):
                        yield move
            floors.append(run2)

    def _move_valid(self, move) -> bool:
        c_l, members, c_r, floors = move
        if not self._no_stranding(move):
            return False
        # the covered stretch must be consecutive clockwise at each member:
        # right flank, floor right-to-left, left flank
        p = len(members)
        for t, (member, floor) in enumerate(zip(members, floors)):
            left = c_l if t == 0 else members[t - 1]
            right = c_r if t == p - 1 else members[t + 1]
            expected = [right] + list(reversed(floor)) + [left]
            if not self._cyclic_run_ok(member, expected):
                return False
        # and consecutive at each covered vertex: contour left neighbor,
        # covering members left-to-right, contour right neighbor
        cover_of: dict[int, list[int]] = {}
        for member, floor in zip(members, floors):
            for m in floor:
                cover_of.setdefault(m, []).append(member)
        for m, cover in cover_of.items():
            expected = [self.prv[m]] + cover + [self.nxt[m]]
            if not self._cyclic_run_ok(m, expected):
                return False
        return True

    def _no_stranding(self, move) -> bool:
        """After the move, remaining contour vertices except the walls must
        keep an unplaced neighbor, or the sweep is complete."""
        c_l, members, c_r, _ = move
        if len(self.placed) + len(members) == self.g.n():
            return True
        memberset = set(members)
        for v in [c_l, c_r] + members:
            if v in (self.vW, self.vE):
                continue
            left = sum(
                1 for u in self.adj[v] if u not in self.placed and u not in memberset
            )
            if left == 0:
                return False
        return True

    def _apply(self, move):
        c_l, members, c_r, floors = move
        covered: list[int] = []
        seen = set()
        for f in floors:
            for m in f:
                if m not in seen:
                    seen.add(m)
                    covered.append(m)
        n_labels = len(self.labels)
        if not (c_l == self.vW and members[0] == self.vN):
            self.labels.append(("blue", self._edge(c_l, members[0]), c_l, members[0]))
        for a, b in zip(members, members[1:]):
            self.labels.append(("blue", self._edge(a, b), a, b))
        if not (c_r == self.vE and members[-1] == self.vN):
            self.labels.append(("blue", self._edge(members[-1], c_r), members[-1], c_r))
        for member, floor in zip(members, floors):
            for m in floor:
                self.labels.append(("red", self._edge(m, member), m, member))
        cur = self.nxt[c_l]
        while cur != c_r:
            nxt = self.nxt[cur]
            del self.nxt[cur]
            del self.prv[cur]
            cur = nxt
        prev = c_l
        for v in members:
            self.nxt[prev] = v
            self.prv[v] = prev
            prev = v
        self.nxt[prev] = c_r
        self.prv[c_r] = prev
        for v in members:
            self.placed.add(v)
            for u in self.adj[v]:
                self.unplaced_deg[u] -= 1
        return (move, covered, n_labels)

    def _undo(self, undo) -> None:
        (c_l, members, c_r, floors), covered, n_labels = undo
        del self.labels[n_labels:]
        for v in members:
            self.placed.discard(v)
            for u in self.adj[v]:
                self.unplaced_deg[u] += 1
        for v in members:
            del self.nxt[v]
            del self.prv[v]
        prev = c_l
        for m in covered:
            self.nxt[prev] = m
            self.prv[m] = prev
            prev = m
        self.nxt[prev] = c_r
        self.prv[c_r] = prev


def check_rel(rel: RegularEdgeLabeling) -> list[str]:
    """Block structure around every vertex: clockwise red-out, blue-out,
    red-in, blue-in; all four nonempty at inner vertices, exactly one
    nonempty at the compass vertices."""
    g = rel.graph
    problems = []
    labeled = set(rel.blue) | set(rel.red)
    expected = set(g.edges) - set(rel.outer_cycle)
    if labeled != expected:
        problems.append(f"{len(expected - labeled)} inner edges unlabeled, {len(labeled - expected)} extra")
        return problems
    compass_of = {v: s for s, v in rel.compass.items()}
    for v in g.vertices:
        kinds = []
        for d in g.rot[v]:
            e = d[0]
            if e in rel.outer_cycle:
                continue
            if e in rel.blue:
                w, ee = rel.blue[e]
                kinds.append("BO" if v == w else "BI")
            else:
                s, n = rel.red[e]
                kinds.append("RO" if v == s else "RI")
        if not kinds:
            problems.append(f"vertex {v} has no labeled edges")
            continue
        blocks = _cyclic_blocks(kinds)
        slot = compass_of.get(v)
        if slot is None:
            if sorted(set(kinds)) != ["BI", "BO", "RI", "RO"] or blocks != 4:
                problems.append(f"inner vertex {v}: blocks {kinds}")
            elif not _clockwise_block_order(kinds):
                problems.append(f"inner vertex {v}: block order {kinds}")
        else:
            want = {NORTH: "RI", SOUTH: "RO", WEST: "BO", EAST: "BI"}[slot]
            if set(kinds) != {want}:
                problems.append(f"compass {slot} vertex {v}: {kinds}")
    return problems


def _cyclic_blocks(kinds: list[str]) -> int:
    changes = sum(1 for i, k in enumerate(kinds) if k != kinds[i - 1])
    return changes if changes else 1


def _clockwise_block_order(kinds: list[str]) -> bool:
    order = ["RO", "BO", "RI", "BI"]
    start = next(
        (i for i, k in enumerate(kinds) if k == "RO" and kinds[i - 1] != "RO"),
        None,
    )
    if start is None:
        return False
    seq = [kinds[(start + i) % len(kinds)] for i in range(len(kinds))]
    pos = 0
    for k in seq:
        while pos < 4 and order[pos] != k:
            pos += 1
        if pos == 4:
            return False
    return True


# ----------------------------------------------------------------------
# coordinates from the labeling
# ----------------------------------------------------------------------


def rel_to_rectdual(rel: RegularEdgeLabeling) -> RectangularDual:
    g = rel.graph
    vN, vS = rel.compass[NORTH], rel.compass[SOUTH]
    vW, vE = rel.compass[WEST], rel.compass[EAST]

    wall_members = [v for v in g.vertices if v not in (vN, vS)]
    wall_rank = _segment_ranks(
        wall_members,
        [(w, e) for (w, e) in rel.blue.values()],
        cross_pairs=[(s, n) for (s, n) in rel.red.values()],
        left_key="L",
        right_key="R",
    )
    shelf_members = [v for v in g.vertices if v not in (vW, vE)]
    shelf_rank = _segment_ranks(
        shelf_members,
        [(s, n) for (s, n) in rel.red.values()],
        cross_pairs=[(w, e) for (w, e) in rel.blue.values()],
        left_key="B",
        right_key="T",
    )

    x_lo, x_hi = wall_rank[("R", vW)], wall_rank[("L", vE)]
    y_lo, y_hi = shelf_rank[("T", vS)], shelf_rank[("B", vN)]

    rects: dict[int, tuple[int, int, int, int]] = {}
    for v in g.vertices:
        if v in (vN, vS, vW, vE):
            continue
        rects[v] = (
            wall_rank[("L", v)],
            shelf_rank[("B", v)],
            wall_rank[("R", v)],
            shelf_rank[("T", v)],
        )
    rects[vW] = (x_lo - 1, y_lo, x_lo, y_hi)
    rects[vE] = (x_hi, y_lo, x_hi + 1, y_hi)
    rects[vS] = (x_lo - 1, y_lo - 1, x_hi + 1, y_lo)
    rects[vN] = (x_lo - 1, y_hi, x_hi + 1, y_hi + 1)
    bounds = (x_lo - 1, y_lo - 1, x_hi + 1, y_hi + 1)
    return RectangularDual(rects, bounds, dict(rel.compass))


def _segment_ranks(members, contacts, left_key: str, right_key: str) -> dict[tuple[str, int], int]:
    """Union left/right slots along shared segment lines, then rank the
    segment classes by longest path so every rectangle has positive size."""
    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for v in members:
        parent.setdefault((left_key, v), (left_key, v))
        parent.setdefault((right_key, v), (right_key, v))
    for a, b in contacts:
        union((right_key, a), (left_key, b))

    succ: dict[tuple[str, int], list[tuple[str, int]]] = {}
    indeg: dict[tuple[str, int], int] = {}
    classes = {find((k, v)) for v in members for k in (left_key, right_key)}
    for c in classes:
        succ[c] = []
        indeg[c] = 0
    for v in members:
        a, b = find((left_key, v)), find((right_key, v))
        succ[a].append(b)
        indeg[b] += 1
    rank: dict[tuple[str, int], int] = {}
    frontier = [c for c in classes if indeg[c] == 0]
    for c in frontier:
        rank[c] = 0
    queue = list(frontier)
    while queue:
        c = queue.pop()
        for d in succ[c]:
            if rank.get(d, -1) < rank[c] + 1:
                rank[d] = rank[c] + 1
            indeg[d] -= 1
            if indeg[d] == 0:
                queue.append(d)
    if len(rank) != len(classes):
        raise SweepStuck("cyclic wall structure")
    return {(k, v): rank[find((k, v))] for v in members for k in (left_key, right_key)}


# ----------------------------------------------------------------------
# frame reshaping and dual validation
# ----------------------------------------------------------------------


def fix_outer(dual: RectangularDual, shape: OuterShapeClass) -> RectangularDual:
    """Reshape the four outer rectangles so each frame corner is owned by
    the strip the shape class prescribes; interior contacts are unchanged."""
    compass = dual.compass
    inner = {
        v: r
        for v, r in dual.rects.items()
        if v not in set(compass.values())
    }
    if inner:
        a = min(r[0] for r in inner.values())
        c = min(r[1] for r in inner.values())
        b = max(r[2] for r in inner.values())
        d = max(r[3] for r in inner.values())
    else:
        # K4: no inner rectangles; keep a unit inner box
        a, c, b, d = 0, 0, 1, 1
    own = dict(zip(CORNERS, shape.ownership))
    rects = dict(dual.rects)
    rects[compass[NORTH]] = (
        a - (1 if own["NW"] == NORTH else 0),
        d,
        b + (1 if own["NE"] == NORTH else 0),
        d + 1,
    )
    rects[compass[SOUTH]] = (
        a - (1 if own["SW"] == SOUTH else 0),
        c - 1,
        b + (1 if own["SE"] == SOUTH else 0),
        c,
    )
    rects[compass[WEST]] = (
        a - 1,
        c - (1 if own["SW"] == WEST else 0),
        a,
        d + (1 if own["NW"] == WEST else 0),
    )
    rects[compass[EAST]] = (
        b,
        c - (1 if own["SE"] == EAST else 0),
        b + 1,
        d + (1 if own["NE"] == EAST else 0),
    )
    return RectangularDual(rects, (a - 1, c - 1, b + 1, d + 1), dict(compass))


def dual_contacts(dual: RectangularDual) -> dict[frozenset[int], tuple[str, int, int, int]]:
    """All positive-length contacts: pair -> (axis, line, lo, hi).
    axis 'v' means a shared vertical boundary at x = line."""
    contacts: dict[frozenset[int], tuple[str, int, int, int]] = {}
    by_x1: dict[int, list[int]] = {}
    by_x2: dict[int, list[int]] = {}
    by_y1: dict[int, list[int]] = {}
    by_y2: dict[int, list[int]] = {}
    for v, (x1, y1, x2, y2) in dual.rects.items():
        by_x1.setdefault(x1, []).append(v)
        by_x2.setdefault(x2, []).append(v)
        by_y1.setdefault(y1, []).append(v)
        by_y2.setdefault(y2, []).append(v)
    for x, lefts in by_x2.items():
        rights = by_x1.get(x)
        if not rights:
            continue
        for a in lefts:
            ra = dual.rects[a]
            for b in rights:
                rb = dual.rects[b]
                lo = max(ra[1], rb[1])
                hi = min(ra[3], rb[3])
                if hi > lo:
                    contacts[frozenset((a, b))] = ("v", x, lo, hi)
    for y, bots in by_y2.items():
        tops = by_y1.get(y)
        if not tops:
            continue
        for a in bots:
            ra = dual.rects[a]
            for b in tops:
                rb = dual.rects[b]
                lo = max(ra[0], rb[0])
                hi = min(ra[2], rb[2])
                if hi > lo:
                    contacts[frozenset((a, b))] = ("h", y, lo, hi)
    return contacts


def check_dual(dual: RectangularDual, g: PlaneDigraph) -> list[str]:
    """Dual invariants: positive rectangles tiling the bounding box, no
    four rectangles meeting at a point, contacts exactly the edges."""
    problems = []
    area = 0
    corners: dict[tuple[int, int], int] = {}
    for v, (x1, y1, x2, y2) in dual.rects.items():
        if not (x1 < x2 and y1 < y2):
            problems.append(f"rect {v} degenerate")
            continue
        area += (x2 - x1) * (y2 - y1)
        for p in ((x1, y1), (x1, y2), (x2, y1), (x2, y2)):
            corners[p] = corners.get(p, 0) + 1
    bx1, by1, bx2, by2 = dual.bounds
    if area != (bx2 - bx1) * (by2 - by1):
        problems.append(f"area {area} != bounds {(bx2 - bx1) * (by2 - by1)}")
    for p, k in corners.items():
        inner_pt = bx1 < p[0] < bx2 and by1 < p[1] < by2
        if k >= 4 or (not inner_pt and k > 2):
            problems.append(f"{k} rectangle corners at {p}")
    want = set()
    for t, h in g.edges.values():
        want.add(frozenset((t, h)))
    got = set(dual_contacts(dual))
    if want != got:
        problems.append(
            f"contacts mismatch: missing {sorted(map(sorted, want - got))[:4]}, extra {sorted(map(sorted, got - want))[:4]}"
        )
    return problems
