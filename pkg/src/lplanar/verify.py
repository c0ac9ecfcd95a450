"""Geometric certification of L-drawings and an exhaustive tiny-instance oracle.

``check_drawing`` validates a drawing against its plane digraph: distinct
coordinates, L-shaped edges, optional port realization, legality of every
segment contact (overlaps only as shared prefixes at a common tail or
shared suffixes at a common head), crossing freedom, and preservation of
the rotation system and outer face.

``brute_force_oracle`` enumerates all pairs of coordinate rank orders for
graphs with at most six vertices, so it decides drawability exhaustively;
only coordinate orders matter for planarity of L-drawings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph_model import Dart, Face, GraphError, PlaneDigraph
from .layout import EAST, NORTH, SOUTH, WEST, LDrawing, PortMap, geometric_ports


class TooLarge(GraphError):
    """Instance exceeds the oracle's exhaustive-search cap."""


CHECK_NAMES = (
    "distinct-coordinates",
    "l-shape",
    "port-realization",
    "overlap-legality",
    "crossing-freedom",
    "rotation-system",
    "port-order",
    "outer-face",
)


@dataclass
class VerificationReport:
    checks: dict[str, tuple[bool, list[str]]] = field(default_factory=dict)

    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def record(self, name: str, ok: bool, witnesses: list[str] | None = None) -> None:
        self.checks[name] = (ok, witnesses or [])

    def failures(self) -> list[str]:
        return [n for n, (ok, _) in self.checks.items() if not ok]

    def lines(self) -> list[str]:
        out = []
        for name in CHECK_NAMES:
            if name not in self.checks:
                continue
            ok, wit = self.checks[name]
            row = f"check {name} {'pass' if ok else 'fail'}"
            if wit:
                row += " " + "; ".join(wit[:4])
            out.append(row)
        return out


# ----------------------------------------------------------------------
# rotation reconstruction from geometry
# ----------------------------------------------------------------------


def rotation_bundles(
    g: PlaneDigraph, pts: dict[int, tuple[int, int]], v: int
) -> tuple[list[Dart], list[Dart], list[Dart], list[Dart]]:
    """Darts at v grouped by port in clockwise geometric order N, E, S, W.

    Within a port the edges come first bending toward the previous port
    direction with increasing segment length, then bending toward the next
    with decreasing length.
    """
    xv, yv = pts[v]
    north: list[tuple] = []
    south: list[tuple] = []
    east: list[tuple] = []
    west: list[tuple] = []
    for d in g.rot[v]:
        u = g.dart_other(d)
        xu, yu = pts[u]
        if d[1] == 0:  # outgoing, vertical segment at v
            vlen = abs(yu - yv)
            right = xu > xv
            if yu > yv:
                # N: left-benders ascending, then right-benders descending
                north.append(((0, vlen) if not right else (1, -vlen), d))
            else:
                # S: right-benders ascending, then left-benders descending
                south.append(((0, vlen) if right else (1, -vlen), d))
        else:  # incoming, horizontal segment at v
            hlen = abs(xu - xv)
            up = yu > yv
            if xu > xv:
                # E: up-benders ascending, then down-benders descending
                east.append(((0, hlen) if up else (1, -hlen), d))
            else:
                # W: down-benders ascending, then up-benders descending
                west.append(((0, hlen) if not up else (1, -hlen), d))
    for bundle in (north, east, south, west):
        bundle.sort()
    return (
        [d for _, d in north],
        [d for _, d in east],
        [d for _, d in south],
        [d for _, d in west],
    )


def geometric_rotation(g: PlaneDigraph, pts: dict[int, tuple[int, int]], v: int) -> list[Dart]:
    n, e, s, w = rotation_bundles(g, pts, v)
    return n + e + s + w


def _cyclic_equal(a: list, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        i = b.index(a[0])
    except ValueError:
        return False
    k = len(a)
    return all(a[j] == b[(i + j) % k] for j in range(k))


# ----------------------------------------------------------------------
# segment contact legality
# ----------------------------------------------------------------------


def _vh_hit(
    g: PlaneDigraph, pts: dict[int, tuple[int, int]], a: int, b: int
) -> tuple[int, int] | None:
    """Intersection point of a's vertical with b's horizontal, if any."""
    ua, wa = g.edges[a]
    ub, wb = g.edges[b]
    x = pts[ua][0]
    y = pts[wb][1]
    ya0, ya1 = pts[ua][1], pts[wa][1]
    xb0, xb1 = pts[ub][0], pts[wb][0]
    if min(ya0, ya1) <= y <= max(ya0, ya1) and min(xb0, xb1) <= x <= max(xb0, xb1):
        return (x, y)
    return None


def _vh_legal(g: PlaneDigraph, a: int, b: int) -> bool:
    """May a's vertical touch b's horizontal at all?"""
    ua, wa = g.edges[a]
    ub, wb = g.edges[b]
    return wa == wb or ua == ub or ua == wb


def _contact_violations(
    g: PlaneDigraph, pts: dict[int, tuple[int, int]], cap: int = 6
) -> tuple[list[str], list[str]]:
    """Returns (overlap-legality witnesses, crossing witnesses)."""
    overlap_bad: list[str] = []
    crossing_bad: list[str] = []

    # Pairs of edges sharing a vertex: every contact must fit the shared
    # prefix/suffix patterns; count their vertical-horizontal touch points.
    legal_hits = len(g.edges)  # each edge's own bend
    seen_pairs: set[tuple[int, int]] = set()
    for v in g.vertices:
        darts = g.rot[v]
        for i in range(len(darts)):
            for j in range(i + 1, len(darts)):
                a, b = darts[i][0], darts[j][0]
                if a == b:
                    continue
                key = (a, b) if a < b else (b, a)
                if key in seen_pairs:
                    continue
                seen_pairs.add(key)
                for p, q in ((a, b), (b, a)):
                    if _vh_hit(g, pts, p, q) is not None:
                        if _vh_legal(g, p, q):
                            legal_hits += 1
                        elif len(overlap_bad) < cap:
                            overlap_bad.append(f"edges {p} {q} touch illegally")

    total = _count_vh_incidences(g, pts)
    if total != legal_hits + len(overlap_bad):
        deficit = total - legal_hits
        crossing_bad.append(f"{deficit} vertical/horizontal contacts outside shared-vertex patterns")
        crossing_bad.extend(_report_crossings(g, pts, cap))
    return overlap_bad, crossing_bad


def _count_vh_incidences(g: PlaneDigraph, pts: dict[int, tuple[int, int]]) -> int:
    """Count all touching (vertical of one edge, horizontal of another or
    itself) pairs by a sweep over x with a Fenwick tree on y ranks."""
    ys = sorted({p[1] for p in pts.values()})
    yrank = {y: i + 1 for i, y in enumerate(ys)}
    size = len(ys) + 1
    tree = [0] * (size + 1)

    def add(i: int, delta: int) -> None:
        while i <= size:
            tree[i] += delta
            i += i & (-i)

    def prefix(i: int) -> int:
        s = 0
        while i > 0:
            s += tree[i]
            i -= i & (-i)
        return s

    starts: dict[int, list[int]] = {}
    ends: dict[int, list[int]] = {}
    queries: dict[int, list[tuple[int, int]]] = {}
    for e, (u, w) in g.edges.items():
        xu = pts[u][0]
        xw = pts[w][0]
        yw = yrank[pts[w][1]]
        lo, hi = (xu, xw) if xu <= xw else (xw, xu)
        starts.setdefault(lo, []).append(yw)
        ends.setdefault(hi, []).append(yw)
        y0 = yrank[pts[u][1]]
        a, b = (y0, yw) if y0 <= yw else (yw, y0)
        queries.setdefault(xu, []).append((a, b))

    total = 0
    xs = sorted(set(starts) | set(ends) | set(queries))
    for x in xs:
        for y in starts.get(x, ()):
            add(y, 1)
        for a, b in queries.get(x, ()):
            total += prefix(b) - prefix(a - 1)
        for y in ends.get(x, ()):
            add(y, -1)
    return total


def _report_crossings(g: PlaneDigraph, pts: dict[int, tuple[int, int]], cap: int) -> list[str]:
    """Pairwise witness scan; used only once a violation is known."""
    if len(g.edges) > 20000:
        return []
    out: list[str] = []
    eids = sorted(g.edges)
    for i, a in enumerate(eids):
        for b in eids[i + 1:]:
            for p, q in ((a, b), (b, a)):
                hit = _vh_hit(g, pts, p, q)
                if hit is not None and not _vh_legal(g, p, q):
                    out.append(f"edges {p} {q} cross at {hit}")
                    if len(out) >= cap:
                        return out
    return out


# ----------------------------------------------------------------------
# the full check
# ----------------------------------------------------------------------


def check_drawing(
    g: PlaneDigraph,
    drawing: LDrawing,
    pa: PortMap | None = None,
    require_embedding: bool = True,
) -> VerificationReport:
    rep = VerificationReport()
    pts = drawing.points

    missing = [v for v in g.vertices if v not in pts]
    xs = [pts[v][0] for v in g.vertices if v in pts]
    ys = [pts[v][1] for v in g.vertices if v in pts]
    distinct = not missing and len(set(xs)) == len(xs) and len(set(ys)) == len(ys)
    wit = [f"missing point for {v}" for v in missing[:4]]
    rep.record("distinct-coordinates", distinct, wit)
    if not distinct:
        for name in CHECK_NAMES[1:]:
            rep.record(name, False, ["skipped: coordinates not distinct"])
        return rep

    bad_shape = []
    for e, (t, h) in g.edges.items():
        if t == h or pts[t][0] == pts[h][0] or pts[t][1] == pts[h][1]:
            bad_shape.append(f"edge {e} degenerate")
    rep.record("l-shape", not bad_shape, bad_shape[:4])

    if pa is not None:
        geo = geometric_ports(g, drawing)
        bad = [f"edge {e}: assigned {pa[e]}, drawn {geo[e]}" for e in g.edges if pa.get(e) != geo[e]]
        rep.record("port-realization", not bad, bad[:4])

    overlap_bad, crossing_bad = _contact_violations(g, pts)
    rep.record("overlap-legality", not overlap_bad, overlap_bad)
    rep.record("crossing-freedom", not crossing_bad, crossing_bad)

    if require_embedding:
        rot_bad: list[str] = []
        order_bad: list[str] = []
        for v in g.vertices:
            n, e_, s, w = rotation_bundles(g, pts, v)
            geo = n + e_ + s + w
            if not _cyclic_equal(geo, g.rot[v]):
                rot_bad.append(f"vertex {v}")
            for bundle in (n, e_, s, w):
                if len(bundle) > 1 and not _induced_order_ok(g.rot[v], bundle):
                    order_bad.append(f"vertex {v}")
        rep.record("rotation-system", not rot_bad, rot_bad[:4])
        rep.record("port-order", not order_bad, order_bad[:4])

        if rot_bad:
            rep.record("outer-face", False, ["skipped: rotation mismatch"])
        else:
            rep.record("outer-face", *_outer_face_check(g, pts))
    return rep


def _induced_order_ok(rot: tuple[Dart, ...], bundle: list[Dart]) -> bool:
    members = set(bundle)
    start = rot.index(bundle[0])
    induced = [rot[(start + i) % len(rot)] for i in range(len(rot))]
    induced = [d for d in induced if d in members]
    return any(
        all(induced[(k + i) % len(bundle)] == bundle[i] for i in range(len(bundle)))
        for k in range(len(bundle))
    )


def _outer_face_check(g: PlaneDigraph, pts: dict[int, tuple[int, int]]) -> tuple[bool, list[str]]:
    if len(g.compute_faces()) <= 1:
        return True, []
    v0 = min(g.vertices, key=lambda v: pts[v][0])
    geo = geometric_rotation(g, pts, v0)
    if not geo:
        return False, [f"isolated vertex {v0} in multi-face graph"]
    outer_geo = g.face_at_corner(geo[0])
    if outer_geo != g.outer_face_id:
        return False, [f"unbounded face is {outer_geo}, expected {g.outer_face_id}"]
    return True, []


# ----------------------------------------------------------------------
# exhaustive oracle
# ----------------------------------------------------------------------

ORACLE_CAP = 6


def brute_force_oracle(
    g: PlaneDigraph,
    pa: PortMap | None = None,
    require_embedding: bool = True,
    size_cap: int = ORACLE_CAP,
) -> LDrawing | None:
    """First drawing (in lexicographic rank order) passing the full check,
    or None after exhausting every pair of coordinate orders."""
    n = g.n()
    if n > size_cap:
        raise TooLarge(f"{n} vertices exceeds oracle cap {size_cap}")
    if n == 0:
        return LDrawing({})
    verts = list(g.vertices)
    ranks = list(range(1, n + 1))
    edge_items = [(e, t, h) for e, (t, h) in sorted(g.edges.items())]
    pa_items = None
    if pa is not None:
        pa_items = [(t, h, pa[e][0] == NORTH, pa[e][1] == WEST) for e, t, h in edge_items]

    for xp in itertools.permutations(ranks):
        xof = dict(zip(verts, xp))
        if pa_items is not None and any(
            (xof[t] < xof[h]) != want_w for t, h, _, want_w in pa_items
        ):
            continue
        for yp in itertools.permutations(ranks):
            yof = dict(zip(verts, yp))
            if pa_items is not None and any(
                (yof[t] < yof[h]) != want_n for t, h, want_n, _ in pa_items
            ):
                continue
            pts = {v: (xof[v], yof[v]) for v in verts}
            if require_embedding and not _rotation_prefilter(g, pts):
                continue
            drawing = LDrawing(pts)
            rep = check_drawing(g, drawing, pa, require_embedding)
            if rep.passed():
                return drawing
    return None


def _rotation_prefilter(g: PlaneDigraph, pts: dict[int, tuple[int, int]]) -> bool:
    for v in g.vertices:
        if len(g.rot[v]) > 2 and not _cyclic_equal(geometric_rotation(g, pts, v), g.rot[v]):
            return False
    return True


# ----------------------------------------------------------------------
# triangles: all planar L-drawings of a 3-cycle
# ----------------------------------------------------------------------

# dirs[i] is +1 when edge i runs from vertex i to vertex i+1 (mod 3).
TriangleDirs = tuple[int, int, int]
# pa as a tuple: ((out, in) for edge 0, 1, 2)
TrianglePA = tuple[tuple[str, str], tuple[str, str], tuple[str, str]]


def make_triangle(dirs: TriangleDirs) -> PlaneDigraph:
    """The plane 3-cycle on vertices 0,1,2 whose outer face, traced
    clockwise, visits 0,1,2 in this order.  Edge i joins i and i+1."""
    edges = {}
    for i in range(3):
        a, b = i, (i + 1) % 3
        edges[i] = (a, b) if dirs[i] > 0 else (b, a)
    rot = {}
    for v in range(3):
        e_next = v            # edge to v+1
        e_prev = (v + 2) % 3  # edge to v-1
        d_next = (e_next, 0 if edges[e_next][0] == v else 1)
        d_prev = (e_prev, 0 if edges[e_prev][0] == v else 1)
        rot[v] = (d_next, d_prev)
    outer = (0, 1 if dirs[0] > 0 else -1)
    return PlaneDigraph(range(3), edges, rot, outer)


def all_triangle_pas() -> list[TrianglePA]:
    ports = [(o, i) for o in (NORTH, SOUTH) for i in (EAST, WEST)]
    return [tuple(c) for c in itertools.product(ports, repeat=3)]


def triangle_drawing(dirs: TriangleDirs, pa: TrianglePA) -> LDrawing | None:
    """Drawing of the triangle realizing pa with its embedding, or None."""
    g = make_triangle(dirs)
    return brute_force_oracle(g, pa={i: pa[i] for i in range(3)})


def realizable_triangle_pas(dirs: TriangleDirs) -> list[TrianglePA]:
    return [pa for pa in all_triangle_pas() if triangle_drawing(dirs, pa) is not None]


def _pa_rot180(pa: TrianglePA) -> TrianglePA:
    flip = {NORTH: SOUTH, SOUTH: NORTH, EAST: WEST, WEST: EAST}
    return tuple((flip[o], flip[i]) for o, i in pa)  # type: ignore[return-value]


def _transpose_reverse(dirs: TriangleDirs, pa: TrianglePA) -> tuple[TriangleDirs, TrianglePA]:
    """Swap the axes and reverse every edge; this maps planar L-drawings to
    planar L-drawings of the reversed digraph but mirrors the plane, so the
    triangle is relabeled by swapping vertices 1 and 2 afterwards."""
    rev_dirs = tuple(-d for d in dirs)
    out_of_in = {EAST: NORTH, WEST: SOUTH}
    in_of_out = {NORTH: EAST, SOUTH: WEST}
    rev_pa = tuple((out_of_in[i], in_of_out[o]) for o, i in pa)
    return _relabel_swap12(rev_dirs, rev_pa)  # type: ignore[arg-type]


def _relabel_swap12(dirs: TriangleDirs, pa: TrianglePA) -> tuple[TriangleDirs, TrianglePA]:
    # vertices 0,1,2 -> 0,2,1: old edge 0 (0-1) becomes new edge 2 (2-0,
    # i.e. 0-2 reversed end order), old edge 1 (1-2) stays between 1 and 2
    # reversed, old edge 2 (2-0) becomes new edge 0.
    new_dirs = (-dirs[2], -dirs[1], -dirs[0])
    new_pa = (pa[2], pa[1], pa[0])
    return new_dirs, new_pa


def _rotate_labels(dirs: TriangleDirs, pa: TrianglePA) -> tuple[TriangleDirs, TrianglePA]:
    # vertices 0,1,2 -> 1,2,0: edge i becomes edge i+1
    return (dirs[2], dirs[0], dirs[1]), (pa[2], pa[0], pa[1])


def triangle_symmetry_orbit(dirs: TriangleDirs, pa: TrianglePA) -> set[tuple[TriangleDirs, TrianglePA]]:
    """Orbit under 180-degree rotation, axis swap with edge reversal, and
    cyclic relabeling of the triangle."""
    seen: set[tuple[TriangleDirs, TrianglePA]] = set()
    frontier = [(dirs, pa)]
    while frontier:
        st = frontier.pop()
        if st in seen:
            continue
        seen.add(st)
        d, p = st
        frontier.append((d, _pa_rot180(p)))
        frontier.append(_transpose_reverse(d, p))
        frontier.append(_rotate_labels(d, p))
    return seen


def triangle_class_key(dirs: TriangleDirs, pa: TrianglePA) -> tuple[TriangleDirs, TrianglePA]:
    return min(triangle_symmetry_orbit(dirs, pa))


def triangle_class_table() -> dict[tuple[TriangleDirs, TrianglePA], list[tuple[TriangleDirs, TrianglePA]]]:
    """All realizable (orientation, port assignment) pairs grouped by
    symmetry class; deterministic across runs."""
    table: dict[tuple[TriangleDirs, TrianglePA], list] = {}
    for dirs in itertools.product((1, -1), repeat=3):
        for pa in realizable_triangle_pas(dirs):  # type: ignore[arg-type]
            table.setdefault(triangle_class_key(dirs, pa), []).append((dirs, pa))
    return table


# ----------------------------------------------------------------------
# outerplanar angular bound
# ----------------------------------------------------------------------


def outerplanar_angular_test(g: PlaneDigraph, face: Face) -> bool:
    """False when an outerplanar L-drawing is provably impossible for the
    face: all its vertices are 4-modal source/sink switches, forcing a zero
    angle at each, while bends contribute at most 3/2 pi each."""
    from .graph_model import modality

    deg = len(face)
    k = len(face.travs)
    for i in range(k):
        v = face.verts[i]
        if modality(g, v) != 4:
            return True
        t_in = face.travs[(i - 1) % k]
        t_out = face.travs[i]
        enters = t_in[1] == 1  # previous boundary edge is directed into v
        leaves = t_out[1] == 1  # next boundary edge is directed out of v
        if enters == leaves:
            return True  # flow-through, not a source/sink switch
    return not ((2 * deg - 2) > (3 * deg) / 2)
