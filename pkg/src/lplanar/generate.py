"""Deterministic instance families.

* ``st_planar``: stacked triangulations whose faces all stay transitive
  (single-source/single-sink plane digraphs, bimodal by construction),
  thinned by random modality-safe deletions.
* ``bimodal_random``: stacked triangulations with arbitrary modality-safe
  orientations, likewise thinned; produces sources, sinks, pincers and
  separating triangles.
* ``nested_triangles``: nested directed triangles joined by inward spokes;
  every level is a separating triangle, so the component tree is a path.
* ``outerplanar``: a randomly triangulated polygon with random edge
  orientations (not necessarily bimodal), with random chords removed.
"""

from __future__ import annotations

import random

from .graph_model import Dart, PlaneDigraph, modality, validate_input

FAMILIES = ("st-planar", "bimodal-random", "nested-triangles", "outerplanar")


class _Builder:
    def __init__(self) -> None:
        self.edges: dict[int, tuple[int, int]] = {}
        self.rot: dict[int, list[Dart]] = {}
        self.next_e = 0

    def vertex(self, v: int) -> None:
        self.rot.setdefault(v, [])

    def edge(self, t: int, h: int) -> int:
        e = self.next_e
        self.next_e += 1
        self.edges[e] = (t, h)
        return e

    def graph(self, outer_dart) -> PlaneDigraph:
        return PlaneDigraph(
            self.rot.keys(),
            self.edges,
            {v: tuple(r) for v, r in self.rot.items()},
            outer_dart,
        )


def _stacked(n: int, rng: random.Random, transitive: bool) -> PlaneDigraph:
    """Stacked (Apollonian-style) triangulation; faces tracked explicitly.

    Faces are stored as vertex triples in counterclockwise order together
    with their corner darts, so inserted darts land in the right corners.
    """
    b = _Builder()
    for v in range(3):
        b.vertex(v)
    e01 = b.edge(0, 1)
    e12 = b.edge(1, 2)
    e02 = b.edge(0, 2)
    # outer face clockwise (0,1,2); rotations as for make_triangle
    b.rot[0] = [(e01, 0), (e02, 0)]
    b.rot[1] = [(e12, 0), (e01, 1)]
    b.rot[2] = [(e02, 1), (e12, 1)]
    # inner face (0,2,1) counterclockwise: corners store the leaving dart
    faces = [((0, 2, 1), ((e02, 0), (e12, 1), (e01, 1)))]

    next_v = 3
    while next_v < n:
        fi = rng.randrange(len(faces))
        (va, vb, vc), (da, db, dc) = faces[fi]
        z = next_v
        next_v += 1
        b.vertex(z)
        darts_at = {}
        zdarts = {}
        for v, d_out in ((va, da), (vb, db), (vc, dc)):
            if transitive:
                # orient along the transitive order: out of v iff v is not
                # the sink of the face; the middle vertex is randomized
                out_v = _transitive_direction(b, v, d_out, rng)
            else:
                choices = [o for o in (True, False) if _safe_insert(b, v, d_out, o)]
                out_v = rng.choice(choices)
            e = b.edge(v, z) if out_v else b.edge(z, v)
            dv = (e, 0 if out_v else 1)
            b.rot[v].insert(b.rot[v].index(d_out), dv)
            darts_at[v] = dv
            zdarts[v] = (e, 1 if out_v else 0)
        b.rot[z] = [zdarts[vc], zdarts[vb], zdarts[va]]
        faces[fi] = ((va, vb, z), (da, darts_at[vb], zdarts[va]))
        faces.append(((vb, vc, z), (db, darts_at[vc], zdarts[vb])))
        faces.append(((vc, va, z), (dc, darts_at[va], zdarts[vc])))
    return b.graph((0, 1))


def _transitive_direction(b: _Builder, v: int, d_out: Dart, rng: random.Random) -> bool:
    d_in_flank = _flank_before(b, v, d_out)
    a_out = d_in_flank[1] == 0
    b_out = d_out[1] == 0
    if a_out and b_out:
        return True
    if not a_out and not b_out:
        return False
    return rng.random() < 0.5


def _flank_before(b: _Builder, v: int, d: Dart) -> Dart:
    r = b.rot[v]
    return r[r.index(d) - 1]


def _safe_insert(b: _Builder, v: int, before: Dart, out: bool) -> bool:
    seq = []
    for d in b.rot[v]:
        if d == before:
            seq.append(out)
        seq.append(d[1] == 0)
    if len(seq) <= 1:
        return True
    changes = sum(1 for i, s in enumerate(seq) if s != seq[i - 1])
    return changes <= 2


def _thin(g: PlaneDigraph, rng: random.Random, keep_fraction: float) -> PlaneDigraph:
    """Delete random inner edges, keeping the graph connected and the outer
    face intact.  Deletions never raise modality."""
    outer_edges = {t[0] for t in g.outer_face().travs}
    candidates = [e for e in sorted(g.edges) if e not in outer_edges]
    rng.shuffle(candidates)
    drop_target = int(len(candidates) * (1.0 - keep_fraction))
    dropped: set[int] = set()
    for e in candidates[:drop_target]:
        trial = dropped | {e}
        if _connected_without(g, trial):
            dropped = trial
    if not dropped:
        return g
    edges = {e: th for e, th in g.edges.items() if e not in dropped}
    rot = {v: tuple(d for d in g.rot[v] if d[0] not in dropped) for v in g.vertices}
    return PlaneDigraph(g.vertices, edges, rot, g.outer_dart)


def _connected_without(g: PlaneDigraph, dropped: set[int]) -> bool:
    start = g.vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for d in g.rot[v]:
            if d[0] in dropped:
                continue
            u = g.dart_other(d)
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(g.vertices)


def gen_st_planar(n: int, seed: int) -> PlaneDigraph:
    rng = random.Random(("st", n, seed).__repr__())
    g = _stacked(max(3, n), rng, transitive=True)
    g = _thin(g, rng, keep_fraction=0.8)
    return g


def gen_bimodal_random(n: int, seed: int) -> PlaneDigraph:
    rng = random.Random(("bi", n, seed).__repr__())
    g = _stacked(max(3, n), rng, transitive=False)
    g = _thin(g, rng, keep_fraction=0.75)
    return g


def gen_nested_triangles(n: int, seed: int = 0) -> PlaneDigraph:
    levels = max(1, n // 3)
    b = _Builder()
    for v in range(3 * levels):
        b.vertex(v)
    cyc: list[list[int]] = []  # cycle edge ids per level: a->b, b->c, c->a
    for i in range(levels):
        a, bb, c = 3 * i, 3 * i + 1, 3 * i + 2
        cyc.append([b.edge(a, bb), b.edge(bb, c), b.edge(c, a)])
    spokes: list[list[int]] = []  # per ring: a-a', a-b', b-b', b-c', c-c', c-a'
    for i in range(levels - 1):
        a, bb, c = 3 * i, 3 * i + 1, 3 * i + 2
        a2, b2, c2 = 3 * i + 3, 3 * i + 4, 3 * i + 5
        spokes.append(
            [
                b.edge(a, a2),
                b.edge(a, b2),
                b.edge(bb, b2),
                b.edge(bb, c2),
                b.edge(c, c2),
                b.edge(c, a2),
            ]
        )
    for i in range(levels):
        a, bb, c = 3 * i, 3 * i + 1, 3 * i + 2
        e_ab, e_bc, e_ca = cyc[i]
        down = spokes[i] if i < levels - 1 else None
        up = spokes[i - 1] if i > 0 else None
        # clockwise: [next-vertex edge, down-spokes, prev-vertex edge, up-spokes]
        rot_a = [(e_ab, 0)]
        if down:
            rot_a += [(down[1], 0), (down[0], 0)]
        rot_a.append((e_ca, 1))
        if up:
            rot_a += [(up[5], 1), (up[0], 1)]
        b.rot[a] = rot_a
        rot_b = [(e_bc, 0)]
        if down:
            rot_b += [(down[3], 0), (down[2], 0)]
        rot_b.append((e_ab, 1))
        if up:
            rot_b += [(up[1], 1), (up[2], 1)]
        b.rot[bb] = rot_b
        rot_c = [(e_ca, 0)]
        if down:
            rot_c += [(down[5], 0), (down[4], 0)]
        rot_c.append((e_bc, 1))
        if up:
            rot_c += [(up[3], 1), (up[4], 1)]
        b.rot[c] = rot_c
    return b.graph((cyc[0][0], 1))


def gen_outerplanar(n: int, seed: int) -> PlaneDigraph:
    rng = random.Random(("outer", n, seed).__repr__())
    n = max(3, n)
    chords: list[tuple[int, int]] = []

    def triangulate_arc(i: int, j: int) -> None:
        if j - i < 2:
            return
        k = rng.randrange(i + 1, j)
        if k - i >= 2:
            chords.append((i, k))
        if j - k >= 2:
            chords.append((k, j))
        triangulate_arc(i, k)
        triangulate_arc(k, j)

    triangulate_arc(0, n - 1)
    rng.shuffle(chords)
    chords = chords[: rng.randint(0, len(chords))]

    b = _Builder()
    for v in range(n):
        b.vertex(v)
    pairs = [(i, (i + 1) % n) for i in range(n)] + chords
    eids: dict[tuple[int, int], int] = {}
    for u, v in pairs:
        if rng.random() < 0.5:
            u, v = v, u
        eids[(min(u, v), max(u, v))] = b.edge(u, v)
    for i in range(n):
        nbrs = set()
        for a, c in eids:
            if a == i:
                nbrs.add(c)
            elif c == i:
                nbrs.add(a)
        darts = []
        for j in sorted(nbrs, key=lambda j: (j - i) % n):
            e = eids[(min(i, j), max(i, j))]
            darts.append((e, 0 if b.edges[e][0] == i else 1))
        b.rot[i] = darts
    e01 = eids[(0, 1)]
    return b.graph((e01, 1 if b.edges[e01] == (0, 1) else -1))


def generate(family: str, n: int, seed: int) -> PlaneDigraph:
    if family == "st-planar":
        g = gen_st_planar(n, seed)
    elif family == "bimodal-random":
        g = gen_bimodal_random(n, seed)
    elif family == "nested-triangles":
        g = gen_nested_triangles(n, seed)
    elif family == "outerplanar":
        return gen_outerplanar(n, seed)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    rep = validate_input(g)
    if not rep.ok():
        raise AssertionError(f"generator bug: {rep.reasons()}")
    return g
