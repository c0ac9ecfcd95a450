"""Triangulating augmentation.

Three stages turn a valid plane bimodal 2-cycle-free digraph into a
triangulated one in which every vertex is 2-modal or an inner 4-modal
vertex of degree four, recording every addition so the original graph can
be restored exactly afterwards:

1. a new directed triangle is drawn around the old outer face;
2. faces are reduced by chords and, where chords are blocked, by fresh
   2-modal vertices, until every inner face is a triangle or a 4-cycle of
   alternating source and sink switches (the annulus between the old
   boundary and the new triangle is connected up and reduced in the same
   pass);
3. every alternating 4-cycle face receives an inner 4-modal vertex of
   degree four, which leaves its neighbors' modality unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_model import (
    Dart,
    GraphError,
    PlaneDigraph,
    Trav,
    modality,
    validate_input,
)


class AugmentationFailed(GraphError):
    """Face reduction could not satisfy its contract (internal bug signal)."""


@dataclass
class AugmentationRecord:
    added_vertices: set[int] = field(default_factory=set)
    added_edges: set[int] = field(default_factory=set)
    stage_of_vertex: dict[int, str] = field(default_factory=dict)
    stage_of_edge: dict[int, str] = field(default_factory=dict)
    old_outer_dart: Trav | None = None

    def absorb(self, other: "AugmentationRecord") -> None:
        self.added_vertices |= other.added_vertices
        self.added_edges |= other.added_edges
        self.stage_of_vertex.update(other.stage_of_vertex)
        self.stage_of_edge.update(other.stage_of_edge)
        if other.old_outer_dart is not None:
            self.old_outer_dart = other.old_outer_dart


class _Mutable:
    """Editable embedding used only inside this module."""

    def __init__(self, g: PlaneDigraph) -> None:
        self.edges: dict[int, tuple[int, int]] = dict(g.edges)
        self.rot: dict[int, list[Dart]] = {v: list(g.rot[v]) for v in g.vertices}
        self.pairs: set[frozenset[int]] = {
            frozenset((t, h)) for t, h in g.edges.values()
        }
        self.next_v = max(g.vertices) + 1 if g.vertices else 0
        self.next_e = max(g.edges) + 1 if g.edges else 0
        self.outer_dart = g.outer_dart

    def new_vertex(self) -> int:
        v = self.next_v
        self.next_v += 1
        self.rot[v] = []
        return v

    def add_edge(self, t: int, h: int) -> int:
        e = self.next_e
        self.next_e += 1
        self.edges[e] = (t, h)
        self.pairs.add(frozenset((t, h)))
        return e

    def insert_dart(self, v: int, d: Dart, before: Dart | None) -> None:
        r = self.rot[v]
        if before is None:
            r.append(d)
        else:
            r.insert(r.index(before), d)

    def has_pair(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.pairs

    def freeze(self) -> PlaneDigraph:
        return PlaneDigraph(
            self.rot.keys(),
            self.edges,
            {v: tuple(r) for v, r in self.rot.items()},
            self.outer_dart,
        )


def _modality_seq(seq: list[bool]) -> int:
    if len(seq) <= 1:
        return 0
    return sum(1 for i, s in enumerate(seq) if s != seq[i - 1])


def _safe_direction(m: _Mutable, v: int, before: Dart | None, out: bool) -> bool:
    """Would inserting a dart (out/in) just before ``before`` keep v bimodal?"""
    seq = []
    r = m.rot[v]
    if before is None:
        seq = [d[1] == 0 for d in r] + [out]
    else:
        for d in r:
            if d == before:
                seq.append(out)
            seq.append(d[1] == 0)
    return _modality_seq(seq) <= 2


# ----------------------------------------------------------------------
# stage 1: outer triangle
# ----------------------------------------------------------------------


def add_outer_triangle(g: PlaneDigraph) -> tuple[PlaneDigraph, AugmentationRecord]:
    """Add a directed triangle whose inside holds the whole old graph.

    The result is disconnected until reduce_faces adds the connection; the
    old outer dart is kept in the record so the annulus can be found.
    """
    rec = AugmentationRecord()
    rec.old_outer_dart = g.outer_dart
    m = _Mutable(g)
    t = [m.new_vertex() for _ in range(3)]
    es = []
    for i in range(3):
        es.append(m.add_edge(t[i], t[(i + 1) % 3]))
    for i in range(3):
        d_next = (es[i], 0)
        d_prev = (es[(i + 2) % 3], 1)
        m.rot[t[i]] = [d_next, d_prev]
    m.outer_dart = (es[0], 1)
    rec.added_vertices = set(t)
    rec.added_edges = set(es)
    for v in t:
        rec.stage_of_vertex[v] = "outer-triangle"
    for e in es:
        rec.stage_of_edge[e] = "outer-triangle"
    return m.freeze(), rec


# ----------------------------------------------------------------------
# stage 2: face reduction
# ----------------------------------------------------------------------


@dataclass
class _Walk:
    """A face boundary under reduction: traversals plus origin vertices."""

    travs: list[Trav]
    verts: list[int]

    def __len__(self) -> int:
        return len(self.travs)


def _occurrence_flanks(m: _Mutable, w: _Walk, i: int) -> tuple[Dart, Dart]:
    """(arriving dart, leaving dart) at occurrence i, for corner inserts.

    A new dart for this corner goes immediately before the leaving dart in
    the clockwise rotation.
    """
    t_in = w.travs[i - 1]
    t_out = w.travs[i]
    d_in = (t_in[0], 1 if t_in[1] > 0 else 0)
    d_out = (t_out[0], 0 if t_out[1] > 0 else 1)
    return d_in, d_out


def _occ_kind(m: _Mutable, w: _Walk, i: int) -> str:
    d_in, d_out = _occurrence_flanks(m, w, i)
    a_out = d_in[1] == 0
    b_out = d_out[1] == 0
    if a_out and b_out:
        return "src"
    if not a_out and not b_out:
        return "snk"
    return "flow"


def _alternating_quad(m: _Mutable, w: _Walk) -> bool:
    if len(w) != 4 or len(set(w.verts)) != 4:
        return False
    kinds = [_occ_kind(m, w, i) for i in range(4)]
    return kinds in (["src", "snk", "src", "snk"], ["snk", "src", "snk", "src"])


def _insert_chord(m: _Mutable, w: _Walk, i: int, j: int, tail_is_i: bool) -> tuple[int, _Walk, _Walk]:
    a, b = w.verts[i], w.verts[j]
    t, h = (a, b) if tail_is_i else (b, a)
    e = m.add_edge(t, h)
    da = (e, 0 if tail_is_i else 1)
    db = (e, 1 if tail_is_i else 0)
    _, out_a = _occurrence_flanks(m, w, i)
    _, out_b = _occurrence_flanks(m, w, j)
    m.insert_dart(a, da, out_a)
    m.insert_dart(b, db, out_b)
    k = len(w)
    arc1_t = [w.travs[x % k] for x in range(i, i + (j - i) % k)]
    arc1_v = [w.verts[x % k] for x in range(i, i + (j - i) % k)]
    arc2_t = [w.travs[x % k] for x in range(j, j + (i - j) % k)]
    arc2_v = [w.verts[x % k] for x in range(j, j + (i - j) % k)]
    chord_ab = (e, 1 if tail_is_i else -1)  # traversal a -> b
    chord_ba = (e, -1 if tail_is_i else 1)
    w1 = _Walk(arc1_t + [chord_ba], arc1_v + [b])
    w2 = _Walk(arc2_t + [chord_ab], arc2_v + [a])
    return e, w1, w2


def _chord_candidates(m: _Mutable, w: _Walk):
    k = len(w)
    kinds = [_occ_kind(m, w, i) for i in range(k)]
    cands = []
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            a, b = w.verts[i], w.verts[j]
            if a == b or m.has_pair(a, b):
                continue
            arc = (j - i) % k
            if arc == 1 or arc == k - 1:
                continue
            balance = abs(arc - k / 2)
            pref = 0 if (kinds[i] == "src" and kinds[j] == "snk") else 1
            cands.append((pref, balance, i, j))
    cands.sort()
    return cands


def _try_chord(m: _Mutable, w: _Walk) -> tuple[_Walk, _Walk, int] | None:
    for _, _, i, j in _chord_candidates(m, w):
        d_in_a, d_out_a = _occurrence_flanks(m, w, i)
        d_in_b, d_out_b = _occurrence_flanks(m, w, j)
        for tail_is_i in (True, False):
            out_a = tail_is_i
            out_b = not tail_is_i
            if not _safe_direction(m, w.verts[i], d_out_a, out_a):
                continue
            if not _safe_direction(m, w.verts[j], d_out_b, out_b):
                continue
            e, w1, w2 = _insert_chord(m, w, i, j, tail_is_i)
            return w1, w2, e
    return None


def _vertex_split(m: _Mutable, w: _Walk) -> tuple[_Walk, _Walk, int, list[int]]:
    """Split the face with a fresh 2-modal vertex joined to two occurrences."""
    k = len(w)
    kinds = [_occ_kind(m, w, i) for i in range(k)]
    pairs = []
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            arc = (j - i) % k
            if arc == 1 or arc == k - 1:
                continue
            balance = abs(arc - k / 2)
            pref = 0 if (kinds[i] == "src" and kinds[j] == "snk") else 1
            pairs.append((pref, balance, i, j))
    if not pairs:
        # k == 3 never reaches here; k == 4 uses opposite corners
        raise AugmentationFailed(f"no split positions on face of degree {k}")
    pairs.sort()
    for _, _, i, j in pairs:
        a, b = w.verts[i], w.verts[j]
        _, d_out_a = _occurrence_flanks(m, w, i)
        _, d_out_b = _occurrence_flanks(m, w, j)
        for out_a in (True, False):
            out_b = not out_a  # keep z one-in one-out
            if not _safe_direction(m, a, d_out_a, out_a):
                continue
            if not _safe_direction(m, b, d_out_b, out_b):
                continue
            z = m.new_vertex()
            e_a = m.add_edge(a, z) if out_a else m.add_edge(z, a)
            e_b = m.add_edge(b, z) if out_b else m.add_edge(z, b)
            da = (e_a, 0 if out_a else 1)
            db = (e_b, 0 if out_b else 1)
            m.insert_dart(a, da, d_out_a)
            m.insert_dart(b, db, d_out_b)
            # rotation at z: dart to b then dart to a makes the two new
            # faces close correctly on both sides of the path a-z-b
            dza = (e_a, 1 if out_a else 0)
            dzb = (e_b, 1 if out_b else 0)
            m.rot[z] = [dzb, dza]
            k2 = len(w)
            arc1_t = [w.travs[x % k2] for x in range(i, i + (j - i) % k2)]
            arc1_v = [w.verts[x % k2] for x in range(i, i + (j - i) % k2)]
            arc2_t = [w.travs[x % k2] for x in range(j, j + (i - j) % k2)]
            arc2_v = [w.verts[x % k2] for x in range(j, j + (i - j) % k2)]
            t_az = (e_a, 1 if out_a else -1)
            t_za = (e_a, -1 if out_a else 1)
            t_bz = (e_b, 1 if out_b else -1)
            t_zb = (e_b, -1 if out_b else 1)
            w1 = _Walk(arc1_t + [t_bz, t_za], arc1_v + [b, z])
            w2 = _Walk(arc2_t + [t_az, t_zb], arc2_v + [a, z])
            return w1, w2, z, [e_a, e_b]
    raise AugmentationFailed("no modality-safe vertex split")


def reduce_faces(
    g: PlaneDigraph, old_outer_dart: Trav | None = None
) -> tuple[PlaneDigraph, AugmentationRecord]:
    """Connect the floating outer triangle and reduce every inner face to a
    triangle or an alternating 4-cycle.

    ``old_outer_dart`` locates the original graph's outer face so the
    connector lands in the annulus; required when g is disconnected.
    """
    rec = AugmentationRecord()
    m = _Mutable(g)

    # connect the annulus if the graph is disconnected (stage 1 output)
    comp = _component_of(m, g.outer_dart)
    if len(comp) != len(m.rot):
        if old_outer_dart is not None:
            u = g.trav_origin(old_outer_dart)
            before_u = g.dart_at_origin(old_outer_dart)
        else:
            solo = [v for v in m.rot if v not in comp]
            if len(solo) != 1 or m.rot[solo[0]]:
                raise AugmentationFailed("annulus location unknown for multi-vertex component")
            u, before_u = solo[0], None
        t1 = m.edges[g.outer_dart[0]][0]
        before_t1 = m.rot[t1][1]  # inner corner of the triangle vertex
        for out_u in (True, False):
            if _safe_direction(m, u, before_u, out_u):
                e = m.add_edge(u, t1) if out_u else m.add_edge(t1, u)
                m.insert_dart(u, (e, 0 if out_u else 1), before_u)
                m.insert_dart(t1, (e, 1 if out_u else 0), before_t1)
                rec.added_edges.add(e)
                rec.stage_of_edge[e] = "face-reduction"
                break
        else:
            raise AugmentationFailed("no safe connector direction")

    frozen = m.freeze()
    faces = frozen.compute_faces()
    outer_id = frozen.outer_face_id
    queue = [
        _Walk(list(f.travs), list(f.verts))
        for f in faces
        if f.id != outer_id and len(f) > 3
    ]
    budget = 8 * sum(len(w) for w in queue) + 64
    while queue:
        w = queue.pop()
        if len(w) <= 3 or _alternating_quad(m, w):
            continue
        budget -= 1
        if budget < 0:
            raise AugmentationFailed("face reduction budget exceeded")
        got = _try_chord(m, w)
        if got is not None:
            w1, w2, e = got
            rec.added_edges.add(e)
            rec.stage_of_edge[e] = "face-reduction"
        else:
            w1, w2, z, es = _vertex_split(m, w)
            rec.added_vertices.add(z)
            rec.stage_of_vertex[z] = "face-reduction"
            for e in es:
                rec.added_edges.add(e)
                rec.stage_of_edge[e] = "face-reduction"
        queue.append(w1)
        queue.append(w2)
    return m.freeze(), rec


def _component_of(m: _Mutable, start_trav: Trav | None) -> set[int]:
    if start_trav is None:
        return set(m.rot)
    start = m.edges[start_trav[0]][0]
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for d in m.rot[v]:
            u = m.edges[d[0]][1 - d[1]]
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


# ----------------------------------------------------------------------
# stage 3: quad vertices
# ----------------------------------------------------------------------


def insert_quad_vertices(g: PlaneDigraph) -> tuple[PlaneDigraph, AugmentationRecord]:
    rec = AugmentationRecord()
    m = _Mutable(g)
    faces = g.compute_faces()
    outer_id = g.outer_face_id
    for f in faces:
        if f.id == outer_id or len(f) == 3:
            continue
        w = _Walk(list(f.travs), list(f.verts))
        if not _alternating_quad(m, w):
            raise AugmentationFailed(f"face {f.id} not an alternating 4-cycle")
        z = m.new_vertex()
        rec.added_vertices.add(z)
        rec.stage_of_vertex[z] = "quad-vertex"
        darts_z = []
        for i in range(4):
            v = f.verts[i]
            _, d_out = _occurrence_flanks(m, w, i)
            out_v = _occ_kind(m, w, i) == "src"
            e = m.add_edge(v, z) if out_v else m.add_edge(z, v)
            rec.added_edges.add(e)
            rec.stage_of_edge[e] = "quad-vertex"
            m.insert_dart(v, (e, 0 if out_v else 1), d_out)
            darts_z.append((e, 1 if out_v else 0))
        # clockwise at z is the counterclockwise face order
        m.rot[z] = list(reversed(darts_z))
    return m.freeze(), rec


# ----------------------------------------------------------------------
# full augmentation
# ----------------------------------------------------------------------


def augment(g: PlaneDigraph) -> tuple[PlaneDigraph, AugmentationRecord]:
    """All three stages; the input must pass validate_input."""
    rep = validate_input(g)
    if not rep.ok():
        raise GraphError("invalid input: " + "; ".join(rep.reasons()))
    g1, rec = add_outer_triangle(g)
    g2, rec2 = reduce_faces(g1, rec.old_outer_dart)
    rec.absorb(rec2)
    g3, rec3 = insert_quad_vertices(g2)
    rec.absorb(rec3)
    _check_augmented(g3, rec)
    return g3, rec


def _check_augmented(g: PlaneDigraph, rec: AugmentationRecord) -> None:
    for f in g.compute_faces():
        if len(f) != 3:
            raise AugmentationFailed(f"face {f.id} has degree {len(f)}")
    for v in g.vertices:
        mod = modality(g, v)
        if mod <= 2:
            continue
        if mod == 4 and g.degree(v) == 4 and rec.stage_of_vertex.get(v) == "quad-vertex":
            continue
        raise AugmentationFailed(f"vertex {v} modality {mod}")
    pairs = set()
    for t, h in g.edges.values():
        if t == h or (t, h) in pairs or (h, t) in pairs:
            raise AugmentationFailed("parallel edge or 2-cycle introduced")
        pairs.add((t, h))


def strip(g_aug: PlaneDigraph, rec: AugmentationRecord) -> PlaneDigraph:
    """Remove all recorded additions; restores the original exactly."""
    vertices = [v for v in g_aug.vertices if v not in rec.added_vertices]
    edges = {e: th for e, th in g_aug.edges.items() if e not in rec.added_edges}
    rot = {
        v: tuple(d for d in g_aug.rot[v] if d[0] not in rec.added_edges)
        for v in vertices
    }
    return PlaneDigraph(vertices, edges, rot, rec.old_outer_dart)
