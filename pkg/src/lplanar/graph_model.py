"""Embedded directed multigraph with a rotation system.

The central type is :class:`PlaneDigraph`: a directed graph together with a
clockwise cyclic order of edge-ends around every vertex and a designated
outer face.  Everything downstream (augmentation, decomposition, port
assignment, drawing, verification) consumes this one representation.

Conventions used throughout the package:

* Rotations are stored clockwise (screen orientation with the y-axis up).
* A *dart* is an edge-end: ``(edge_id, end)`` with ``end == 0`` at the tail
  and ``end == 1`` at the head.  Each dart appears in exactly one rotation.
* A *traversal* is a directed crossing of an edge: ``(edge_id, +1)`` from
  tail to head, ``(edge_id, -1)`` from head to tail.  Face walks are
  sequences of traversals with the face interior on the left; inner faces
  come out counterclockwise and the outer face clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

Dart = tuple[int, int]
Trav = tuple[int, int]


class GraphError(Exception):
    """Base class for structural errors in this package."""


class InconsistentRotation(GraphError):
    """An edge-end is missing from or duplicated in the rotation system."""


class NotConnected(GraphError):
    """The graph is not connected (required for face traversal)."""


def dart_is_out(dart: Dart) -> bool:
    return dart[1] == 0


def trav_reverse(t: Trav) -> Trav:
    return (t[0], -t[1])


@dataclass(frozen=True)
class Face:
    """A face of the embedding, as traced from the rotation system."""

    id: int
    travs: tuple[Trav, ...]
    verts: tuple[int, ...]  # verts[i] is the origin of travs[i]

    def __len__(self) -> int:
        return len(self.travs)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.verts)


@dataclass(frozen=True)
class Pincer:
    """Two same-direction edges on a triangle with an opposite witness inside.

    ``apex`` is the shared end vertex, ``e1``/``e2`` the triangle edges at the
    apex, ``triangle`` the three boundary vertices and ``witness`` an edge
    incident to the apex inside the triangle with the opposite direction.
    """

    apex: int
    e1: int
    e2: int
    triangle: tuple[int, int, int]
    witness: int


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_input`; pipeline entry requires ok()."""

    modality_violations: list[tuple[int, int]] = field(default_factory=list)
    two_cycles: list[tuple[int, int]] = field(default_factory=list)
    parallel_edges: list[tuple[int, int]] = field(default_factory=list)
    self_loops: list[int] = field(default_factory=list)
    rotation_problems: list[str] = field(default_factory=list)
    connectivity_problems: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not (
            self.modality_violations
            or self.two_cycles
            or self.parallel_edges
            or self.self_loops
            or self.rotation_problems
            or self.connectivity_problems
        )

    def reasons(self) -> list[str]:
        out = []
        for v, m in self.modality_violations:
            out.append(f"modality {v} {m}")
        for u, v in self.two_cycles:
            out.append(f"two-cycle {u} {v}")
        for u, v in self.parallel_edges:
            out.append(f"parallel-edges {u} {v}")
        for e in self.self_loops:
            out.append(f"self-loop {e}")
        out.extend(self.rotation_problems)
        out.extend(self.connectivity_problems)
        return out


class PlaneDigraph:
    """Plane digraph: directed multigraph + clockwise rotations + outer face.

    Instances are treated as immutable after construction; operations that
    change the graph build a new instance.  ``outer_dart`` is any traversal
    whose face walk is the outer face (``None`` defers the choice until a
    caller resolves faces and picks one).
    """

    def __init__(
        self,
        vertices: Iterable[int],
        edges: dict[int, tuple[int, int]],
        rot: dict[int, tuple[Dart, ...]],
        outer_dart: Optional[Trav] = None,
    ) -> None:
        self.vertices: tuple[int, ...] = tuple(sorted(vertices))
        self.edges: dict[int, tuple[int, int]] = dict(edges)
        self.rot: dict[int, tuple[Dart, ...]] = {v: tuple(rot.get(v, ())) for v in self.vertices}
        self.outer_dart = outer_dart
        self._pos: dict[Dart, tuple[int, int]] = {}
        for v in self.vertices:
            for i, d in enumerate(self.rot[v]):
                if d in self._pos:
                    raise InconsistentRotation(f"dart {d} appears twice in rotations")
                self._pos[d] = (v, i)
        self._uv: dict[tuple[int, int], list[int]] = {}
        for e, (t, h) in self.edges.items():
            self._uv.setdefault((t, h), []).append(e)
        self._faces: Optional[list[Face]] = None
        self._face_of_trav: Optional[dict[Trav, int]] = None
        self._outer_face_id: Optional[int] = None

    # ------------------------------------------------------------------
    # basic accessors
    # ------------------------------------------------------------------

    def tail(self, e: int) -> int:
        return self.edges[e][0]

    def head(self, e: int) -> int:
        return self.edges[e][1]

    def dart_vertex(self, d: Dart) -> int:
        return self.edges[d[0]][d[1]]

    def dart_other(self, d: Dart) -> int:
        return self.edges[d[0]][1 - d[1]]

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def n(self) -> int:
        return len(self.vertices)

    def m(self) -> int:
        return len(self.edges)

    def edge_ids_between(self, u: int, v: int) -> list[int]:
        """All edges with tail u and head v (direction-sensitive)."""
        return self._uv.get((u, v), [])

    def has_edge_between(self, u: int, v: int) -> bool:
        """True if any edge joins u and v in either direction."""
        return bool(self._uv.get((u, v)) or self._uv.get((v, u)))

    def dart_position(self, d: Dart) -> tuple[int, int]:
        return self._pos[d]

    def next_dart(self, d: Dart) -> Dart:
        v, i = self._pos[d]
        r = self.rot[v]
        return r[(i + 1) % len(r)]

    def prev_dart(self, d: Dart) -> Dart:
        v, i = self._pos[d]
        r = self.rot[v]
        return r[(i - 1) % len(r)]

    def trav_origin(self, t: Trav) -> int:
        e, dr = t
        return self.edges[e][0] if dr > 0 else self.edges[e][1]

    def trav_target(self, t: Trav) -> int:
        e, dr = t
        return self.edges[e][1] if dr > 0 else self.edges[e][0]

    def trav_from_dart(self, d: Dart) -> Trav:
        """The traversal leaving the vertex that owns dart d."""
        return (d[0], 1 if d[1] == 0 else -1)

    def dart_at_target(self, t: Trav) -> Dart:
        return (t[0], 1 if t[1] > 0 else 0)

    def dart_at_origin(self, t: Trav) -> Dart:
        return (t[0], 0 if t[1] > 0 else 1)

    # ------------------------------------------------------------------
    # faces
    # ------------------------------------------------------------------

    def next_face_trav(self, t: Trav) -> Trav:
        """Successor of traversal t in its face walk (interior on the left)."""
        d = self.dart_at_target(t)
        return self.trav_from_dart(self.next_dart(d))

    def compute_faces(self) -> list[Face]:
        """Trace all faces; validates Euler's formula and connectivity."""
        if self._faces is not None:
            return self._faces
        if len(self._pos) != 2 * len(self.edges):
            raise InconsistentRotation(
                f"{len(self._pos)} darts placed, expected {2 * len(self.edges)}"
            )
        self._check_connected()
        faces: list[Face] = []
        face_of: dict[Trav, int] = {}
        for e in self.edges:
            for dr in (1, -1):
                t0 = (e, dr)
                if t0 in face_of:
                    continue
                fid = len(faces)
                travs = []
                verts = []
                t = t0
                while True:
                    face_of[t] = fid
                    travs.append(t)
                    verts.append(self.trav_origin(t))
                    t = self.next_face_trav(t)
                    if t == t0:
                        break
                faces.append(Face(fid, tuple(travs), tuple(verts)))
        nv, ne, nf = len(self.vertices), len(self.edges), len(faces)
        if ne and nv - ne + nf != 2:
            raise InconsistentRotation(
                f"Euler check failed: V-E+F = {nv}-{ne}+{nf} = {nv - ne + nf}"
            )
        self._faces = faces
        self._face_of_trav = face_of
        if self.outer_dart is not None:
            self._outer_face_id = face_of[self.outer_dart]
        elif nf == 1:
            self._outer_face_id = 0
        return faces

    def _check_connected(self) -> None:
        if not self.vertices:
            return
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for d in self.rot[v]:
                u = self.dart_other(d)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(self.vertices):
            raise NotConnected(f"{len(self.vertices) - len(seen)} vertices unreachable")

    def face_of(self, t: Trav) -> int:
        self.compute_faces()
        assert self._face_of_trav is not None
        return self._face_of_trav[t]

    @property
    def outer_face_id(self) -> int:
        self.compute_faces()
        if self._outer_face_id is None:
            raise GraphError("outer face was never designated")
        return self._outer_face_id

    def outer_face(self) -> Face:
        return self.compute_faces()[self.outer_face_id]

    def face_at_corner(self, d: Dart) -> int:
        """Face of the corner just before dart d in clockwise order."""
        return self.face_of(self.trav_from_dart(d))

    def inner_faces(self) -> list[Face]:
        return [f for f in self.compute_faces() if f.id != self.outer_face_id]

    # ------------------------------------------------------------------
    # derived copies
    # ------------------------------------------------------------------

    def reversed_copy(self) -> "PlaneDigraph":
        """Same embedding with every edge direction flipped."""
        edges = {e: (h, t) for e, (t, h) in self.edges.items()}
        rot = {v: tuple((e, 1 - end) for (e, end) in r) for v, r in self.rot.items()}
        od = None
        if self.outer_dart is not None:
            od = (self.outer_dart[0], -self.outer_dart[1])
        return PlaneDigraph(self.vertices, edges, rot, od)

    def with_outer_dart(self, t: Trav) -> "PlaneDigraph":
        return PlaneDigraph(self.vertices, self.edges, self.rot, t)


# ----------------------------------------------------------------------
# modality and validation
# ----------------------------------------------------------------------


def modality(g: PlaneDigraph, v: int) -> int:
    """Number of in/out changes between consecutive edges around v."""
    r = g.rot[v]
    k = len(r)
    if k <= 1:
        return 0
    changes = 0
    prev_out = dart_is_out(r[-1])
    for d in r:
        cur = dart_is_out(d)
        if cur != prev_out:
            changes += 1
        prev_out = cur
    return changes


def validate_input(g: PlaneDigraph) -> ValidationReport:
    """Check the pipeline entry contract: plane, bimodal, simple, connected."""
    rep = ValidationReport()
    for e, (t, h) in sorted(g.edges.items()):
        if t == h:
            rep.self_loops.append(e)
    seen_pairs: set[tuple[int, int]] = set()
    for e, (t, h) in sorted(g.edges.items()):
        if t == h:
            continue
        if (t, h) in seen_pairs:
            if (t, h) not in rep.parallel_edges:
                rep.parallel_edges.append((t, h))
        seen_pairs.add((t, h))
        if (h, t) in seen_pairs:
            pair = (min(t, h), max(t, h))
            if pair not in rep.two_cycles:
                rep.two_cycles.append(pair)
    if len(g._pos) != 2 * len(g.edges):
        placed = set(g._pos)
        for e in g.edges:
            for end in (0, 1):
                if (e, end) not in placed:
                    rep.rotation_problems.append(f"missing-dart {e} {end}")
    for v in g.vertices:
        m = modality(g, v)
        if m > 2:
            rep.modality_violations.append((v, m))
    try:
        g._check_connected()
    except NotConnected as exc:
        rep.connectivity_problems.append(f"not-connected {exc}")
    if rep.ok():
        try:
            g.compute_faces()
        except GraphError as exc:
            rep.rotation_problems.append(f"face-traversal {exc}")
    return rep


# ----------------------------------------------------------------------
# pincers
# ----------------------------------------------------------------------


def interior_darts(g: PlaneDigraph, apex: int, da: Dart, db: Dart, a_side_first_inside: bool) -> list[Dart]:
    """Darts at apex strictly between da and db, scanning clockwise from da
    when ``a_side_first_inside`` else counterclockwise."""
    out = []
    d = g.next_dart(da) if a_side_first_inside else g.prev_dart(da)
    while d != db:
        out.append(d)
        d = g.next_dart(d) if a_side_first_inside else g.prev_dart(d)
    return out


def find_pincers(g: PlaneDigraph) -> list[Pincer]:
    """All pincers of g: same-direction edge pairs on a separating triangle
    with an opposite-direction edge at the apex inside the triangle."""
    from .decompose import separating_triangle_sides

    pincers: list[Pincer] = []
    for tri, inside in separating_triangle_sides(g):
        verts = tri.vertices
        for i in range(3):
            apex = verts[i]
            ea = tri.edge_ids[i]          # edge apex-verts[i+1]
            eb = tri.edge_ids[(i + 2) % 3]  # edge apex-verts[i+2]
            da = _dart_at(g, ea, apex)
            db = _dart_at(g, eb, apex)
            if dart_is_out(da) != dart_is_out(db):
                continue
            outgoing = dart_is_out(da)
            inner = interior_darts(g, apex, da, db, inside.clockwise_from(i))
            witness = None
            for d in inner:
                if dart_is_out(d) != outgoing:
                    witness = d[0]
                    break
            if witness is not None:
                pincers.append(
                    Pincer(apex=apex, e1=ea, e2=eb, triangle=verts, witness=witness)
                )
    return pincers


def _dart_at(g: PlaneDigraph, e: int, v: int) -> Dart:
    t, h = g.edges[e]
    if t == v:
        return (e, 0)
    assert h == v
    return (e, 1)
