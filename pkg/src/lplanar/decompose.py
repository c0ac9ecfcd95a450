"""Separating triangles and the tree of 4-connected components.

A triangulated plane digraph is cut along its separating triangles into
4-connected components.  The components form a tree rooted at the component
containing the outer face; every separating triangle is the link between a
parent component (where it is an empty inner face) and the child component
(where it is the outer boundary).

The decomposition walks the dual graph once.  Separating triangles are
closed curves, pairwise non-crossing, so the set of triangles containing
any face is a chain; crossing an edge of the primal graph pops the
triangles whose interior is being left and pushes the ones being entered.
The innermost triangle containing a face therefore identifies its region,
and regions are exactly the 4-connected components' face sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph_model import (
    Dart,
    GraphError,
    Pincer,
    PlaneDigraph,
    Trav,
    modality,
)

ROOT_REGION = -1


@dataclass(frozen=True)
class Triangle:
    """A 3-cycle: vertices sorted ascending, edge_ids[i] joins
    vertices[i] and vertices[(i+1) % 3]."""

    vertices: tuple[int, int, int]
    edge_ids: tuple[int, int, int]

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)


@dataclass(frozen=True)
class InsideInfo:
    """Which way the interior lies at each triangle corner: ``cw_from[i]``
    is True when the interior darts at vertices[i] follow the dart to
    vertices[i+1] in clockwise rotation order."""

    cw_from: tuple[bool, bool, bool]

    def clockwise_from(self, i: int) -> bool:
        return self.cw_from[i]


@dataclass
class ComponentNode:
    """One 4-connected component plus its links into the tree."""

    index: int
    region: int  # triangle id, or ROOT_REGION
    graph: PlaneDigraph
    outer_triangle: Triangle
    parent: Optional[int]
    children: list[int] = field(default_factory=list)
    child_triangles: dict[int, Triangle] = field(default_factory=dict)
    pincers: list[Pincer] = field(default_factory=list)


@dataclass
class ComponentTree:
    nodes: list[ComponentNode]
    root: int

    def order_outermost_first(self) -> list[ComponentNode]:
        out = []
        queue = [self.root]
        while queue:
            i = queue.pop(0)
            out.append(self.nodes[i])
            queue.extend(self.nodes[i].children)
        return out


class _Decomposition:
    """Shared analysis: triangles, books, regions, containment tree."""

    def __init__(self, g: PlaneDigraph) -> None:
        self.g = g
        faces = g.compute_faces()
        self.nf = len(faces)
        for f in faces:
            if len(f) != 3:
                raise GraphError(f"decomposition requires a triangulated graph; face {f.id} has degree {len(f)}")
        self._build_triangles()
        self._walk_dual()
        self._euler_tour()

    # -- separating triangles and per-edge books ------------------------

    def _build_triangles(self) -> None:
        g = self.g
        adj: dict[int, set[int]] = {v: set() for v in g.vertices}
        und: dict[tuple[int, int], int] = {}
        for e, (t, h) in g.edges.items():
            key = (t, h) if t < h else (h, t)
            if key in und:
                raise GraphError("decomposition requires a simple graph")
            und[key] = e
            adj[t].add(h)
            adj[h].add(t)
        self.und = und
        self.adj = adj

        faces = g.compute_faces()
        face_verts = [set(f.verts) for f in faces]

        self.triangles: list[Triangle] = []
        tri_index: dict[tuple[int, int, int], int] = {}
        # book[e]: list of (triangle id, ccw rank of apex dart at the tail of e)
        self.book: dict[int, list[tuple[int, int]]] = {}

        for e, (u, v) in g.edges.items():
            fl = g.face_of((e, 1))
            fr = g.face_of((e, -1))
            apexes = (face_verts[fl] | face_verts[fr]) - {u, v}
            seps = (adj[u] & adj[v]) - apexes
            if not seps:
                continue
            rot_u = g.rot[u]
            pos_uv = g.dart_position(self._dart_at(e, u))[1]
            deg_u = len(rot_u)
            entries = []
            for w in sorted(seps):
                key = tuple(sorted((u, v, w)))
                ti = tri_index.get(key)
                if ti is None:
                    ti = len(self.triangles)
                    tri_index[key] = ti
                    a, b, c = key
                    self.triangles.append(
                        Triangle(key, (und[(a, b)], und[(b, c)], und[(a, c)]))
                    )
                ew = und[(u, w) if u < w else (w, u)]
                pos_w = g.dart_position(self._dart_at(ew, u))[1]
                ccw_rank = (pos_uv - pos_w) % deg_u
                entries.append((ti, ccw_rank))
            self.book[e] = entries
        self.tri_index = tri_index

    def _dart_at(self, e: int, v: int) -> Dart:
        t, h = self.g.edges[e]
        return (e, 0) if t == v else (e, 1)

    # -- dual walk: regions and triangle containment chain ---------------

    def _walk_dual(self) -> None:
        g = self.g
        faces = g.compute_faces()
        region = [ROOT_REGION - 1] * self.nf  # sentinel: unvisited
        parent_tri: dict[int, int] = {}
        inside: set[int] = set()
        chain: list[int] = []

        start = g.outer_face_id
        region[start] = ROOT_REGION
        # stack entries: (face id, iterator over boundary travs, undo record)
        stack: list[tuple[int, int, list]] = [(start, 0, [])]
        trav_lists = [f.travs for f in faces]
        while stack:
            fid, idx, undo = stack[-1]
            if idx >= len(trav_lists[fid]):
                if undo:
                    removed, pushed = undo
                    for _ in pushed:
                        t = chain.pop()
                        inside.discard(t)
                    for t in reversed(removed):
                        chain.append(t)
                        inside.add(t)
                stack.pop()
                continue
            stack[-1] = (fid, idx + 1, undo)
            t = trav_lists[fid][idx]
            e = t[0]
            f2 = g.face_of((e, -t[1]))
            if region[f2] != ROOT_REGION - 1:
                continue
            entries = self.book.get(e)
            if not entries:
                region[f2] = region[fid]
                stack.append((f2, 0, []))
                continue
            pops = [ti for ti, _ in entries if ti in inside]
            for ti in pops:
                inside.discard(ti)
            popset = set(pops)
            removed = []
            while chain and chain[-1] in popset:
                removed.append(chain.pop())
            if len(removed) != len(pops):
                raise GraphError("separating triangles are not laminar (internal error)")
            entering = [(ti, rank) for ti, rank in entries if ti not in popset]
            # crossing toward face_of((e,+1)) enters the triangles on the
            # left of e; their apex darts sit counterclockwise of the edge
            # dart at the tail, innermost closest.  Push outermost first.
            toward_left = t[1] == -1
            entering.sort(key=lambda p: p[1], reverse=toward_left)
            pushed = []
            for ti, _ in entering:
                par = chain[-1] if chain else ROOT_REGION
                old = parent_tri.get(ti)
                if old is None:
                    parent_tri[ti] = par
                elif old != par:
                    raise GraphError("inconsistent triangle nesting (internal error)")
                chain.append(ti)
                inside.add(ti)
                pushed.append(ti)
            region[f2] = chain[-1] if chain else ROOT_REGION
            stack.append((f2, 0, (removed, pushed)))

        if any(r == ROOT_REGION - 1 for r in region):
            raise GraphError("dual graph not connected (internal error)")
        self.region_of_face = region
        self.parent_tri = parent_tri

    def _euler_tour(self) -> None:
        children: dict[int, list[int]] = {ROOT_REGION: []}
        for ti in range(len(self.triangles)):
            children[ti] = []
        for ti, par in self.parent_tri.items():
            children[par].append(ti)
        for lst in children.values():
            lst.sort()
        tin: dict[int, int] = {}
        tout: dict[int, int] = {}
        clock = 0
        stack: list[tuple[int, int]] = [(ROOT_REGION, 0)]
        while stack:
            node, idx = stack[-1]
            if idx == 0:
                tin[node] = clock
                clock += 1
            kids = children[node]
            if idx >= len(kids):
                tout[node] = clock
                clock += 1
                stack.pop()
                continue
            stack[-1] = (node, idx + 1)
            stack.append((kids[idx], 0))
        self.children = children
        self.tin = tin
        self.tout = tout

    # -- queries ---------------------------------------------------------

    def face_inside(self, fid: int, tri_id: int) -> bool:
        r = self.region_of_face[fid]
        return self.tin[tri_id] <= self.tin[r] < self.tout[tri_id]

    def inside_info(self, tri_id: int) -> InsideInfo:
        g = self.g
        tri = self.triangles[tri_id]
        cw = []
        for i in range(3):
            d = self._dart_at(tri.edge_ids[i], tri.vertices[i])
            corner_after = g.face_at_corner(g.next_dart(d))
            cw.append(self.face_inside(corner_after, tri_id))
        return InsideInfo(tuple(cw))


def _get_decomposition(g: PlaneDigraph) -> _Decomposition:
    cache = getattr(g, "_decomp_cache", None)
    if cache is None:
        cache = _Decomposition(g)
        g._decomp_cache = cache  # type: ignore[attr-defined]
    return cache


def find_separating_triangles(g: PlaneDigraph) -> list[Triangle]:
    """Every vertex triple forming a 3-cycle with vertices on both sides."""
    return list(_get_decomposition(g).triangles)


def separating_triangle_sides(g: PlaneDigraph) -> list[tuple[Triangle, InsideInfo]]:
    d = _get_decomposition(g)
    return [(t, d.inside_info(i)) for i, t in enumerate(d.triangles)]


def build_component_tree(g: PlaneDigraph, pincers: list[Pincer]) -> ComponentTree:
    """Cut g at its separating triangles into 4-connected components.

    Components share vertex and edge ids with g; each node records the
    separating triangles linking it to its children and the pincers whose
    triangle is one of those links.
    """
    d = _get_decomposition(g)
    faces = g.compute_faces()

    region_ids = [ROOT_REGION] + list(range(len(d.triangles)))
    faces_of_region: dict[int, list[int]] = {r: [] for r in region_ids}
    for fid, r in enumerate(d.region_of_face):
        faces_of_region[r].append(fid)

    nodes: list[ComponentNode] = []
    node_of_region: dict[int, int] = {}
    order = [ROOT_REGION]
    seen = {ROOT_REGION}
    qi = 0
    while qi < len(order):
        r = order[qi]
        qi += 1
        for c in d.children[r]:
            if c not in seen:
                seen.add(c)
                order.append(c)

    outer_tri_root = _outer_triangle_of_graph(g)

    for r in order:
        comp_edges: set[int] = set()
        for fid in faces_of_region[r]:
            for t, _ in faces[fid].travs:
                comp_edges.add(t)
        boundary: list[Triangle] = []
        if r != ROOT_REGION:
            boundary.append(d.triangles[r])
        for c in d.children[r]:
            boundary.append(d.triangles[c])
        for tri in boundary:
            comp_edges.update(tri.edge_ids)
        comp_vertices: set[int] = set()
        for e in comp_edges:
            t, h = g.edges[e]
            comp_vertices.add(t)
            comp_vertices.add(h)
        rot = {
            v: tuple(dd for dd in g.rot[v] if dd[0] in comp_edges)
            for v in comp_vertices
        }
        edges = {e: g.edges[e] for e in comp_edges}
        if r == ROOT_REGION:
            outer_tri = outer_tri_root
            outer_dart = g.outer_dart
            if outer_dart is None:
                outer_dart = g.outer_face().travs[0]
        else:
            outer_tri = d.triangles[r]
            outer_dart = None
        comp = PlaneDigraph(comp_vertices, edges, rot, outer_dart)
        if outer_dart is None:
            comp.outer_dart = _find_bare_triangle_trav(comp, outer_tri)
            comp._outer_face_id = None
            comp._faces = None
            comp._face_of_trav = None
        node = ComponentNode(
            index=len(nodes),
            region=r,
            graph=comp,
            outer_triangle=outer_tri,
            parent=None,
        )
        node_of_region[r] = node.index
        nodes.append(node)

    for r in order:
        ni = node_of_region[r]
        for c in d.children[r]:
            ci = node_of_region[c]
            nodes[ci].parent = ni
            nodes[ni].children.append(ci)
            nodes[ni].child_triangles[ci] = d.triangles[c]

    tri_key_to_node: dict[tuple[int, int, int], int] = {}
    for i, tri in enumerate(d.triangles):
        parent_region = d.parent_tri[i]
        tri_key_to_node[tri.vertices] = node_of_region[parent_region]
    per_vertex: dict[tuple[int, int], list[Pincer]] = {}
    for p in pincers:
        key = tuple(sorted(p.triangle))
        ni = tri_key_to_node.get(key)
        if ni is None:
            raise GraphError(f"pincer triangle {key} is not separating")
        nodes[ni].pincers.append(p)
        per_vertex.setdefault((ni, p.apex), []).append(p)
    for (ni, apex), plist in per_vertex.items():
        pairs = {tuple(sorted((p.e1, p.e2))) for p in plist}
        if len(pairs) > 1:
            raise GraphError(
                f"vertex {apex} has {len(pairs)} pincer pairs in component {ni}"
            )

    return ComponentTree(nodes=nodes, root=node_of_region[ROOT_REGION])


def _outer_triangle_of_graph(g: PlaneDigraph) -> Triangle:
    f = g.outer_face()
    if len(f) != 3:
        raise GraphError("outer face is not a triangle")
    verts = tuple(sorted(set(f.verts)))
    if len(verts) != 3:
        raise GraphError("outer triangle has repeated vertices")
    lookup: dict[tuple[int, int], int] = {}
    for t, _ in f.travs:
        a, b = g.edges[t]
        lookup[(a, b) if a < b else (b, a)] = t
    a, b, c = verts
    return Triangle(verts, (lookup[(a, b)], lookup[(b, c)], lookup[(a, c)]))


def _find_bare_triangle_trav(comp: PlaneDigraph, tri: Triangle) -> Trav:
    """Traversal of the component face that is exactly the bare triangle."""
    target = set(tri.vertices)
    e = tri.edge_ids[0]
    for dr in (1, -1):
        t0 = (e, dr)
        verts = set()
        travs = 0
        t = t0
        ok = True
        while True:
            verts.add(comp.trav_origin(t))
            travs += 1
            if travs > 3:
                ok = False
                break
            t = comp.next_face_trav(t)
            if t == t0:
                break
        if ok and travs == 3 and verts == target:
            return t0
    raise GraphError(f"no bare-triangle face for {tri.vertices}")


def check_component(node: ComponentNode) -> list[str]:
    """Component invariants: triangulated, triangle outer face, no internal
    separating triangles, vertices 2-modal or inner 4-modal of degree 4."""
    problems = []
    comp = node.graph
    faces = comp.compute_faces()
    for f in faces:
        if len(f) != 3:
            problems.append(f"face {f.id} degree {len(f)}")
    if len(comp.outer_face()) != 3:
        problems.append("outer face not a triangle")
    try:
        internal = find_separating_triangles(comp)
        if internal:
            problems.append(f"{len(internal)} separating triangles inside component")
    except GraphError as exc:
        problems.append(str(exc))
    outer_verts = set(node.outer_triangle.vertices)
    for v in comp.vertices:
        m = modality(comp, v)
        if m <= 2:
            continue
        if m == 4 and comp.degree(v) == 4 and v not in outer_verts:
            continue
        problems.append(f"vertex {v} modality {m} degree {comp.degree(v)}")
    return problems
