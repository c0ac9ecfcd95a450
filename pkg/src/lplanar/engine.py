"""End-to-end construction of planar L-drawings.

draw(): validate, augment to a triangulated graph, decompose at separating
triangles, assign ports per component from the outermost in (children
inherit the drawing of their outer triangle from the parent's assignment
of that inner face), place vertices by topological ranks, strip the
augmentation, and certify the result geometrically.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .augment import augment
from .decompose import ComponentTree, build_component_tree
from .graph_model import GraphError, PlaneDigraph, find_pincers, validate_input
from .layout import (
    LDrawing,
    PortMap,
    assemble_global,
    build_xy,
    coordinates,
    outerplanar_layout,
    strip_augmentation,
)
from .ports import Gamma0, assign_ports, gamma0_from_trace, property_scan
from .verify import VerificationReport, check_drawing
from .verify import realizable_triangle_pas


class InvalidInput(GraphError):
    def __init__(self, reasons: list[str]) -> None:
        super().__init__("; ".join(reasons))
        self.reasons = reasons


class ConstructionFailed(GraphError):
    """The verifier rejected the pipeline's own output."""


@dataclass
class DrawResult:
    drawing: LDrawing
    pa: PortMap
    report: VerificationReport
    augmented: PlaneDigraph
    augmented_drawing: LDrawing
    tree: ComponentTree
    property_problems: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)


def _root_gamma0(root_graph: PlaneDigraph) -> Gamma0:
    outer = root_graph.outer_face()
    verts = list(outer.verts)
    k = verts.index(min(verts))
    order = tuple(verts[(k + i) % 3] for i in range(3))
    edges = tuple(outer.travs[(k + i) % 3][0] for i in range(3))
    dirs = tuple(
        1 if root_graph.edges[e][0] == order[i] else -1 for i, e in enumerate(edges)
    )
    pa_tuple = min(realizable_triangle_pas(dirs))
    return Gamma0(order, edges, {e: pa_tuple[i] for i, e in enumerate(edges)})


def assign_all_ports(tree: ComponentTree) -> tuple[PortMap, list[str]]:
    """Port maps for every component, outermost first; children read their
    outer drawing from the parent's ports of the shared triangle."""
    gamma0_of: dict[int, Gamma0] = {}
    problems: list[str] = []
    pas: list[PortMap] = []
    for node in tree.order_outermost_first():
        if node.index == tree.root:
            gamma0 = _root_gamma0(node.graph)
        else:
            gamma0 = gamma0_of[node.index]
        res = assign_ports(node, gamma0)
        problems.extend(property_scan(res, node))
        pas.append(res.pa)
        for child_idx in node.children:
            child_graph = tree.nodes[child_idx].graph
            gamma0_of[child_idx] = gamma0_from_trace(child_graph, res.pa)
    return assemble_global(pas), problems


def draw(g: PlaneDigraph, check: bool = True) -> DrawResult:
    rep = validate_input(g)
    if not rep.ok():
        raise InvalidInput(rep.reasons())
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    ga, rec = augment(g)
    timings["augment"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pincers = find_pincers(ga)
    tree = build_component_tree(ga, pincers)
    timings["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pa, property_problems = assign_all_ports(tree)
    timings["ports"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cd = build_xy(ga, pa)
    drawing_aug = coordinates(cd)
    drawing = strip_augmentation(drawing_aug, set(g.vertices))
    timings["coordinates"] = time.perf_counter() - t0

    report = VerificationReport()
    if check:
        t0 = time.perf_counter()
        pa_orig = {e: pa[e] for e in g.edges}
        report = check_drawing(g, drawing, pa_orig)
        timings["verify"] = time.perf_counter() - t0
        if not report.passed() or property_problems:
            raise ConstructionFailed(
                "verifier rejected output: "
                + "; ".join(report.failures() + property_problems[:4])
            )
    return DrawResult(
        drawing=drawing,
        pa={e: pa[e] for e in g.edges},
        report=report,
        augmented=ga,
        augmented_drawing=drawing_aug,
        tree=tree,
        property_problems=property_problems,
        timings=timings,
    )


def draw_outerplanar(g: PlaneDigraph, check: bool = True) -> tuple[LDrawing, VerificationReport]:
    drawing = outerplanar_layout(g)
    report = VerificationReport()
    if check:
        report = check_drawing(g, drawing, pa=None, require_embedding=False)
        if not report.passed():
            raise ConstructionFailed(
                "verifier rejected outerplanar output: " + "; ".join(report.failures())
            )
    return drawing, report
