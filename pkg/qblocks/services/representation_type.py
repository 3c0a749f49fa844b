import logging
from collections import Counter
from typing import List, Optional, Set, Tuple

import networkx as nx

from qblocks.config import settings
from qblocks.models import (
    BiserialReport,
    BlockDescriptor,
    ComponentClass,
    GraphKind,
    RelationSet,
    RepresentationType,
    Verdict,
)
from qblocks.services.blocks import BlockFamily
from qblocks.services.quivers import Quiver, block_quiver

logger = logging.getLogger(__name__)

PRIME = "′"

# Arm sizes (p, q, r), centre included, of the star-shaped trees with one branch point.
DYNKIN_STARS = {(2, 3, 3): "E6", (2, 3, 4): "E7", (2, 3, 5): "E8"}
EUCLIDEAN_STARS = {(3, 3, 3): "Ẽ6", (2, 4, 4): "Ẽ7", (2, 3, 6): "Ẽ8"}


def _zero_pairs(quiver: Quiver, relations: RelationSet) -> Set[Tuple[int, ...]]:
    pairs = set()
    for relation in relations.relations:
        if relation.is_monomial and len(relation.lhs) == 2:
            for paths in quiver.instances(relation.lhs).values():
                pairs.update(paths)
    return pairs


def is_special_biserial(quiver: Quiver, relations: RelationSet) -> BiserialReport:
    """
    Special biserial test on the monomial part of the relations.

    At most two arrows start and end at each vertex, and every arrow has at
    most one continuation and at most one predecessor outside the monomial ideal.
    """
    binomials = sorted({r.text for r in relations.relations if not r.is_monomial})
    outgoing = Counter(a.source for a in quiver.arrows)
    incoming = Counter(a.target for a in quiver.arrows)
    for vertex in quiver.vertices:
        if outgoing[vertex] > 2:
            return BiserialReport(
                special_biserial=False,
                witness=f"{outgoing[vertex]} arrows start at {vertex}",
                binomial_relations=binomials,
            )
        if incoming[vertex] > 2:
            return BiserialReport(
                special_biserial=False,
                witness=f"{incoming[vertex]} arrows end at {vertex}",
                binomial_relations=binomials,
            )

    zero = _zero_pairs(quiver, relations)
    for arrow in quiver.arrows:
        after = [g for g in quiver.arrows_out(arrow.target) if (arrow.id, g.id) not in zero]
        if len(after) > 1:
            names = ", ".join(f"{g.name}:{g.source}->{g.target}" for g in after)
            return BiserialReport(
                special_biserial=False,
                witness=f"{arrow.name}:{arrow.source}->{arrow.target} continues along {names}",
                binomial_relations=binomials,
            )
        before = [g for g in quiver.arrows_into(arrow.source) if (g.id, arrow.id) not in zero]
        if len(before) > 1:
            names = ", ".join(f"{g.name}:{g.source}->{g.target}" for g in before)
            return BiserialReport(
                special_biserial=False,
                witness=f"{arrow.name}:{arrow.source}->{arrow.target} is preceded by {names}",
                binomial_relations=binomials,
            )
    return BiserialReport(special_biserial=True, binomial_relations=binomials)


def duplicate_quiver(quiver: Quiver) -> nx.MultiDiGraph:
    """Separated quiver: every arrow i -> j becomes i -> j′."""
    doubled = nx.MultiDiGraph()
    for vertex in quiver.vertices:
        doubled.add_node(vertex, side=0)
        doubled.add_node(vertex + PRIME, side=1)
    for arrow in quiver.arrows:
        doubled.add_edge(arrow.source, arrow.target + PRIME, name=arrow.name)
    return doubled


def _arm_sizes(tree: nx.MultiGraph, centre) -> Tuple[int, ...]:
    sizes = []
    for start in tree.neighbors(centre):
        size, previous, current = 1, centre, start
        while True:
            onward = [v for v in tree.neighbors(current) if v != previous]
            if not onward:
                break
            previous, current = current, onward[0]
            size += 1
        sizes.append(size + 1)
    return tuple(sorted(sizes))


def classify_component(component: nx.MultiGraph) -> ComponentClass:
    """Match one connected graph against the simply-laced Dynkin and Euclidean diagrams."""
    nodes = sorted(component.nodes, key=str)
    n = component.number_of_nodes()
    m = component.number_of_edges()
    degrees = dict(component.degree())

    def result(kind: GraphKind, label: str) -> ComponentClass:
        return ComponentClass(kind=kind, label=label, nodes=[str(v) for v in nodes])

    if m == n - 1:
        branch = sorted((v for v, d in degrees.items() if d >= 3), key=str)
        if not branch:
            return result(GraphKind.DYNKIN, f"A{n}")
        if len(branch) == 1 and degrees[branch[0]] == 3:
            arms = _arm_sizes(component, branch[0])
            if arms[0] == 2 and arms[1] == 2:
                return result(GraphKind.DYNKIN, f"D{n}")
            if arms in DYNKIN_STARS:
                return result(GraphKind.DYNKIN, DYNKIN_STARS[arms])
            if arms in EUCLIDEAN_STARS:
                return result(GraphKind.EUCLIDEAN, EUCLIDEAN_STARS[arms])
            return result(GraphKind.NEITHER, f"T{arms}")
        if len(branch) == 1 and degrees[branch[0]] == 4 and n == 5:
            return result(GraphKind.EUCLIDEAN, "D̃4")
        if len(branch) == 2 and all(degrees[v] == 3 for v in branch):
            leaves = [sum(1 for u in component.neighbors(v) if degrees[u] == 1) for v in branch]
            if leaves == [2, 2]:
                return result(GraphKind.EUCLIDEAN, f"D̃{n - 1}")
        return result(GraphKind.NEITHER, "tree")
    if m == n and all(d == 2 for d in degrees.values()):
        return result(GraphKind.EUCLIDEAN, f"Ã{n - 1}")
    return result(GraphKind.NEITHER, "cyclic" if m >= n else "unknown")


def classify_graph(graph: nx.Graph) -> List[ComponentClass]:
    """Classification of every connected component, ordered by smallest node name."""
    undirected = nx.MultiGraph(graph)
    components = [undirected.subgraph(c).copy() for c in nx.connected_components(undirected)]
    classes = [classify_component(c) for c in components]
    return sorted(classes, key=lambda c: c.nodes[0])


def representation_type(block: BlockDescriptor, cutoff: Optional[int] = None) -> Verdict:
    """
    Tame when the block quiver is special biserial; wild when its separated
    quiver has a component that is neither Dynkin nor Euclidean.
    """
    family = BlockFamily(block)
    cutoff = max(cutoff or settings.WILD_CUTOFF, family.min_cutoff)
    quiver, relations = block_quiver(block, cutoff)
    trace = [f"quiver: {len(quiver.vertices)} vertices, {len(quiver.arrows)} arrows, cutoff {cutoff}"]

    report = is_special_biserial(quiver, relations)
    if report.special_biserial:
        trace.append("special biserial on monomial relations")
        if report.binomial_relations:
            trace.append(f"binomial relations kept aside: {', '.join(report.binomial_relations)}")
        return Verdict(block=str(block), verdict=RepresentationType.TAME, witness="special biserial", trace=trace)

    trace.append(f"not special biserial: {report.witness}")
    trace.append("quotient by all paths of length 2, then separated quiver")
    doubled = duplicate_quiver(quiver)
    components = classify_graph(doubled)
    bad = [c for c in components if c.kind == GraphKind.NEITHER]
    if bad:
        degrees = dict(nx.MultiGraph(doubled).degree())
        hub = max(sorted(bad[0].nodes), key=lambda v: degrees[v])
        witness = f"{hub} has degree {degrees[hub]} in the separated quiver"
        trace.append(f"{len(bad)} of {len(components)} components are neither Dynkin nor Euclidean")
        logger.info(f"{block} is wild: {witness}")
        return Verdict(block=str(block), verdict=RepresentationType.WILD, witness=witness, trace=trace)

    trace.append("every separated component is Dynkin or Euclidean")
    return Verdict(block=str(block), verdict=RepresentationType.UNDETERMINED, trace=trace)
