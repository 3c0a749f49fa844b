import logging
from typing import List

from qblocks.models import RadicalFiltration, RelationSet, SimpleType
from qblocks.services.quivers import Quiver

logger = logging.getLogger(__name__)

HEADER = """    rankdir={rankdir} nodesep=0.5 ranksep=0.8
    node [fontname=Arial fontsize=10]
    edge [fontname=Arial fontsize=9]
"""


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def quiver_dot(quiver: Quiver, relations: RelationSet, title: str) -> str:
    """
    DOT text of a block quiver.

    Parity-shifted vertices are filled grey, type Q vertices are boxes and
    vertices near the cutoff are dashed. Relations go into the graph label.
    """
    dot = f"// {title}\ndigraph quiver {{\n" + HEADER.format(rankdir="LR")
    relation_text = "\\l".join(r.replace('"', "'") for r in relations.raw)
    if relation_text:
        dot += f'    label="{relation_text}\\l" labelloc=b\n'
    dot += "\n"

    for vertex in quiver.vertices:
        label = quiver.labels[vertex]
        attrs = [f'label="{vertex}\\n{label.weight}"']
        attrs.append("shape=box" if label.type == SimpleType.Q else "shape=ellipse")
        styles = []
        if label.parity:
            styles.append("filled")
            attrs.append("fillcolor=lightgray")
        if not quiver.is_trusted(vertex):
            styles.append("dashed")
        if styles:
            attrs.append(f'style="{",".join(styles)}"')
        dot += f"    {_quote(vertex)} [{' '.join(attrs)}]\n"

    dot += "\n"
    for arrow in quiver.arrows:
        dot += f"    {_quote(arrow.source)} -> {_quote(arrow.target)} [label={_quote(arrow.name)}]\n"
    dot += "}\n"
    logger.debug(f"Quiver DOT: {len(quiver.vertices)} nodes, {len(quiver.arrows)} edges")
    return dot


def filtration_dot(filtration: RadicalFiltration, quiver: Quiver) -> str:
    """
    Loewy diagram of a projective: one row per radical layer, and an edge from
    a constituent to one in the next layer whenever an arrow joins the two.
    """
    dot = f"// Radical layers of P({filtration.vertex})\ndigraph filtration {{\n"
    dot += HEADER.format(rankdir="TB")

    ids: List[List[str]] = []
    for depth, layer in enumerate(filtration.layers):
        row = []
        dot += "    { rank=same\n"
        for position, name in enumerate(layer):
            node = f"n{depth}_{position}"
            row.append(node)
            dot += f"        {node} [label={_quote(name)} shape=plaintext]\n"
        dot += "    }\n"
        ids.append(row)

    joined = {(a.source, a.target) for a in quiver.arrows}
    for depth in range(len(filtration.layers) - 1):
        upper, lower = filtration.layers[depth], filtration.layers[depth + 1]
        for i, top in enumerate(upper):
            for j, below in enumerate(lower):
                if (below, top) in joined:
                    dot += f"    {ids[depth][i]} -> {ids[depth + 1][j]} [arrowhead=none]\n"
    dot += "}\n"
    return dot
