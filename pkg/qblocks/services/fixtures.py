import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from qblocks.models import Algebra, BlockDescriptor, FixtureMismatch, FixtureReport, label_sort_key
from qblocks.services.blocks import HALF, PRINCIPAL, STANDARD, BlockFamily
from qblocks.services.grothendieck import GrothendieckService
from qblocks.services.path_algebra import PathAlgebra, build_algebra, collapsed_projectives, radical_filtration
from qblocks.services.quivers import block_quiver

logger = logging.getLogger(__name__)

Layers = List[List[str]]


def _tail(a: int) -> Layers:
    return [[f"L{a}"], [f"L{a - 1}", f"L{a + 1}"], [f"L{a}"]]


def _q_principal_tail(a: int) -> Layers:
    return [
        [f"L{a}"],
        [f"L{a - 1}", f"L{a + 1}", f"ΠL{a}"],
        [f"L{a}", f"ΠL{a - 1}", f"ΠL{a + 1}"],
        [f"ΠL{a}"],
    ]


# Radical layers of the indecomposable projectives, top first, by vertex.
SQ_STANDARD_LAYERS: Dict[str, Layers] = {
    "L1": [["L1"], ["L2", "ΠL2"], ["L1"]],
    "L2": [["L2"], ["L1", "L3"], ["L2"]],
}
SQ_PRINCIPAL_LAYERS: Dict[str, Layers] = {
    "C": [["C"], ["L1", "ΠL2"], ["ΠC", "ΠC"], ["L2", "ΠL1"], ["C"]],
    "L1": [["L1"], ["ΠC"], ["L2"], ["C"], ["L1"]],
    "L2": [["L2"], ["C", "L3"], ["L1"], ["ΠC"], ["L2"]],
}
HALF_LAYERS: Dict[str, Layers] = {"L1": [["L1"], ["L2"], ["L1"]]}
Q_STANDARD_LAYERS: Dict[str, Layers] = {
    "L1": [["L1"], ["L1", "L2"], ["L1", "L2"], ["L1"]],
    "L2": [["L2"], ["L1", "L3"], ["L1"], ["L2"]],
}
Q_PRINCIPAL_LAYERS: Dict[str, Layers] = {
    "C": [
        ["C"],
        ["ΠC", "L1", "ΠL2"],
        ["ΠC", "ΠC", "ΠL1", "L2"],
        ["C", "C", "ΠL1", "L2"],
        ["C", "L1", "ΠL2"],
        ["ΠC"],
    ],
    "L1": [["L1"], ["ΠC", "ΠL1"], ["C", "L2"], ["C", "ΠL2"], ["ΠC", "L1"], ["ΠL1"]],
    "L2": [
        ["L2"],
        ["C", "L3", "ΠL2"],
        ["ΠC", "L1", "ΠL3"],
        ["ΠC", "ΠL1"],
        ["C", "L2"],
        ["ΠL2"],
    ],
}

FixtureSet = Tuple[Dict[str, Layers], Optional[Callable[[int], Layers]], int]

LAYER_FIXTURES: Dict[Tuple[str, Algebra], FixtureSet] = {
    (STANDARD, Algebra.SQ): (SQ_STANDARD_LAYERS, _tail, 3),
    (PRINCIPAL, Algebra.SQ): (SQ_PRINCIPAL_LAYERS, _tail, 3),
    (STANDARD, Algebra.Q): (Q_STANDARD_LAYERS, _tail, 3),
    (PRINCIPAL, Algebra.Q): (Q_PRINCIPAL_LAYERS, _q_principal_tail, 3),
    (HALF, Algebra.SQ): (HALF_LAYERS, _tail, 2),
    (HALF, Algebra.Q): (HALF_LAYERS, _tail, 2),
}


def _tail_row(a: int, scale: int = 1) -> Dict[str, int]:
    return {f"L{a - 1}": scale, f"L{a}": 2 * scale, f"L{a + 1}": scale}


# Leading composition multiplicities of projectives; later rows follow the tail rule from the given index.
REFERENCE_PROJECTIVES: Dict[Tuple[str, Algebra], Tuple[Dict[str, Dict[str, int]], int, int]] = {
    (STANDARD, Algebra.SQ): ({"P(1)": {"L1": 2, "L2": 2}}, 2, 1),
    (STANDARD, Algebra.Q): ({"P(1)": {"L1": 4, "L2": 2}, "P(2)": {"L1": 2, "L2": 2, "L3": 1}}, 3, 1),
    (HALF, Algebra.SQ): ({"P(1)": {"L1": 2, "L2": 1}}, 2, 1),
    (HALF, Algebra.Q): ({"P(1)": {"L1": 2, "L2": 1}}, 2, 1),
    (PRINCIPAL, Algebra.SQ): (
        {
            "P(0)": {"C": 4, "L1": 2, "L2": 2},
            "P(1)": {"C": 2, "L1": 2, "L2": 1},
            "P(2)": {"C": 2, "L1": 1, "L2": 2, "L3": 1},
        },
        3,
        1,
    ),
    (PRINCIPAL, Algebra.Q): (
        {
            "P(0)": {"C": 8, "L1": 4, "L2": 4},
            "P(1)": {"C": 4, "L1": 4, "L2": 2},
            "P(2)": {"C": 4, "L1": 2, "L2": 4, "L3": 2},
        },
        3,
        2,
    ),
}


def reference_projectives(family: BlockFamily, bound: int) -> Dict[str, Dict[str, int]]:
    """Expected [P(k)] for every index up to the bound, or {} when none are stored."""
    key = (family.kind, family.algebra)
    if key not in REFERENCE_PROJECTIVES:
        return {}
    leading, tail_from, scale = REFERENCE_PROJECTIVES[key]
    rows = {}
    for k in family.indices(bound):
        name = f"P({k})"
        if name in leading:
            rows[name] = dict(leading[name])
        elif k >= tail_from:
            rows[name] = _tail_row(k, scale)
        else:
            raise KeyError(f"No stored row for {name}")
    return rows


def layer_fixtures(family: BlockFamily, tail_indices: Sequence[int]) -> Dict[str, Layers]:
    key = (family.kind, family.algebra)
    if key not in LAYER_FIXTURES:
        return {}
    fixed, tail, first = LAYER_FIXTURES[key]
    result = {vertex: layers for vertex, layers in fixed.items()}
    for a in tail_indices:
        if tail and a >= first:
            result[f"L{a}"] = tail(a)
    return result


def _canonical(layers: Layers) -> Layers:
    return [sorted(layer, key=label_sort_key) for layer in layers]


def verify_against_fixtures(
    block: BlockDescriptor,
    cutoff: int = 6,
    cap: int = 12,
    tail_indices: Sequence[int] = (3, 4),
    algebra: Optional[PathAlgebra] = None,
) -> FixtureReport:
    """
    Recompute radical layers and collapsed Hom dimensions of a block and compare
    them with the stored diagrams and with the projective table.

    A prebuilt algebra of the block may be passed to skip the construction.
    """
    family = BlockFamily(block)
    if algebra is None:
        quiver, relations = block_quiver(block, max(cutoff, family.min_cutoff))
        algebra = build_algebra(quiver, relations, cap)
    quiver = algebra.quiver
    cutoff = quiver.cutoff or 1

    mismatches = []
    checked = []
    for vertex, expected in layer_fixtures(family, tail_indices).items():
        if vertex not in quiver.labels or not quiver.is_trusted(vertex):
            logger.warning(f"Skipping fixture {vertex}: outside the trusted range of cutoff {cutoff}")
            continue
        actual = radical_filtration(algebra, vertex).layers
        checked.append(vertex)
        if _canonical(actual) != _canonical(expected):
            mismatches.append(FixtureMismatch(vertex=vertex, expected=_canonical(expected), actual=actual))

    hom_mismatches = []
    table = GrothendieckService(block).projective_table(max(cutoff - 2, 1)).projectives
    for name, vector in collapsed_projectives(algebra).items():
        if name in table and table[name].entries != vector.entries:
            hom_mismatches.append(f"{name}: quiver {vector.entries} vs table {table[name].entries}")

    report = FixtureReport(block=str(block), checked=checked, mismatches=mismatches, hom_mismatches=hom_mismatches)
    if report.passed:
        logger.info(f"All fixtures of the {block} match ({len(checked)} diagrams)")
    else:
        logger.warning(f"{len(mismatches) + len(hom_mismatches)} fixture mismatches in the {block}")
    return report
