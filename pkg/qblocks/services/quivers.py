import logging
import re
from collections import Counter
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from qblocks.exceptions import (
    AmbiguousRelationError,
    CutoffTooSmallError,
    NonComposableRelationError,
    RelationParseError,
)
from qblocks.models import (
    Algebra,
    Arrow,
    BlockClass,
    BlockDescriptor,
    Orientation,
    RelationSet,
    ResolvedRelation,
    SimpleLabel,
    SimpleType,
)
from qblocks.services.blocks import HALF, PRINCIPAL, SINGLETON, STANDARD, BlockFamily

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
PathKey = Tuple[int, ...]

SQ_PRINCIPAL_RELATIONS = [
    "x^2 = y^2 = 0",
    "xb = dy = bd = ca = 0",
    "xy = yx",
    "yx = bacd",
    "dbac = acdb",
]
Q_PRINCIPAL_RELATIONS = SQ_PRINCIPAL_RELATIONS + ["θ^2 = 0"] + [f"θ{g} = {g}θ" for g in "abcdxy"]
CHAIN_RELATIONS = ["a^2 = b^2 = 0", "ab = ba"]
# The last relation identifies the two length-2 cycles at L(2,1,-2) with the loop through L(1,0,0).
Q_STANDARD_RELATIONS = [
    "x^2 = y^2 = 0",
    "xa = by = ab = 0",
    "h^2 = 0",
    "xy = yx",
    "bah = hba",
    "yx = ahb",
]
Q_TYPICAL_RELATIONS = ["ab = ba = 0"]
LOOP_RELATIONS = ["h^2 = 0"]

_POWER = re.compile(r"^(?P<base>.+?)(?:\^(?P<exp>\d+)|(?P<sup>[²³⁴]))$")
_SUPERSCRIPTS = {"²": 2, "³": 3, "⁴": 4}


class Quiver:
    """Finite quiver with named arrows and a parity involution on its vertices."""

    def __init__(self, labels: Sequence[SimpleLabel], cutoff: Optional[int] = None):
        self.graph = nx.MultiDiGraph()
        self.labels: Dict[str, SimpleLabel] = {}
        self.parity: Dict[str, str] = {}
        self.arrows: List[Arrow] = []
        self.cutoff = cutoff
        for label in labels:
            self.labels[label.name] = label
            self.graph.add_node(label.name, label=label)
        for name, label in self.labels.items():
            self.parity[name] = label.shifted().name

    @property
    def vertices(self) -> List[str]:
        return list(self.labels)

    @property
    def names(self) -> List[str]:
        return sorted({arrow.name for arrow in self.arrows})

    def add_arrow(self, name: str, source: str, target: str) -> Arrow:
        if source not in self.labels or target not in self.labels:
            raise KeyError(f"Arrow {name}: {source} -> {target} leaves the quiver")
        arrow = Arrow(id=len(self.arrows), name=name, source=source, target=target)
        self.arrows.append(arrow)
        self.graph.add_edge(source, target, key=arrow.id, name=name)
        return arrow

    def arrows_into(self, vertex: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == vertex]

    def arrows_out(self, vertex: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == vertex]

    def is_trusted(self, vertex: str) -> bool:
        """Vertices within distance two of the cutoff see truncated relations."""
        if self.cutoff is None:
            return True
        return self.labels[vertex].index <= self.cutoff - 2

    def instances(self, travel: Word) -> Dict[Tuple[str, str], List[PathKey]]:
        """All arrow paths spelling the word in travel order, grouped by endpoints."""
        partial: List[Tuple[str, str, PathKey]] = [
            (a.source, a.target, (a.id,)) for a in self.arrows if a.name == travel[0]
        ]
        for name in travel[1:]:
            extended = []
            for source, target, path in partial:
                for a in self.arrows_out(target):
                    if a.name == name:
                        extended.append((source, a.target, path + (a.id,)))
            partial = extended
        grouped: Dict[Tuple[str, str], List[PathKey]] = {}
        for source, target, path in partial:
            grouped.setdefault((source, target), []).append(path)
        return grouped

    def is_parity_equivariant(self) -> bool:
        """The parity involution maps the arrow multiset onto itself."""
        counts = Counter((a.source, a.target) for a in self.arrows)
        return all(counts[(self.parity[s], self.parity[t])] == n for (s, t), n in counts.items())

    def __repr__(self) -> str:
        return f"Quiver(vertices={len(self.labels)}, arrows={len(self.arrows)}, cutoff={self.cutoff})"


def _parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        raise RelationParseError("Empty word in relation")
    match = _POWER.match(text)
    exponent = 1
    if match and (match.group("exp") or match.group("sup")):
        text = match.group("base")
        exponent = int(match.group("exp")) if match.group("exp") else _SUPERSCRIPTS[match.group("sup")]
    if not text.isalpha():
        raise RelationParseError(f"Word {text!r} contains characters that are not arrow names")
    return tuple(text) * exponent


def parse_relation(text: str) -> List[Tuple[Word, Optional[Word]]]:
    """
    Split a relation chain into monomial and binomial parts, as written.

    "p = q = 0" yields the monomials p and q; "p = q" yields one binomial.
    """
    parts = [part.strip() for part in text.split("=")]
    if len(parts) < 2 or any(not part for part in parts):
        raise RelationParseError(f"Malformed relation: {text!r}")
    words = [part for part in parts if part != "0"]
    if not words:
        raise RelationParseError(f"Relation {text!r} has no arrow words")
    if len(words) < len(parts):
        return [(_parse_word(word), None) for word in words]
    parsed = [_parse_word(word) for word in words]
    return [(left, right) for left, right in zip(parsed, parsed[1:])]


def _travel(word: Word, orientation: Orientation) -> Word:
    return tuple(reversed(word)) if orientation == Orientation.FUNCTIONAL else word


def _footprint(
    quiver: Quiver, parts: List[Tuple[Word, Optional[Word]]], orientation: Orientation
) -> Optional[FrozenSet]:
    """Relation elements generated by one reading, or None if some part does not compose."""
    elements = set()
    for lhs, rhs in parts:
        left = quiver.instances(_travel(lhs, orientation))
        if rhs is None:
            if not left:
                return None
            elements.update(p for paths in left.values() for p in paths)
            continue
        right = quiver.instances(_travel(rhs, orientation))
        shared = [key for key in left if key in right]
        if not shared:
            return None
        for key in shared:
            elements.add(frozenset({frozenset(left[key]), frozenset(right[key])}))
    return frozenset(elements)


def resolve_orientation(raw: List[str], quiver: Quiver) -> RelationSet:
    """
    Fix the composition order of every relation by requiring it to compose.

    A relation whose two readings both compose and generate different
    elements takes the orientation most unambiguous relations use.
    """
    known = set(quiver.names)
    chains = []
    for text in raw:
        parts = parse_relation(text)
        for lhs, rhs in parts:
            unknown = (set(lhs) | set(rhs or ())) - known
            if unknown:
                raise RelationParseError(f"Relation {text!r} names unknown arrows {sorted(unknown)}")
        chains.append((text, parts))

    chosen: Dict[str, Optional[Orientation]] = {}
    votes: Counter = Counter()
    pending = []
    for text, parts in chains:
        functional = _footprint(quiver, parts, Orientation.FUNCTIONAL)
        forward = _footprint(quiver, parts, Orientation.LEFT_TO_RIGHT)
        if functional is None and forward is None:
            raise NonComposableRelationError(f"No reading of {text!r} composes in {quiver}")
        if forward is None:
            chosen[text] = Orientation.FUNCTIONAL
            votes[Orientation.FUNCTIONAL] += 1
        elif functional is None:
            chosen[text] = Orientation.LEFT_TO_RIGHT
            votes[Orientation.LEFT_TO_RIGHT] += 1
        elif functional == forward:
            chosen[text] = None
        else:
            pending.append(text)

    if pending and not votes:
        raise AmbiguousRelationError(f"Both readings of {pending[0]!r} compose and differ")
    if votes[Orientation.LEFT_TO_RIGHT] > votes[Orientation.FUNCTIONAL]:
        overall = Orientation.LEFT_TO_RIGHT
    else:
        overall = Orientation.FUNCTIONAL
    for text in pending:
        logger.debug(f"Relation {text!r} follows the {overall.value} reading")
        chosen[text] = overall

    relations = []
    for text, parts in chains:
        orientation = chosen[text] or overall
        for lhs, rhs in parts:
            relations.append(
                ResolvedRelation(
                    text=text,
                    orientation=orientation,
                    lhs=_travel(lhs, orientation),
                    rhs=None if rhs is None else _travel(rhs, orientation),
                )
            )
    return RelationSet(raw=list(raw), relations=relations, orientation=overall)


def _principal_quiver(family: BlockFamily, cutoff: int) -> Tuple[Quiver, List[str]]:
    quiver = Quiver(family.labels(cutoff), cutoff)
    for parity in (0, 1):
        def v(k: int, p: int = parity) -> str:
            return family.label(k, p).name

        def w(k: int, p: int = parity) -> str:
            return family.label(k, 1 - p).name

        quiver.add_arrow("a", v(1), v(0))
        quiver.add_arrow("b", v(0), v(2))
        quiver.add_arrow("c", v(0), w(1))
        quiver.add_arrow("d", v(2), w(0))
        for k in range(2, cutoff):
            quiver.add_arrow("x", v(k), v(k + 1))
            quiver.add_arrow("y", v(k + 1), v(k))
    if family.algebra == Algebra.SQ:
        return quiver, list(SQ_PRINCIPAL_RELATIONS)
    for k in family.indices(cutoff):
        quiver.add_arrow("θ", family.label(k, 0).name, family.label(k, 1).name)
        quiver.add_arrow("θ", family.label(k, 1).name, family.label(k, 0).name)
    return quiver, list(Q_PRINCIPAL_RELATIONS)


def _standard_quiver(family: BlockFamily, cutoff: int) -> Tuple[Quiver, List[str]]:
    quiver = Quiver(family.labels(cutoff), cutoff)

    def name(k: int, p: int = 0) -> str:
        return family.label(k, p).name

    if family.algebra == Algebra.Q:
        quiver.add_arrow("h", name(1), name(1))
        quiver.add_arrow("a", name(1), name(2))
        quiver.add_arrow("b", name(2), name(1))
        for k in range(2, cutoff):
            quiver.add_arrow("x", name(k), name(k + 1))
            quiver.add_arrow("y", name(k + 1), name(k))
        return quiver, list(Q_STANDARD_RELATIONS)
    # One line ... ΠL3, ΠL2, L1, L2, L3 ... with a pointing right and b pointing left.
    line = [name(k, 1) for k in range(cutoff, 1, -1)] + [name(1)] + [name(k) for k in range(2, cutoff + 1)]
    for left, right in zip(line, line[1:]):
        quiver.add_arrow("a", left, right)
        quiver.add_arrow("b", right, left)
    return quiver, list(CHAIN_RELATIONS)


def _half_quiver(family: BlockFamily, cutoff: int) -> Tuple[Quiver, List[str]]:
    quiver = Quiver(family.labels(cutoff), cutoff)
    parities = (0,) if family.simple_type(1) == SimpleType.Q else (0, 1)
    for p in parities:
        for k in range(1, cutoff):
            quiver.add_arrow("a", family.label(k, p).name, family.label(k + 1, p).name)
            quiver.add_arrow("b", family.label(k + 1, p).name, family.label(k, p).name)
    return quiver, list(CHAIN_RELATIONS)


def _singleton_quiver(family: BlockFamily) -> Tuple[Quiver, List[str]]:
    quiver = Quiver(family.labels(1))
    block_cls = family.block.block_class
    if family.algebra == Algebra.Q and block_cls == BlockClass.TYPICAL:
        even, odd = family.label(1, 0).name, family.label(1, 1).name
        quiver.add_arrow("a", even, odd)
        quiver.add_arrow("b", odd, even)
        return quiver, list(Q_TYPICAL_RELATIONS)
    if block_cls == BlockClass.SQ_TYPICAL_LOOP:
        vertex = family.label(1).name
        quiver.add_arrow("h", vertex, vertex)
        return quiver, list(LOOP_RELATIONS)
    return quiver, []


def block_quiver(block: BlockDescriptor, cutoff: int) -> Tuple[Quiver, RelationSet]:
    """
    Ext-quiver and relations of a block, with tail vertices up to the cutoff index.

    Args:
        block: Any rank 3 block
        cutoff: Largest vertex index; ignored for single-vertex blocks

    Returns:
        Tuple of (Quiver, RelationSet)
    """
    family = BlockFamily(block)
    if cutoff < family.min_cutoff:
        raise CutoffTooSmallError(
            f"Cutoff {cutoff} cannot express the relations of the {block}; need at least {family.min_cutoff}"
        )
    if family.kind == PRINCIPAL:
        quiver, raw = _principal_quiver(family, cutoff)
    elif family.kind == STANDARD:
        quiver, raw = _standard_quiver(family, cutoff)
    elif family.kind == HALF:
        quiver, raw = _half_quiver(family, cutoff)
    elif family.kind == SINGLETON:
        quiver, raw = _singleton_quiver(family)
    else:
        raise ValueError(f"Unknown block family {family.kind}")
    relations = resolve_orientation(raw, quiver) if raw else RelationSet(
        raw=[], relations=[], orientation=Orientation.FUNCTIONAL
    )
    logger.info(f"Quiver of the {block}: {quiver}, {len(relations.relations)} relations")
    return quiver, relations
