import logging
from typing import List

from qblocks.exceptions import BlockShapeError, UnsupportedBlockError
from qblocks.models import Algebra, BlockClass, BlockDescriptor, SimpleLabel, SimpleType, Weight
from qblocks.services.weights import block_class, central_weight, is_regular_dominant, simple_type

logger = logging.getLogger(__name__)

PRINCIPAL = "principal"
STANDARD = "standard"
HALF = "half"
SINGLETON = "singleton"

# Smallest vertex cutoff at which every relation of the block quiver has an instance.
MIN_CUTOFF = {
    (PRINCIPAL, Algebra.SQ): 4,
    (PRINCIPAL, Algebra.Q): 4,
    (STANDARD, Algebra.SQ): 3,
    (STANDARD, Algebra.Q): 4,
    (HALF, Algebra.SQ): 3,
    (HALF, Algebra.Q): 3,
    (SINGLETON, Algebra.SQ): 1,
    (SINGLETON, Algebra.Q): 1,
}

# Canonical base weight per block class, in doubled coordinates.
CANONICAL_WEIGHTS = {
    BlockClass.PRINCIPAL: (0, 0, 0),
    BlockClass.STANDARD: (2, 0, 0),
    BlockClass.HALF_STANDARD: (3, 1, -1),
    BlockClass.TYPICAL: (4, 0, -2),
    BlockClass.STRONGLY_TYPICAL: (6, 4, 2),
    BlockClass.SQ_TYPICAL_LOOP: (12, 6, -4),
}


class BlockFamily:
    """Enumerates the simple modules of a rank 3 block by a running index."""

    def __init__(self, block: BlockDescriptor):
        self.block = block
        self.algebra = block.algebra
        self.kind = self._kind(block.block_class)
        deltas = block.central_weight.deltas
        self.center = 0
        if self.kind in (STANDARD, HALF):
            (doubled, mult), = deltas
            self.center = doubled * mult
        self.first_index = 0 if self.kind == PRINCIPAL else 1

    @staticmethod
    def _kind(cls: BlockClass) -> str:
        if cls == BlockClass.PRINCIPAL:
            return PRINCIPAL
        if cls == BlockClass.STANDARD:
            return STANDARD
        if cls == BlockClass.HALF_STANDARD:
            return HALF
        return SINGLETON

    @classmethod
    def of(cls, weight: Weight, algebra: Algebra) -> "BlockFamily":
        return cls(block_class(weight, algebra))

    @classmethod
    def canonical(cls, block_cls: BlockClass, algebra: Algebra) -> "BlockFamily":
        return cls.of(Weight(doubled=CANONICAL_WEIGHTS[block_cls]), algebra)

    @property
    def min_cutoff(self) -> int:
        return MIN_CUTOFF[(self.kind, self.algebra)]

    def _offsets(self, count: int) -> List[int]:
        """First `count` admissible doubled values of x in the multiset {c, x, −x}."""
        start = 0 if self.kind == STANDARD else 1
        values = []
        x = start
        while len(values) < count:
            if x != abs(self.center):
                values.append(x)
            x += 2
        return values

    def weight(self, index: int) -> Weight:
        if index < self.first_index:
            raise BlockShapeError(f"Index {index} is below the first index {self.first_index}")
        if self.kind == SINGLETON:
            if index != 1:
                raise BlockShapeError(f"A typical block has a single simple, got index {index}")
            return self.block.base_weight.sorted_desc()
        if self.kind == PRINCIPAL:
            return Weight(doubled=(2 * index, 0, -2 * index))
        x = self._offsets(index)[-1]
        return Weight(doubled=tuple(sorted((self.center, x, -x), reverse=True)))

    def index_of(self, weight: Weight) -> int:
        if central_weight(weight) != self.block.central_weight:
            raise BlockShapeError(f"{weight} does not lie in the {self.block}")
        if self.kind == SINGLETON:
            return 1
        if self.kind == PRINCIPAL:
            return max(abs(d) for d in weight.doubled) // 2
        rest = list(weight.doubled)
        rest.remove(self.center)
        x = abs(rest[0])
        index = 1
        while self._offsets(index)[-1] != x:
            index += 1
        return index

    def indices(self, bound: int) -> range:
        last = 1 if self.kind == SINGLETON else bound
        return range(self.first_index, last + 1)

    def is_regular(self, index: int) -> bool:
        return is_regular_dominant(self.weight(index))

    def regular_indices(self, bound: int) -> List[int]:
        return [k for k in self.indices(bound) if self.is_regular(k)]

    def simple_type(self, index: int) -> SimpleType:
        return simple_type(self.weight(index), self.algebra)

    def label(self, index: int, parity: int = 0) -> SimpleLabel:
        kind = self.simple_type(index)
        if kind == SimpleType.Q and parity:
            raise UnsupportedBlockError(f"Simple {index} is of type Q and has no separate parity shift")
        return SimpleLabel(
            weight=self.weight(index),
            index=index,
            parity=parity,
            type=kind,
            principal=self.kind == PRINCIPAL,
        )

    def labels(self, bound: int) -> List[SimpleLabel]:
        """Every simple up to the bound, each type M simple followed by its parity shift."""
        result = []
        for k in self.indices(bound):
            label = self.label(k)
            result.append(label)
            if label.type == SimpleType.M:
                result.append(label.shifted())
        return result

    def name(self, index: int) -> str:
        return self.label(index).base_name

    def describe(self) -> str:
        return f"{self.algebra.value} {self.block.block_class.value} ({self.kind}, wt={self.block.central_weight})"
