import pytest

from qblocks.models import Algebra, BlockClass, Weight
from qblocks.services.blocks import BlockFamily
from qblocks.services.path_algebra import PathAlgebra, build_algebra
from qblocks.services.quivers import block_quiver


def w(text: str) -> Weight:
    """Weight from its comma-separated coordinates."""
    return Weight.parse(text)


def canonical_block(block_cls: BlockClass, algebra: Algebra):
    return BlockFamily.canonical(block_cls, algebra).block


def algebra_for(block_cls: BlockClass, algebra: Algebra, cutoff: int = 6, cap: int = 12) -> PathAlgebra:
    quiver, relations = block_quiver(canonical_block(block_cls, algebra), cutoff)
    return build_algebra(quiver, relations, cap)


@pytest.fixture(scope="session")
def sq_principal() -> PathAlgebra:
    return algebra_for(BlockClass.PRINCIPAL, Algebra.SQ)


@pytest.fixture(scope="session")
def q_principal() -> PathAlgebra:
    return algebra_for(BlockClass.PRINCIPAL, Algebra.Q)


@pytest.fixture(scope="session")
def sq_standard() -> PathAlgebra:
    return algebra_for(BlockClass.STANDARD, Algebra.SQ)


@pytest.fixture(scope="session")
def q_standard() -> PathAlgebra:
    return algebra_for(BlockClass.STANDARD, Algebra.Q)
