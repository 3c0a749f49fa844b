import pytest

from conftest import canonical_block
from qblocks.exceptions import (
    AmbiguousRelationError,
    CutoffTooSmallError,
    NonComposableRelationError,
    RelationParseError,
)
from qblocks.models import Algebra, BlockClass, Orientation
from qblocks.services.blocks import BlockFamily
from qblocks.services.quivers import Quiver, block_quiver, parse_relation, resolve_orientation


def chain_quiver() -> Quiver:
    """L1 <-> L2 and their parity shifts, without arrows."""
    family = BlockFamily.canonical(BlockClass.HALF_STANDARD, Algebra.SQ)
    return Quiver(family.labels(2), cutoff=None)


def test_parse_monomial_chain():
    assert parse_relation("x^2 = y^2 = 0") == [(("x", "x"), None), (("y", "y"), None)]
    assert parse_relation("xb = dy = 0") == [(("x", "b"), None), (("d", "y"), None)]


def test_parse_binomials():
    assert parse_relation("xy = yx") == [(("x", "y"), ("y", "x"))]
    assert parse_relation("h² = 0") == [(("h", "h"), None)]


@pytest.mark.parametrize("text", ["ab", "ab = ", "= 0", "a1 = 0", "0 = 0"])
def test_parse_rejects_malformed(text):
    with pytest.raises(RelationParseError):
        parse_relation(text)


def test_unknown_arrow_is_rejected():
    quiver = chain_quiver()
    quiver.add_arrow("a", "L1", "L2")
    with pytest.raises(RelationParseError):
        resolve_orientation(["ab = 0"], quiver)


def test_relation_that_never_composes():
    quiver = chain_quiver()
    quiver.add_arrow("a", "L1", "L2")
    with pytest.raises(NonComposableRelationError):
        resolve_orientation(["a^2 = 0"], quiver)


def test_ambiguous_relation_without_votes():
    quiver = chain_quiver()
    quiver.add_arrow("a", "L1", "L2")
    quiver.add_arrow("b", "L2", "L1")
    with pytest.raises(AmbiguousRelationError):
        resolve_orientation(["ab = 0"], quiver)


def test_orientation_is_decided_by_composable_relations():
    quiver = chain_quiver()
    quiver.add_arrow("a", "L1", "L2")
    quiver.add_arrow("c", "L2", "ΠL1")
    relations = resolve_orientation(["ca = 0"], quiver)
    assert relations.orientation == Orientation.FUNCTIONAL
    assert relations.relations[0].lhs == ("a", "c")

    forward = resolve_orientation(["ac = 0"], quiver)
    assert forward.orientation == Orientation.LEFT_TO_RIGHT
    assert forward.relations[0].lhs == ("a", "c")


def test_sq_principal_quiver():
    quiver, relations = block_quiver(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ), 4)
    assert len(quiver.vertices) == 10
    assert len(quiver.arrows) == 16
    assert relations.orientation == Orientation.FUNCTIONAL
    assert all(r.orientation == Orientation.FUNCTIONAL for r in relations.relations)
    assert quiver.is_parity_equivariant()
    assert sorted(a.source for a in quiver.arrows_into("C")) == ["L1", "ΠL2"]


def test_q_principal_quiver_adds_parity_loops():
    quiver, relations = block_quiver(canonical_block(BlockClass.PRINCIPAL, Algebra.Q), 4)
    assert len(quiver.arrows) == 16 + 2 * 5
    assert "θ" in quiver.names
    assert relations.orientation == Orientation.FUNCTIONAL


def test_cutoff_below_minimum():
    with pytest.raises(CutoffTooSmallError):
        block_quiver(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ), 3)


def test_trusted_vertices_stop_two_short_of_cutoff():
    quiver, _ = block_quiver(canonical_block(BlockClass.STANDARD, Algebra.SQ), 6)
    assert quiver.is_trusted("L4")
    assert not quiver.is_trusted("L5")
    assert not quiver.is_trusted("ΠL6")


def test_typical_quivers():
    q_typical, relations = block_quiver(canonical_block(BlockClass.TYPICAL, Algebra.Q), 1)
    assert [(a.source, a.target) for a in q_typical.arrows] == [("L1", "ΠL1"), ("ΠL1", "L1")]
    assert relations.raw == ["ab = ba = 0"]

    loop, _ = block_quiver(canonical_block(BlockClass.SQ_TYPICAL_LOOP, Algebra.SQ), 1)
    assert loop.vertices == ["L1"]
    assert [(a.source, a.target) for a in loop.arrows] == [("L1", "L1")]

    semisimple, relations = block_quiver(canonical_block(BlockClass.STRONGLY_TYPICAL, Algebra.Q), 1)
    assert semisimple.arrows == []
    assert relations.relations == []
