import pytest

from conftest import canonical_block, w
from qblocks.exceptions import UnsupportedBlockError
from qblocks.models import Algebra, BlockClass, EpsCoeff, GrothendieckMode, SimpleType
from qblocks.services.blocks import BlockFamily
from qblocks.services.characters import character_stats
from qblocks.services.fixtures import reference_projectives
from qblocks.services.grothendieck import (
    GrothendieckService,
    block_simples,
    grothendieck_of_layers,
    simple_superdimension_vanishes,
)


def table(block_cls, algebra, bound=4):
    return GrothendieckService(canonical_block(block_cls, algebra)).projective_table(bound).projectives


def test_block_family_enumerates_weights():
    standard = BlockFamily.of(w("1,0,0"), Algebra.SQ)
    assert [str(standard.weight(k)) for k in (1, 2, 3)] == ["(1,0,0)", "(2,1,-2)", "(3,1,-3)"]
    assert standard.index_of(w("3,1,-3")) == 3

    principal = BlockFamily.of(w("0,0,0"), Algebra.Q)
    assert principal.name(0) == "C"
    assert principal.index_of(w("2,0,-2")) == 2


def test_block_simples_pairs_parity_shifts():
    names = [label.name for label in block_simples(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ), 2)]
    assert names == ["C", "ΠC", "L1", "ΠL1", "L2", "ΠL2"]

    half = block_simples(canonical_block(BlockClass.HALF_STANDARD, Algebra.Q), 2)
    assert [label.type for label in half] == [SimpleType.Q, SimpleType.Q]


def test_sq_principal_projectives():
    rows = table(BlockClass.PRINCIPAL, Algebra.SQ)
    assert rows["P(0)"].entries == {"C": 4, "L1": 2, "L2": 2}
    assert rows["P(1)"].entries == {"C": 2, "L1": 2, "L2": 1}
    assert rows["P(2)"].entries == {"C": 2, "L1": 1, "L2": 2, "L3": 1}
    assert rows["P(3)"].entries == {"L2": 1, "L3": 2, "L4": 1}


def test_q_principal_rows_double_sq_rows():
    q_rows = table(BlockClass.PRINCIPAL, Algebra.Q)
    sq_rows = table(BlockClass.PRINCIPAL, Algebra.SQ)
    for name, vector in sq_rows.items():
        assert q_rows[name].entries == {k: 2 * v for k, v in vector.entries.items()}


def test_standard_projectives():
    sq_rows = table(BlockClass.STANDARD, Algebra.SQ)
    assert sq_rows["P(1)"].entries == {"L1": 2, "L2": 2}
    assert sq_rows["P(2)"].entries == {"L1": 1, "L2": 2, "L3": 1}

    q_rows = table(BlockClass.STANDARD, Algebra.Q)
    assert q_rows["P(1)"].entries == {"L1": 4, "L2": 2}
    assert q_rows["P(2)"].entries == {"L1": 2, "L2": 2, "L3": 1}


@pytest.mark.parametrize(
    "block_cls,algebra",
    [
        (BlockClass.PRINCIPAL, Algebra.SQ),
        (BlockClass.PRINCIPAL, Algebra.Q),
        (BlockClass.STANDARD, Algebra.SQ),
        (BlockClass.STANDARD, Algebra.Q),
        (BlockClass.HALF_STANDARD, Algebra.SQ),
        (BlockClass.HALF_STANDARD, Algebra.Q),
    ],
)
def test_tables_match_reference_rows(block_cls, algebra):
    family = BlockFamily.canonical(block_cls, algebra)
    rows = table(block_cls, algebra, bound=8)
    for name, expected in reference_projectives(family, 8).items():
        assert rows[name].entries == expected, name


def test_a_coefficients_of_sq_principal():
    service = GrothendieckService(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ))
    assert service.a_coefficient(0, 2) == 2
    assert service.a_coefficients(1)[0] == {2: 2}


def test_b_matrix_rows():
    service = GrothendieckService(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ))
    rows = service.b_matrix(3).rows
    assert rows["E(2)"].entries == {"C": 2, "L1": 1, "L2": 1}
    assert rows["E(3)"].entries == {"L2": 1, "L3": 1}
    with pytest.raises(UnsupportedBlockError):
        service.b_row(0)


def test_inverted_trivial_character_is_one_dimensional():
    characters = GrothendieckService(canonical_block(BlockClass.PRINCIPAL, Algebra.SQ)).simple_characters(2)
    assert list(characters) == ["C", "L1", "L2"]
    assert character_stats(characters["C"]).total_dim == 1
    for character in characters.values():
        assert character.has_nonnegative_coefficients()
        assert character.is_sn_invariant()


def test_layers_give_tracked_and_collapsed_classes():
    layers = [["C"], ["L1", "ΠL2"], ["ΠC", "ΠC"], ["ΠL1", "L2"], ["C"]]
    tracked = grothendieck_of_layers(layers)
    assert tracked.mode == GrothendieckMode.TRACKED
    assert tracked.entries == {"C": 2, "ΠC": 2, "L1": 1, "ΠL1": 1, "L2": 1, "ΠL2": 1}
    assert tracked.collapse().entries == {"C": 4, "L1": 2, "L2": 2}


def test_principal_superdimensions():
    assert not simple_superdimension_vanishes(w("0,0,0"), Algebra.SQ)
    assert simple_superdimension_vanishes(w("1,0,-1"), Algebra.SQ)
    assert simple_superdimension_vanishes(w("2,0,-2"), Algebra.Q)
    with pytest.raises(UnsupportedBlockError):
        simple_superdimension_vanishes(w("1,0,0"), Algebra.SQ)


@pytest.mark.parametrize("algebra", list(Algebra))
def test_minimal_standard_simple_away_from_the_canonical_block(algebra):
    characters = GrothendieckService.of(w("2,0,0"), algebra).simple_characters(1)
    assert list(characters) == ["L1"]
    seed = characters["L1"]
    assert character_stats(seed).total_dim == 18
    assert seed.coefficient((4, 0, 0)) == EpsCoeff(even=2)
    assert seed.coefficient((2, 2, 0)) == EpsCoeff(even=4)
    assert seed.is_sn_invariant()
    assert seed.has_nonnegative_coefficients()


def test_minimal_standard_simple_of_a_negative_centre():
    seed = GrothendieckService.of(w("0,0,-3"), Algebra.Q).simple_characters(1)["L1"]
    assert character_stats(seed).total_dim == 38
    assert seed.coefficient((0, 0, -6)) == EpsCoeff(even=2)
