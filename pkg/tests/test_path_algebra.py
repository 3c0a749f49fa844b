import pytest

from conftest import algebra_for, canonical_block
from qblocks.exceptions import UnstableDimensionError
from qblocks.models import Algebra, BlockClass, label_sort_key
from qblocks.services.fixtures import (
    Q_PRINCIPAL_LAYERS,
    Q_STANDARD_LAYERS,
    SQ_PRINCIPAL_LAYERS,
    SQ_STANDARD_LAYERS,
    verify_against_fixtures,
)
from qblocks.services.path_algebra import (
    collapsed_projectives,
    endomorphism_algebra_summary,
    hom_dims,
    parity_equivariant,
    radical_filtration,
)


def canonical(layers):
    return [sorted(layer, key=label_sort_key) for layer in layers]


@pytest.mark.parametrize("vertex", ["C", "L1", "L2"])
def test_sq_principal_layers(sq_principal, vertex):
    assert radical_filtration(sq_principal, vertex).layers == canonical(SQ_PRINCIPAL_LAYERS[vertex])


def test_sq_principal_top_projective_has_five_layers(sq_principal):
    filtration = radical_filtration(sq_principal, "C")
    assert filtration.sizes == [1, 2, 2, 2, 1]
    assert filtration.trusted


@pytest.mark.parametrize("vertex", ["C", "L1", "L2"])
def test_q_principal_layers(q_principal, vertex):
    assert radical_filtration(q_principal, vertex).layers == canonical(Q_PRINCIPAL_LAYERS[vertex])


@pytest.mark.parametrize("vertex", ["L1", "L2"])
def test_standard_layers(sq_standard, q_standard, vertex):
    assert radical_filtration(sq_standard, vertex).layers == canonical(SQ_STANDARD_LAYERS[vertex])
    assert radical_filtration(q_standard, vertex).layers == canonical(Q_STANDARD_LAYERS[vertex])


def test_tail_layers(sq_principal):
    assert radical_filtration(sq_principal, "L3").layers == [["L3"], ["L2", "L4"], ["L3"]]
    assert radical_filtration(sq_principal, "ΠL4").layers == [["ΠL4"], ["ΠL3", "ΠL5"], ["ΠL4"]]


def test_endomorphisms_of_sq_principal(sq_principal):
    summary = endomorphism_algebra_summary(sq_principal, "C")
    assert summary.dim_end == 2
    assert summary.dim_hom_to_shift == 2
    assert sq_principal.dim("C", "ΠC") == 2


def test_endomorphisms_of_q_standard(q_standard):
    summary = endomorphism_algebra_summary(q_standard, "L1")
    assert summary.dim_end == 4
    assert sorted(summary.basis) == sorted(["e", "h", "ba", "hba"])


def test_hom_dims_frame(sq_principal):
    frame = hom_dims(sq_principal)
    assert list(frame.index) == sq_principal.trusted_vertices
    assert frame.shape == (len(sq_principal.trusted_vertices),) * 2
    assert frame.loc["C", "C"] == 2
    assert frame.loc["L1", "C"] == sq_principal.dim("L1", "C")


def test_collapsed_projectives_match_table(sq_principal):
    projectives = collapsed_projectives(sq_principal)
    assert projectives["P(0)"].entries == {"C": 4, "L1": 2, "L2": 2}
    assert projectives["P(1)"].entries == {"C": 2, "L1": 2, "L2": 1}
    assert "P(5)" not in projectives


def test_parity_equivariance(sq_principal, q_principal):
    assert parity_equivariant(sq_principal)
    assert parity_equivariant(q_principal)


def test_cap_too_small_is_reported():
    with pytest.raises(UnstableDimensionError):
        algebra_for(BlockClass.PRINCIPAL, Algebra.SQ, cutoff=4, cap=2)


@pytest.mark.parametrize(
    "block_cls,algebra",
    [
        (BlockClass.PRINCIPAL, Algebra.SQ),
        (BlockClass.STANDARD, Algebra.SQ),
        (BlockClass.STANDARD, Algebra.Q),
        (BlockClass.HALF_STANDARD, Algebra.SQ),
        (BlockClass.HALF_STANDARD, Algebra.Q),
    ],
)
def test_fixture_report_passes(block_cls, algebra):
    report = verify_against_fixtures(canonical_block(block_cls, algebra), cutoff=6)
    assert report.passed, report.mismatches
    assert "L1" in report.checked


def test_fixture_report_reuses_algebra(q_principal):
    report = verify_against_fixtures(canonical_block(BlockClass.PRINCIPAL, Algebra.Q), algebra=q_principal)
    assert report.passed, report.mismatches
    assert report.checked[:3] == ["C", "L1", "L2"]
