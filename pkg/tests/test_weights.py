from collections import Counter
from itertools import combinations_with_replacement, permutations

import pytest

from conftest import canonical_block, w
from qblocks.exceptions import BlockShapeError, NonDominantWeightError, UnsupportedBlockError, WeightParseError
from qblocks.models import Algebra, BlockClass, EpsCoeff, SimpleType, Weight
from qblocks.services.characters import permutation_sign
from qblocks.services.weights import (
    block_class,
    central_weight,
    clifford_data,
    ext_trivial_dim,
    gamma,
    is_dominant,
    is_highest_weight_block,
    is_regular_dominant,
    restrict_induce_class,
    same_block,
    self_ext,
    standard_reduction,
    translated_weight,
)


def test_parse_half_integers():
    assert w("3/2,1/2,-1/2").doubled == (3, 1, -1)
    assert w("(2, 0, -2)").doubled == (4, 0, -4)
    assert str(w("3/2,1/2,-1/2")) == "(3/2,1/2,-1/2)"


@pytest.mark.parametrize("text", ["a,b,c", "1/3,0,0", "1,,2", ""])
def test_parse_rejects_bad_input(text):
    with pytest.raises(WeightParseError):
        Weight.parse(text)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2,0,-2", True),
        ("0,0,0", True),
        ("1,0,0", True),
        ("3/2,1/2,-1/2", True),
        ("1,1,1", False),
        ("1,2,3", False),
        ("1,1/2,0", False),
    ],
)
def test_is_dominant(text, expected):
    assert is_dominant(w(text)) is expected


def test_regular_dominant_needs_distinct_coordinates():
    assert is_regular_dominant(w("3,2,1"))
    assert not is_regular_dominant(w("1,0,0"))


def test_central_weight_cancels_opposite_pairs():
    assert central_weight(w("2,0,-2")).deltas == ()
    assert central_weight(w("1,0,0")).deltas == ((2, 1),)
    assert same_block(w("1,0,0"), w("2,1,-2"))
    assert not same_block(w("1,0,0"), w("0,0,0"))


@pytest.mark.parametrize(
    "text,algebra,expected",
    [
        ("2,0,-2", Algebra.Q, BlockClass.PRINCIPAL),
        ("0,0,0", Algebra.SQ, BlockClass.PRINCIPAL),
        ("1,0,0", Algebra.Q, BlockClass.STANDARD),
        ("3/2,1/2,-1/2", Algebra.Q, BlockClass.HALF_STANDARD),
        ("2,0,-1", Algebra.Q, BlockClass.TYPICAL),
        ("3,2,1", Algebra.Q, BlockClass.STRONGLY_TYPICAL),
        ("3,2,1", Algebra.SQ, BlockClass.STRONGLY_TYPICAL),
        ("6,3,-2", Algebra.SQ, BlockClass.SQ_TYPICAL_LOOP),
        ("6,3,-2", Algebra.Q, BlockClass.STRONGLY_TYPICAL),
    ],
)
def test_block_class(text, algebra, expected):
    assert block_class(w(text), algebra).block_class == expected


def test_block_class_rejects_non_dominant():
    with pytest.raises(NonDominantWeightError):
        block_class(w("1,1,1"), Algebra.Q)


def test_clifford_data():
    principal = clifford_data(w("2,0,-2"), Algebra.Q)
    assert (principal.dim_e, principal.dim_kernel, principal.type) == (2, 1, SimpleType.M)

    typical = clifford_data(w("3,2,1"), Algebra.Q)
    assert typical.type == SimpleType.Q
    assert typical.simple_dim == EpsCoeff(even=2, odd=2)

    assert clifford_data(w("0,0,0"), Algebra.Q).simple_dim == EpsCoeff(even=1, odd=0)

    loop = clifford_data(w("6,3,-2"), Algebra.SQ)
    assert (loop.dim_e, loop.dim_kernel, loop.type) == (1, 1, SimpleType.Q)

    generic = clifford_data(w("3,2,1"), Algebra.SQ)
    assert (generic.dim_e, generic.dim_kernel, generic.type) == (2, 0, SimpleType.M)


@pytest.mark.parametrize("text", ["2,1,-2", "3,1,-3", "4,1,-4"])
def test_sq_standard_simples_differ_from_their_shift(text):
    data = clifford_data(w(text), Algebra.SQ)
    assert (data.dim_e, data.type) == (2, SimpleType.M)


def test_gamma_follows_clifford_kernel():
    assert gamma(w("2,0,-2"), Algebra.Q) == 2
    assert gamma(w("2,0,-2"), Algebra.SQ) == 1


def test_self_ext():
    principal = self_ext(w("2,0,-2"), Algebra.Q)
    assert (principal.same_parity, principal.opposite_parity, principal.merged) == (0, 1, False)

    typical = self_ext(w("3,2,1"), Algebra.Q)
    assert (typical.same_parity, typical.opposite_parity) == (0, 0)

    loop = self_ext(w("6,3,-2"), Algebra.SQ)
    assert loop.opposite_parity == 1
    assert loop.merged


def test_self_ext_rejects_non_dominant():
    with pytest.raises(NonDominantWeightError):
        self_ext(w("1,2,3"), Algebra.SQ)


@pytest.mark.parametrize(
    "text,case,res_nonsplit,ind_nonsplit",
    [
        ("1,0,0", "a", False, True),
        ("3,2,1", "b", False, False),
        ("6,3,-2", "c", True, False),
    ],
)
def test_restrict_induce_class(text, case, res_nonsplit, ind_nonsplit):
    data = restrict_induce_class(w(text))
    assert data.case == case
    assert data.restriction_nonsplit is res_nonsplit
    assert data.induction_nonsplit is ind_nonsplit


def test_highest_weight_blocks():
    assert is_highest_weight_block(block_class(w("1,0,0"), Algebra.SQ))
    assert not is_highest_weight_block(block_class(w("1,0,0"), Algebra.Q))
    assert not is_highest_weight_block(block_class(w("0,0,0"), Algebra.SQ))


@pytest.mark.parametrize(
    "text,expected",
    [("1,0,0", (0, 0)), ("2,1,-2", (2, -2)), ("3,1,-3", (4, -4))],
)
def test_standard_reduction(text, expected):
    assert standard_reduction(w(text)).doubled == expected


def test_standard_reduction_rejects_other_shapes():
    with pytest.raises(BlockShapeError):
        standard_reduction(w("2,0,-2"))


def test_translated_weight():
    assert translated_weight(w("2,1,-2"), 3).doubled == (6, 2, -2)
    with pytest.raises(BlockShapeError):
        translated_weight(w("2,1,-2"), 2)


@pytest.mark.parametrize(
    "n,degree,odd,expected",
    [(3, 0, False, 1), (3, 1, False, 0), (3, 1, True, 1), (3, 2, False, 2), (3, 4, False, 4), (1, 4, False, 1)],
)
def test_ext_trivial_dim(n, degree, odd, expected):
    assert ext_trivial_dim(n, degree, odd_target=odd) == expected


def invariant_count(n, degree):
    """Multiplicity of the trivial gl_n-module in S^degree(gl_n), counted from the adjoint weights."""
    basis = [tuple((a == k) - (b == k) for k in range(n)) for a in range(n) for b in range(n)]
    weights = Counter(
        tuple(map(sum, zip(*combo))) if combo else (0,) * n
        for combo in combinations_with_replacement(basis, degree)
    )
    rho = tuple(range(n - 1, -1, -1))
    return sum(
        permutation_sign(perm) * weights[tuple(rho[i] - rho[perm[i]] for i in range(n))]
        for perm in permutations(range(n))
    )


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("degree", range(7))
def test_ext_trivial_dim_counts_invariants(n, degree):
    odd = degree % 2 == 1
    assert ext_trivial_dim(n, degree, odd_target=odd) == invariant_count(n, degree)
    assert ext_trivial_dim(n, degree, odd_target=not odd) == 0


@pytest.mark.parametrize(
    "text,q_row,sq_row,case",
    [
        ("0,0,0", (0, 1), (0, 0), "a"),
        ("2,0,0", (1, 1), (1, 0), "a"),
        ("1,0,-1", (2, 1), (2, 0), "a"),
        ("4,2,-4", (3, 0), (2, 0), "b"),
        ("5/2,3/2,1/2", (3, 0), (2, 0), "b"),
        ("6,3,-2", (3, 0), (1, 1), "c"),
        ("2,-3,-6", (3, 0), (1, 1), "c"),
    ],
)
def test_clifford_and_self_ext_table(text, q_row, sq_row, case):
    weight = w(text)
    for algebra, (dim_e, opposite) in ((Algebra.Q, q_row), (Algebra.SQ, sq_row)):
        assert clifford_data(weight, algebra).dim_e == dim_e
        assert self_ext(weight, algebra).opposite_parity == opposite
    assert restrict_induce_class(weight).case == case


@pytest.mark.parametrize(
    "block_cls,algebra,expected",
    [
        (BlockClass.STRONGLY_TYPICAL, Algebra.Q, True),
        (BlockClass.TYPICAL, Algebra.Q, False),
        (BlockClass.HALF_STANDARD, Algebra.Q, True),
        (BlockClass.STANDARD, Algebra.Q, False),
        (BlockClass.PRINCIPAL, Algebra.Q, False),
        (BlockClass.TYPICAL, Algebra.SQ, True),
        (BlockClass.SQ_TYPICAL_LOOP, Algebra.SQ, False),
        (BlockClass.HALF_STANDARD, Algebra.SQ, True),
        (BlockClass.STANDARD, Algebra.SQ, True),
        (BlockClass.PRINCIPAL, Algebra.SQ, False),
    ],
)
def test_highest_weight_table(block_cls, algebra, expected):
    assert is_highest_weight_block(canonical_block(block_cls, algebra)) is expected


@pytest.mark.parametrize(
    "text,algebra,expected",
    [
        ("1,0,-1", Algebra.Q, 2),
        ("3,2,1", Algebra.Q, 1),
        ("6,3,-2", Algebra.SQ, 2),
        ("3,2,1", Algebra.SQ, 1),
    ],
)
def test_gamma_on_regular_weights(text, algebra, expected):
    assert gamma(w(text), algebra) == expected


def test_gamma_rejects_non_regular_weights():
    with pytest.raises(UnsupportedBlockError):
        gamma(w("1,0,0"), Algebra.Q)
    with pytest.raises(UnsupportedBlockError):
        gamma(w("0,0,0"), Algebra.SQ)
    with pytest.raises(NonDominantWeightError):
        gamma(w("1,2,3"), Algebra.Q)
