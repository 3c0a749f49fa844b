import logging
from collections import Counter
from fractions import Fraction

from sympy.utilities.iterables import partitions

from qblocks.exceptions import BlockShapeError, NonDominantWeightError, UnsupportedBlockError
from qblocks.models import (
    Algebra,
    BlockClass,
    BlockDescriptor,
    CentralCharacterWeight,
    CliffordData,
    EpsCoeff,
    InductionRestriction,
    SelfExtension,
    SimpleType,
    Weight,
)

logger = logging.getLogger(__name__)

# Block classes whose category is a highest weight category, per algebra.
HIGHEST_WEIGHT_CLASSES = {
    Algebra.SQ: {
        BlockClass.STRONGLY_TYPICAL,
        BlockClass.TYPICAL,
        BlockClass.HALF_STANDARD,
        BlockClass.STANDARD,
    },
    Algebra.Q: {BlockClass.STRONGLY_TYPICAL, BlockClass.HALF_STANDARD},
}


def is_dominant(weight: Weight) -> bool:
    """True iff consecutive differences are non-negative integers and only 0 repeats."""
    d = weight.doubled
    for left, right in zip(d, d[1:]):
        gap = left - right
        if gap < 0 or gap % 2:
            return False
        if gap == 0 and left != 0:
            return False
    return True


def is_regular_dominant(weight: Weight) -> bool:
    """True iff the coordinates strictly decrease by integers."""
    d = weight.doubled
    return all(left > right and (left - right) % 2 == 0 for left, right in zip(d, d[1:]))


def central_weight(weight: Weight) -> CentralCharacterWeight:
    """Canonical form of δ_{λ1} + ... + δ_{λn} with δ_{-a} = -δ_a and δ_0 = 0."""
    counts: Counter = Counter()
    for d in weight.doubled:
        if d:
            counts[abs(d)] += 1 if d > 0 else -1
    return CentralCharacterWeight(deltas=tuple((a, m) for a, m in sorted(counts.items()) if m))


def same_block(first: Weight, second: Weight) -> bool:
    return central_weight(first) == central_weight(second)


def zero_count(weight: Weight) -> int:
    return sum(1 for d in weight.doubled if d == 0)


def reciprocal_sum(weight: Weight) -> Fraction:
    """Σ 1/λᵢ over the coordinates; every coordinate must be non-zero."""
    return sum((Fraction(2, d) for d in weight.doubled), Fraction(0))


def reciprocal_sum_vanishes(weight: Weight) -> bool:
    """True iff every λᵢ is non-zero and Σ 1/λᵢ = 0."""
    return zero_count(weight) == 0 and reciprocal_sum(weight) == 0


def has_opposite_pair(weight: Weight) -> bool:
    d = weight.doubled
    return any(d[i] + d[j] == 0 for i in range(len(d)) for j in range(i + 1, len(d)))


def block_class(weight: Weight, algebra: Algebra) -> BlockDescriptor:
    """
    Classify the block of a dominant rank 3 weight.

    Args:
        weight: A dominant weight of rank 3
        algebra: q or sq

    Returns:
        BlockDescriptor whose base weight is the given weight
    """
    if not is_dominant(weight):
        raise NonDominantWeightError(f"{weight} is not dominant")
    if weight.n != 3:
        raise UnsupportedBlockError(f"Block classification is only available in rank 3, got {weight}")

    wt = central_weight(weight)
    if weight.is_integral:
        by_size = {
            3: BlockClass.STRONGLY_TYPICAL,
            2: BlockClass.TYPICAL,
            1: BlockClass.STANDARD,
            0: BlockClass.PRINCIPAL,
        }
        kind = by_size[wt.size]
    elif has_opposite_pair(weight):
        kind = BlockClass.HALF_STANDARD
    else:
        kind = BlockClass.STRONGLY_TYPICAL

    if algebra == Algebra.SQ and kind == BlockClass.STRONGLY_TYPICAL and reciprocal_sum_vanishes(weight):
        kind = BlockClass.SQ_TYPICAL_LOOP

    logger.debug(f"{algebra.value} {weight}: wt={wt}, class={kind.value}")
    return BlockDescriptor(algebra=algebra, block_class=kind, base_weight=weight, central_weight=wt)


def is_semisimple_block(block: BlockDescriptor) -> bool:
    if block.block_class == BlockClass.STRONGLY_TYPICAL:
        return True
    return block.algebra == Algebra.SQ and block.block_class == BlockClass.TYPICAL


def is_highest_weight_block(block: BlockDescriptor) -> bool:
    return block.block_class in HIGHEST_WEIGHT_CLASSES[block.algebra]


def simple_dimension(dim_e: int) -> EpsCoeff:
    """dim v(λ) = 2^⌊(m−1)/2⌋(1+ε) for m > 0; the even line when m = 0."""
    if dim_e == 0:
        return EpsCoeff(even=1, odd=0)
    half = 2 ** ((dim_e - 1) // 2)
    return EpsCoeff(even=half, odd=half)


def clifford_data(weight: Weight, algebra: Algebra) -> CliffordData:
    """Quotient/kernel dimensions of the odd Cartan form, the Clifford module dimension and its type."""
    n = weight.n
    zeros = zero_count(weight)
    if algebra == Algebra.Q:
        dim_e = n - zeros
        dim_kernel = zeros
    elif zeros:
        dim_e = n - zeros
        dim_kernel = zeros - 1
    elif reciprocal_sum(weight) != 0:
        dim_e, dim_kernel = n - 1, 0
    else:
        dim_e, dim_kernel = n - 2, 1
    return CliffordData(
        dim_e=dim_e,
        dim_kernel=dim_kernel,
        simple_dim=simple_dimension(dim_e),
        type=SimpleType.Q if dim_e % 2 else SimpleType.M,
    )


def simple_type(weight: Weight, algebra: Algebra) -> SimpleType:
    return clifford_data(weight, algebra).type


def gamma(weight: Weight, algebra: Algebra) -> int:
    """Ratio dim v̂(μ)/dim v(μ): 2 exactly when the Clifford kernel is non-zero."""
    if not is_dominant(weight):
        raise NonDominantWeightError(f"{weight} is not dominant")
    if not is_regular_dominant(weight):
        raise UnsupportedBlockError(f"γ is only defined on regular weights, got {weight}")
    return 2 if clifford_data(weight, algebra).dim_kernel > 0 else 1


def t_exponent(weight: Weight, algebra: Algebra) -> int:
    return 1 if simple_type(weight, algebra) == SimpleType.M else 0


def self_ext(weight: Weight, algebra: Algebra) -> SelfExtension:
    """dim Ext¹(L, L) and dim Ext¹(L, ΠL); the two slots merge when L ≅ ΠL."""
    if not is_dominant(weight):
        raise NonDominantWeightError(f"{weight} is not dominant")
    if algebra == Algebra.Q:
        value = 1 if zero_count(weight) > 0 else 0
    else:
        value = 1 if reciprocal_sum_vanishes(weight) else 0
    if simple_type(weight, algebra) == SimpleType.Q:
        return SelfExtension(same_parity=value, opposite_parity=value, merged=True)
    return SelfExtension(same_parity=0, opposite_parity=value, merged=False)


def restrict_induce_class(weight: Weight) -> InductionRestriction:
    """Res from q to sq of L(λ) and Ind from sq to q of L_sq(λ)."""
    if not is_dominant(weight):
        raise NonDominantWeightError(f"{weight} is not dominant")
    if zero_count(weight):
        return InductionRestriction(
            case="a",
            restriction={"L_sq": 1},
            restriction_nonsplit=False,
            induction={"L": 1, "ΠL": 1},
            induction_nonsplit=True,
        )
    nonsplit = reciprocal_sum(weight) == 0
    return InductionRestriction(
        case="c" if nonsplit else "b",
        restriction={"L_sq": 1, "ΠL_sq": 1},
        restriction_nonsplit=nonsplit,
        induction={"L": 1},
        induction_nonsplit=False,
    )


def _standard_shape(weight: Weight) -> int:
    """Return k when λ = (λ1..λk, 1, 0..0, −λk..−λ1) with λ1 > ... > λk > 1."""
    d = weight.doubled
    n = len(d)
    if not weight.is_integral or not is_dominant(weight):
        raise BlockShapeError(f"{weight} is not a dominant integral weight")
    k = sum(1 for x in d if x > 2)
    middle = d[k + 1 : n - k]
    if (
        n < 2 * k + 1
        or d[k] != 2
        or any(x != 0 for x in middle)
        or any(d[i] != -d[n - 1 - i] for i in range(k))
    ):
        raise BlockShapeError(f"{weight} is not of the form (λ1..λk, 1, 0..0, −λk..−λ1)")
    return k


def standard_reduction(weight: Weight) -> Weight:
    """Rank n−1 weight (λ1−1, .., λk−1, 0, .., 0, 1−λk, .., 1−λ1) of a standard-block weight."""
    k = _standard_shape(weight)
    d = weight.doubled
    n = len(d)
    head = tuple(x - 2 for x in d[:k])
    zeros = (0,) * (n - 1 - 2 * k)
    return Weight(doubled=head + zeros + tuple(-x for x in reversed(head)))


def translated_weight(weight: Weight, t: int) -> Weight:
    """The weight (t, λ̃) that L(λ) is sent to in the t-admissible block."""
    k = _standard_shape(weight)
    if k and 2 * t <= weight.doubled[0]:
        raise BlockShapeError(f"t = {t} must exceed λ1 of {weight}")
    if t < 1:
        raise BlockShapeError(f"t = {t} must be positive")
    return Weight(doubled=(2 * t,) + standard_reduction(weight).doubled)


def ext_trivial_dim(n: int, degree: int, odd_target: bool = False) -> int:
    """
    Dimension of Ext^i(C, C) (or Ext^i(C, ΠC) when odd_target) for q(n).

    The invariant space S^i(gl_n)^{gl_n} is counted as partitions of i into
    parts of size at most n.
    """
    if n < 1 or degree < 0:
        raise ValueError(f"Need n >= 1 and degree >= 0, got n={n}, degree={degree}")
    if (degree % 2 == 1) != odd_target:
        return 0
    if degree == 0:
        return 1
    return sum(1 for _ in partitions(degree, k=n))
