import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from qblocks.exceptions import NegativeCoefficientError, NonIntegralCoefficientError, UnsupportedBlockError
from qblocks.models import (
    Algebra,
    BlockDescriptor,
    BMatrix,
    GrothendieckMode,
    GrothendieckVector,
    ProjectiveTable,
    RadicalFiltration,
    SimpleLabel,
    SimpleType,
    Weight,
    strip_parity,
)
from qblocks.services.blocks import HALF, PRINCIPAL, SINGLETON, STANDARD, BlockFamily
from qblocks.services.characters import (
    FormalCharacter,
    character_stats,
    complete_euler_character,
    euler_character,
    parabolic_character,
)
from qblocks.services.weights import gamma, t_exponent

logger = logging.getLogger(__name__)

# Leading rows of E(μ) = Σ b_{μ,λ} L(λ) per block family, by index.
# Every row past the listed ones is E(k) = L(k) + L(k−1).
LEADING_ROWS: Dict[Tuple[str, Optional[Algebra]], Dict[int, Dict[int, int]]] = {
    (PRINCIPAL, None): {1: {1: 1}, 2: {2: 1, 1: 1, 0: 2}},
    (STANDARD, Algebra.SQ): {2: {2: 1, 1: 1}},
    (STANDARD, Algebra.Q): {2: {2: 1, 1: 2}},
    (HALF, None): {1: {1: 1}},
    (SINGLETON, None): {1: {1: 1}},
}


def _leading_rows(family: BlockFamily) -> Dict[int, Dict[int, int]]:
    for key in ((family.kind, family.algebra), (family.kind, None)):
        if key in LEADING_ROWS:
            return LEADING_ROWS[key]
    raise UnsupportedBlockError(f"No Euler characteristic rows are encoded for {family.describe()}")


class GrothendieckService:
    """
    Decomposition data of one block: E-rows, reciprocity coefficients and
    composition multiplicities of projective covers.
    """

    def __init__(self, block: BlockDescriptor):
        self.block = block
        self.family = BlockFamily(block)
        self.rows = _leading_rows(self.family)

    @classmethod
    def of(cls, weight: Weight, algebra: Algebra) -> "GrothendieckService":
        return cls(BlockFamily.of(weight, algebra).block)

    def b_row(self, index: int) -> Dict[int, int]:
        if not self.family.is_regular(index):
            raise UnsupportedBlockError(f"Index {index} is not regular; E vanishes there")
        if index in self.rows:
            return dict(self.rows[index])
        if self.family.kind == SINGLETON:
            raise UnsupportedBlockError("A typical block has a single Euler characteristic")
        return {index: 1, index - 1: 1}

    def b(self, mu: int, lam: int) -> int:
        return self.b_row(mu).get(lam, 0)

    def _vector(self, counts: Dict[int, int]) -> GrothendieckVector:
        return GrothendieckVector.from_counts(
            ((self.family.name(k), v) for k, v in counts.items()), GrothendieckMode.COLLAPSED
        )

    def b_matrix(self, bound: int) -> BMatrix:
        rows = {f"E({k})": self._vector(self.b_row(k)) for k in self.family.regular_indices(bound)}
        return BMatrix(block=self.block, bound=bound, rows=rows)

    def a_coefficient(self, lam: int, mu: int) -> int:
        """a_{λ,μ} = 2^{t(μ)−t(λ)}·γ(μ)·b_{μ,λ}."""
        algebra = self.family.algebra
        w_lam, w_mu = self.family.weight(lam), self.family.weight(mu)
        value = Fraction(2) ** (t_exponent(w_mu, algebra) - t_exponent(w_lam, algebra))
        value *= gamma(w_mu, algebra) * self.b(mu, lam)
        if value.denominator != 1:
            raise NonIntegralCoefficientError(f"a({lam},{mu}) = {value} in the {self.block}")
        return int(value)

    def a_coefficients(self, bound: int) -> Dict[int, Dict[int, int]]:
        """Non-zero a_{λ,μ} for λ up to the bound, μ running one step past it."""
        mus = self.family.regular_indices(bound + 1)
        table = {}
        for lam in self.family.indices(bound):
            table[lam] = {mu: a for mu in mus if (a := self.a_coefficient(lam, mu))}
        return table

    def projective_counts(self, lam: int, bound: int) -> Dict[int, int]:
        """[P(λ)] = Σ_ν a_{λ,ν}[E(ν)], expanded into simples."""
        counts: Dict[int, int] = {}
        for mu in self.family.regular_indices(max(bound, lam) + 1):
            a = self.a_coefficient(lam, mu)
            if not a:
                continue
            for k, b in self.b_row(mu).items():
                counts[k] = counts.get(k, 0) + a * b
        return counts

    def projective_table(self, bound: int) -> ProjectiveTable:
        a_table = self.a_coefficients(bound)
        a_named = {
            f"P({lam})": {f"E({mu})": a for mu, a in row.items()} for lam, row in a_table.items()
        }
        projectives = {
            f"P({lam})": self._vector(self.projective_counts(lam, bound)) for lam in self.family.indices(bound)
        }
        logger.info(f"Projective table of the {self.block} up to index {bound}")
        return ProjectiveTable(
            block=self.block, bound=bound, a_coefficients=a_named, projectives=projectives
        )

    def _seed_character(self, index: int) -> FormalCharacter:
        """Characters of the non-regular simples of the principal and standard families."""
        weight = self.family.weight(index)
        if self.family.kind == PRINCIPAL and index == 0:
            return FormalCharacter.monomial(weight)
        if self.family.kind == STANDARD and index == 1:
            return parabolic_character(weight, self.family.algebra)
        raise UnsupportedBlockError(f"No character is known for the simple of index {index} in the {self.block}")

    def simple_characters(self, bound: int, depth: Optional[int] = None) -> Dict[str, FormalCharacter]:
        """
        Parity-collapsed simple characters by triangular inversion of the E-rows.

        Args:
            bound: Largest simple index
            depth: Fixed depth for every E; None picks the complete depth per row

        Returns:
            Characters keyed by simple name, in index order
        """
        algebra = self.family.algebra
        found: Dict[int, FormalCharacter] = {}
        for k in self.family.indices(bound):
            if not self.family.is_regular(k):
                found[k] = self._seed_character(k)
                continue
            weight = self.family.weight(k)
            if depth is None:
                euler = complete_euler_character(weight, algebra)
            else:
                euler = euler_character(weight, algebra, depth)
            row = self.b_row(k)
            leading = row.pop(k)
            character = euler.collapse()
            for j, b in row.items():
                character = character - found[j].times(b)
            if leading != 1:
                character = character.divided(leading)
            if not character.has_nonnegative_coefficients():
                state = "exact" if character.is_exact else f"window floor {character.floor}"
                raise NegativeCoefficientError(
                    f"L{k} of the {self.block} has a negative coefficient ({state}); "
                    "the E-row or the depth is wrong"
                )
            found[k] = character
            logger.debug(f"L{k}: {len(character.terms)} terms, floor={character.floor}")
        return {self.family.name(k): c for k, c in found.items()}

    def simple_superdimensions(self, bound: int) -> Dict[str, int]:
        """
        Superdimensions of the even simples, from exact E characters.

        An even multiplicity of a type M constituent in an E-row splits into
        L + ΠL pairs and contributes nothing.
        """
        algebra = self.family.algebra
        result: Dict[int, int] = {}
        for k in self.family.indices(bound):
            if not self.family.is_regular(k):
                if self.family.kind == PRINCIPAL and k == 0:
                    result[k] = 1
                elif self.family.simple_type(k) == SimpleType.Q:
                    result[k] = 0
                else:
                    raise UnsupportedBlockError(f"Superdimension of simple {k} is not determined")
                continue
            sdim = character_stats(complete_euler_character(self.family.weight(k), algebra)).super_dim
            row = self.b_row(k)
            row.pop(k)
            for j, b in row.items():
                if b % 2 == 0 or result[j] == 0:
                    continue
                raise UnsupportedBlockError(f"Parity of L{j} inside E({k}) is not determined")
            result[k] = sdim
        return {self.family.name(k): v for k, v in result.items()}

    def projective_superdimension(self, filtration: RadicalFiltration, sdims: Dict[str, int]) -> int:
        """Σ over layers of ±sdim of each constituent, negated for parity-shifted labels."""
        total = 0
        for layer in filtration.layers:
            for name in layer:
                sign = -1 if name.startswith("Π") else 1
                total += sign * sdims[strip_parity(name)]
        return total


def grothendieck_of_layers(layers: Iterable[List[str]]) -> GrothendieckVector:
    """Parity-tracked class of a module given by its radical layers; collapse() forgets parity."""
    counts = ((name, 1) for layer in layers for name in layer)
    return GrothendieckVector.from_counts(counts, GrothendieckMode.TRACKED)


def grothendieck_of_projective_from_layers(filtration: RadicalFiltration) -> GrothendieckVector:
    return grothendieck_of_layers(filtration.layers)


def block_simples(block: BlockDescriptor, bound: int) -> List[SimpleLabel]:
    return BlockFamily(block).labels(bound)


def simple_superdimension_vanishes(weight: Weight, algebra: Algebra) -> bool:
    """True iff the principal-block simple L(weight) has superdimension zero."""
    family = BlockFamily.of(weight, algebra)
    if family.kind != PRINCIPAL:
        raise UnsupportedBlockError(f"{weight} does not lie in the principal block")
    index = family.index_of(weight)
    sdims = GrothendieckService(family.block).simple_superdimensions(index)
    return sdims[family.name(index)] == 0
