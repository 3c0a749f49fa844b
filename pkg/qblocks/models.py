from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator
from pydantic.alias_generators import to_camel

from qblocks.exceptions import WeightParseError


class QModel(BaseModel):
    """Immutable record serialised with camelCase keys."""

    model_config = ConfigDict(frozen=True, alias_generator=to_camel, populate_by_name=True)


class Algebra(str, Enum):
    Q = "q"
    SQ = "sq"


class BlockClass(str, Enum):
    STRONGLY_TYPICAL = "StronglyTypical"
    TYPICAL = "Typical"
    SQ_TYPICAL_LOOP = "SqTypicalLoop"
    HALF_STANDARD = "HalfStandard"
    STANDARD = "Standard"
    PRINCIPAL = "Principal"


class SimpleType(str, Enum):
    M = "M"
    Q = "Q"


class GrothendieckMode(str, Enum):
    COLLAPSED = "collapsed"
    TRACKED = "tracked"


class GraphKind(str, Enum):
    DYNKIN = "DynkinADE"
    EUCLIDEAN = "EuclideanADE"
    NEITHER = "Neither"


class RepresentationType(str, Enum):
    TAME = "Tame"
    WILD = "Wild"
    UNDETERMINED = "Undetermined"


class Weight(QModel):
    """A weight of rank n, stored as the doubled coordinates 2λᵢ."""

    doubled: Tuple[int, ...]

    @field_validator("doubled")
    @classmethod
    def _non_empty(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("a weight needs at least one coordinate")
        return value

    @classmethod
    def of(cls, *values: Any) -> "Weight":
        """Build a weight from ints, Fractions or strings such as '3/2'."""
        doubled = []
        for value in values:
            try:
                twice = Fraction(value) * 2
            except (ValueError, ZeroDivisionError, TypeError) as e:
                raise WeightParseError(f"Cannot read coordinate {value!r}: {e}")
            if twice.denominator != 1:
                raise WeightParseError(f"Coordinate {value} is not a half-integer")
            doubled.append(int(twice))
        return cls(doubled=tuple(doubled))

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse a comma-separated weight such as '3/2,1/2,-1/2'."""
        parts = [part.strip() for part in text.strip().strip("()").split(",")]
        if not parts or any(not part for part in parts):
            raise WeightParseError(f"Malformed weight: {text!r}")
        return cls.of(*parts)

    @classmethod
    def zero(cls, n: int) -> "Weight":
        return cls(doubled=(0,) * n)

    @property
    def n(self) -> int:
        return len(self.doubled)

    @property
    def coords(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(d, 2) for d in self.doubled)

    @property
    def is_integral(self) -> bool:
        return all(d % 2 == 0 for d in self.doubled)

    @property
    def is_half_integral(self) -> bool:
        return all(d % 2 == 1 for d in self.doubled)

    def sorted_desc(self) -> "Weight":
        return Weight(doubled=tuple(sorted(self.doubled, reverse=True)))

    def permuted(self, perm: Sequence[int]) -> "Weight":
        """Return the weight whose i-th coordinate is coordinate perm[i] of this one."""
        return Weight(doubled=tuple(self.doubled[p] for p in perm))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class CentralCharacterWeight(QModel):
    """Signed multiset of δ's: (2a, multiplicity) pairs with a > 0, sorted by a."""

    deltas: Tuple[Tuple[int, int], ...] = ()

    @property
    def size(self) -> int:
        """Number of non-zero coordinates, counted with multiplicity."""
        return sum(abs(mult) for _, mult in self.deltas)

    def __str__(self) -> str:
        if not self.deltas:
            return "0"
        terms = []
        for doubled, mult in self.deltas:
            value = Fraction(doubled, 2)
            coeff = "" if abs(mult) == 1 else str(abs(mult))
            sign = "-" if mult < 0 else "+"
            terms.append(f"{sign}{coeff}δ{value}")
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text


class EpsCoeff(QModel):
    """Element even + odd·ε of Z[ε]/(ε²−1)."""

    even: int = 0
    odd: int = 0

    def __add__(self, other: "EpsCoeff") -> "EpsCoeff":
        return EpsCoeff(even=self.even + other.even, odd=self.odd + other.odd)

    def __mul__(self, other: "EpsCoeff") -> "EpsCoeff":
        return EpsCoeff(
            even=self.even * other.even + self.odd * other.odd,
            odd=self.even * other.odd + self.odd * other.even,
        )

    @property
    def total(self) -> int:
        return self.even + self.odd

    @property
    def superdimension(self) -> int:
        return self.even - self.odd

    def as_pair(self) -> Tuple[int, int]:
        return self.even, self.odd


class CliffordData(QModel):
    """Clifford quotient and kernel dimensions of the odd Cartan part."""

    dim_e: int
    dim_kernel: int
    simple_dim: EpsCoeff
    type: SimpleType


class CharacterStats(QModel):
    """Dimension data of a fully certified character."""

    total_dim: int
    super_dim: int
    is_sn_invariant: bool


class SelfExtension(QModel):
    """First self-extension dimensions of a simple module."""

    same_parity: int
    opposite_parity: int
    merged: bool


class InductionRestriction(QModel):
    """Restriction of L(λ) to sq and induction of L_sq(λ) back to q."""

    case: str
    restriction: Dict[str, int]
    restriction_nonsplit: bool
    induction: Dict[str, int]
    induction_nonsplit: bool


class BlockDescriptor(QModel):
    """A block, identified by its algebra and the central weight of its base weight."""

    algebra: Algebra
    block_class: BlockClass
    base_weight: Weight
    central_weight: CentralCharacterWeight

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockDescriptor):
            return NotImplemented
        return (self.algebra, self.central_weight) == (other.algebra, other.central_weight)

    def __hash__(self) -> int:
        return hash((self.algebra, self.central_weight))

    def __str__(self) -> str:
        return f"{self.algebra.value} {self.block_class.value} block of {self.base_weight}"


class SimpleLabel(QModel):
    """A simple module of a block: weight, family index, parity and type."""

    weight: Weight
    index: int
    parity: int = 0
    type: SimpleType
    principal: bool = False

    @property
    def base_name(self) -> str:
        if self.principal and self.index == 0:
            return "C"
        return f"L{self.index}"

    @property
    def name(self) -> str:
        return ("Π" if self.parity else "") + self.base_name

    def shifted(self) -> "SimpleLabel":
        """Parity shift; a type Q simple is its own shift."""
        if self.type == SimpleType.Q:
            return self
        return self.model_copy(update={"parity": 1 - self.parity})


def label_sort_key(name: str) -> Tuple[int, int]:
    """Order simple names as C, L1, L2, ... with the parity shift after its partner."""
    parity = 1 if name.startswith("Π") else 0
    base = name[1:] if parity else name
    index = 0 if base == "C" else int(base[1:])
    return index, parity


def strip_parity(name: str) -> str:
    return name[1:] if name.startswith("Π") else name


class GrothendieckVector(QModel):
    """Integer combination of simple classes, keyed by simple name."""

    entries: Dict[str, int] = {}
    mode: GrothendieckMode = GrothendieckMode.COLLAPSED

    @field_validator("entries")
    @classmethod
    def _canonical(cls, value: Dict[str, int]) -> Dict[str, int]:
        return {k: value[k] for k in sorted(value, key=label_sort_key) if value[k] != 0}

    @classmethod
    def from_counts(cls, counts: Iterable[Tuple[str, int]], mode: GrothendieckMode) -> "GrothendieckVector":
        entries: Dict[str, int] = {}
        for name, count in counts:
            entries[name] = entries.get(name, 0) + count
        return cls(entries=entries, mode=mode)

    def collapse(self) -> "GrothendieckVector":
        """Identify [X] with [ΠX]; idempotent."""
        return GrothendieckVector.from_counts(
            ((strip_parity(k), v) for k, v in self.entries.items()),
            GrothendieckMode.COLLAPSED,
        )

    def get(self, name: str) -> int:
        return self.entries.get(name, 0)

    @property
    def total(self) -> int:
        return sum(self.entries.values())


class BMatrix(QModel):
    """Euler characteristic rows E(μ) = Σ b_{μ,λ}[L(λ)] of a block, keyed E(index)."""

    block: BlockDescriptor
    bound: int
    rows: Dict[str, GrothendieckVector]


class ProjectiveTable(QModel):
    """Reciprocity coefficients and composition multiplicities of projective covers."""

    block: BlockDescriptor
    bound: int
    a_coefficients: Dict[str, Dict[str, int]]
    projectives: Dict[str, GrothendieckVector]


class RadicalFiltration(QModel):
    """Radical layers of an indecomposable projective, as sorted simple names."""

    vertex: str
    layers: List[List[str]]
    trusted: bool = True

    @property
    def sizes(self) -> List[int]:
        return [len(layer) for layer in self.layers]

    def is_palindromic(self) -> bool:
        return self.layers == self.layers[::-1]


class Orientation(str, Enum):
    FUNCTIONAL = "functional"
    LEFT_TO_RIGHT = "left_to_right"


class Arrow(QModel):
    """One arrow of a quiver; several arrows may share a relation name."""

    id: int
    name: str
    source: str
    target: str


class ResolvedRelation(QModel):
    """
    A relation with both sides as arrow names in travel order.

    ``rhs`` is None for a monomial relation ``lhs = 0``.
    """

    text: str
    orientation: Orientation
    lhs: Tuple[str, ...]
    rhs: Optional[Tuple[str, ...]] = None

    @property
    def is_monomial(self) -> bool:
        return self.rhs is None


class RelationSet(QModel):
    """Relations of a quiver after orientation resolution."""

    raw: List[str]
    relations: List[ResolvedRelation]
    orientation: Orientation


class EndomorphismSummary(QModel):
    """Endomorphism data of one indecomposable projective."""

    vertex: str
    dim_end: int
    basis: List[str]
    dim_hom_to_shift: int


class FixtureMismatch(QModel):
    vertex: str
    expected: List[List[str]]
    actual: List[List[str]]


class FixtureReport(QModel):
    """Comparison of recomputed filtrations and hom dimensions with stored diagrams."""

    block: str
    checked: List[str]
    mismatches: List[FixtureMismatch] = []
    hom_mismatches: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.hom_mismatches


class ComponentClass(QModel):
    """Dynkin/Euclidean type of one connected component of a graph."""

    kind: GraphKind
    label: str
    nodes: List[str]


class BiserialReport(QModel):
    """Outcome of the special biserial test."""

    special_biserial: bool
    witness: Optional[str] = None
    binomial_relations: List[str] = []


class Verdict(QModel):
    """Representation type of a block with its justification."""

    block: str
    verdict: RepresentationType
    witness: Optional[str] = None
    trace: List[str] = []


class CheckResult(QModel):
    """One acceptance check of the verification suite."""

    name: str
    passed: bool
    detail: str = ""


class ReportEnvelope(QModel):
    """Top-level JSON document printed by the CLI."""

    command: str
    version: str
    inputs: Dict[str, Any]
    results: Any
    warnings: List[str] = []
