import logging
from itertools import permutations, product
from typing import Callable, Dict, List, Optional, Tuple

from qblocks.config import settings
from qblocks.exceptions import QBlocksError
from qblocks.models import (
    Algebra,
    BlockClass,
    CheckResult,
    RepresentationType,
    SimpleType,
    Weight,
)
from qblocks.services.blocks import HALF, PRINCIPAL, STANDARD, BlockFamily
from qblocks.services.characters import (
    character_stats,
    complete_euler_character,
    euler_character,
    permutation_sign,
)
from qblocks.services.fixtures import (
    REFERENCE_PROJECTIVES,
    LAYER_FIXTURES,
    layer_fixtures,
    reference_projectives,
    verify_against_fixtures,
)
from qblocks.services.grothendieck import GrothendieckService
from qblocks.services.path_algebra import (
    PathAlgebra,
    build_algebra,
    collapsed_projectives,
    parity_equivariant,
    radical_filtration,
)
from qblocks.services.quivers import block_quiver
from qblocks.services.representation_type import representation_type
from qblocks.services.weights import (
    block_class,
    clifford_data,
    is_dominant,
    is_highest_weight_block,
    restrict_induce_class,
    self_ext,
    standard_reduction,
)

logger = logging.getLogger(__name__)

# The ten rank 3 blocks, up to equivalence, with their expected representation type.
REFERENCE_BLOCKS: List[Tuple[Algebra, BlockClass, RepresentationType]] = [
    (Algebra.Q, BlockClass.STRONGLY_TYPICAL, RepresentationType.TAME),
    (Algebra.Q, BlockClass.TYPICAL, RepresentationType.TAME),
    (Algebra.Q, BlockClass.HALF_STANDARD, RepresentationType.TAME),
    (Algebra.Q, BlockClass.STANDARD, RepresentationType.TAME),
    (Algebra.Q, BlockClass.PRINCIPAL, RepresentationType.WILD),
    (Algebra.SQ, BlockClass.TYPICAL, RepresentationType.TAME),
    (Algebra.SQ, BlockClass.SQ_TYPICAL_LOOP, RepresentationType.TAME),
    (Algebra.SQ, BlockClass.HALF_STANDARD, RepresentationType.TAME),
    (Algebra.SQ, BlockClass.STANDARD, RepresentationType.TAME),
    (Algebra.SQ, BlockClass.PRINCIPAL, RepresentationType.TAME),
]

# Weight, (dim E, dim Ext¹(L,ΠL)) for q, the same for sq, and the restriction case.
RULE_TABLE: List[Tuple[str, Tuple[int, int], Tuple[int, int], str]] = [
    ("0,0,0", (0, 1), (0, 0), "a"),
    ("1,0,0", (1, 1), (1, 0), "a"),
    ("0,0,-1", (1, 1), (1, 0), "a"),
    ("1,0,-1", (2, 1), (2, 0), "a"),
    ("2,0,-2", (2, 1), (2, 0), "a"),
    ("2,1,-2", (3, 0), (2, 0), "b"),
    ("3,1,-3", (3, 0), (2, 0), "b"),
    ("3,2,1", (3, 0), (2, 0), "b"),
    ("3/2,1/2,-1/2", (3, 0), (2, 0), "b"),
    ("6,3,-2", (3, 0), (1, 1), "c"),
    ("12,6,-4", (3, 0), (1, 1), "c"),
    ("2,-3,-6", (3, 0), (1, 1), "c"),
]

HIGHEST_WEIGHT_TABLE: Dict[Algebra, Dict[BlockClass, bool]] = {
    Algebra.Q: {
        BlockClass.STRONGLY_TYPICAL: True,
        BlockClass.TYPICAL: False,
        BlockClass.HALF_STANDARD: True,
        BlockClass.STANDARD: False,
        BlockClass.PRINCIPAL: False,
    },
    Algebra.SQ: {
        BlockClass.TYPICAL: True,
        BlockClass.SQ_TYPICAL_LOOP: False,
        BlockClass.HALF_STANDARD: True,
        BlockClass.STANDARD: True,
        BlockClass.PRINCIPAL: False,
    },
}

KIND_CLASSES = {
    PRINCIPAL: BlockClass.PRINCIPAL,
    STANDARD: BlockClass.STANDARD,
    HALF: BlockClass.HALF_STANDARD,
}

TYPICAL_CLASSES = {BlockClass.STRONGLY_TYPICAL, BlockClass.TYPICAL, BlockClass.SQ_TYPICAL_LOOP}

# Largest doubled coordinate of the rule-table grid, and the size and depth of the Euler grid.
GRID_EXTENT = 8
EULER_GRID_SIZE = 50
EULER_GRID_DEPTH = 6
INVERSION_BOUND = 6
MAX_DETAILS = 5


def dominant_grid(extent: int = GRID_EXTENT) -> List[Weight]:
    """Every dominant rank 3 weight with doubled coordinates in [−extent, extent]."""
    values = range(extent, -extent - 1, -1)
    return [Weight(doubled=d) for d in product(values, repeat=3) if is_dominant(Weight(doubled=d))]


def euler_grid(size: int = EULER_GRID_SIZE) -> List[Weight]:
    """The first regular dominant weights of the rule grid, integral and half-integral alternating."""
    regular = [w for w in dominant_grid() if len(set(w.doubled)) == 3]
    integral = [w for w in regular if w.is_integral]
    half = [w for w in regular if w.is_half_integral]
    mixed = [w for pair in zip(integral, half) for w in pair]
    return mixed[:size]


def _summary(failures: List[str], cases: int) -> str:
    if not failures:
        return f"{cases} cases"
    shown = "; ".join(failures[:MAX_DETAILS])
    more = f" (+{len(failures) - MAX_DETAILS} more)" if len(failures) > MAX_DETAILS else ""
    return f"{len(failures)} of {cases} failed: {shown}{more}"


def _result(name: str, failures: List[str], cases: int) -> CheckResult:
    return CheckResult(name=name, passed=not failures, detail=_summary(failures, cases))


class VerificationSuite:
    """Runs every cross-check between the weight rules, characters, projective tables and quivers."""

    def __init__(self, bound: Optional[int] = None, depth: Optional[int] = None, cap: Optional[int] = None):
        self.bound = bound or settings.BOUND
        self.depth = depth or settings.DEPTH
        self.cap = cap or settings.CAP
        self.results: List[CheckResult] = []
        self._algebras: Dict[Tuple[Algebra, BlockClass], PathAlgebra] = {}

    def family(self, algebra: Algebra, block_cls: BlockClass) -> BlockFamily:
        return BlockFamily.canonical(block_cls, algebra)

    def algebra_of(self, algebra: Algebra, block_cls: BlockClass) -> PathAlgebra:
        """Path algebra of a reference block, built once with vertices up to bound + 2."""
        key = (algebra, block_cls)
        if key not in self._algebras:
            family = self.family(algebra, block_cls)
            cutoff = max(self.bound + 2, family.min_cutoff)
            quiver, relations = block_quiver(family.block, cutoff)
            self._algebras[key] = build_algebra(quiver, relations, self.cap)
        return self._algebras[key]

    def run_all(self) -> List[CheckResult]:
        """Run every check in order; an exception fails its check and the run continues."""
        checks: List[Tuple[str, Callable[[], CheckResult]]] = [
            ("projective tables", self.check_projective_tables),
            ("euler identities", self.check_euler_identities),
            ("triangular inversion", self.check_inversion),
            ("hom dimensions", self.check_hom_dimensions),
            ("radical filtrations", self.check_radical_filtrations),
            ("representation type", self.check_representation_types),
            ("rule tables", self.check_rule_tables),
            ("properties", self.check_properties),
        ]
        self.results = []
        for step, (name, check) in enumerate(checks, start=1):
            logger.info(f"=== Check {step}: {name} ===")
            try:
                result = check()
            except QBlocksError as e:
                logger.error(f"Check {name} raised: {e}")
                result = CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
            if result.passed:
                logger.info(f"Check {name} passed: {result.detail}")
            else:
                logger.error(f"Check {name} failed: {result.detail}")
            self.results.append(result)
        return self.results

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def check_projective_tables(self) -> CheckResult:
        failures, cases = [], 0
        for kind, algebra in sorted(REFERENCE_PROJECTIVES, key=lambda k: (k[0], k[1].value)):
            family = self.family(algebra, KIND_CLASSES[kind])
            expected = reference_projectives(family, self.bound)
            table = GrothendieckService(family.block).projective_table(self.bound).projectives
            for name, row in expected.items():
                cases += 1
                actual = table[name].entries if name in table else {}
                if actual != row:
                    failures.append(f"{algebra.value} {kind} {name}: {actual} != {row}")
        return _result("projective tables", failures, cases)

    def check_euler_identities(self) -> CheckResult:
        failures, cases = [], 0
        for algebra in Algebra:
            cases += 1
            if not euler_character(Weight.zero(3), algebra, self.depth).is_zero():
                failures.append(f"{algebra.value} E(0,0,0) is not zero at depth {self.depth}")

        for weight in euler_grid():
            for algebra in Algebra:
                base = euler_character(weight, algebra, EULER_GRID_DEPTH)
                for perm in permutations(range(3)):
                    cases += 1
                    moved = euler_character(weight.permuted(perm), algebra, EULER_GRID_DEPTH)
                    if moved != base.times(permutation_sign(perm)):
                        failures.append(f"{algebra.value} E(w{weight}) != sign(w)E({weight}) for w={perm}")

                if block_class(weight, algebra).block_class in TYPICAL_CLASSES:
                    cases += 1
                    character = complete_euler_character(weight, algebra)
                    if not character.has_nonnegative_coefficients():
                        failures.append(f"{algebra.value} E{weight} has a negative coefficient")
                    if not character.is_sn_invariant():
                        failures.append(f"{algebra.value} E{weight} is not S3-invariant")
        return _result("euler identities", failures, cases)

    def check_inversion(self) -> CheckResult:
        failures, cases = [], 0
        for algebra in Algebra:
            for block_cls in (BlockClass.PRINCIPAL, BlockClass.STANDARD):
                family = self.family(algebra, block_cls)
                characters = GrothendieckService(family.block).simple_characters(INVERSION_BOUND)
                for name, character in characters.items():
                    cases += 1
                    label = f"{algebra.value} {block_cls.value} {name}"
                    if not character.has_nonnegative_coefficients():
                        failures.append(f"{label} has a negative coefficient")
                    if not character.is_sn_invariant():
                        failures.append(f"{label} is not S3-invariant")
                if block_cls == BlockClass.PRINCIPAL:
                    cases += 1
                    total = character_stats(characters["C"]).total_dim
                    if total != 1:
                        failures.append(f"{algebra.value} trivial module has dimension {total}")
        return _result("triangular inversion", failures, cases)

    def check_hom_dimensions(self) -> CheckResult:
        failures, cases = [], 0
        for algebra, block_cls, _ in REFERENCE_BLOCKS:
            path_algebra = self.algebra_of(algebra, block_cls)
            family = self.family(algebra, block_cls)
            table = GrothendieckService(family.block).projective_table(self.bound).projectives
            for name, vector in collapsed_projectives(path_algebra).items():
                if name not in table:
                    continue
                cases += 1
                if vector.entries != table[name].entries:
                    failures.append(
                        f"{algebra.value} {block_cls.value} {name}: quiver {vector.entries} vs table {table[name].entries}"
                    )

        spots = [
            (Algebra.SQ, BlockClass.PRINCIPAL, "C", "C", 2),
            (Algebra.SQ, BlockClass.PRINCIPAL, "C", "ΠC", 2),
            (Algebra.Q, BlockClass.STANDARD, "L1", "L1", 4),
        ]
        for algebra, block_cls, source, target, expected in spots:
            cases += 1
            actual = self.algebra_of(algebra, block_cls).dim(source, target)
            if actual != expected:
                failures.append(f"{algebra.value} Hom(P({source}), P({target})) = {actual}, expected {expected}")
        return _result("hom dimensions", failures, cases)

    def check_radical_filtrations(self) -> CheckResult:
        failures, cases = [], 0
        for kind, algebra in sorted(LAYER_FIXTURES, key=lambda k: (k[0], k[1].value)):
            block_cls = KIND_CLASSES[kind]
            family = self.family(algebra, block_cls)
            report = verify_against_fixtures(
                family.block,
                tail_indices=range(2, self.bound + 1),
                algebra=self.algebra_of(algebra, block_cls),
            )
            cases += len(report.checked)
            for mismatch in report.mismatches:
                failures.append(f"{algebra.value} {kind} P({mismatch.vertex}): {mismatch.actual}")
        return _result("radical filtrations", failures, cases)

    def check_representation_types(self) -> CheckResult:
        failures = []
        for algebra, block_cls, expected in REFERENCE_BLOCKS:
            verdict = representation_type(self.family(algebra, block_cls).block)
            if verdict.verdict != expected:
                failures.append(f"{algebra.value} {block_cls.value}: {verdict.verdict.value}, expected {expected.value}")
            elif expected == RepresentationType.WILD and not verdict.witness:
                failures.append(f"{algebra.value} {block_cls.value}: wild without a witness")
        return _result("representation type", failures, len(REFERENCE_BLOCKS))

    def check_rule_tables(self) -> CheckResult:
        failures, cases = [], 0
        for text, q_row, sq_row, case in RULE_TABLE:
            weight = Weight.parse(text)
            for algebra, (dim_e, opposite) in ((Algebra.Q, q_row), (Algebra.SQ, sq_row)):
                cases += 1
                data = clifford_data(weight, algebra)
                ext = self_ext(weight, algebra)
                if data.dim_e != dim_e:
                    failures.append(f"clifford {algebra.value} {weight}: dim E = {data.dim_e}, expected {dim_e}")
                if ext.opposite_parity != opposite:
                    failures.append(f"self_ext {algebra.value} {weight}: {ext.opposite_parity}, expected {opposite}")
            cases += 1
            data = restrict_induce_class(weight)
            if data.case != case:
                failures.append(f"restriction case of {weight}: {data.case}, expected {case}")

        for algebra, block_cls, _ in REFERENCE_BLOCKS:
            cases += 1
            expected = HIGHEST_WEIGHT_TABLE[algebra][block_cls]
            if is_highest_weight_block(self.family(algebra, block_cls).block) != expected:
                failures.append(f"{algebra.value} {block_cls.value}: highest weight should be {expected}")

        for weight in dominant_grid():
            for algebra in Algebra:
                cases += 1
                ext = self_ext(weight, algebra)
                merged = clifford_data(weight, algebra).type == SimpleType.Q
                if ext.merged != merged or (not merged and ext.same_parity != 0):
                    failures.append(f"self_ext {algebra.value} {weight}: {ext.model_dump()}")

            cases += 1
            data = restrict_induce_class(weight)
            q_dim = clifford_data(weight, Algebra.Q).simple_dim.total
            sq_dim = clifford_data(weight, Algebra.SQ).simple_dim.total
            if sum(data.restriction.values()) * sq_dim != q_dim:
                failures.append(f"restriction of {weight} loses dimension")
            if sum(data.induction.values()) * q_dim != 2 * sq_dim:
                failures.append(f"induction of {weight} does not double dimension")

        family = self.family(Algebra.SQ, BlockClass.STANDARD)
        for index in family.indices(self.bound):
            cases += 1
            weight = family.weight(index)
            top = weight.doubled[0]
            expected = (0, 0) if top == 2 else (top - 2, 2 - top)
            actual = standard_reduction(weight).doubled
            if actual != expected:
                failures.append(f"standard_reduction{weight} = {actual}, expected {expected}")
        return _result("rule tables", failures, cases)

    def check_properties(self) -> CheckResult:
        failures, cases = [], 0

        # Truncation stability of E along the principal family and a few typical weights.
        samples = [Weight(doubled=(2 * k, 0, -2 * k)) for k in range(1, 4)] + euler_grid(6)
        for weight in samples:
            for algebra in Algebra:
                cases += 1
                shallow = euler_character(weight, algebra, self.depth)
                deep = euler_character(weight, algebra, self.depth + 1)
                if not shallow.agrees_with(deep):
                    failures.append(f"{algebra.value} E{weight} changes between depth {self.depth} and {self.depth + 1}")

        for algebra, block_cls, _ in REFERENCE_BLOCKS:
            cases += 1
            path_algebra = self.algebra_of(algebra, block_cls)
            if not path_algebra.quiver.is_parity_equivariant() or not parity_equivariant(path_algebra):
                failures.append(f"{algebra.value} {block_cls.value}: parity shift does not preserve the quiver")

        for kind, algebra in sorted(LAYER_FIXTURES, key=lambda k: (k[0], k[1].value)):
            block_cls = KIND_CLASSES[kind]
            path_algebra = self.algebra_of(algebra, block_cls)
            family = self.family(algebra, block_cls)
            for vertex, layers in layer_fixtures(family, range(2, self.bound + 1)).items():
                expected = [sorted(layer) for layer in layers]
                if expected != expected[::-1] or not path_algebra.quiver.is_trusted(vertex):
                    continue
                cases += 1
                if not radical_filtration(path_algebra, vertex).is_palindromic():
                    failures.append(f"{algebra.value} {kind} P({vertex}) is not palindromic")

        for algebra in Algebra:
            family = self.family(algebra, BlockClass.PRINCIPAL)
            service = GrothendieckService(family.block)
            path_algebra = self.algebra_of(algebra, BlockClass.PRINCIPAL)
            sdims = service.simple_superdimensions(self.bound + 1)
            for vertex in path_algebra.trusted_vertices:
                cases += 1
                sdim = service.projective_superdimension(radical_filtration(path_algebra, vertex), sdims)
                if sdim != 0:
                    failures.append(f"{algebra.value} P({vertex}) has superdimension {sdim}")
        return _result("properties", failures, cases)


def verify_all(bound: Optional[int] = None, depth: Optional[int] = None, cap: Optional[int] = None) -> List[CheckResult]:
    suite = VerificationSuite(bound, depth, cap)
    return suite.run_all()
