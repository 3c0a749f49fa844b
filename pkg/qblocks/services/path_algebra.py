import logging
from fractions import Fraction
from typing import Dict, List, Set, Tuple

import numpy as np
import pandas as pd
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from qblocks.exceptions import UnstableDimensionError
from qblocks.models import (
    EndomorphismSummary,
    GrothendieckMode,
    GrothendieckVector,
    RadicalFiltration,
    RelationSet,
    label_sort_key,
)
from qblocks.services.quivers import Quiver

logger = logging.getLogger(__name__)

# A path is its source vertex and its arrow ids in travel order.
Path = Tuple[str, Tuple[int, ...]]
Row = Dict[Path, Fraction]


def _length_key(path: Path) -> Tuple[int, Tuple[int, ...]]:
    return len(path[1]), path[1]


def _contains(arrows: Tuple[int, ...], word: Tuple[int, ...]) -> bool:
    n = len(word)
    return any(arrows[i : i + n] == word for i in range(len(arrows) - n + 1))


def rref(rows: List[Row], columns: List[Path]) -> Tuple[List[Row], List[Path]]:
    """
    Exact reduced row echelon form of sparse rows over the given column order.

    Returns:
        Tuple of (non-zero reduced rows, pivot columns)
    """
    if not rows or not columns:
        return [], []
    index = {column: i for i, column in enumerate(columns)}
    dense = []
    for row in rows:
        line = [QQ(0)] * len(columns)
        for path, coeff in row.items():
            line[index[path]] = QQ(coeff.numerator, coeff.denominator)
        dense.append(line)
    reduced, pivots = DomainMatrix(dense, (len(dense), len(columns)), QQ).rref()
    matrix = reduced.to_Matrix()
    result = []
    for r in range(len(pivots)):
        entries = {}
        for c in range(len(columns)):
            value = matrix[r, c]
            if value != 0:
                entries[columns[c]] = Fraction(int(value.p), int(value.q))
        result.append(entries)
    return result, [columns[p] for p in pivots]


class HomSpace:
    """The span of paths from one vertex to another, modulo the relation rows."""

    def __init__(self, source: str, target: str):
        self.source = source
        self.target = target
        self.columns: List[Path] = []
        self.rows: List[Row] = []
        self.pivots: List[Path] = []

    def reduce(self) -> None:
        self.columns.sort(key=_length_key)
        self.rows, self.pivots = rref(self.rows, self.columns)

    @property
    def dimension(self) -> int:
        return len(self.columns) - len(self.rows)

    def filtration_dim(self, k: int) -> int:
        """dim of the image of paths of length ≥ k."""
        longer = sum(1 for c in self.columns if len(c[1]) >= k)
        shorter_pivots = sum(1 for p in self.pivots if len(p[1]) < k)
        return longer - len(self.rows) + shorter_pivots


class PathAlgebra:
    """
    Finite-dimensional quotient kQ/I of a quiver path algebra.

    Relations act degreewise up to ``cap + 2`` arrows so that mixed-length
    binomials act fully before truncation; every reported dimension must
    vanish past ``cap``.
    """

    def __init__(self, quiver: Quiver, relations: RelationSet, cap: int):
        self.quiver = quiver
        self.relations = relations
        self.cap = cap
        self.limit = cap + 2
        self.arrows = {a.id: a for a in quiver.arrows}
        self.zero_words: Set[Tuple[int, ...]] = set()
        self.alive: Set[Path] = set()
        self.by_length: Dict[int, List[Path]] = {}
        self.spaces: Dict[Tuple[str, str], HomSpace] = {}
        self._generators: List[Tuple[str, str, Dict[Tuple[int, ...], int], int]] = []

    def target(self, path: Path) -> str:
        return self.arrows[path[1][-1]].target if path[1] else path[0]

    def word(self, path: Path) -> str:
        """Functional word of a path, rightmost arrow first travelled; 'e' for an idempotent."""
        if not path[1]:
            return "e"
        return "".join(self.arrows[i].name for i in reversed(path[1]))

    def space(self, source: str, target: str) -> HomSpace:
        key = (source, target)
        if key not in self.spaces:
            self.spaces[key] = HomSpace(source, target)
        return self.spaces[key]

    def _seed(self) -> None:
        for relation in self.relations.relations:
            left = self.quiver.instances(relation.lhs)
            if relation.is_monomial:
                for paths in left.values():
                    self.zero_words.update(paths)
                continue
            right = self.quiver.instances(relation.rhs)
            for key in left:
                if key not in right:
                    continue
                terms: Dict[Tuple[int, ...], int] = {}
                for path in left[key]:
                    terms[path] = terms.get(path, 0) + 1
                for path in right[key]:
                    terms[path] = terms.get(path, 0) - 1
                terms = {p: c for p, c in terms.items() if c}
                if terms:
                    length = max(len(p) for p in terms)
                    self._generators.append((key[0], key[1], terms, length))

    def _admit(self, path: Path) -> None:
        self.alive.add(path)
        self.by_length.setdefault(len(path[1]), []).append(path)
        self.space(path[0], self.target(path)).columns.append(path)

    def _extend(self, level: int) -> None:
        longest_zero = max((len(w) for w in self.zero_words), default=0)
        for path in self.by_length.get(level - 1, []):
            for arrow in self.quiver.arrows_out(self.target(path)):
                arrows = path[1] + (arrow.id,)
                if any(arrows[-n:] in self.zero_words for n in range(1, min(longest_zero, level) + 1)):
                    continue
                self._admit((path[0], arrows))

    def _index(self, level: int) -> Tuple[Dict[Tuple[int, str], List[Path]], Dict[Tuple[int, str], List[Path]]]:
        ending: Dict[Tuple[int, str], List[Path]] = {}
        starting: Dict[Tuple[int, str], List[Path]] = {}
        for length in range(level + 1):
            for path in self.by_length.get(length, []):
                ending.setdefault((length, self.target(path)), []).append(path)
                starting.setdefault((length, path[0]), []).append(path)
        return ending, starting

    def _generate(self, level: int) -> Set[Tuple[str, str]]:
        """Add every p·r·q whose longest term has exactly `level` arrows."""
        dirty = set()
        ending, starting = self._index(level)
        for source, target, terms, length in self._generators:
            if length > level:
                continue
            for before in range(level - length + 1):
                after = level - length - before
                for pre in ending.get((before, source), []):
                    for post in starting.get((after, target), []):
                        row: Row = {}
                        for term, coeff in terms.items():
                            path = (pre[0], pre[1] + term + post[1])
                            if path in self.alive:
                                row[path] = row.get(path, Fraction(0)) + coeff
                        row = {p: c for p, c in row.items() if c}
                        if row:
                            key = (pre[0], self.target(post) if post[1] else target)
                            self.space(*key).rows.append(row)
                            dirty.add(key)
        return dirty

    def _derive_zero_words(self, dirty: Set[Tuple[str, str]]) -> Set[Tuple[int, ...]]:
        found = set()
        for key in sorted(dirty):
            space = self.spaces[key]
            space.reduce()
            for row in space.rows:
                if len(row) == 1:
                    (path,) = row
                    if path[1]:
                        found.add(path[1])
                    else:
                        logger.warning(f"Relations kill the idempotent at {path[0]}")
        return found

    def _discard(self, words: Set[Tuple[int, ...]]) -> Set[Tuple[str, str]]:
        """Remove every surviving path containing one of the words; return touched spaces."""
        self.zero_words.update(words)
        dead = {p for p in self.alive if any(_contains(p[1], w) for w in words)}
        if not dead:
            return set()
        self.alive -= dead
        for length, paths in self.by_length.items():
            self.by_length[length] = [p for p in paths if p not in dead]
        touched = set()
        for key, space in self.spaces.items():
            before = len(space.columns)
            space.columns = [c for c in space.columns if c not in dead]
            if len(space.columns) != before:
                space.rows = [
                    {p: c for p, c in row.items() if p not in dead} for row in space.rows
                ]
                space.rows = [row for row in space.rows if row]
                touched.add(key)
        return touched

    def build(self) -> "PathAlgebra":
        self._seed()
        for vertex in self.quiver.vertices:
            self._admit((vertex, ()))
        for level in range(1, self.limit + 1):
            self._extend(level)
            dirty = self._generate(level)
            while dirty:
                words = self._derive_zero_words(dirty)
                dirty = self._discard(words)
            logger.debug(
                f"Level {level}: {len(self.by_length.get(level, []))} paths, {len(self.zero_words)} zero words"
            )
        for space in self.spaces.values():
            space.reduce()
            if space.filtration_dim(self.cap + 1):
                raise UnstableDimensionError(
                    f"Paths {space.source} -> {space.target} survive past length {self.cap}; raise the cap"
                )
        return self

    @property
    def vertices(self) -> List[str]:
        return self.quiver.vertices

    @property
    def trusted_vertices(self) -> List[str]:
        return [v for v in self.quiver.vertices if self.quiver.is_trusted(v)]

    def dim(self, source: str, target: str) -> int:
        """dim Hom(P(source), P(target)): classes of paths from source to target."""
        space = self.spaces.get((source, target))
        return space.dimension if space else 0

    def filtration_dim(self, source: str, target: str, k: int) -> int:
        space = self.spaces.get((source, target))
        return space.filtration_dim(k) if space else 0

    def basis(self, source: str, target: str) -> List[str]:
        """Path classes spanning the space, preferring short words."""
        space = self.spaces.get((source, target))
        if not space:
            return []
        columns = sorted(space.columns, key=lambda p: (-len(p[1]), self.word(p), p[1]))
        _, pivots = rref(space.rows, columns)
        pivot_set = set(pivots)
        free = [c for c in columns if c not in pivot_set]
        return [self.word(p) for p in sorted(free, key=lambda p: (len(p[1]), self.word(p)))]


def build_algebra(quiver: Quiver, relations: RelationSet, cap: int) -> PathAlgebra:
    """
    Build the quotient algebra of a quiver by its relations.

    Args:
        quiver: Quiver with named arrows
        relations: Orientation-resolved relations
        cap: Longest path length allowed to stay non-zero

    Returns:
        PathAlgebra with every Hom space reduced
    """
    algebra = PathAlgebra(quiver, relations, cap).build()
    logger.info(f"Built algebra on {quiver}: {len(algebra.alive)} surviving paths")
    return algebra


def hom_dims(algebra: PathAlgebra, trusted_only: bool = True) -> pd.DataFrame:
    """dim Hom(P(i), P(j)) with i on the rows and j on the columns."""
    vertices = algebra.trusted_vertices if trusted_only else algebra.vertices
    matrix = np.array([[algebra.dim(i, j) for j in vertices] for i in vertices], dtype=np.int64)
    return pd.DataFrame(matrix.reshape(len(vertices), len(vertices)), index=vertices, columns=vertices)


def hom_basis(algebra: PathAlgebra, source: str, target: str) -> List[str]:
    return algebra.basis(source, target)


def radical_filtration(algebra: PathAlgebra, vertex: str) -> RadicalFiltration:
    """Layer k of P(vertex) holds the sources of path classes in rad^k minus rad^(k+1)."""
    layers: List[List[str]] = []
    for k in range(algebra.cap + 1):
        layer = []
        for source in algebra.vertices:
            count = algebra.filtration_dim(source, vertex, k) - algebra.filtration_dim(source, vertex, k + 1)
            layer.extend([source] * count)
        if not layer:
            break
        layers.append(sorted(layer, key=label_sort_key))
    return RadicalFiltration(vertex=vertex, layers=layers, trusted=algebra.quiver.is_trusted(vertex))


def collapsed_projectives(algebra: PathAlgebra) -> Dict[str, GrothendieckVector]:
    """[P(j) : L(i)] summed over the parity of i, for trusted even vertices j."""
    quiver = algebra.quiver
    result = {}
    for target in algebra.trusted_vertices:
        label = quiver.labels[target]
        if label.parity:
            continue
        counts = []
        for source in algebra.vertices:
            source_label = quiver.labels[source]
            counts.append((source_label.base_name, algebra.dim(source, target)))
        result[f"P({label.index})"] = GrothendieckVector.from_counts(counts, GrothendieckMode.COLLAPSED)
    return result


def endomorphism_algebra_summary(algebra: PathAlgebra, vertex: str) -> EndomorphismSummary:
    shifted = algebra.quiver.parity[vertex]
    return EndomorphismSummary(
        vertex=vertex,
        dim_end=algebra.dim(vertex, vertex),
        basis=algebra.basis(vertex, vertex),
        dim_hom_to_shift=algebra.dim(vertex, shifted) if shifted != vertex else algebra.dim(vertex, vertex),
    )


def parity_equivariant(algebra: PathAlgebra) -> bool:
    """Hom dimensions are invariant under the parity involution on both ends."""
    parity = algebra.quiver.parity
    return all(
        algebra.dim(i, j) == algebra.dim(parity[i], parity[j])
        for i in algebra.vertices
        for j in algebra.vertices
    )

