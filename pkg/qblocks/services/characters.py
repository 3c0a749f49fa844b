import logging
from functools import lru_cache
from itertools import permutations
from math import prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Poly, cancel, symbols
from sympy.combinatorics import Permutation

from qblocks.exceptions import BlockShapeError, WindowError
from qblocks.models import Algebra, CharacterStats, EpsCoeff, Weight
from qblocks.services.weights import clifford_data

logger = logging.getLogger(__name__)

Term = Tuple[int, ...]
Coeff = Tuple[int, int]


def height(doubled: Sequence[int]) -> int:
    """Doubled height Σ (n−i)·2vᵢ; linear, and positive on every positive root."""
    n = len(doubled)
    return sum((n - 1 - i) * v for i, v in enumerate(doubled))


def _mul(a: Coeff, b: Coeff) -> Coeff:
    return a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _add(a: Coeff, b: Coeff) -> Coeff:
    return a[0] + b[0], a[1] + b[1]


class RootSystem:
    """Type A_{n−1} root data in doubled coordinates."""

    def __init__(self, n: int):
        self.n = n

    def _root(self, i: int, j: int) -> Term:
        v = [0] * self.n
        v[i], v[j] = 2, -2
        return tuple(v)

    @property
    def positive_roots(self) -> List[Term]:
        return [self._root(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    @property
    def simple_roots(self) -> List[Term]:
        return [self._root(i, i + 1) for i in range(self.n - 1)]

    @property
    def rho(self) -> Term:
        """Half sum of the positive roots. The dot action is never shifted by it."""
        return tuple(sum(column) // 2 for column in zip(*self.positive_roots))

    @staticmethod
    def height(doubled: Sequence[int]) -> int:
        return height(doubled)


class FormalCharacter:
    """
    Sparse Laurent polynomial over the weight lattice with Z[ε] coefficients.

    Terms are keyed by doubled weights. ``floor`` is the doubled height below
    which coefficients are not certified (None for an exact character); terms
    under the floor are never stored.
    """

    __slots__ = ("n", "terms", "floor")

    def __init__(self, n: int, terms: Optional[Dict[Term, Coeff]] = None, floor: Optional[int] = None):
        self.n = n
        self.floor = floor
        self.terms: Dict[Term, Coeff] = {}
        for weight, coeff in (terms or {}).items():
            if coeff == (0, 0):
                continue
            if floor is not None and height(weight) < floor:
                continue
            self.terms[weight] = coeff

    @classmethod
    def zero(cls, n: int) -> "FormalCharacter":
        return cls(n)

    @classmethod
    def monomial(cls, weight: Weight, coeff: Union[int, EpsCoeff] = 1) -> "FormalCharacter":
        pair = coeff.as_pair() if isinstance(coeff, EpsCoeff) else (coeff, 0)
        return cls(weight.n, {weight.doubled: pair})

    @classmethod
    def orbit_sum(cls, weights: Iterable[Weight], coeff: int = 1) -> "FormalCharacter":
        weights = list(weights)
        terms: Dict[Term, Coeff] = {}
        for w in weights:
            terms[w.doubled] = _add(terms.get(w.doubled, (0, 0)), (coeff, 0))
        return cls(weights[0].n, terms)

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    @property
    def top_height(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(height(w) for w in self.terms)

    @property
    def window(self) -> Optional[int]:
        """Certified depth below the leading term, in ordinary height units."""
        top = self.top_height
        if self.floor is None or top is None:
            return None
        return (top - self.floor) // 2

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, weight: Union[Weight, Term]) -> EpsCoeff:
        key = weight.doubled if isinstance(weight, Weight) else tuple(weight)
        if self.floor is not None and height(key) < self.floor:
            raise WindowError(f"Coefficient of {key} lies below the certified window")
        even, odd = self.terms.get(key, (0, 0))
        return EpsCoeff(even=even, odd=odd)

    def _merged_floor(self, other: "FormalCharacter") -> Optional[int]:
        floors = [f for f in (self.floor, other.floor) if f is not None]
        return max(floors) if floors else None

    def __add__(self, other: "FormalCharacter") -> "FormalCharacter":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = _add(terms.get(w, (0, 0)), c)
        return FormalCharacter(self.n, terms, self._merged_floor(other))

    def __neg__(self) -> "FormalCharacter":
        return FormalCharacter(self.n, {w: (-c[0], -c[1]) for w, c in self.terms.items()}, self.floor)

    def __sub__(self, other: "FormalCharacter") -> "FormalCharacter":
        return self + (-other)

    def times(self, scalar: Union[int, EpsCoeff]) -> "FormalCharacter":
        pair = scalar.as_pair() if isinstance(scalar, EpsCoeff) else (scalar, 0)
        return FormalCharacter(self.n, {w: _mul(c, pair) for w, c in self.terms.items()}, self.floor)

    def __mul__(self, other: "FormalCharacter") -> "FormalCharacter":
        if (self.is_zero() and self.is_exact) or (other.is_zero() and other.is_exact):
            return FormalCharacter(self.n)
        top_self = self.top_height if self.terms else self.floor
        top_other = other.top_height if other.terms else other.floor
        candidates = []
        if self.floor is not None:
            candidates.append(self.floor + top_other)
        if other.floor is not None:
            candidates.append(other.floor + top_self)
        floor = max(candidates) if candidates else None

        terms: Dict[Term, Coeff] = {}
        for w1, c1 in self.terms.items():
            h1 = height(w1)
            for w2, c2 in other.terms.items():
                if floor is not None and h1 + height(w2) < floor:
                    continue
                w = tuple(a + b for a, b in zip(w1, w2))
                terms[w] = _add(terms.get(w, (0, 0)), _mul(c1, c2))
        return FormalCharacter(self.n, terms, floor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalCharacter):
            return NotImplemented
        return self.n == other.n and self.floor == other.floor and self.terms == other.terms

    def __repr__(self) -> str:
        return f"FormalCharacter(n={self.n}, terms={len(self.terms)}, floor={self.floor})"

    def truncated(self, floor: int) -> "FormalCharacter":
        merged = floor if self.floor is None else max(floor, self.floor)
        return FormalCharacter(self.n, self.terms, merged)

    def completed(self, lowest: int) -> "FormalCharacter":
        """Declare the character exact once its window reaches the known lowest support height."""
        if self.floor is not None and self.floor > lowest:
            raise WindowError(f"Window floor {self.floor} does not reach the lowest height {lowest}")
        return FormalCharacter(self.n, {w: c for w, c in self.terms.items() if height(w) >= lowest})

    def collapse(self) -> "FormalCharacter":
        """Evaluate ε at 1, keeping the total in the even slot."""
        return FormalCharacter(self.n, {w: (c[0] + c[1], 0) for w, c in self.terms.items()}, self.floor)

    def divided(self, k: int) -> "FormalCharacter":
        terms = {}
        for w, (even, odd) in self.terms.items():
            if even % k or odd % k:
                raise ValueError(f"Coefficient of {w} is not divisible by {k}")
            terms[w] = (even // k, odd // k)
        return FormalCharacter(self.n, terms, self.floor)

    def agrees_with(self, other: "FormalCharacter") -> bool:
        """Equality on the heights both characters certify."""
        floor = self._merged_floor(other)
        keys = set(self.terms) | set(other.terms)
        for w in keys:
            if floor is not None and height(w) < floor:
                continue
            if self.terms.get(w, (0, 0)) != other.terms.get(w, (0, 0)):
                return False
        return True

    def has_nonnegative_coefficients(self) -> bool:
        return all(c[0] >= 0 and c[1] >= 0 for c in self.terms.values())

    def is_sn_invariant(self) -> bool:
        """Check permutation invariance on every orbit the window fully certifies."""
        for w, c in self.terms.items():
            for p in set(permutations(w)):
                if self.floor is not None and height(p) < self.floor:
                    continue
                if self.terms.get(p, (0, 0)) != c:
                    return False
        return True

    def dump(self) -> str:
        """One line per term, ``2λ1,...,2λn;even,odd``, lexicographically sorted."""
        lines = [
            ",".join(str(x) for x in w) + f";{c[0]},{c[1]}" for w, c in sorted(self.terms.items())
        ]
        return "\n".join(lines)


def _factor(n: int, root: Term, depth: int) -> FormalCharacter:
    """(1 + e^{−α})/(1 − e^{−α}) = 1 + 2Σ_{k≥1} e^{−kα}, cut at the given doubled depth."""
    step = height(root)
    terms: Dict[Term, Coeff] = {(0,) * n: (1, 0)}
    k = 1
    while k * step <= depth:
        terms[tuple(-k * x for x in root)] = (2, 0)
        k += 1
    return FormalCharacter(n, terms, -depth)


@lru_cache(maxsize=None)
def d_series(n: int, depth: int) -> FormalCharacter:
    """
    Truncated expansion of the denominator product D over the positive roots.

    Args:
        n: Rank
        depth: Height bound; terms of height >= −depth are exact

    Returns:
        FormalCharacter with floor −2·depth (doubled units)
    """
    if depth < 0:
        raise WindowError(f"Depth must be non-negative, got {depth}")
    doubled_depth = 2 * depth
    result = FormalCharacter(n, {(0,) * n: (1, 0)})
    for root in RootSystem(n).positive_roots:
        result = result * _factor(n, root, doubled_depth)
    logger.debug(f"D series n={n} depth={depth}: {len(result.terms)} terms")
    return result


def permutation_sign(perm: Sequence[int]) -> int:
    return Permutation(list(perm)).signature()


def weyl_numerator(weight: Weight) -> FormalCharacter:
    """Exact alternating orbit sum Σ_w sign(w) e^{w·λ}."""
    terms: Dict[Term, Coeff] = {}
    for perm in permutations(range(weight.n)):
        w = weight.permuted(perm).doubled
        sign = permutation_sign(perm)
        terms[w] = _add(terms.get(w, (0, 0)), (sign, 0))
    return FormalCharacter(weight.n, terms)


def complete_depth(weight: Weight) -> int:
    """Smallest depth at which the Euler character of the weight is fully certified."""
    top = weight.sorted_desc().doubled
    return (height(top) - height(tuple(reversed(top)))) // 2


def euler_character(weight: Weight, algebra: Algebra, depth: int) -> FormalCharacter:
    """
    Character of the Euler characteristic E(λ): dim v(λ) · D · Σ sign(w) e^{w·λ}.

    The result is exact once depth reaches complete_depth(λ); below that it
    carries the floor h(λ⁺) − 2·depth, in doubled units like d_series.
    """
    if depth < 0:
        raise WindowError(f"Depth {depth} cannot certify any coefficient")
    numerator = weyl_numerator(weight)
    if numerator.is_zero():
        return FormalCharacter(weight.n)
    dim_v = clifford_data(weight, algebra).simple_dim
    character = (d_series(weight.n, depth) * numerator).times(dim_v)
    lowest = height(tuple(reversed(weight.sorted_desc().doubled)))
    if character.floor <= lowest:
        return character.completed(lowest)
    return character


def complete_euler_character(weight: Weight, algebra: Algebra) -> FormalCharacter:
    return euler_character(weight, algebra, complete_depth(weight))


def character_stats(character: FormalCharacter) -> CharacterStats:
    """Total dimension, superdimension and permutation invariance of an exact character."""
    if not character.is_exact:
        raise WindowError(f"Character is only certified down to doubled height {character.floor}")
    return CharacterStats(
        total_dim=sum(e + o for e, o in character.terms.values()),
        super_dim=sum(e - o for e, o in character.terms.values()),
        is_sn_invariant=character.is_sn_invariant(),
    )


def parabolic_character(weight: Weight, algebra: Algebra) -> FormalCharacter:
    """
    Parity-collapsed character of L(t,0,...,0) or L(0,...,0,−t), t > 0.

    Uses the generic formula dim v · Σ_i x_i^t Π_{j≠i} (x_i + x_j)/(x_i − x_j),
    dualised (x ↦ x⁻¹) for the negative weight.
    """
    doubled = weight.doubled
    nonzero = [d for d in doubled if d]
    if len(nonzero) != 1 or nonzero[0] % 2 or weight.sorted_desc().doubled != doubled:
        raise BlockShapeError(f"{weight} is not of the form (t,0,...,0) or (0,...,0,−t) with t integral")
    n = weight.n
    sign = 1 if nonzero[0] > 0 else -1
    t = abs(nonzero[0]) // 2
    xs = symbols(f"x0:{n}")
    expr = sum(
        xs[i] ** t * prod((xs[i] + xs[j]) / (xs[i] - xs[j]) for j in range(n) if j != i)
        for i in range(n)
    )
    dim_v = clifford_data(weight, algebra).simple_dim.total
    terms = {
        tuple(2 * sign * m for m in monom): (int(coeff) * dim_v, 0)
        for monom, coeff in Poly(cancel(expr), *xs).terms()
    }
    logger.debug(f"Generic character of {weight}: {len(terms)} terms")
    return FormalCharacter(n, terms)
