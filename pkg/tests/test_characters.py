import pytest

from conftest import w
from qblocks.exceptions import BlockShapeError, WindowError
from qblocks.models import Algebra, EpsCoeff, Weight
from qblocks.services.characters import (
    FormalCharacter,
    RootSystem,
    character_stats,
    complete_depth,
    complete_euler_character,
    d_series,
    euler_character,
    height,
    parabolic_character,
    permutation_sign,
    weyl_numerator,
)


def test_root_system_heights():
    roots = RootSystem(3)
    assert [height(r) for r in roots.simple_roots] == [2, 2]
    assert sorted(height(r) for r in roots.positive_roots) == [2, 2, 4]
    assert roots.rho == (2, 0, -2)


def test_d_series_leading_coefficients():
    series = d_series(3, 2)
    assert series.coefficient((0, 0, 0)) == EpsCoeff(even=1)
    # e^{-(ε1-ε2)} only comes from its own factor
    assert series.coefficient((-2, 2, 0)).even == 2
    # e^{-(ε1-ε3)}: 2 from its own factor and 2·2 from the two simple roots
    assert series.coefficient((-2, 0, 2)).even == 6


def test_d_series_rejects_negative_depth():
    with pytest.raises(WindowError):
        d_series(3, -1)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_weyl_numerator_vanishes_on_walls():
    assert weyl_numerator(w("1,0,0")).is_zero()
    assert len(weyl_numerator(w("3,2,1")).terms) == 6


@pytest.mark.parametrize("algebra", list(Algebra))
def test_euler_of_trivial_weight_is_zero(algebra):
    assert euler_character(Weight.zero(3), algebra, 20).is_zero()


def test_complete_depth():
    assert complete_depth(w("3,2,1")) == 4
    assert complete_depth(w("1,0,-1")) == 4


def test_typical_euler_character():
    character = complete_euler_character(w("3,2,1"), Algebra.Q)
    assert character.is_exact
    stats = character_stats(character)
    assert stats.total_dim == 32
    assert stats.super_dim == 0
    assert stats.is_sn_invariant
    assert character.has_nonnegative_coefficients()


@pytest.mark.parametrize("perm", [(1, 0, 2), (0, 2, 1), (2, 0, 1), (2, 1, 0)])
def test_euler_is_alternating(perm):
    weight = w("3,1,-1")
    moved = euler_character(weight.permuted(perm), Algebra.SQ, 5)
    assert moved == euler_character(weight, Algebra.SQ, 5).times(permutation_sign(perm))


def test_truncation_is_stable():
    shallow = euler_character(w("1,0,-1"), Algebra.Q, 2)
    deep = euler_character(w("1,0,-1"), Algebra.Q, 3)
    assert not shallow.is_exact
    assert shallow.agrees_with(deep)
    assert deep.floor < shallow.floor


def test_coefficients_below_window_are_refused():
    character = euler_character(w("1,0,-1"), Algebra.Q, 1)
    with pytest.raises(WindowError):
        character.coefficient((-20, 0, 20))
    with pytest.raises(WindowError):
        character_stats(character)


def test_formal_character_arithmetic():
    x = FormalCharacter.monomial(w("1,0,0"))
    y = FormalCharacter.monomial(w("0,1,0"), EpsCoeff(even=0, odd=1))
    product = (x + y) * (x - y)
    assert product.coefficient((4, 0, 0)) == EpsCoeff(even=1)
    assert product.coefficient((0, 4, 0)) == EpsCoeff(even=-1)
    assert product.coefficient((2, 2, 0)) == EpsCoeff()
    assert product.collapse().coefficient((0, 4, 0)) == EpsCoeff(even=-1)
    assert (x.times(4)).divided(2) == x.times(2)


def test_orbit_sum_is_invariant():
    orbit = FormalCharacter.orbit_sum([w("1,0,0"), w("0,1,0"), w("0,0,1")])
    assert orbit.is_sn_invariant()
    assert not FormalCharacter.monomial(w("1,0,0")).is_sn_invariant()


def test_truncated_floor_follows_top_height():
    top = height(w("1,0,-1").doubled)
    assert euler_character(w("1,0,-1"), Algebra.Q, 1).floor == top - 2
    assert euler_character(w("1,0,-1"), Algebra.Q, 2).floor == top - 4


def test_parabolic_character_of_natural_module():
    natural = parabolic_character(w("1,0,0"), Algebra.Q)
    assert natural == FormalCharacter.orbit_sum([w("1,0,0"), w("0,1,0"), w("0,0,1")], 2)


@pytest.mark.parametrize("text,total", [("2,0,0", 18), ("3,0,0", 38), ("0,0,-2", 18)])
def test_parabolic_character_dimensions(text, total):
    character = parabolic_character(w(text), Algebra.Q)
    stats = character_stats(character)
    assert stats.total_dim == total
    assert stats.is_sn_invariant
    assert character.has_nonnegative_coefficients()


def test_parabolic_character_of_negative_weight_is_dual():
    character = parabolic_character(w("0,0,-2"), Algebra.SQ)
    assert character.coefficient((0, 0, -4)) == EpsCoeff(even=2)
    assert character.coefficient((-2, -2, 0)) == EpsCoeff(even=4)


@pytest.mark.parametrize("text", ["2,1,0", "1/2,0,0", "0,0,2"])
def test_parabolic_character_rejects_other_shapes(text):
    with pytest.raises(BlockShapeError):
        parabolic_character(w(text), Algebra.Q)
