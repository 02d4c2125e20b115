import numpy as np
import pytest

from models.errors import GroupError
from services import group_service


@pytest.mark.parametrize('expr, order, prime', [
    ('C2', 2, 2),
    ('cyclic(9)', 9, 3),
    ('C3xC3', 9, 3),
    ('product(cyclic(2), cyclic(2), cyclic(2))', 8, 2),
    ('D8', 8, 2),
    ('dihedral(16)', 16, 2),
    ('Q8', 8, 2),
])
def test_build_group(expr, order, prime):
    g = group_service.build_group(expr)
    assert g.order == order
    assert g.prime == prime
    assert g.identity == 0


def test_build_group_is_cached():
    assert group_service.build_group('C3xC3') is group_service.build_group('C3 x C3')


@pytest.mark.parametrize('expr', ['C6', 'dihedral(12)', 'dihedral(6)', 'S3', 'cyclic(x)'])
def test_bad_groups(expr):
    with pytest.raises(GroupError):
        group_service.build_group(expr)


def test_validate_group_rejects_a_non_latin_table():
    mul = np.array([[0, 1, 2], [1, 0, 0], [2, 2, 1]])
    with pytest.raises(GroupError):
        group_service.validate_group(mul, [('a', 1)])


def test_dihedral_relations(d8):
    x, y = d8.generator('x'), d8.generator('y')
    assert d8.mul[x, x] == 0 and d8.mul[y, y] == 0
    xy = int(d8.mul[x, y])
    yx = int(d8.mul[y, x])
    assert d8.power(xy, 2) == d8.power(yx, 2)
    assert d8.element_order(xy) == 4
    assert not d8.is_abelian()


def test_quaternion_centre(q8):
    centre = group_service.center(q8)
    assert sorted(centre) == [0, q8.labels.index('ε')]
    i, j = q8.generator('i'), q8.generator('j')
    assert q8.mul[i, i] == q8.labels.index('ε')
    assert q8.mul[i, j] == q8.labels.index('ij')


def test_subgroup_cosets_and_normality(d8):
    xy = group_service.element_from_word(d8, 'xy')
    e = group_service.subgroup(d8, [xy])
    assert e.sub.order == 4
    assert e.index == 2
    assert e.coset_reps[0] == d8.identity
    assert group_service.is_normal(e)
    reflection = group_service.subgroup(d8, [d8.generator('x')])
    assert not group_service.is_normal(reflection)


def test_quotient_of_product_by_factor(group):
    g = group('C3xC9')
    e = group_service.subgroup(g, [g.generator('g1')])
    quotient, projection = group_service.quotient(g, e)
    assert quotient.order == 9
    assert quotient.is_abelian()
    assert projection[g.generator('g1')] == 0


def test_quotient_needs_normal_subgroup(d8):
    e = group_service.subgroup(d8, [d8.generator('x')])
    with pytest.raises(GroupError):
        group_service.quotient(d8, e)


def test_element_from_word(group):
    g = group('C3xC9')
    element = group_service.element_from_word(g, 'g1*g2^3')
    a, b = g.generator('g1'), g.power(g.generator('g2'), 3)
    assert element == int(g.mul[a, b])
    assert group_service.element_from_word(g, '1') == g.identity
    with pytest.raises(GroupError):
        group_service.element_from_word(g, 'h')
