import numpy as np
import pytest

from models.errors import GroupError, ModuleError
from services import construction_service, ghost_service, group_service, module_service, stable_service


def test_central_ghost_of_identity_is_zero(c9, cyclic_modules):
    witness = construction_service.central_mult_ghost(cyclic_modules[3], c9.identity)
    assert witness.map.is_zero()


def test_central_ghost_needs_central_element(d8):
    k = module_service.trivial_module(d8, 2)
    with pytest.raises(GroupError):
        construction_service.central_mult_ghost(k, d8.generator('x'))


def test_central_ghost_on_quaternion_quotient_is_a_window_ghost(q8):
    regular = module_service.regular_module(q8, 2)
    quotient, _ = module_service.sub_or_quotient(regular, module_service.socle(regular), 'quotient')
    witness = construction_service.central_mult_ghost(quotient, q8.labels.index('ε'))
    assert ghost_service.is_window_ghost(witness.map, 5)


def test_double_central_ghost_on_induced_module(group):
    g = group('C3xC3')
    e = group_service.subgroup(g, [g.generator('g2')])
    m = module_service.induce(module_service.trivial_module(e.sub, 3), e).module
    witness = construction_service.central_mult_ghost(m, g.generator('g1'))
    assert not stable_service.is_stably_trivial(witness.map.then(witness.map))


def test_quaternion_right_multiplication(q8):
    e = group_service.subgroup(q8, [q8.labels.index('ε')])
    witness = construction_service.right_mult_ghost(e, 1)
    kv = witness.induced
    assert kv.dim == 4
    assert module_service.radical_length(kv) == 3
    for f in witness.right_mults.values():
        f.validate()
    cert = construction_service.right_mult_composite(witness, [q8.generator('i'), q8.generator('j')])
    assert cert.length == 2 and cert.is_theorem
    assert not stable_service.is_stably_trivial(cert.payload)


def test_dihedral_right_multiplication(d8):
    xy = group_service.element_from_word(d8, 'xy')
    e = group_service.subgroup(d8, [xy])
    witness = construction_service.right_mult_ghost(e, 2)
    assert witness.induced.dim == 4
    cert = construction_service.right_mult_composite(witness, [d8.generator('x'), d8.generator('y')])
    assert not stable_service.is_stably_trivial(cert.payload)
    assert ghost_service.is_window_ghost(witness.right_mults[d8.generator('x')].then(
        witness.right_mults[d8.generator('y')]), 3)


def test_right_multiplication_needs_normal_subgroup(d8):
    e = group_service.subgroup(d8, [d8.generator('x')])
    with pytest.raises(GroupError):
        construction_service.right_mult_ghost(e, 1)


def test_right_multiplication_range(d8):
    e = group_service.subgroup(d8, [group_service.element_from_word(d8, 'xy')])
    with pytest.raises(ModuleError):
        construction_service.right_mult_ghost(e, 5)


@pytest.mark.parametrize('expr, generator, n', [('Q8', 'ε', 1), ('D8', 'xy', 2), ('D8', 'xy', 1)])
def test_bimodule_socles_and_radicals_agree(group, expr, generator, n):
    g = group(expr)
    e = group_service.subgroup(g, [group_service.element_from_word(g, generator)])
    layers = construction_service.bimodule_layers(construction_service.right_mult_ghost(e, n))
    assert layers['socles_agree']
    assert layers['radicals_agree']


def test_lower_bound_sequence_is_exact(d8):
    e = group_service.subgroup(d8, [group_service.element_from_word(d8, 'xy')])
    incl, proj = construction_service.lower_bound_sequence(e, 1)
    stable_service.check_exact(incl, proj)
    assert (incl.dom.dim, proj.cod.dim) == (2, 6)


@pytest.mark.parametrize('expr, dims, factors', [
    ('C3xC3', (1, 3), 2),
    ('C2xC2', (1, 2), 1),
    ('C5', (2,), 1),
])
def test_abelian_theta_is_stably_non_trivial(group, expr, dims, factors):
    g = group(expr)
    theta = construction_service.abelian_theta(g, dims)
    assert theta.factors == factors
    assert theta.cert.length == factors
    assert not stable_service.is_stably_trivial(theta.theta)


def test_abelian_theta_with_all_ones_is_the_identity(group):
    theta = construction_service.abelian_theta(group('C2xC2'), (1, 1))
    assert theta.cert is None
    assert np.array_equal(theta.theta.mat, np.eye(1, dtype=np.int64))


def test_tensor_of_cyclics_needs_abelian_product(d8):
    with pytest.raises(GroupError):
        construction_service.tensor_of_cyclics(d8, 2, (1, 1))


def test_induction_witness_from_c3(group):
    g = group('C3xC3')
    e = group_service.subgroup(g, [g.generator('g2')])
    f = module_service.identity_map(module_service.trivial_module(e.sub, 3))
    x = g.generator('g1')
    assert construction_service.minimal_exponent(e, x) == 3
    witness = construction_service.induction_witness(f, e, x, 3)
    assert witness.holds
    assert witness.sign == 1
    assert not stable_service.is_stably_trivial(witness.composite)


def test_induction_witness_from_c2_in_c2xc4(group):
    g = group('C2xC4')
    e = group_service.subgroup(g, [g.generator('g1')])
    f = module_service.identity_map(module_service.trivial_module(e.sub, 2))
    x = g.generator('g2')
    witness = construction_service.induction_witness(f, e, x, 4)
    assert witness.holds
    assert np.array_equal(witness.detection, f.mat)
    with pytest.raises(GroupError):
        construction_service.induction_witness(f, e, x, 2)


def test_induction_witness_with_l_one(group):
    g = group('C3xC3')
    e = group_service.subgroup(g, [g.generator('g1'), g.generator('g2')])
    f = module_service.identity_map(module_service.trivial_module(e.sub, 3))
    witness = construction_service.induction_witness(f, e, g.generator('g1'), 1)
    assert witness.holds
    assert witness.composite.dom.dim == 1
