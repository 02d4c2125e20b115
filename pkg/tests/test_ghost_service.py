import numpy as np
import pytest

from models.errors import CertificationError, ModuleError
from models.ghost import GhostCertificate
from services import construction_service, decomposition_service, ghost_service, group_service
from services import fplinalg_service as la
from services import module_service, stable_service


def _random_map(m, n, rng):
    homs = module_service.hom_space(m, n)
    if not homs:
        return module_service.zero_map(m, n)
    coeffs = rng.integers(0, m.p, size=len(homs))
    mat = np.tensordot(coeffs, np.stack([f.mat for f in homs]), axes=1) % m.p
    return module_service.make_map(m, n, mat)


def test_central_multiplication_is_a_window_ghost(c9, cyclic_modules):
    m = cyclic_modules[4]
    witness = construction_service.central_mult_ghost(m, c9.generator('g'))
    assert ghost_service.is_window_ghost(witness.map, 4)
    assert ghost_service.is_window_ghost(module_service.zero_map(m, m), 4)


def test_identity_of_trivial_module_is_not_a_ghost(c9):
    k = module_service.trivial_module(c9, 3)
    assert not ghost_service.is_window_ghost(module_service.identity_map(k), 0)


@pytest.mark.parametrize('expr', ['C2xC2', 'Q8'])
def test_theorem_ghosts_pass_the_window_test(group, expr):
    g = group(expr)
    centre = [z for z in group_service.center(g) if z != g.identity]
    m = stable_service.sphere(g, 2, 1)
    window = ghost_service.group_radical_length(g, 2)
    for z in centre:
        witness = construction_service.central_mult_ghost(m, z)
        assert witness.cert.is_theorem
        assert ghost_service.is_window_ghost(witness.map, window)


def test_soc_rad_check_on_ghosts_and_identity(c9, cyclic_modules):
    m = cyclic_modules[5]
    ghost = construction_service.central_mult_ghost(m, c9.generator('g')).map
    assert ghost_service.soc_rad_check(ghost) == (True, True)
    k = module_service.trivial_module(c9, 3)
    assert ghost_service.soc_rad_check(module_service.identity_map(k)) == (False, False)


def test_soc_rad_check_needs_projective_free_modules(c9):
    regular = module_service.regular_module(c9, 3)
    with pytest.raises(ModuleError):
        ghost_service.soc_rad_check(module_service.identity_map(regular))


def test_ghost_composites_respect_socle_and_radical_powers(c9, cyclic_modules):
    m = cyclic_modules[7]
    ghost = construction_service.central_mult_ghost(m, c9.generator('g')).map
    composite = ghost
    for l in range(1, 4):
        soc = module_service.socle_power(m, l)
        rad = module_service.radical_power(m, l)
        assert not np.any(la.mat_mul(soc, composite.mat, 3))
        assert la.in_span(composite.mat, rad, 3)
        composite = composite.then(ghost)


def _sphere_detects(f):
    """([k, f] = 0, [Ω⁻¹k, f] = 0) on stable basis maps"""
    group, p = f.dom.group, f.p
    result = []
    for i in (0, -1):
        source = stable_service.sphere(group, p, i)
        basis = stable_service.stable_hom(source, f.dom).basis
        result.append(all(stable_service.is_stably_trivial(s.then(f)) for s in basis))
    return tuple(result)


@pytest.mark.parametrize('expr', ['C9', 'C2xC2', 'C3xC3'])
def test_socle_lemma_on_random_maps(group, random_quotient, expr):
    g = group(expr)
    p = g.prime
    rng = np.random.default_rng(7)
    pool = [stable_service.sphere(g, p, i) for i in (-2, -1, 0, 1, 2)]
    pool += [random_quotient(g, rng, 8) for _ in range(8)]
    pool = [m for m in pool if m.dim <= 8]
    for _ in range(500):
        m, n = (pool[int(i)] for i in rng.integers(0, len(pool), size=2))
        f = _random_map(m, n, rng)
        detected = _sphere_detects(f)
        assert ghost_service.soc_rad_check(f) == detected
        assert ghost_service.soc_rad_check(f, minimize=True) == detected


def test_universal_window_ghost_of_k_over_c2_is_trivial(group):
    g = group('C2')
    k = module_service.trivial_module(g, 2)
    universal = ghost_service.universal_window_ghost(k, 1)
    assert stable_service.is_stably_trivial(universal.phi)
    assert universal.cert.kind == 'window'


def test_universal_window_ghost_of_zero_module(c9):
    zero = module_service.zero_module(c9, 3)
    assert ghost_service.universal_window_ghost(zero, 2).target.dim == 0


def test_universal_window_ghost_of_cyclic_module(cyclic_modules):
    m = cyclic_modules[4]
    universal = ghost_service.universal_window_ghost(m, 4)
    assert ghost_service.is_window_ghost(universal.phi, 4)
    assert not stable_service.is_stably_trivial(universal.phi)
    assert decomposition_service.is_projective_free(universal.target)


@pytest.mark.parametrize('n', [1, 2, 4, 5, 8])
def test_ghost_length_of_cyclic_modules(cyclic_modules, n):
    m = cyclic_modules[n]
    bounds = ghost_service.ghost_length_bounds(m, witnesses=ghost_service.auto_witnesses(m))
    assert (bounds.lower, bounds.upper) == (min(n, 9 - n), min(n, 9 - n))
    assert bounds.conclusive


def test_ghost_length_with_explicit_witness(c9, cyclic_modules):
    m = cyclic_modules[4]
    chain = ghost_service.central_witness_chain(m, c9.generator('g'))
    assert chain.length == 3
    bounds = ghost_service.ghost_length_bounds(m, witnesses=[chain])
    assert (bounds.lower, bounds.upper) == (4, 4)
    assert bounds.to_dict()['witness']['length'] == 3


def test_ghost_length_of_k_is_one(q8):
    k = module_service.trivial_module(q8, 2)
    bounds = ghost_service.ghost_length_bounds(k, witnesses=[])
    assert (bounds.lower, bounds.upper) == (1, 1)


def test_projective_module_has_length_zero(q8):
    bounds = ghost_service.ghost_length_bounds(module_service.regular_module(q8, 2))
    assert (bounds.lower, bounds.upper) == (0, 0)
    assert bounds.upper_method == 'projective'


def test_window_witnesses_are_refused(cyclic_modules):
    m = cyclic_modules[4]
    universal = ghost_service.universal_window_ghost(m, 2)
    with pytest.raises(CertificationError):
        ghost_service.ghost_length_bounds(m, witnesses=[GhostCertificate.by_window(universal.phi, 2)])


def test_window_sigmas_drop_maps_covered_by_degree_zero(group):
    g = group('C2xC2')
    k = module_service.trivial_module(g, 2)
    sigmas, reached = ghost_service.window_sigmas(k, 3)
    assert len(sigmas) == 1
    assert sigmas[0].dom.dim == 1
    assert reached == 3


def test_window_is_narrowed_to_fit_the_budget(group):
    g = group('C3xC3')
    m = construction_service.tensor_of_cyclics(g, 3, (2, 1))
    window = ghost_service.default_window(g, 3)
    sigmas, reached = ghost_service.window_sigmas(m, window, ghost_service.DEFAULT_DIM_BUDGET)
    assert reached is not None and reached <= window
    growth = sum(stable_service.injective_hull(s.dom).hull.dim - s.dom.dim for s in sigmas)
    assert m.dim + growth <= ghost_service.DEFAULT_DIM_BUDGET

    universal = ghost_service.universal_window_ghost(m, window, budget=60)
    assert universal.cert.window is not None and universal.cert.window <= window
    assert universal.target.dim <= 60
    assert ghost_service.is_window_ghost(universal.phi, universal.cert.window)


def test_universal_window_ghost_refuses_a_budget_below_degree_zero(group):
    g = group('C3xC3')
    m = construction_service.tensor_of_cyclics(g, 3, (2, 1))
    with pytest.raises(ModuleError):
        ghost_service.universal_window_ghost(m, 2, budget=m.dim)


def _cube_of_radical(m, rng):
    """Action on m of a random element of J^3, J the augmentation ideal of kC3xC3"""
    g, p = m.group, m.p
    eye = np.eye(m.dim, dtype=np.int64)
    a, b = ((m.action[g.generator(name)] - eye) % p for name, _ in g.cyclic_factors)
    mat = np.zeros((m.dim, m.dim), dtype=np.int64)
    for i, j in ((2, 1), (1, 2), (2, 2)):
        term = eye
        for factor in [a] * i + [b] * j:
            term = la.mat_mul(term, factor, p)
        mat = (mat + int(rng.integers(0, p)) * term) % p
    return module_service.make_map(m, m, mat)


def test_three_central_ghosts_compose_to_zero_over_c3xc3(group, random_quotient):
    g = group('C3xC3')
    rng = np.random.default_rng(11)
    centre = [z for z in group_service.center(g) if z != g.identity]
    for _ in range(200):
        m = random_quotient(g, rng, 12, rank=int(rng.integers(1, 3)))
        x, y, z = (centre[int(i)] for i in rng.integers(0, len(centre), size=3))
        ghosts = [construction_service.central_mult_ghost(m, w).cert for w in (x, y, z)]
        composite = GhostCertificate.composite(ghosts)
        assert composite.is_theorem
        assert stable_service.is_stably_trivial(composite.payload)
        assert stable_service.is_stably_trivial(_cube_of_radical(m, rng))


@pytest.mark.slow
def test_iterated_bound_never_undercuts_witnesses_over_c3xc3(group, random_quotient):
    g = group('C3xC3')
    rng = np.random.default_rng(5)
    for _ in range(4):
        m = random_quotient(g, rng, 6)
        n, used = ghost_service.iterated_universal_bound(m, 1, 2, budget=120)
        assert used <= 1
        chains = ghost_service.auto_witnesses(m)
        lower = 1 + max((chain.length for chain in chains), default=0)
        assert n is None or n >= lower


def test_dihedral_induced_module_bounds(d8):
    e = group_service.subgroup(d8, [group_service.element_from_word(d8, 'xy')])
    witness = construction_service.right_mult_ghost(e, 2)
    cert = construction_service.right_mult_composite(witness, [d8.generator('x'), d8.generator('y')])
    bounds = ghost_service.ghost_length_bounds(witness.induced, witnesses=[cert])
    assert (bounds.lower, bounds.upper) == (3, 3)


def test_socle_length_upper(q8, group):
    e = group_service.subgroup(q8, [q8.labels.index('ε')])
    kv = construction_service.right_mult_ghost(e, 1).induced
    assert ghost_service.socle_length_upper(kv) == 3
    g = group('C3xC3')
    assert ghost_service.socle_length_upper(construction_service.tensor_of_cyclics(g, 3, (2, 2))) == 3
    regular = module_service.regular_module(q8, 2)
    assert ghost_service.socle_length_upper(regular) == 0
    assert ghost_service.unstable_socle_length(regular) == 5


def test_unstable_quotient_chain(cyclic_modules):
    m = cyclic_modules[6]
    chain = ghost_service.unstable_quotient_chain(m)
    assert chain.steps == 6
    assert chain.modules[-1].dim == 0
    assert all(chain.nontrivial[:-1])


def test_order_lower_bound():
    assert ghost_service.order_lower_bound(3, 3) == 5
    assert ghost_service.order_lower_bound(2, 3) == 3


@pytest.mark.parametrize('expr, lower, upper, theorem_upper', [
    ('C2', 1, 1, None),
    ('C3', 1, 1, None),
    ('C4', 2, 2, None),
    ('C2xC2', 2, 2, None),
    ('C5', 2, 2, None),
    ('C9', 4, 4, None),
    ('C2xC2xC2', 3, 3, None),
    ('C3xC3', 3, 4, 3),
    ('D8', 3, 4, 3),
    ('Q8', 3, 4, None),
])
def test_group_ghost_bounds(group, expr, lower, upper, theorem_upper):
    bounds = ghost_service.group_ghost_bounds(group(expr))
    assert (bounds.lower, bounds.upper) == (lower, upper)
    assert bounds.theorem_upper == theorem_upper
    assert not any(method.startswith('theorem:') for method in bounds.upper_methods)


def test_theorem_upper_never_narrows_the_computed_interval(group):
    bounds = ghost_service.group_ghost_bounds(group('D8'))
    assert bounds.upper_methods == ['radical_length']
    assert bounds.theorem_methods == ['theorem:dihedral']
    assert not bounds.conclusive
    assert bounds.to_dict()['theorem_upper'] == 3


@pytest.mark.slow
@pytest.mark.parametrize('expr, lower, upper, theorem_upper', [
    ('D16', 5, 8, 5),
    ('C27', 13, 13, None),
    ('C3xC9', 9, 10, 9),
    ('C3xC3xC3', 5, 6, None),
])
def test_group_ghost_bounds_larger_groups(group, expr, lower, upper, theorem_upper):
    bounds = ghost_service.group_ghost_bounds(group(expr))
    assert (bounds.lower, bounds.upper) == (lower, upper)
    assert bounds.theorem_upper == theorem_upper
