import pytest

from services import decomposition_service, group_service, module_service, stable_service


@pytest.fixture(autouse=True)
def _fresh_stable_caches():
    yield
    stable_service.clear_sphere_cache()


@pytest.fixture
def group():
    """Build a group from its expression, e.g. group('D8')"""
    return group_service.build_group


@pytest.fixture
def c9():
    return group_service.build_group('C9')


@pytest.fixture
def d8():
    return group_service.build_group('D8')


@pytest.fixture
def q8():
    return group_service.build_group('Q8')


@pytest.fixture
def cyclic_modules(c9):
    """M_1 .. M_9 over C9"""
    return {n: module_service.cyclic_quotient(c9, 3, n) for n in range(1, 10)}


@pytest.fixture
def random_quotient():
    """
    Draw kG^rank modulo the submodule generated by a few random vectors of
    its radical, free summands stripped, until 0 < dim <= max_dim.
    """
    def draw(g, rng, max_dim, rank=1):
        free = module_service.free_module(g, g.prime, rank)
        rad = module_service.radical(free)
        while True:
            count = int(rng.integers(1, 4))
            rows = (rng.integers(0, g.prime, size=(count, rad.shape[0])) @ rad) % g.prime
            sub = module_service.span_closure(free, rows)
            quotient, _ = module_service.sub_or_quotient(free, sub, 'quotient')
            core = decomposition_service.strip_free(quotient).core
            if 0 < core.dim <= max_dim:
                return core
    return draw
