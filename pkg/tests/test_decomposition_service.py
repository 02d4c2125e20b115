import numpy as np
import pytest

from services import decomposition_service, module_service


def test_strip_free_splits_off_regular_summands(c9, cyclic_modules):
    m, _, _ = module_service.direct_sum([module_service.regular_module(c9, 3), cyclic_modules[4],
                                        module_service.regular_module(c9, 3)])
    split = decomposition_service.strip_free(m)
    assert split.free_rank == 2
    assert split.core.dim == 4
    assert decomposition_service.is_projective_free(split.core)
    assert np.array_equal(split.incl.then(split.proj).mat, np.eye(4, dtype=np.int64))
    assert np.array_equal(split.free_incl.then(split.free_proj).mat, np.eye(18, dtype=np.int64))
    assert decomposition_service.is_isomorphic(split.core, cyclic_modules[4])


def test_strip_free_of_projective_free_module(cyclic_modules):
    split = decomposition_service.strip_free(cyclic_modules[8])
    assert split.free_rank == 0
    assert split.core is cyclic_modules[8]


@pytest.mark.parametrize('expr', ['C4', 'C2xC2', 'D8', 'Q8'])
def test_free_rank_of_regular_module(group, expr):
    g = group(expr)
    assert decomposition_service.free_rank(module_service.regular_module(g, 2)) == 1
    assert decomposition_service.free_rank(module_service.trivial_module(g, 2)) == 0


def test_decompose_counts_multiplicities(cyclic_modules):
    m, _, _ = module_service.direct_sum([cyclic_modules[2], cyclic_modules[5], cyclic_modules[2]])
    decomposition = decomposition_service.decompose(m, seed=3)
    pairs = sorted((part.dim, mult) for part, mult in decomposition.as_pairs())
    assert pairs == [(2, 2), (5, 1)]
    assert decomposition.flag == 'certified'
    assert len(decomposition.modules()) == 3
    for part in decomposition.parts:
        for embedding in part.embeddings:
            embedding.validate()


def test_decompose_indecomposable(q8):
    decomposition = decomposition_service.decompose(module_service.regular_module(q8, 2))
    assert len(decomposition.parts) == 1
    assert decomposition.parts[0].multiplicity == 1


def test_find_isomorphism(cyclic_modules):
    m = cyclic_modules[3]
    twisted = module_service.dual(m)
    iso = decomposition_service.find_isomorphism(m, twisted)
    assert iso is not None
    iso.validate()
    assert decomposition_service.find_isomorphism(cyclic_modules[3], cyclic_modules[4]) is None
