"""
Direct-sum decomposition, free summands and isomorphism testing
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from models.module import GMap
from services import fplinalg_service as la
from services import module_service

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 3 ** 8
DEFAULT_TRIALS = 64


@dataclass(frozen=True)
class FreeSplitting:
    """
    m = core ⊕ kG^free_rank with core projective-free.

    ``incl``/``proj`` go core -> m -> core and compose to the identity;
    ``free_incl``/``free_proj`` do the same for the free part.
    """
    core: object
    incl: GMap
    proj: GMap
    free_rank: int
    free_incl: GMap
    free_proj: GMap


@dataclass
class Summand:
    module: object
    multiplicity: int
    certified: bool
    embeddings: list = field(default_factory=list)


@dataclass
class Decomposition:
    parts: list

    @property
    def certified(self):
        return all(part.certified for part in self.parts)

    @property
    def flag(self):
        return 'certified' if self.certified else 'randomized'

    def as_pairs(self):
        return [(part.module, part.multiplicity) for part in self.parts]

    def modules(self):
        """Every summand, repeated by multiplicity"""
        return [part.module for part in self.parts for _ in range(part.multiplicity)]


def norm_matrix(m):
    """Action of the norm element, the sum of all group elements"""
    return m.action.sum(axis=0) % m.p


def free_rank(m):
    return la.rank_of(norm_matrix(m), m.p)


def is_projective_free(m):
    return not np.any(norm_matrix(m))


def strip_free(m):
    """
    Split off the largest free summand.

    Generators m_i are chosen with N.m_i independent (N the norm
    element), U = sum kG m_i is free, and the Frobenius functionals
    phi_i with phi_i(g.m_j) = [i = j and g = 1] give a retraction onto U.

    Returns:
        FreeSplitting
    """
    p, group = m.p, m.group
    order = group.order
    norm = norm_matrix(m)
    _, rank, pivots = la.row_reduce(norm.T, p)
    if rank == 0:
        ident = module_service.identity_map(m)
        zero = module_service.zero_module(group, p)
        return FreeSplitting(m, ident, ident, 0,
                             module_service.zero_map(zero, m), module_service.zero_map(m, zero))
    gens = np.eye(m.dim, dtype=np.int64)[pivots]
    basis_u = np.einsum('ia,gab->igb', gens, m.action).reshape(rank * order, m.dim) % p
    targets = np.zeros((rank, rank * order), dtype=np.int64)
    targets[np.arange(rank), np.arange(rank) * order] = 1
    functionals = la.solve_left(basis_u.T, targets, p)
    retraction = np.einsum('gab,jb->ajg', m.action[group.inv], functionals).reshape(m.dim, rank * order) % p
    free = module_service.free_module(group, p, rank)
    complement = la.left_kernel(retraction, p)
    core, core_incl = module_service.sub_or_quotient(m, complement, 'sub')
    basis = core_incl.mat
    pivot_cols = [int(np.nonzero(row)[0][0]) for row in basis]
    along = (np.eye(m.dim, dtype=np.int64) - la.mat_mul(retraction, basis_u, p)) % p
    core_proj = GMap(m, core, along[:, pivot_cols])
    logger.debug(f"Stripped free rank {rank} from a module of dim {m.dim}")
    return FreeSplitting(core, core_incl, core_proj, rank,
                         GMap(free, m, basis_u), GMap(m, free, retraction))


def _random_endomorphism(basis, rng, p):
    coeffs = rng.integers(0, p, size=len(basis))
    return np.tensordot(coeffs, basis, axes=1) % p


def _fitting_split(m, endo):
    """Return (kernel rows, image rows) of endo^dim when both are proper, else None"""
    power = la.mat_power(endo, m.dim, m.p)
    kernel = la.left_kernel(power, m.p)
    if kernel.shape[0] in (0, m.dim):
        return None
    return kernel, la.row_basis(power, m.p)


def _split_once(m, rng, trials):
    """
    Returns:
        tuple: ('split', kernel rows, image rows) or ('indecomposable', certified)
    """
    if m.certified_indecomposable or m.dim <= 1:
        return 'indecomposable', True
    endos = module_service.hom_space(m, m)
    if len(endos) == 1:
        return 'indecomposable', True
    basis = np.stack([f.mat for f in endos])
    for _ in range(trials):
        found = _fitting_split(m, _random_endomorphism(basis, rng, m.p))
        if found:
            return ('split',) + found
    if m.p ** len(endos) <= EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(m.p), repeat=len(endos)):
            found = _fitting_split(m, np.tensordot(np.array(coeffs), basis, axes=1) % m.p)
            if found:
                return ('split',) + found
        return 'indecomposable', True
    logger.debug(f"No Fitting split of a dim {m.dim} module after {trials} trials")
    return 'indecomposable', False


def decompose(m, seed=0, trials=DEFAULT_TRIALS):
    """
    Decompose into indecomposables by iterated Fitting splittings.

    Args:
        m: GModule
        seed: RNG seed for the random endomorphisms
        trials: random endomorphisms tried per piece

    Returns:
        Decomposition: summands up to isomorphism with multiplicities and
        embeddings into m; ``flag`` is 'certified' or 'randomized'
    """
    rng = np.random.default_rng(seed)
    pending = [(m, module_service.identity_map(m))]
    pieces = []
    while pending:
        part, incl = pending.pop()
        if part.dim == 0:
            continue
        outcome = _split_once(part, rng, trials)
        if outcome[0] == 'indecomposable':
            pieces.append((part, incl, outcome[1]))
            continue
        _, kernel, image = outcome
        for rows in (image, kernel):
            sub, sub_incl = module_service.sub_or_quotient(part, rows, 'sub')
            pending.append((sub, sub_incl.then(incl)))
    parts = []
    for module, incl, certified in reversed(pieces):
        for part in parts:
            if part.module.dim == module.dim and is_isomorphic(part.module, module, seed=seed, trials=trials):
                part.multiplicity += 1
                part.embeddings.append(incl)
                part.certified = part.certified and certified
                break
        else:
            parts.append(Summand(module, 1, certified, [incl]))
    return Decomposition(parts)


def find_isomorphism(m, n, seed=0, trials=DEFAULT_TRIALS):
    """An invertible equivariant map m -> n, or None"""
    if m.dim != n.dim or m.group is not n.group or m.p != n.p:
        return None
    if m.dim == 0:
        return module_service.zero_map(m, n)
    homs = module_service.hom_space(m, n)
    if not homs:
        return None
    basis = np.stack([f.mat for f in homs])
    rng = np.random.default_rng(seed)
    for f in homs:
        if la.is_invertible(f.mat, m.p):
            return f
    for _ in range(trials):
        mat = _random_endomorphism(basis, rng, m.p)
        if la.is_invertible(mat, m.p):
            return GMap(m, n, mat)
    if len(homs) <= 4 or m.p ** len(homs) <= EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(m.p), repeat=len(homs)):
            mat = np.tensordot(np.array(coeffs), basis, axes=1) % m.p
            if la.is_invertible(mat, m.p):
                return GMap(m, n, mat)
    return None


def is_isomorphic(m, n, seed=0, trials=DEFAULT_TRIALS):
    return find_isomorphism(m, n, seed=seed, trials=trials) is not None
