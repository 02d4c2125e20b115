"""
kG-module construction and structure service

Modules are left modules written on row vectors: g.v = v @ action[g].
"""
import logging
from dataclasses import dataclass

import numpy as np

from models.errors import FieldError, ModuleError
from models.module import GMap, GModule, SeriesReport
from services import fplinalg_service as la

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Induction:
    """M up to G, with the unit i: M -> M↑↓ and retraction r: M↑↓ -> M over H"""
    module: GModule
    restricted: GModule
    unit: GMap
    retraction: GMap


@dataclass(frozen=True)
class Presentation:
    """
    Free presentation of a module.

    ``generators`` lifts a basis of M/rad M, ``surj`` has rows
    (i, g) -> g.m_i, ``relations`` spans the kernel of surj and
    ``section`` satisfies section @ surj = identity.
    """
    generators: np.ndarray
    surj: np.ndarray
    relations: np.ndarray
    section: np.ndarray


def _check_prime(group, p):
    if group.prime is not None and group.prime != p:
        raise FieldError(f"{group.name} is a {group.prime}-group, cannot work over F_{p}")


def make_module(group, p, action, label='', certified=False, validate=True):
    """Wrap and validate an action array of shape (|G|, d, d)"""
    _check_prime(group, p)
    action = np.asarray(action, dtype=np.int64) % p
    module = GModule(group, p, action, label=label, certified_indecomposable=certified)
    if validate:
        module.validate()
    return module


def make_map(dom, cod, mat, validate=True):
    gmap = GMap(dom, cod, np.asarray(mat, dtype=np.int64).reshape(dom.dim, cod.dim) % dom.p)
    if validate:
        gmap.validate()
    return gmap


def identity_map(m):
    return GMap(m, m, np.eye(m.dim, dtype=np.int64))


def zero_map(m, n):
    return GMap(m, n, np.zeros((m.dim, n.dim), dtype=np.int64))


def zero_module(group, p):
    return GModule(group, p, np.zeros((group.order, 0, 0), dtype=np.int64), label='0')


def trivial_module(group, p):
    """k: every element acts as 1"""
    _check_prime(group, p)
    action = np.ones((group.order, 1, 1), dtype=np.int64)
    return GModule(group, p, action, label='k', certified_indecomposable=True)


def regular_action(group):
    """Permutation matrices of left multiplication on kG (basis e_h, g.e_h = e_gh)"""
    n = group.order
    action = np.zeros((n, n, n), dtype=np.int64)
    g_idx, h_idx = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    action[g_idx, h_idx, group.mul[g_idx, h_idx]] = 1
    return action


def right_mult_matrix(group, x):
    """Right multiplication e_h -> e_{hx} on kG; a kG-module endomorphism"""
    n = group.order
    mat = np.zeros((n, n), dtype=np.int64)
    mat[np.arange(n), group.mul[:, x]] = 1
    return mat


def regular_module(group, p):
    _check_prime(group, p)
    return GModule(group, p, regular_action(group), label='kG', certified_indecomposable=True)


def free_module(group, p, rank):
    """kG^rank with basis index i*|G| + h"""
    if rank == 0:
        return zero_module(group, p)
    reg = regular_action(group)
    n = group.order
    action = np.zeros((n, rank * n, rank * n), dtype=np.int64)
    for i in range(rank):
        action[:, i * n:(i + 1) * n, i * n:(i + 1) * n] = reg
    return GModule(group, p, action, label=f"kG^{rank}")


def element_action(m, coeffs):
    """Matrix of a group algebra element sum c_g g acting on m"""
    mat = np.zeros((m.dim, m.dim), dtype=np.int64)
    for g, c in coeffs.items():
        mat = mat + int(c) * m.action[g]
    return mat % m.p


def _same_ring(modules):
    if not modules:
        return
    group, p = modules[0].group, modules[0].p
    for m in modules[1:]:
        if m.group is not group or m.p != p:
            raise ModuleError("modules live over different groups or primes")


def direct_sum(modules, group=None, p=None):
    """
    Block-diagonal sum.

    Returns:
        tuple: (module, list of injections, list of projections)
    """
    modules = list(modules)
    if not modules:
        if group is None:
            raise ModuleError("empty direct sum needs an explicit group")
        return zero_module(group, p), [], []
    _same_ring(modules)
    group, p = modules[0].group, modules[0].p
    total = sum(m.dim for m in modules)
    action = np.zeros((group.order, total, total), dtype=np.int64)
    offset = 0
    offsets = []
    for m in modules:
        action[:, offset:offset + m.dim, offset:offset + m.dim] = m.action
        offsets.append(offset)
        offset += m.dim
    certified = len(modules) == 1 and modules[0].certified_indecomposable
    label = ' ⊕ '.join(m.label or '?' for m in modules)
    total_module = GModule(group, p, action, label=label, certified_indecomposable=certified)
    injections, projections = [], []
    for m, off in zip(modules, offsets):
        inj = np.zeros((m.dim, total), dtype=np.int64)
        inj[:, off:off + m.dim] = np.eye(m.dim, dtype=np.int64)
        injections.append(GMap(m, total_module, inj))
        projections.append(GMap(total_module, m, inj.T.copy()))
    return total_module, injections, projections


def tensor(m1, m2):
    """Diagonal action on the Kronecker product (basis index a*dim2 + b)"""
    _same_ring([m1, m2])
    n = m1.group.order
    d = m1.dim * m2.dim
    action = np.einsum('gab,gcd->gacbd', m1.action, m2.action).reshape(n, d, d) % m1.p
    return GModule(m1.group, m1.p, action, label=f"({m1.label} ⊗ {m2.label})")


def restrict(m, e):
    """Restriction along a subgroup embedding"""
    if e.ambient is not m.group:
        raise ModuleError("embedding ambient group differs from the module's group")
    return GModule(e.sub, m.p, m.action[e.map], label=f"{m.label}↓")


def inflate(m, group, projection):
    """Pull a module back along a surjection group -> m.group given as an index array"""
    return GModule(group, m.p, m.action[np.asarray(projection)], label=m.label,
                   certified_indecomposable=m.certified_indecomposable)


def induce(m, e):
    """
    kG ⊗_kH M with basis (coset i, vector j) at index i*dim + j.

    Returns:
        Induction: the induced module plus unit/retraction over H
    """
    if e.sub is not m.group:
        raise ModuleError("module does not live on the embedded subgroup")
    g, d, c = e.ambient, m.dim, e.index
    reps = e.coset_reps
    action = np.zeros((g.order, c * d, c * d), dtype=np.int64)
    for x in g.elements:
        for i, t in enumerate(reps):
            moved = int(g.mul[x, t])
            i2 = int(e.coset_of[moved])
            h = int(g.mul[g.inv[reps[i2]], moved])
            action[x, i * d:(i + 1) * d, i2 * d:(i2 + 1) * d] = m.action[e.sub_index[h]]
    induced = GModule(g, m.p, action, label=f"{m.label}↑")
    restricted = restrict(induced, e)
    unit_mat = np.zeros((d, c * d), dtype=np.int64)
    unit_mat[:, :d] = np.eye(d, dtype=np.int64)
    unit = GMap(m, restricted, unit_mat)
    retraction = GMap(restricted, m, unit_mat.T.copy())
    return Induction(induced, restricted, unit, retraction)


def dual(m):
    """Contragredient: g acts by action[g^-1]^T"""
    action = m.action[m.group.inv].transpose(0, 2, 1).copy()
    return GModule(m.group, m.p, action, label=f"{m.label}*",
                   certified_indecomposable=m.certified_indecomposable)


def cyclic_quotient(group, p, n):
    """
    M_n = kC/(g-1)^n over a cyclic p-group, basis the images of (g-1)^j, j < n.
    """
    if group.cyclic_factors is None or len(group.cyclic_factors) != 1:
        raise ModuleError(f"{group.name} is not cyclic")
    _check_prime(group, p)
    gen_name, order = group.cyclic_factors[0]
    if not 0 <= n <= order:
        raise ModuleError(f"M_{n} needs 0 <= n <= {order}")
    g = group.generator(gen_name)
    step = np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64)
    action = np.zeros((group.order, n, n), dtype=np.int64)
    current = np.eye(n, dtype=np.int64)
    element = group.identity
    for _ in range(order):
        action[element] = current
        current = la.mat_mul(current, step, p)
        element = int(group.mul[element, g])
    return GModule(group, p, action, label=f"M_{n}", certified_indecomposable=n > 0)


def span_closure(m, rows):
    """Reduced basis of the submodule generated by ``rows``"""
    basis = la.row_basis(la.as_rows(rows, m.dim), m.p)
    gens = [a for _, a in m.generator_actions()]
    while True:
        if basis.shape[0] == 0:
            return basis
        images = np.concatenate([basis] + [la.mat_mul(basis, a, m.p) for a in gens], axis=0)
        grown = la.row_basis(images, m.p)
        if grown.shape[0] == basis.shape[0]:
            return grown
        basis = grown


def radical_of(m, rows):
    """J . N for the submodule N spanned by ``rows``"""
    rows = la.as_rows(rows, m.dim)
    if rows.shape[0] == 0:
        return rows
    eye = np.eye(m.dim, dtype=np.int64)
    moved = [la.mat_mul(rows, a - eye, m.p) for _, a in m.generator_actions()]
    if not moved:
        return np.zeros((0, m.dim), dtype=np.int64)
    return span_closure(m, np.concatenate(moved, axis=0))


def socle_above(m, rows):
    """{v : (s-1).v lies in span(rows) for every generator s}"""
    rows = la.row_basis(la.as_rows(rows, m.dim), m.p)
    annihilator = la.nullspace(rows, m.p).T
    eye = np.eye(m.dim, dtype=np.int64)
    blocks = [la.mat_mul(a - eye, annihilator, m.p) for _, a in m.generator_actions()]
    if not blocks or annihilator.shape[1] == 0:
        return np.eye(m.dim, dtype=np.int64)
    return la.row_basis(la.left_kernel(np.concatenate(blocks, axis=1), m.p), m.p)


def radical(m):
    return radical_of(m, np.eye(m.dim, dtype=np.int64))


def socle(m):
    return socle_above(m, np.zeros((0, m.dim), dtype=np.int64))


def series(m):
    """
    Radical and socle series of m.

    Returns:
        SeriesReport: descending radical series ending at 0, ascending socle
        series ending at m, and the two lengths (always equal)
    """
    rad_series = [np.eye(m.dim, dtype=np.int64)]
    while rad_series[-1].shape[0]:
        rad_series.append(radical_of(m, rad_series[-1]))
    soc_series = [np.zeros((0, m.dim), dtype=np.int64)]
    while soc_series[-1].shape[0] < m.dim:
        soc_series.append(socle_above(m, soc_series[-1]))
    report = SeriesReport(
        radical_series=rad_series,
        socle_series=soc_series,
        radical_length=len(rad_series) - 1,
        socle_length=len(soc_series) - 1,
    )
    if report.radical_length != report.socle_length:
        raise ModuleError(f"radical length {report.radical_length} != socle length {report.socle_length}")
    return report


def radical_power(m, k):
    rows = np.eye(m.dim, dtype=np.int64)
    for _ in range(k):
        rows = radical_of(m, rows)
    return rows


def socle_power(m, k):
    rows = np.zeros((0, m.dim), dtype=np.int64)
    for _ in range(k):
        rows = socle_above(m, rows)
    return rows


def radical_length(m):
    return series(m).radical_length


def is_invariant(m, rows):
    rows = la.row_basis(la.as_rows(rows, m.dim), m.p)
    return all(la.in_span(la.mat_mul(rows, a, m.p), rows, m.p) for _, a in m.generator_actions())


def sub_or_quotient(m, rows, which):
    """
    Submodule spanned by ``rows`` or the quotient by it.

    Args:
        m: GModule
        rows: spanning rows of an invariant subspace
        which: 'sub' or 'quotient'

    Returns:
        tuple: (module, inclusion sub -> m or projection m -> quotient)
    """
    basis = la.row_basis(la.as_rows(rows, m.dim), m.p)
    if not is_invariant(m, basis):
        raise ModuleError("row span is not invariant under the group action")
    pivots = [int(np.nonzero(row)[0][0]) for row in basis]
    if which == 'sub':
        action = np.einsum('ra,gab->grb', basis, m.action)[:, :, pivots] % m.p
        sub = GModule(m.group, m.p, action, label=f"sub({m.label})")
        return sub, GMap(sub, m, basis)
    if which != 'quotient':
        raise ModuleError(f"which must be 'sub' or 'quotient', got {which!r}")
    free = [c for c in range(m.dim) if c not in set(pivots)]
    proj = np.zeros((m.dim, len(free)), dtype=np.int64)
    proj[free, np.arange(len(free))] = 1
    if basis.shape[0]:
        proj[pivots, :] = (-basis[:, free]) % m.p
    action = (m.action[:, free, :] @ proj) % m.p
    quo = GModule(m.group, m.p, action, label=f"{m.label}/sub")
    return quo, GMap(m, quo, proj)


def presentation(m):
    """Minimal free presentation kG^t -> m with t = dim(m/rad m)"""
    n = m.group.order
    rad = radical(m)
    generators = la.complement_rows(rad, m.dim, m.p)
    t = generators.shape[0]
    surj = np.einsum('ia,gab->igb', generators, m.action).reshape(t * n, m.dim) % m.p
    relations = la.left_kernel(surj, m.p) if t else np.zeros((0, 0), dtype=np.int64)
    section = la.solve_left(surj, np.eye(m.dim, dtype=np.int64), m.p)
    if section is None:
        raise ModuleError("top generators do not generate the module")
    return Presentation(generators, surj, relations, section)


def hom_space(m, n):
    """
    Basis of Hom_kG(m, n).

    Solves for the images b_1..b_t of the top generators of m subject to
    every relation of m holding in n; equivalent to the equivariance
    system action_m(g) F = F action_n(g).

    Returns:
        list of GMap
    """
    _same_ring([m, n])
    if m.dim == 0 or n.dim == 0:
        return []
    p, order, dn = m.p, m.group.order, n.dim
    pres = presentation(m)
    t = pres.generators.shape[0]
    k = pres.relations.shape[0]
    if k:
        q = np.einsum('kig,gab->kiab', pres.relations.reshape(k, t, order), n.action) % p
        z = q.transpose(1, 2, 0, 3).reshape(t * dn, k * dn)
        if t * dn > 200:
            logger.debug(f"hom_space solving {t * dn} unknowns against {k * dn} equations")
        solutions = la.left_kernel(z, p)
    else:
        solutions = np.eye(t * dn, dtype=np.int64)
    if solutions.shape[0] == 0:
        return []
    r = np.einsum('jig,gab->jiab', pres.section.reshape(m.dim, t, order), n.action) % p
    mats = np.einsum('sia,jiab->sjb', solutions.reshape(-1, t, dn), r) % p
    return [GMap(m, n, mat) for mat in mats]


def hom_dimension(m, n):
    return len(hom_space(m, n))


def compose(*maps):
    """compose(f, g, h) is 'f, then g, then h'"""
    result = maps[0]
    for f in maps[1:]:
        result = result.then(f)
    return result
