"""
Explicit ghost constructions

Central multiplications, right multiplications on modules induced from a
cyclic normal subgroup, the abelian composite θ and the induction
lower-bound witness.
"""
import itertools
import logging

import numpy as np

from models.errors import GroupError, ModuleError
from models.ghost import GhostCertificate
from models.module import GMap
from models.witness import CentralWitness, CyclicNormalWitness, InductionWitness, ThetaWitness
from services import fplinalg_service as la
from services import group_service, module_service

logger = logging.getLogger(__name__)

CENTRAL_GHOST = 'central x-1 is a ghost'
RIGHT_MULT_GHOST = 'right x-1 on a cyclic-normal induced module is a ghost'


def algebra_element(group, coeffs, p):
    """Coefficient vector of sum c_g g"""
    vec = np.zeros(group.order, dtype=np.int64)
    for g, c in coeffs.items():
        vec[g] += int(c)
    return vec % p


def algebra_product(group, u, v, p):
    result = np.zeros(group.order, dtype=np.int64)
    np.add.at(result, group.mul.reshape(-1), np.outer(u, v).reshape(-1))
    return result % p


def augmentation_power(group, x, k, p):
    """(x - 1)^k in kG"""
    base = algebra_element(group, {x: 1, group.identity: -1}, p)
    result = algebra_element(group, {group.identity: 1}, p)
    for _ in range(k):
        result = algebra_product(group, result, base, p)
    return result


def central_mult_ghost(m, x):
    """
    Left multiplication by x - 1 for central x.

    Returns:
        CentralWitness
    """
    group = m.group
    if not group_service.is_central(group, x):
        raise GroupError(f"{group.label(x)} is not central in {group.name}")
    mat = (m.action[x] - np.eye(m.dim, dtype=np.int64)) % m.p
    f = GMap(m, m, mat)
    cert = GhostCertificate.by_theorem(f, f"({group.label(x)}-1)", notes=CENTRAL_GHOST)
    return CentralWitness(x, m, f, cert)


def cyclic_generator(e):
    """Ambient index of the generator of a cyclic subgroup"""
    sub = e.sub
    if sub.cyclic_factors is None or len(sub.cyclic_factors) != 1:
        raise GroupError(f"{sub.name} is not cyclic")
    name, _ = sub.cyclic_factors[0]
    return int(e.map[sub.generator(name)])


def _check_cyclic_normal(e):
    if e.sub.order == 1:
        raise GroupError("the cyclic normal subgroup must be non-trivial")
    gen = cyclic_generator(e)
    if not group_service.is_normal(e):
        raise GroupError(f"{e.sub.name} is not normal in {e.ambient.name}")
    return gen


def induced_cyclic_rows(e, n, p):
    """Rows of the left ideal kG.(c - 1)^(|C| - n) inside kG"""
    gen = _check_cyclic_normal(e)
    order = e.sub.order
    if not 1 <= n <= order:
        raise ModuleError(f"n must lie in 1..{order}, got {n}")
    group = e.ambient
    w = augmentation_power(group, gen, order - n, p)
    regular = module_service.regular_module(group, p)
    return regular, module_service.span_closure(regular, w.reshape(1, -1))


def _restricted_right_mult(basis, group, x, p):
    pivots = [int(np.nonzero(row)[0][0]) for row in basis]
    moved = la.mat_mul(basis, module_service.right_mult_matrix(group, x) - np.eye(group.order, dtype=np.int64), p)
    if not la.in_span(moved, basis, p):
        raise ModuleError(f"right multiplication by {group.label(x)} leaves the ideal")
    return moved[:, pivots]


def right_mult_ghost(e, n, p=None):
    """
    M_n↑ as kG.(c - 1)^(|C| - n) with right multiplications by x - 1.

    Args:
        e: SubgroupEmbedding of a cyclic normal subgroup C
        n: 1 <= n <= |C|
        p: prime (defaults to the group's)

    Returns:
        CyclicNormalWitness: one certified right multiplication per element
    """
    group = e.ambient
    p = p or group.prime
    regular, basis = induced_cyclic_rows(e, n, p)
    induced, _ = module_service.sub_or_quotient(regular, basis, 'sub')
    induced = type(induced)(group, p, induced.action, label=f"M_{n}↑")
    witness = CyclicNormalWitness(e, n, induced, basis)
    for x in group.elements:
        f = GMap(induced, induced, _restricted_right_mult(basis, group, x, p))
        witness.right_mults[x] = f
        witness.certs[x] = GhostCertificate.by_theorem(f, f"R({group.label(x)}-1)", notes=RIGHT_MULT_GHOST)
    logger.debug(f"Induced cyclic witness M_{n}↑ of dim {induced.dim} over {group.name}")
    return witness


def right_mult_composite(witness, elements):
    """
    R_{(x1-1)(x2-1)...}: right multiplication by x1 - 1 first.

    Returns:
        GhostCertificate: composite of theorem certificates
    """
    return GhostCertificate.composite([witness.certs[x] for x in elements])


def lower_bound_sequence(e, n, p=None):
    """
    0 -> M_n↑ -> kG -> M_{|C|-n}↑ -> 0 for a cyclic normal C.

    Returns:
        tuple: (inclusion GMap, projection GMap)
    """
    p = p or e.ambient.prime
    regular, basis = induced_cyclic_rows(e, n, p)
    sub, incl = module_service.sub_or_quotient(regular, basis, 'sub')
    _, proj = module_service.sub_or_quotient(regular, basis, 'quotient')
    return incl, proj


def bimodule_layers(witness):
    """
    Left and right socles and radicals of the induced ideal, in kG coordinates.

    Returns:
        dict: bases plus 'socles_agree' and 'radicals_agree'
    """
    m, basis = witness.induced, witness.basis
    p, group = m.p, m.group
    eye = np.eye(m.dim, dtype=np.int64)
    right = [witness.right_mults[g].mat for _, g in group.generators]
    soc_left = la.row_basis(la.mat_mul(module_service.socle(m), basis, p), p)
    if right:
        killed = la.left_kernel(np.concatenate(right, axis=1), p)
        moved = np.concatenate(right, axis=0)
    else:
        killed, moved = eye, np.zeros((0, m.dim), dtype=np.int64)
    soc_right = la.row_basis(la.mat_mul(killed, basis, p), p)
    rad_left = la.row_basis(la.mat_mul(module_service.radical(m), basis, p), p)
    rad_right = la.row_basis(la.mat_mul(la.row_basis(moved, p), basis, p), p) if moved.shape[0] else moved
    return {
        'soc_left': soc_left,
        'soc_right': soc_right,
        'rad_left': rad_left,
        'rad_right': rad_right,
        'socles_agree': np.array_equal(soc_left, soc_right),
        'radicals_agree': np.array_equal(rad_left, la.row_basis(rad_right, p)),
    }


def cyclic_module(group, n):
    """M_n over a cyclic p-group"""
    return module_service.cyclic_quotient(group, group.prime, n)


def tensor_of_cyclics(group, p, dims):
    """
    M_{n_1} ⊗ ... ⊗ M_{n_l} over a product of cyclic groups, factor i
    acting on tensor slot i.
    """
    factors = group.cyclic_factors
    if factors is None or not group.is_abelian():
        raise GroupError(f"{group.name} is not a recorded product of cyclic groups")
    dims = tuple(int(n) for n in dims)
    if len(dims) != len(factors):
        raise ModuleError(f"{group.name} has {len(factors)} cyclic factors, got {len(dims)} dimensions")
    gens, steps = [], []
    for (name, order), n in zip(factors, dims):
        if not 1 <= n <= order:
            raise ModuleError(f"M_{n} needs 1 <= n <= {order}")
        gens.append(group.generator(name))
        steps.append(np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64))
    total = int(np.prod(dims))
    action = np.zeros((group.order, total, total), dtype=np.int64)
    for exponents in itertools.product(*(range(order) for _, order in factors)):
        element = group_service.element_product(group, [group.power(g, k) for g, k in zip(gens, exponents)])
        mat = np.eye(1, dtype=np.int64)
        for step, k in zip(steps, exponents):
            mat = np.kron(mat, la.mat_power(step, k, p)) % p
        action[element] = mat
    label = ' ⊗ '.join(f"M_{n}" for n in dims)
    return module_service.make_module(group, p, action, label=label)


def abelian_theta(group, dims, p=None):
    """
    θ = Π (g_i - 1)^(n_i - 1) on M_{n_1} ⊗ ... ⊗ M_{n_l}.

    Returns:
        ThetaWitness: cert is None when θ is the identity (all n_i = 1)
    """
    p = p or group.prime
    m = tensor_of_cyclics(group, p, dims)
    certs = []
    for (name, _), n in zip(group.cyclic_factors, dims):
        witness = central_mult_ghost(m, group.generator(name))
        certs.extend([witness.cert] * (int(n) - 1))
    if not certs:
        return ThetaWitness(m, module_service.identity_map(m), tuple(dims))
    cert = GhostCertificate.composite(certs, notes='θ')
    return ThetaWitness(m, cert.payload, tuple(int(n) for n in dims), cert)


def minimal_exponent(e, x):
    """Smallest l > 0 with x^l in the subgroup"""
    group = e.ambient
    current, l = x, 1
    while not e.contains(current):
        current = int(group.mul[current, x])
        l += 1
    return l


def induction_witness(f, e, x, l):
    """
    (x - 1)^(l - 1) composed after f↑ with its detection composite.

    Args:
        f: GMap over e.sub
        e: SubgroupEmbedding
        x: central element of e.ambient
        l: smallest positive integer with x^l in e.sub

    Returns:
        InductionWitness
    """
    group = e.ambient
    if not group_service.is_central(group, x):
        raise GroupError(f"{group.label(x)} is not central in {group.name}")
    if l < 1 or minimal_exponent(e, x) != l:
        raise GroupError(f"{l} is not the least power of {group.label(x)} landing in {e.sub.name}")
    p = f.p
    ind_dom = module_service.induce(f.dom, e)
    ind_cod = module_service.induce(f.cod, e)
    lifted = GMap(ind_dom.module, ind_cod.module, np.kron(np.eye(e.index, dtype=np.int64), f.mat) % p)
    target = ind_cod.module
    power = la.mat_power((target.action[x] - np.eye(target.dim, dtype=np.int64)) % p, l - 1, p)
    composite = lifted.then(GMap(target, target, power))
    detection = la.mat_mul(la.mat_mul(ind_dom.unit.mat, composite.mat, p), ind_cod.retraction.mat, p)
    sign = (-1) ** (l - 1)
    holds = bool(np.array_equal(detection, (sign * f.mat) % p))
    return InductionWitness(composite, detection, sign, l, holds)
