"""
Stable module category service

Projective covers, injective hulls, syzygies, stable Hom and triangles
from short exact sequences. Projectives and injectives coincide for kG,
so a map is stably trivial exactly when it factors through the
injective hull of its domain.
"""
import logging
from functools import lru_cache

import numpy as np

from models.errors import ExactnessError, ModuleError
from models.module import GMap
from models.stable import CoverData, HullData, StableHom, Triangle
from services import decomposition_service, module_service
from services import fplinalg_service as la

logger = logging.getLogger(__name__)


@lru_cache(maxsize=512)
def projective_cover(m):
    """
    Minimal free cover kG^t -> m with t = dim(m / rad m).

    Returns:
        CoverData
    """
    group, p = m.group, m.p
    if m.dim == 0:
        zero = module_service.zero_module(group, p)
        return CoverData(zero, module_service.zero_map(zero, m), zero, module_service.zero_map(zero, zero))
    pres = module_service.presentation(m)
    rank = pres.generators.shape[0]
    cover = module_service.free_module(group, p, rank)
    surj = GMap(cover, m, pres.surj)
    kernel, incl = module_service.sub_or_quotient(cover, pres.relations, 'sub')
    kernel = _relabel(kernel, f"Ω({m.label})")
    incl = GMap(kernel, cover, incl.mat)
    logger.debug(f"Projective cover of rank {rank} for a module of dim {m.dim}")
    return CoverData(cover, surj, kernel, incl)


@lru_cache(maxsize=512)
def injective_hull(m):
    """
    Minimal injective hull, the dual of the projective cover of dual(m).

    Free modules are self-dual with this basis, so the dual of the cover
    surjection kG^t -> m* is its transpose, an injection m -> kG^t.

    Returns:
        HullData
    """
    group, p = m.group, m.p
    if m.dim == 0:
        zero = module_service.zero_module(group, p)
        return HullData(zero, module_service.zero_map(m, zero), zero, module_service.zero_map(zero, zero))
    dual_cover = projective_cover(module_service.dual(m))
    hull = dual_cover.cover
    inj = GMap(m, hull, dual_cover.surj.mat.T.copy())
    cokernel, proj = module_service.sub_or_quotient(hull, inj.mat, 'quotient')
    cokernel = _relabel(cokernel, f"Ω⁻¹({m.label})")
    return HullData(hull, inj, cokernel, GMap(hull, cokernel, proj.mat))


def _relabel(m, label):
    return type(m)(m.group, m.p, m.action, label=label,
                   certified_indecomposable=m.certified_indecomposable)


def strip_free(m):
    return decomposition_service.strip_free(m)


def projective_free_part(m):
    return strip_free(m).core


def omega_step(m, direction):
    """One syzygy (direction 1) or cosyzygy (direction -1) of a projective-free module"""
    if direction > 0:
        result = projective_cover(m).kernel
    else:
        result = injective_hull(m).cokernel
    return strip_free(result).core


def omega(m, n):
    """
    Ω^n of the projective-free part of m; negative n gives cosyzygies.

    Returns:
        GModule: projective-free
    """
    current = strip_free(m).core
    step = 1 if n > 0 else -1
    for _ in range(abs(n)):
        current = omega_step(current, step)
    return current


@lru_cache(maxsize=256)
def sphere(group, p, i):
    """Ω^i k, cached per group and degree"""
    if i == 0:
        return module_service.trivial_module(group, p)
    step = 1 if i > 0 else -1
    previous = sphere(group, p, i - step)
    return _relabel(omega_step(previous, step), f"Ω^{i}k")


def clear_sphere_cache():
    sphere.cache_clear()
    projective_cover.cache_clear()
    injective_hull.cache_clear()
    phom_rows.cache_clear()


def period(group, p, limit=8):
    """
    Smallest P > 0 with Ω^P k ≅ k, or None when there is none up to limit.

    A one-dimensional module over a p-group is trivial, so dimension 1
    already decides the isomorphism.
    """
    if group.order == 1:
        return 1
    for i in range(1, limit + 1):
        if sphere(group, p, i).dim == 1:
            return i
    return None


def _phom_spanning_rows(m, n):
    """
    Rows spanning PHom(m, n), one flattened dim(m) x dim(n) map per row.

    A map kG^t -> n is fixed by the images b_i of the block generators and
    sends e_(i,g) to g.b_i, so composing with the hull injection gives
    the maps sum_g inj[:, (i, g)] (x) action_n(g)[b, :] for every block i
    and basis vector b.
    """
    hull = injective_hull(m)
    order = m.group.order
    rank = hull.rank
    blocks = hull.inj.mat.reshape(m.dim, rank, order)
    spans = np.einsum('mig,gbn->ibmn', blocks, n.action) % m.p
    return spans.reshape(rank * n.dim, m.dim * n.dim)


@lru_cache(maxsize=256)
def phom_rows(m, n):
    """Reduced echelon basis of PHom(m, n) as flattened rows"""
    if m.dim == 0 or n.dim == 0:
        return np.zeros((0, m.dim * n.dim), dtype=np.int64)
    return la.row_basis(_phom_spanning_rows(m, n), m.p)


def stable_hom(m, n):
    """
    Basis of [m, n] with PHom computed through the injective hull of m.

    Returns:
        StableHom: representatives reduced modulo PHom plus the PHom basis
    """
    p = m.p
    homs = module_service.hom_space(m, n)
    phom = phom_rows(m, n)
    phom_maps = [GMap(m, n, row.reshape(m.dim, n.dim)) for row in phom]
    if not homs:
        return StableHom(m, n, [], phom_maps, phom, 0)
    flat = np.stack([f.mat.reshape(-1) for f in homs])
    remainders = la.reduce_modulo(flat, phom, p)
    reduced = la.row_basis(remainders, p)
    basis = [GMap(m, n, row.reshape(m.dim, n.dim)) for row in reduced]
    return StableHom(m, n, basis, phom_maps, phom, len(homs))


def stable_hom_dimension(m, n):
    return stable_hom(m, n).dim


def reduce_map(f):
    """Normal form of f modulo PHom(dom, cod)"""
    flat = la.reduce_modulo(f.mat.reshape(1, -1), phom_rows(f.dom, f.cod), f.p)
    return GMap(f.dom, f.cod, flat.reshape(f.dom.dim, f.cod.dim))


def is_stably_trivial(f):
    """True iff f factors through a projective (one span test against PHom)"""
    if f.is_zero():
        return True
    return reduce_map(f).is_zero()


def are_stably_trivial(maps):
    """Batch version for maps sharing dom and cod"""
    maps = list(maps)
    if not maps:
        return True
    first = maps[0]
    flat = np.stack([f.mat.reshape(-1) for f in maps])
    return not np.any(la.reduce_modulo(flat, phom_rows(first.dom, first.cod), first.p))


def stably_equal(f, g):
    return is_stably_trivial(GMap(f.dom, f.cod, (f.mat - g.mat) % f.p))


def stable_isomorphic(m, n, seed=0):
    """Isomorphism of projective-free parts"""
    return decomposition_service.is_isomorphic(strip_free(m).core, strip_free(n).core, seed=seed)


def stable_compose(*maps):
    return module_service.compose(*maps)


def check_exact(incl, proj):
    p = incl.p
    if incl.cod is not proj.dom:
        raise ExactnessError("middle terms of the sequence differ")
    x, y, z = incl.dom, incl.cod, proj.cod
    if la.rank_of(incl.mat, p) != x.dim:
        raise ExactnessError("first map is not injective")
    if z.dim and la.rank_of(proj.mat, p) != z.dim:
        raise ExactnessError("second map is not surjective")
    if x.dim + z.dim != y.dim or np.any(la.mat_mul(incl.mat, proj.mat, p)):
        raise ExactnessError("image of the first map is not the kernel of the second")


def extend_to_hull(incl, hull):
    """
    An equivariant Phi: Y -> hull with incl then Phi = hull.inj.

    An equivariant map into kG^t is fixed by the identity coordinate of
    each block, so it suffices to extend those t functionals along incl.
    """
    x, y = incl.dom, incl.cod
    order = x.group.order
    rank = hull.rank
    if rank == 0:
        return module_service.zero_map(y, hull.hull)
    targets = hull.inj.mat[:, np.arange(rank) * order].T
    functionals = la.solve_left(incl.mat.T, targets, x.p)
    if functionals is None:
        raise ExactnessError("hull injection does not extend along the inclusion")
    mat = np.einsum('gab,ib->aig', y.action[y.group.inv], functionals).reshape(y.dim, rank * order) % x.p
    return GMap(y, hull.hull, mat)


def triangle_from_ses(incl, proj):
    """
    Triangle X -> Y -> Z -> Ω⁻¹X from a short exact sequence.

    The connecting map sends z to the hull cokernel image of Phi(s(z)),
    s a linear section of proj and Phi the extension of the hull
    injection of X along incl.

    Returns:
        Triangle
    """
    check_exact(incl, proj)
    x, y, z = incl.dom, incl.cod, proj.cod
    hull = injective_hull(x)
    phi = extend_to_hull(incl, hull)
    if z.dim == 0:
        connecting = module_service.zero_map(z, hull.cokernel)
    else:
        section = la.solve_left(proj.mat, np.eye(z.dim, dtype=np.int64), x.p)
        if section is None:
            raise ExactnessError("second map is not surjective")
        mat = la.mat_mul(la.mat_mul(section, phi.mat, x.p), hull.proj.mat, x.p)
        connecting = GMap(z, hull.cokernel, mat)
    return Triangle(x, y, z, incl, proj, connecting, hull)


def hom_through(f, g):
    """
    Whether f: A -> C factors as h then g for some h: A -> B, where g: B -> C.

    Returns:
        GMap or None: a factor h
    """
    if g.cod is not f.cod:
        raise ModuleError("maps do not share a codomain")
    candidates = module_service.hom_space(f.dom, g.dom)
    if not candidates:
        return module_service.zero_map(f.dom, g.dom) if f.is_zero() else None
    images = np.stack([h.then(g).mat.reshape(-1) for h in candidates])
    coeffs = la.solve_left(images, f.mat.reshape(1, -1), f.p)
    if coeffs is None:
        return None
    mat = np.tensordot(coeffs[0], np.stack([h.mat for h in candidates]), axes=1) % f.p
    return GMap(f.dom, g.dom, mat)
