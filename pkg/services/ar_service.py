"""
Auslander-Reiten triangles service

The radical of the stable endomorphism ring, the almost zero map
γ: M -> ΩM, the heart H(M) and right almost split tests, all inside
stmod(kG) with PHom computed by the stable service.
"""
import itertools
import logging

import numpy as np
from sympy import Matrix, Poly, symbols

from models.ar import ARTriangle, StableEndAlgebra
from models.errors import CertificationError, ModuleError
from models.module import GMap
from services import decomposition_service, ghost_service, module_service
from services import fplinalg_service as la
from services import stable_service

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 3 ** 8
RESIDUE_TRIALS = 16


def _coordinates(mats, stable, p):
    """Coordinates in the reduced stable basis of maps given as matrices"""
    flat = np.stack([mat.reshape(-1) for mat in mats]) % p
    reduced = la.reduce_modulo(flat, stable.phom_rows, p)
    basis = np.stack([f.mat.reshape(-1) for f in stable.basis])
    coords = la.solve_left(basis, reduced, p)
    if coords is None:
        raise ModuleError("map does not lie in the stable Hom space")
    return coords


def stable_end_algebra(m):
    """
    [m, m] with its multiplication table ("basis[i] then basis[j]").

    Returns:
        StableEndAlgebra: radical left unset
    """
    p = m.p
    stable = stable_service.stable_hom(m, m)
    d = stable.dim
    if d == 0:
        raise ModuleError(f"{m.label or 'module'} is projective, its stable End is zero")
    mats = [f.mat for f in stable.basis]
    products = [la.mat_mul(a, b, p) for a in mats for b in mats]
    table = _coordinates(products, stable, p).reshape(d, d, d)
    unit = _coordinates([np.eye(m.dim, dtype=np.int64)], stable, p)[0]
    return StableEndAlgebra(m, stable.basis, table, unit)


def _right_mult(algebra, c):
    """Matrix of x -> x * c on coordinate rows"""
    return np.tensordot(algebra.table, c, axes=([1], [0])) % algebra.module.p


def _is_nilpotent(algebra, c):
    return not np.any(la.mat_power(_right_mult(algebra, c), algebra.dim, algebra.module.p))


def _is_unit(algebra, c):
    return la.is_invertible(_right_mult(algebra, c), algebra.module.p)


def _product(algebra, a, b):
    return np.tensordot(np.tensordot(a, algebra.table, axes=([0], [0])), b, axes=([0], [0])) % algebra.module.p


def _exhaustive_radical(algebra):
    p, d = algebra.module.p, algebra.dim
    nilpotent = []
    units = 0
    for coeffs in itertools.product(range(p), repeat=d):
        c = np.array(coeffs, dtype=np.int64)
        if _is_nilpotent(algebra, c):
            nilpotent.append(c)
        elif _is_unit(algebra, c):
            units += 1
    radical = la.row_basis(la.as_rows(nilpotent, d), p)
    if len(nilpotent) != p ** radical.shape[0] or len(nilpotent) + units != p ** d:
        raise CertificationError(f"stable End of {algebra.module.label or 'module'} is not local")
    return radical


def _ideal_closure(algebra, rows):
    p, d = algebra.module.p, algebra.dim
    span = la.row_basis(la.as_rows(rows, d), p)
    units = np.eye(d, dtype=np.int64)
    while True:
        grown = [span]
        for r in span:
            for e in units:
                grown.append(_product(algebra, r, e).reshape(1, -1))
                grown.append(_product(algebra, e, r).reshape(1, -1))
        new_span = la.row_basis(np.concatenate(grown, axis=0), p)
        if new_span.shape[0] == span.shape[0]:
            return new_span
        span = new_span


def _ideal_is_nilpotent(algebra, ideal):
    p, d = algebra.module.p, algebra.dim
    power = ideal
    for _ in range(d + 1):
        if power.shape[0] == 0:
            return True
        products = [_product(algebra, a, b) for a in power for b in ideal]
        power = la.row_basis(la.as_rows(products, d), p)
    return power.shape[0] == 0


def _residue_is_field(algebra, ideal, seed):
    """A random element whose induced action on End/J has an irreducible characteristic polynomial of full degree"""
    p, d = algebra.module.p, algebra.dim
    comp = la.complement_rows(ideal, d, p)
    e = comp.shape[0]
    free_cols = [int(np.nonzero(row)[0][0]) for row in comp]
    x = symbols('x')
    rng = np.random.default_rng(seed)
    for _ in range(RESIDUE_TRIALS):
        c = rng.integers(0, p, size=d)
        moved = la.reduce_modulo(la.mat_mul(comp, _right_mult(algebra, c), p), ideal, p)
        induced = moved[:, free_cols]
        poly = Poly(Matrix(induced.tolist()).charpoly(x).as_expr(), x, modulus=p)
        if poly.degree() == e and poly.is_irreducible:
            return True
    return e == 1


def stable_end_radical(m, seed=0):
    """
    J of the local ring [m, m].

    Exhaustive nilpotency enumeration when p^dim <= 3^8; otherwise the
    ideal generated by the nilpotent shifts e_i - λ1 of the basis, checked
    to be nilpotent with a field as quotient.

    Returns:
        StableEndAlgebra: with ``radical`` and ``method`` set
    """
    if not m.certified_indecomposable:
        raise CertificationError(f"{m.label or 'module'} carries no certified indecomposability flag")
    algebra = stable_end_algebra(m)
    p, d = m.p, algebra.dim
    if p ** d <= EXHAUSTIVE_LIMIT:
        algebra.radical = _exhaustive_radical(algebra)
        algebra.method = 'exhaustive'
        return algebra
    seeds = []
    for i in range(d):
        for scalar in range(p):
            c = np.zeros(d, dtype=np.int64)
            c[i] = 1
            c = (c - scalar * algebra.unit) % p
            if _is_nilpotent(algebra, c):
                seeds.append(c)
    ideal = _ideal_closure(algebra, seeds)
    if ideal.shape[0] == d or not _ideal_is_nilpotent(algebra, ideal) or not _residue_is_field(algebra, ideal, seed):
        raise CertificationError(f"could not certify the radical of stable End({m.label or 'module'})")
    logger.debug(f"Stable End of dim {d} has radical of dim {ideal.shape[0]} by closure")
    algebra.radical = ideal
    algebra.method = 'closure'
    return algebra


def _check_non_projective(m):
    if m.dim == 0 or decomposition_service.free_rank(m) > 0:
        raise ModuleError(f"{m.label or 'module'} is projective")


def almost_zero_space(m, seed=0):
    """
    Rows spanning {γ in [m, Ωm] : j then γ stably trivial for all j in J}.

    Returns:
        tuple: (StableHom [m, Ωm], coefficient rows in its basis)
    """
    _check_non_projective(m)
    algebra = stable_end_radical(m, seed=seed)
    omega_m = stable_service.omega(m, 1)
    target = stable_service.stable_hom(m, omega_m)
    if target.dim == 0:
        raise CertificationError(f"[{m.label}, Ω{m.label}] is zero")
    radical = algebra.radical_maps()
    if not radical:
        return target, np.eye(target.dim, dtype=np.int64)
    p = m.p
    blocks = []
    for j in radical:
        flat = np.stack([la.mat_mul(j.mat, g.mat, p).reshape(-1) for g in target.basis])
        blocks.append(la.reduce_modulo(flat, target.phom_rows, p))
    solutions = la.row_basis(la.left_kernel(np.concatenate(blocks, axis=1), p), p)
    return target, solutions


def almost_zero_map(m, seed=0):
    """
    The almost zero map γ: m -> Ωm, stably non-trivial and killed by J.

    The first row of the reduced solution space is taken, so the choice is
    deterministic; γ is unique only up to automorphism.

    Returns:
        GMap: reduced modulo PHom
    """
    target, solutions = almost_zero_space(m, seed=seed)
    if solutions.shape[0] == 0:
        raise CertificationError(f"no almost zero map out of {m.label or 'module'}")
    mats = np.stack([g.mat for g in target.basis])
    gamma = GMap(m, target.cod, np.tensordot(solutions[0], mats, axes=1) % m.p)
    return stable_service.reduce_map(gamma)


def heart(m, seed=0):
    """
    A-R triangle Ω²m -> H(m) -> m -> Ωm.

    E = {(x, v) in P(Ωm) ⊕ m : π(x) = γ(v)} sits in 0 -> Ω²m -> E -> m -> 0,
    and H(m) is E with its free summands stripped.

    Returns:
        ARTriangle
    """
    p = m.p
    gamma = almost_zero_map(m, seed=seed)
    omega_m = gamma.cod
    cover = stable_service.projective_cover(omega_m)
    total, injections, projections = module_service.direct_sum([cover.cover, m])
    stacked = np.concatenate([cover.surj.mat, (-gamma.mat) % p], axis=0)
    middle, middle_incl = module_service.sub_or_quotient(total, la.left_kernel(stacked, p), 'sub')
    omega2_rows = cover.incl.then(injections[0]).mat
    coords = la.solve_left(middle_incl.mat, omega2_rows, p)
    if coords is None:
        raise ModuleError("Ω²m does not land in the pullback")
    alpha0 = GMap(cover.kernel, middle, coords)
    beta0 = middle_incl.then(projections[1])
    stable_service.check_exact(alpha0, beta0)
    split = decomposition_service.strip_free(middle)
    core = type(split.core)(m.group, p, split.core.action, label=f"H({m.label})")
    alpha = GMap(cover.kernel, core, alpha0.then(split.proj).mat)
    beta = GMap(core, m, la.mat_mul(split.incl.mat, beta0.mat, p))
    logger.debug(f"Heart of {m.label}: dim {core.dim}, stripped free rank {split.free_rank}")
    return ARTriangle(m, gamma, core, alpha, beta, omega_m, cover.kernel, middle, split.free_rank)


def factors_stably(f, g):
    """Whether f: A -> C equals h then g modulo PHom(A, C) for some h: A -> B"""
    if g.cod is not f.cod:
        raise ModuleError("maps do not share a codomain")
    p = f.p
    rows = [stable_service.phom_rows(f.dom, f.cod)]
    candidates = module_service.hom_space(f.dom, g.dom)
    if candidates:
        rows.append(np.stack([h.then(g).mat.reshape(-1) for h in candidates]))
    return la.in_span(f.mat.reshape(1, -1), np.concatenate(rows, axis=0), p)


def is_split_epi(f):
    """Stably split epic: the identity of cod factors through f"""
    return factors_stably(module_service.identity_map(f.cod), f)


def check_right_almost_split(beta, testers, seed=0, trials=decomposition_service.DEFAULT_TRIALS):
    """
    Every non split-epic stable map from a tester into cod(beta) factors
    through beta.

    The testers are extended by cod, Ω cod and Ω⁻¹ cod; for a tester
    isomorphic to cod only the maps through J are required to factor.
    """
    cod = beta.cod
    if cod.dim == 0 or is_split_epi(beta):
        return False
    pool = [decomposition_service.strip_free(t).core for t in testers]
    pool += [cod, stable_service.omega(cod, 1), stable_service.omega(cod, -1)]
    radical = None
    if cod.certified_indecomposable:
        radical = radical_maps(cod, seed)
    for tester in pool:
        if tester.dim == 0:
            continue
        iso = None
        if radical is not None:
            iso = decomposition_service.find_isomorphism(tester, cod, seed=seed, trials=trials)
        if iso is not None:
            maps = [iso.then(j) for j in radical]
        else:
            maps = [f for f in stable_service.stable_hom(tester, cod).basis if not is_split_epi(f)]
        for f in maps:
            if not factors_stably(f, beta):
                logger.debug(f"A map {tester.label} -> {cod.label} does not factor through beta")
                return False
    return True


def radical_maps(m, seed=0):
    """Maps spanning J of [m, m]"""
    return stable_end_radical(m, seed=seed).radical_maps()


def verify_triangle(tri, seed=0):
    """
    Checks on a computed triangle.

    Returns:
        dict: gamma_nontrivial, kills_radical, composites_vanish
    """
    kills = all(stable_service.is_stably_trivial(j.then(tri.gamma))
                for j in radical_maps(tri.m, seed))
    composites = (stable_service.is_stably_trivial(tri.alpha.then(tri.beta))
                  and stable_service.is_stably_trivial(tri.beta.then(tri.gamma)))
    return {
        'gamma_nontrivial': not stable_service.is_stably_trivial(tri.gamma),
        'kills_radical': kills,
        'composites_vanish': composites,
    }


def kills_maps_from(gamma, modules):
    """Whether f then gamma is stably trivial for every stable basis map f: T -> dom(gamma)"""
    for tester in modules:
        for f in stable_service.stable_hom(tester, gamma.dom).basis:
            if not stable_service.is_stably_trivial(f.then(gamma)):
                return False
    return True


def irreducible_maps(tri, seed=0, trials=decomposition_service.DEFAULT_TRIALS):
    """
    Irreducible maps into m: each summand of H(m) composed with beta.

    Returns:
        list of (summand GModule, GMap)
    """
    result = []
    for part in decomposition_service.decompose(tri.heart, seed=seed, trials=trials).parts:
        for embedding in part.embeddings:
            result.append((part.module, embedding.then(tri.beta)))
    return result


def heart_length_window(tri, seed=0, **bounds_kwargs):
    """
    Ghost length bounds of m and H(m) and, when both are tight,
    whether they differ by at most one.

    Returns:
        tuple: (LengthBounds of m, LengthBounds of H(m), bool or None)
    """
    m_bounds = ghost_service.ghost_length_bounds(
        tri.m, witnesses=ghost_service.auto_witnesses(tri.m), seed=seed, **bounds_kwargs)
    h_bounds = ghost_service.ghost_length_bounds(
        tri.heart, witnesses=ghost_service.auto_witnesses(tri.heart), seed=seed, **bounds_kwargs)
    if not (m_bounds.conclusive and h_bounds.conclusive):
        return m_bounds, h_bounds, None
    return m_bounds, h_bounds, abs(h_bounds.upper - m_bounds.upper) <= 1
