"""
Ghost service

Window ghost tests, windowed universal ghosts, Lemma-style socle/radical
checks and certified bounds on ghost length and on the ghost number of kG.

Upper bounds only ever use the safe direction "true ghosts are window
ghosts"; true ghostness is only claimed through theorem certificates.
"""
import logging
from functools import lru_cache

import numpy as np

from models.errors import CertificationError, ModuleError
from models.ghost import GhostCertificate, GroupBounds, LengthBounds, QuotientChain, UniversalGhost
from models.module import GMap
from services import construction_service, decomposition_service, group_service, module_service
from services import fplinalg_service as la
from services import stable_service

logger = logging.getLogger(__name__)

DEFAULT_DIM_BUDGET = 400
DEFAULT_SHIFTS = 2


@lru_cache(maxsize=64)
def group_radical_length(group, p):
    """Radical length of kG (its nilpotency index)"""
    return module_service.radical_length(module_service.regular_module(group, p))


def default_window(group, p):
    return 2 * group_radical_length(group, p)


def default_nmax(group, p):
    return group_radical_length(group, p)


def _folding_period(group, p, window):
    """Period of k when it is at most the window, else None"""
    return stable_service.period(group, p, limit=max(window, 1))


def window_degrees(group, p, window):
    """Degrees |i| <= window, folded modulo the period of k when it is periodic"""
    if group.order == 1:
        return [0]
    period = _folding_period(group, p, window)
    if period is not None:
        return list(range(period))
    return list(range(-window, window + 1))


def _degree_rings(group, p, window):
    """
    Window degrees grouped by distance from 0, nearest first; with folding
    degree i stands for i - P as well and sits in ring min(i, P - i).
    """
    period = _folding_period(group, p, window) if group.order > 1 else None
    rings = {}
    for i in window_degrees(group, p, window):
        rings.setdefault(min(i, period - i) if period else abs(i), []).append(i)
    return sorted(rings.items())


def _composite_rows(a, sigmas, p):
    """Flattened composites t then sigma, t in Hom(a, dom sigma), one block per sigma"""
    rows, homs_by_source = [], {}
    for sigma in sigmas:
        key = id(sigma.dom)
        if key not in homs_by_source:
            homs_by_source[key] = module_service.hom_space(a, sigma.dom)
        ts = homs_by_source[key]
        if ts:
            rows.append(np.stack([la.mat_mul(t.mat, sigma.mat, p).reshape(-1) for t in ts]))
    return rows


def _uncovered(m, i, kept):
    """Stable basis maps Ω^i k -> m that are not stably sums of t then sigma over ``kept``"""
    p = m.p
    source = stable_service.sphere(m.group, p, i)
    basis = stable_service.stable_hom(source, m).basis
    if not basis or not kept:
        return list(basis)
    span = la.row_basis(np.concatenate(
        [stable_service.phom_rows(source, m)] + _composite_rows(source, kept, p), axis=0), p)
    fresh = []
    for f in basis:
        row = f.mat.reshape(1, -1)
        if span.shape[0] and la.in_span(row, span, p):
            continue
        fresh.append(f)
        span = la.row_basis(np.concatenate([span, row], axis=0), p)
    return fresh


def _cofibre_growth(source):
    return stable_service.injective_hull(source).hull.dim - source.dim


def window_sigmas(m, window, budget=None):
    """
    Sphere maps Ω^i k -> m whose cofibre is the universal window ghost.

    Degrees are visited nearest to 0 first. A stable basis map is kept
    only when it is not stably a sum of t then sigma over the maps kept so
    far, since a map out of m that kills the kept maps kills those sums
    too. With a ``budget`` the window is cut back to the widest W' whose
    cofibre stays within ``budget`` dimensions.

    Returns:
        tuple: (sigmas, W'), W' None when not even degree 0 fits
    """
    kept, size, reached = [], m.dim, None
    for radius, degrees in _degree_rings(m.group, m.p, window):
        ring = []
        for i in degrees:
            ring.extend(_uncovered(m, i, kept + ring))
        growth = sum(_cofibre_growth(s.dom) for s in ring)
        if budget is not None and size + growth > budget:
            logger.info(f"Window cut from {window} to {reached}: a cofibre of dim {size + growth} "
                        f"would exceed {budget} dimensions")
            return kept, reached
        kept.extend(ring)
        size += growth
        reached = radius
    return kept, window


def is_window_ghost(f, window):
    """
    True iff every stable map Ω^i k -> dom(f), |i| <= window, dies after f.
    """
    if f.is_zero():
        return True
    m = f.dom
    for i in window_degrees(m.group, m.p, window):
        source = stable_service.sphere(m.group, m.p, i)
        basis = stable_service.stable_hom(source, m).basis
        if basis and not stable_service.are_stably_trivial([b.then(f) for b in basis]):
            return False
    return True


def soc_rad_check(f, minimize=False):
    """
    (soc(dom) ⊆ ker f, im f ⊆ rad(cod)) for projective-free dom and cod.

    With ``minimize`` each inclusion is asked of some representative
    f + h, h in PHom, instead of f itself.

    Returns:
        tuple: (kills_socle, lands_in_radical)
    """
    m, n, p = f.dom, f.cod, f.p
    if not (decomposition_service.is_projective_free(m) and decomposition_service.is_projective_free(n)):
        raise ModuleError("soc_rad_check needs projective-free domain and codomain")
    soc = module_service.socle(m)
    rad = module_service.radical(n)
    beyond_rad = la.nullspace(rad, p).T if rad.shape[0] else np.eye(n.dim, dtype=np.int64)
    kills = not np.any(la.mat_mul(soc, f.mat, p))
    lands = not np.any(la.mat_mul(f.mat, beyond_rad, p))
    if minimize and not (kills and lands):
        phom = [g.mat for g in stable_service.stable_hom(m, n).phom_basis]
        kills = kills or _representative_exists(f.mat, phom, lambda mat: la.mat_mul(soc, mat, p), p)
        lands = lands or _representative_exists(f.mat, phom, lambda mat: la.mat_mul(mat, beyond_rad, p), p)
    return kills, lands


def _representative_exists(mat, phom, constraint, p):
    """Is constraint(mat + h) = 0 for some h in span(phom)? (constraint is linear)"""
    if not phom:
        return False
    rows = np.stack([constraint(h).reshape(-1) for h in phom])
    target = (-constraint(mat).reshape(1, -1)) % p
    return la.solve_left(rows, target, p) is not None


def _cofibre(sigma, label=''):
    """
    Cofibre phi: m -> U of sigma: F -> m, with U = coker(F -> m ⊕ I(F)),
    free summands stripped.
    """
    m, source = sigma.cod, sigma.dom
    hull = stable_service.injective_hull(source)
    total, injections, _ = module_service.direct_sum([m, hull.hull])
    embed = np.concatenate([sigma.mat, hull.inj.mat], axis=1)
    cone, quotient = module_service.sub_or_quotient(total, embed, 'quotient')
    split = decomposition_service.strip_free(cone)
    phi = injections[0].then(quotient).then(split.proj)
    target = split.core
    target = type(target)(target.group, target.p, target.action, label=label or f"U({m.label})")
    return GMap(m, target, phi.mat)


def _assemble_sigma(m, sigmas):
    """The map ⊕ Ω^i k -> m stacked from the given stable basis maps"""
    source, _, _ = module_service.direct_sum([s.dom for s in sigmas], group=m.group, p=m.p)
    mat = np.concatenate([s.mat for s in sigmas], axis=0) if sigmas else np.zeros((0, m.dim), dtype=np.int64)
    return GMap(source, m, mat)


def universal_window_ghost(m, window, budget=None):
    """
    Windowed universal ghost out of m.

    Returns:
        UniversalGhost: phi: m -> U, the cofibre of sigma: ⊕ Ω^i k -> m
        over the sphere maps of window_sigmas; every window ghost out of m
        factors through phi. With a ``budget`` the certificate carries the
        narrowed window.
    """
    if m.dim == 0:
        ident = module_service.identity_map(m)
        return UniversalGhost(m, m, ident, ident, GhostCertificate.by_window(ident, window))
    sigmas, reached = window_sigmas(m, window, budget)
    if reached is None:
        raise ModuleError(f"no window keeps the cofibre of {m.label or 'the module'} within {budget} dimensions")
    sigma = _assemble_sigma(m, sigmas)
    if sigma.dom.dim == 0:
        phi = module_service.identity_map(m)
    else:
        phi = _cofibre(sigma)
    logger.debug(f"Universal window ghost {m.dim} -> {phi.cod.dim} from a sphere sum of dim {sigma.dom.dim}")
    return UniversalGhost(m, phi.cod, phi, sigma, GhostCertificate.by_window(phi, reached))


def _factors_through_sigmas(psi, sigmas):
    """Is psi: A -> U stably of the form sum sigma_j t_j with t_j: A -> dom(sigma_j)?"""
    a, u, p = psi.dom, psi.cod, psi.p
    rows = [stable_service.phom_rows(a, u)] + _composite_rows(a, sigmas, p)
    spanning = np.concatenate(rows, axis=0)
    if spanning.shape[0] == 0:
        return psi.is_zero()
    return la.in_span(psi.mat.reshape(1, -1), spanning, p)


def iterated_universal_bound(m, window, nmax, budget=DEFAULT_DIM_BUDGET):
    """
    Smallest n <= nmax whose n-fold iterated universal window ghost out of
    m is stably trivial.

    The n-fold composite psi_n = phi_n psi_{n-1} vanishes stably exactly
    when psi_{n-1} factors through the sphere sum sigma_n, so each step is
    decided before its cofibre is built. Each cofibre is kept within
    ``budget`` dimensions by narrowing the window, and so is the growth
    the last step would add. True ghosts are window ghosts for every
    window, so the bound stays sound.

    Returns:
        tuple: (n or None, narrowest window used)
    """
    current = decomposition_service.strip_free(m).core
    if current.dim == 0:
        return 0, window
    psi = module_service.identity_map(current)
    used = window
    for n in range(1, nmax + 1):
        last = n == nmax
        # the last cofibre is never built, only its growth counts
        sigmas, reached = window_sigmas(current, used, budget + current.dim if last else budget)
        if reached is None:
            logger.info(f"Universal iteration stopped at step {n}: no window fits {budget} dimensions")
            return None, used
        used = reached
        if _factors_through_sigmas(psi, sigmas):
            return n, used
        if last:
            break
        phi = _cofibre(_assemble_sigma(current, sigmas)) if sigmas else module_service.identity_map(current)
        psi = psi.then(phi)
        current = phi.cod
    return None, used


def socle_length_upper(m):
    """Socle length of the projective-free part"""
    return module_service.radical_length(decomposition_service.strip_free(m).core)


def unstable_socle_length(m):
    """Socle length of m itself, the length for the unstable projective class"""
    return module_service.radical_length(m)


def shifted_socle_bound(m, shifts=DEFAULT_SHIFTS):
    """
    min over |j| <= shifts of soclen(Ω^j m); gl is invariant under Ω.

    Returns:
        tuple: (bound, shift achieving it)
    """
    best, best_shift = None, 0
    for j in sorted(range(-shifts, shifts + 1), key=abs):
        value = module_service.radical_length(stable_service.omega(m, j))
        if best is None or value < best:
            best, best_shift = value, j
    return best, best_shift


def unstable_quotient_chain(m):
    """
    M -> M/soc(M) -> ... down to 0 with the composite projections out of M
    and whether each is stably non-trivial.

    Returns:
        QuotientChain
    """
    modules, projections, nontrivial = [m], [], []
    current, composite = m, module_service.identity_map(m)
    while current.dim:
        quotient, proj = module_service.sub_or_quotient(current, module_service.socle(current), 'quotient')
        composite = composite.then(proj)
        modules.append(quotient)
        projections.append(composite)
        nontrivial.append(not stable_service.is_stably_trivial(composite))
        current = quotient
    return QuotientChain(modules, projections, nontrivial)


def central_witness_chain(m, x):
    """
    Longest stably non-trivial power of the central ghost x - 1 on m.

    Returns:
        GhostCertificate or None: composite of theorem certificates
    """
    witness = construction_service.central_mult_ghost(m, x)
    best = None
    power = witness.map
    for length in range(1, module_service.radical_length(m) + 1):
        if stable_service.is_stably_trivial(power):
            break
        best = length
        power = power.then(witness.map)
    if best is None:
        return None
    return GhostCertificate.composite([witness.cert] * best, notes=f"({m.group.label(x)}-1)^{best}")


def auto_witnesses(m):
    """Longest central witness chain over all non-identity central elements"""
    chains = []
    for x in group_service.center(m.group):
        if x == m.group.identity:
            continue
        chain = central_witness_chain(m, x)
        if chain is not None:
            chains.append(chain)
    return sorted(chains, key=lambda c: -c.length)[:1]


def _witness_lower(m, witnesses, seed, trials):
    lower, best = 1, None
    for cert in witnesses:
        if not cert.is_theorem:
            raise CertificationError("lower-bound witnesses must be composites of theorem-certified ghosts")
        dom = cert.payload.dom
        if dom is not m and not decomposition_service.is_isomorphic(dom, m, seed=seed, trials=trials):
            raise CertificationError(f"witness starts at {dom.label or 'another module'}, not at {m.label}")
        if stable_service.is_stably_trivial(cert.payload):
            continue
        if 1 + cert.length > lower:
            lower, best = 1 + cert.length, cert
    return lower, best


def _part_upper(part, window, nmax, budget, shifts):
    best, method = module_service.radical_length(part), 'socle_bound'
    if shifts and best > 1:
        shifted, j = shifted_socle_bound(part, shifts)
        if shifted < best:
            best, method = shifted, f"shifted_socle({j})"
    if best > 1 and nmax:
        iterated, used = iterated_universal_bound(part, window, min(nmax, best - 1), budget)
        if iterated is not None and iterated < best:
            best, method = iterated, f"universal_iteration({used})"
    return best, method


def ghost_length_bounds(m, window=None, nmax=None, witnesses=(), budget=DEFAULT_DIM_BUDGET,
                        seed=0, shifts=DEFAULT_SHIFTS, split=True, trials=decomposition_service.DEFAULT_TRIALS):
    """
    Certified bounds lower <= gl(m) <= gel(m) <= upper.

    Args:
        m: GModule
        window: sphere window W (default 2 * radical length of kG)
        nmax: iteration cap (default radical length of kG)
        witnesses: GhostCertificates of theorem-certified composites out of m
        budget: largest cofibre dimension the iteration may build
        seed: seed for the decomposition into parts
        trials: random endomorphisms tried per splitting or isomorphism search
        shifts: Ω shifts tried by the shifted socle bound
        split: bound each indecomposable part separately

    Returns:
        LengthBounds
    """
    group, p = m.group, m.p
    window = window if window is not None else default_window(group, p)
    nmax = nmax if nmax is not None else default_nmax(group, p)
    core = decomposition_service.strip_free(m).core
    if core.dim == 0:
        return LengthBounds(m, 0, 0, None, 'projective', window, nmax)
    lower, witness = _witness_lower(m, witnesses, seed, trials)
    parts = [core]
    notes = []
    if split:
        decomposition = decomposition_service.decompose(core, seed=seed, trials=trials)
        parts = [part.module for part in decomposition.parts]
        if len(parts) > 1:
            notes.append(f"bounded {len(parts)} summand types separately ({decomposition.flag})")
    upper, method = 0, 'socle_bound'
    for part in parts:
        value, part_method = _part_upper(part, window, nmax, budget, shifts)
        if value > upper:
            upper, method = value, part_method
    if len(parts) > 1:
        method = f"max over parts ({method})"
    bounds = LengthBounds(m, lower, upper, witness, method, window, nmax, notes)
    if not bounds.consistent:
        logger.warning(f"Inconsistent ghost bounds for {m.label}: lower {lower} > upper {upper}")
        bounds.notes.append('inconsistent: lower exceeds upper')
    return bounds


def order_lower_bound(p, r):
    """Ghost number lower bound (r - 1)(p - 1) + 1 for groups of order p^r"""
    return (r - 1) * (p - 1) + 1


def _cyclic_bounds(group, p):
    order = group.order
    d = order // 2 if order % 2 == 0 else (order - 1) // 2
    d = max(d, 1)
    m = construction_service.cyclic_module(group, d)
    gen = group.generator(group.cyclic_factors[0][0])
    witness = central_witness_chain(m, gen) if d > 1 else None
    lower = 1 + (witness.length if witness else 0)
    upper = 0
    for n in range(1, order):
        value, _ = shifted_socle_bound(construction_service.cyclic_module(group, n), shifts=1)
        upper = max(upper, value)
    return lower, f"({group.label(gen)}-1)^{d - 1} on M_{d}", witness, [(upper, 'cyclic_enumeration')]


def _abelian_bounds(group, p):
    factors = sorted(group.cyclic_factors, key=lambda f: f[1])
    smallest = factors[0][1]
    first = smallest // 2 if smallest % 2 == 0 else (smallest - 1) // 2
    first = max(first, 1)
    dims = [first if name == factors[0][0] else order for name, order in group.cyclic_factors]
    theta = construction_service.abelian_theta(group, dims, p)
    lower, witness = 1, None
    if theta.cert is not None and not stable_service.is_stably_trivial(theta.theta):
        lower, witness = 1 + theta.factors, theta.cert
    uppers = []
    if len(factors) == 2:
        small, large = factors[0][1], factors[1][1]
        if small == 3:
            uppers.append((large, 'theorem:rank_two_abelian'))
        elif small > 2:
            uppers.append((small + large - 3, 'theorem:rank_two_abelian'))
    return lower, f"θ on {theta.module.label}", witness, uppers


def _dihedral_bounds(group, p):
    q = group.order // 4
    xy = group_service.element_product(group, [group.generator('x'), group.generator('y')])
    e = group_service.subgroup(group, [xy])
    witness = construction_service.right_mult_ghost(e, q, p)
    word = [group.generator('x'), group.generator('y')] * (q // 2)
    cert = construction_service.right_mult_composite(witness, word)
    lower = 1 + cert.length if not stable_service.is_stably_trivial(cert.payload) else 1
    return lower, "R_((x-1)(y-1))^(q/2) on N", cert, [(q + 1, 'theorem:dihedral')]


def _quaternion_bounds(group, p):
    eps = group.labels.index('ε')
    e = group_service.subgroup(group, [eps])
    witness = construction_service.right_mult_ghost(e, 1, p)
    cert = construction_service.right_mult_composite(witness, [group.generator('i'), group.generator('j')])
    lower = 1 + cert.length if not stable_service.is_stably_trivial(cert.payload) else 1
    return lower, "R_((i+1)(j+1)) on kV", cert, []


def group_ghost_bounds(group, p=None):
    """
    Bounds on the ghost number of kG.

    Lower bounds come from certified witness composites checked stably
    non-trivial here. The upper bound is the least computed one, from the
    radical length of kG or the enumeration of cyclic modules. Published
    theorems (tagged 'theorem:<name>') are reported next to it as
    ``theorem_upper`` and never replace it.

    Returns:
        GroupBounds
    """
    p = p or group.prime
    if group.order == 1:
        return GroupBounds(group, p, 0, 0, 'semisimple', ['semisimple'])
    uppers = [(group_radical_length(group, p) - 1, 'radical_length')]
    if group.cyclic_factors is not None and len(group.cyclic_factors) == 1:
        lower, lower_method, witness, extra = _cyclic_bounds(group, p)
    elif group.cyclic_factors is not None and group.is_abelian():
        lower, lower_method, witness, extra = _abelian_bounds(group, p)
    elif group.name.startswith('dihedral'):
        lower, lower_method, witness, extra = _dihedral_bounds(group, p)
    elif group.name == 'quaternion8':
        lower, lower_method, witness, extra = _quaternion_bounds(group, p)
    else:
        lower, lower_method, witness, extra = 1, 'identity of k', None, []
    uppers.extend(extra)
    computed = [(value, tag) for value, tag in uppers if not tag.startswith('theorem:')]
    theorems = [(value, tag) for value, tag in uppers if tag.startswith('theorem:')]
    upper = min(value for value, _ in computed)
    methods = [tag for value, tag in computed if value == upper]
    bounds = GroupBounds(group, p, lower, upper, lower_method, methods, witness)
    if theorems:
        bounds.theorem_upper = min(value for value, _ in theorems)
        bounds.theorem_methods = [tag for value, tag in theorems if value == bounds.theorem_upper]
        if not lower <= bounds.theorem_upper <= upper:
            logger.warning(f"Theorem upper {bounds.theorem_upper} for k{group.name} lies outside "
                           f"the computed bounds [{lower}, {upper}]")
    logger.info(f"Ghost number of k{group.name} over F_{p}: [{lower}, {upper}] via {', '.join(methods)}"
                + (f", theorem upper {bounds.theorem_upper}" if bounds.theorem_upper is not None else ''))
    return bounds
