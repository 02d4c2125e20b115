"""
Report service

Runs the checks of a config row by row. Rows never abort the run: a
library error inside a check becomes an inconclusive row carrying the
error, and the full table is always produced.
"""
import logging
import time
from functools import partial

from models.errors import ConfigError, StmodError
from models.report import INCONCLUSIVE, MATCH, MISMATCH, WITHIN_BOUNDS, Report, ReportRow
from services import ar_service, config_service, decomposition_service, ghost_service, group_service
from services import module_service, word_service

logger = logging.getLogger(__name__)


def derive_status(claimed, lower, upper):
    """
    match: computed equals claimed; within-bounds: computed inside claimed;
    mismatch: disjoint; otherwise inconclusive.
    """
    if claimed is None or lower is None:
        return INCONCLUSIVE
    claimed_upper = claimed.upper if claimed.upper is not None else float('inf')
    if claimed.upper is not None and (lower, upper) == (claimed.lower, claimed.upper):
        return MATCH
    if claimed.lower <= lower and upper <= claimed_upper:
        return WITHIN_BOUNDS
    if upper < claimed.lower or lower > claimed_upper:
        return MISMATCH
    return INCONCLUSIVE


def _holds_status(holds):
    return MATCH if holds else MISMATCH


def _witness_certs(m, option):
    if option in (None, 'auto'):
        return ghost_service.auto_witnesses(m)
    if option == 'none':
        return []
    element = group_service.element_from_word(m.group, option[len('central('):-1])
    chain = ghost_service.central_witness_chain(m, element)
    return [chain] if chain is not None else []


def _series_row(row, check, builder, settings):
    m = builder.module(check.target)
    report = module_service.series(m)
    length = report.radical_length
    row.lower = row.upper = length
    row.details['series'] = report.to_dict()
    row.status = derive_status(check.options.get('claimed'), length, length) if 'claimed' in check.options \
        else MATCH


def _ghost_bounds_row(row, check, builder, settings):
    m = builder.module(check.target)
    bounds = ghost_service.ghost_length_bounds(
        m,
        window=check.options.get('window', settings.get('window')),
        nmax=check.options.get('nmax', settings.get('nmax')),
        witnesses=_witness_certs(m, check.options.get('witnesses')),
        budget=settings.get('dim_budget', ghost_service.DEFAULT_DIM_BUDGET),
        seed=settings.get('seed', 0),
        trials=settings.get('trials', decomposition_service.DEFAULT_TRIALS),
    )
    row.lower, row.upper = bounds.lower, bounds.upper
    row.details['bounds'] = bounds.to_dict()
    if 'claimed' in check.options:
        row.status = derive_status(check.options['claimed'], bounds.lower, bounds.upper)
    else:
        row.status = MATCH if bounds.conclusive else INCONCLUSIVE


def _ar_row(row, check, builder, settings):
    m = builder.module(check.target)
    seed = settings.get('seed', 0)
    trials = settings.get('trials', decomposition_service.DEFAULT_TRIALS)
    tri = ar_service.heart(m, seed=seed)
    checks = ar_service.verify_triangle(tri, seed=seed)
    testers = [builder.module(name) for name in check.options.get('testers', [])]
    checks['right_almost_split'] = ar_service.check_right_almost_split(tri.beta, testers, seed=seed, trials=trials)
    parts = decomposition_service.decompose(tri.heart, seed=seed, trials=trials)
    row.details['triangle'] = tri.to_dict()
    row.details['heart_summands'] = sorted(part.dim for part in parts.modules())
    row.details['checks'] = checks
    row.status = _holds_status(all(checks.values()))


def word_identities(q, seed=0, max_length=8, trials=decomposition_service.DEFAULT_TRIALS):
    """
    kD_4q as the projective band, N = k↑ from the centre as the half
    band, their radical lengths, and M(C) ≅ M(C⁻¹) with dim |C| + 1 for
    every admissible word C of at most ``max_length`` letters.

    Returns:
        dict: name -> bool
    """
    group = group_service.build_group(f"dihedral({4 * q})")
    isomorphic = partial(decomposition_service.is_isomorphic, seed=seed, trials=trials)
    results = {}
    regular = module_service.regular_module(group, 2)
    full = word_service.band_module(word_service.band_descriptor(
        word_service.parse_word('(ab)^q(ba)^-q', {'q': q})), group=group)
    results['regular_is_projective_band'] = isomorphic(regular, full)
    results['regular_radical_length'] = module_service.radical_length(regular) == 2 * q + 1
    if q % 2 == 0:
        centre = group_service.element_product(group, [group.generator('x'), group.generator('y')] * q)
        e = group_service.subgroup(group, [centre])
        induced = module_service.induce(module_service.trivial_module(e.sub, 2), e).module
        half = word_service.band_module(word_service.band_descriptor(
            word_service.parse_word('(ab)^{q/2}(ba)^{-q/2}', {'q': q})), group=group)
        results['induced_is_half_band'] = isomorphic(induced, half)
        results['induced_radical_length'] = module_service.radical_length(induced) == q + 1
    for word in word_service.admissible_words(q, max_length, pairs=True):
        m = word_service.string_module(word, group=group)
        m_inv = word_service.string_module(word.inverse(), group=group)
        results[f"dim M({word})"] = m.dim == m_inv.dim == len(word) + 1
        results[f"M({word}) ≅ M({word.inverse()})"] = isomorphic(m, m_inv)
    return results


def _word_identities_row(row, check, builder, settings):
    results = word_identities(check.options['q'], seed=settings.get('seed', 0),
                             trials=settings.get('trials', decomposition_service.DEFAULT_TRIALS))
    row.details['identities'] = results
    row.status = _holds_status(all(results.values()))


def _group_row(row, check, builder, settings):
    group = builder.group(check.target)
    p = config_service.resolve_prime(builder.config, group)
    bounds = ghost_service.group_ghost_bounds(group, p)
    row.lower, row.upper = bounds.lower, bounds.upper
    row.details['bounds'] = bounds.to_dict()
    if check.kind == 'classification_row' and group.order > 1:
        r = _prime_exponent(group.order, p)
        row.details['order_lower_bound'] = ghost_service.order_lower_bound(p, r)
        row.details['radical_length'] = ghost_service.group_radical_length(group, p)
    row.status = derive_status(check.options.get('claimed'), bounds.lower, bounds.upper)
    if bounds.theorem_upper is not None:
        row.details['theorem_upper'] = bounds.theorem_upper
        row.details['theorem_methods'] = list(bounds.theorem_methods)
        row.details['theorem_status'] = derive_status(check.options.get('claimed'), bounds.lower,
                                                      bounds.theorem_upper)


def _prime_exponent(order, p):
    r = 0
    while order > 1:
        order //= p
        r += 1
    return r


_HANDLERS = {
    'series': _series_row,
    'ghost_bounds': _ghost_bounds_row,
    'ar': _ar_row,
    'word_identities': _word_identities_row,
    'classification_row': _group_row,
    'group_bounds': _group_row,
}


def _subject(check):
    if check.kind == 'word_identities':
        return f"word_identities(q={check.options['q']})"
    return f"{check.kind}({check.target})"


def run_check(config, index, settings=None, builder=None):
    """
    Evaluate one check.

    Returns:
        ReportRow: errors inside the check give an inconclusive row
    """
    settings = settings or {}
    builder = builder or config_service.ModuleBuilder(config)
    check = config.checks[index]
    row = ReportRow(index, _subject(check), check.kind, check.options.get('claimed'),
                    check.options.get('cite', ''))
    start = time.perf_counter()
    try:
        _HANDLERS[check.kind](row, check, builder, settings)
    except ConfigError:
        raise
    except StmodError as e:
        logger.error(f"Check {row.subject} failed: {e}", exc_info=True)
        row.status = INCONCLUSIVE
        row.details['error'] = str(e)
    if settings.get('record_timings'):
        row.runtime_ms = int((time.perf_counter() - start) * 1000)
    logger.info(f"Row {index} {row.subject}: [{row.lower}, {row.upper}] {row.status}")
    return row


def run(config, settings=None, parallel=False):
    """
    Run every check of a config.

    Args:
        config: RunConfig
        settings: dict from load_settings (seed, window, nmax, ...)
        parallel: dispatch rows as a Celery group

    Returns:
        Report: rows ordered by index whatever the completion order
    """
    settings = dict(settings or {})
    settings.setdefault('seed', config.seed if config.seed is not None else 0)
    builder = config_service.ModuleBuilder(config)
    for name in config.modules:
        builder.module(name)
    if parallel and config.checks:
        rows = _run_parallel(config, settings)
    else:
        rows = [run_check(config, index, settings, builder) for index in range(len(config.checks))]
    rows.sort(key=lambda row: row.index)
    return Report(config.name, rows, settings['seed'])


def _run_parallel(config, settings):
    from celery import group as celery_group
    from tasks.report_tasks import run_check_row

    job = celery_group(run_check_row.s(config.text, index, settings, config.name)
                       for index in range(len(config.checks)))
    results = job.apply_async().get()
    rows = []
    for index, data in enumerate(results):
        if 'error' in data and 'subject' not in data:
            check = config.checks[index]
            rows.append(ReportRow(index, _subject(check), check.kind, check.options.get('claimed'),
                                  check.options.get('cite', ''), details={'error': data['error']}))
        else:
            rows.append(ReportRow.from_dict(data))
    return rows


def row_payload(row):
    """Row as a JSON-safe dict for task results"""
    return {
        'index': row.index,
        'subject': row.subject,
        'kind': row.kind,
        'claimed': [row.claimed.lower, row.claimed.upper] if row.claimed is not None else None,
        'citation': row.citation,
        'lower': row.lower,
        'upper': row.upper,
        'status': row.status,
        'runtime_ms': row.runtime_ms,
        'details': _json_safe(row.details),
    }


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    try:
        return int(value)
    except (TypeError, ValueError):
        return str(value)

