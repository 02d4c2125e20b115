"""
String and band module service

Words are parsed and validated here, turned into Λ-matrices (X, Y) and
only then converted to group modules: over D_4q through x = 1 + X,
y = 1 + Y, and over C_p x C_p for Λ' = Λ/(XY, YX) through g1 = 1 + X,
g2 = 1 + Y.
"""
import itertools
import logging
import re

import numpy as np
from sympy import Poly, symbols, sympify

from models.errors import ExactnessError, WordError
from models.word import BandDescriptor, LambdaModule, PeakSplit, Word
from services import fplinalg_service as la
from services import module_service

logger = logging.getLogger(__name__)

_EXPONENT = re.compile(r'⁻¹|\^\{?(-?)([0-9]+|[a-z]+(?:[/+\-*][0-9]+)?)\}?')
_VARIABLE = re.compile(r'^([a-z]+)(?:([/+\-*])([0-9]+))?$')


def _evaluate(token, variables):
    if token.isdigit():
        return int(token)
    match = _VARIABLE.match(token)
    if not match or match.group(1) not in (variables or {}):
        raise WordError(f"unknown exponent {token!r}")
    value = int(variables[match.group(1)])
    op, operand = match.group(2), match.group(3)
    if op == '/':
        if value % int(operand):
            raise WordError(f"{token} is not an integer for {match.group(1)}={value}")
        return value // int(operand)
    if op == '+':
        return value + int(operand)
    if op == '-':
        return value - int(operand)
    if op == '*':
        return value * int(operand)
    return value


def _read_exponent(text, pos, variables):
    match = _EXPONENT.match(text, pos)
    if not match:
        return 1, pos
    if match.group(0) == '⁻¹':
        return -1, match.end()
    sign = -1 if match.group(1) else 1
    return sign * _evaluate(match.group(2), variables), match.end()


def _parse_sequence(text, pos, variables):
    letters = []
    while pos < len(text) and text[pos] != ')':
        ch = text[pos]
        if ch == '(':
            inner, pos = _parse_sequence(text, pos + 1, variables)
            if pos >= len(text) or text[pos] != ')':
                raise WordError(f"unbalanced parenthesis in {text!r}")
            exponent, pos = _read_exponent(text, pos + 1, variables)
            letters.extend(Word(tuple(inner)).power(exponent).letters)
        elif ch in 'ab':
            exponent, pos = _read_exponent(text, pos + 1, variables)
            if exponent not in (1, -1):
                raise WordError(f"letter {ch} with exponent {exponent} breaks alternation")
            letters.append((ch, exponent))
        else:
            raise WordError(f"unexpected {ch!r} at position {pos} of {text!r}")
    return letters, pos


def check_alternating(word, cyclic=False):
    letters = list(word)
    pairs = list(zip(letters, letters[1:]))
    if cyclic and len(letters) > 1:
        pairs.append((letters[-1], letters[0]))
    for (first, _), (second, _) in pairs:
        if first == second:
            raise WordError(f"{word} does not alternate between a and b")
    return word


def parse_word(text, variables=None):
    """
    Parse 'ab⁻¹a⁻¹', 'ab^-1a^-1' or '(ab)^q(ba)^-q' style words.

    Args:
        text: word text; '' or '1' is the empty word
        variables: values for symbolic exponents such as q or q/2

    Returns:
        Word
    """
    text = re.sub(r'\s+', '', text)
    if text in ('', '1'):
        return Word()
    letters, pos = _parse_sequence(text, 0, variables)
    if pos != len(text):
        raise WordError(f"unbalanced parenthesis in {text!r}")
    return check_alternating(Word(tuple(letters)))


def _smallest_period(word):
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word.letters == word.letters[:d] * (n // d):
            return d
    return n


def band_descriptor(word, auto=None, p=2, auto_certified=False):
    """Validate a band: even non-zero length, cyclically alternating, not a proper power"""
    if isinstance(word, str):
        word = parse_word(word)
    if len(word) == 0 or len(word) % 2:
        raise WordError(f"band word {word} must have even non-zero length")
    check_alternating(word, cyclic=True)
    if _smallest_period(word) != len(word):
        raise WordError(f"band word {word} is a proper power")
    auto = np.eye(1, dtype=np.int64) if auto is None else np.asarray(auto, dtype=np.int64) % p
    if auto.ndim != 2 or auto.shape[0] != auto.shape[1] or not la.is_invertible(auto, p):
        raise WordError("band automorphism must be an invertible square matrix")
    return BandDescriptor(word, auto, auto_certified)


def companion(poly, p):
    """
    Companion matrix of a monic polynomial in x over F_p.

    Returns:
        tuple: (matrix, certified) with certified True when the polynomial
        is a power of an irreducible one, so the matrix is indecomposable
    """
    x = symbols('x')
    expr = sympify(poly.replace('^', '**')) if isinstance(poly, str) else poly
    f = Poly(expr, x, modulus=p)
    if f.degree() < 1:
        raise WordError(f"companion polynomial {poly} must have positive degree")
    coeffs = [int(c) % p for c in f.all_coeffs()]
    lead_inv = pow(coeffs[0], -1, p)
    coeffs = [(c * lead_inv) % p for c in coeffs]
    d = f.degree()
    if coeffs[-1] == 0:
        raise WordError(f"{poly} has root 0, its companion matrix is not invertible")
    mat = np.zeros((d, d), dtype=np.int64)
    mat[np.arange(d - 1), np.arange(1, d)] = 1
    mat[d - 1, :] = [(-c) % p for c in reversed(coeffs[1:])]
    _, factors = f.factor_list()
    return mat, len(factors) == 1


def string_matrices(word, p=2, multiplicity=1):
    """
    M(C) for C = l_1 ... l_n on z_0 .. z_n (each vertex k^multiplicity):
    a direct letter l_i sends z_i to z_(i-1), an inverse one z_(i-1) to z_i.

    Returns:
        LambdaModule
    """
    d = multiplicity
    n = len(word)
    size = (n + 1) * d
    mats = {'a': np.zeros((size, size), dtype=np.int64), 'b': np.zeros((size, size), dtype=np.int64)}
    eye = np.eye(d, dtype=np.int64)
    for i, (name, exp) in enumerate(word.letters, start=1):
        src, dst = (i, i - 1) if exp > 0 else (i - 1, i)
        mats[name][src * d:(src + 1) * d, dst * d:(dst + 1) * d] = eye
    return LambdaModule(p, mats['a'], mats['b'], label=f"M({word})", certified_indecomposable=d == 1)


def band_matrices(desc, p=2):
    """
    M(C, φ) on V_0 .. V_(n-1): letter l_i carries f_i (f_1 = φ, the rest
    the identity); a direct letter acts V_i -> V_(i-1) by f_i, an inverse
    one V_(i-1) -> V_i by f_i^-1, indices mod n.

    Returns:
        LambdaModule
    """
    d, n = desc.multiplicity, len(desc.word)
    size = n * d
    mats = {'a': np.zeros((size, size), dtype=np.int64), 'b': np.zeros((size, size), dtype=np.int64)}
    eye = np.eye(d, dtype=np.int64)
    phi = desc.auto % p
    phi_inv = la.inverse(phi, p)
    for i, (name, exp) in enumerate(desc.word.letters, start=1):
        if exp > 0:
            src, dst, block = i % n, i - 1, phi if i == 1 else eye
        else:
            src, dst, block = i - 1, i % n, phi_inv if i == 1 else eye
        mats[name][src * d:(src + 1) * d, dst * d:(dst + 1) * d] = block
    certified = d == 1 or desc.auto_certified
    return LambdaModule(p, mats['a'], mats['b'], label=f"M({desc.word}, φ)", certified_indecomposable=certified)


def max_runs(letters):
    """Longest runs of consecutive direct and of consecutive inverse letters"""
    best = {1: 0, -1: 0}
    run, kind = 0, None
    for _, exp in letters:
        run = run + 1 if exp == kind else 1
        kind = exp
        best[exp] = max(best[exp], run)
    return best[1], best[-1]


def admissible_string(word, q):
    """No (ab)^q, (ba)^q or inverses as subwords"""
    direct, inverse = max_runs(word.letters)
    return direct < 2 * q and inverse < 2 * q


def alternating_words(max_length, min_length=1):
    """Every alternating word over a, b with min_length <= length <= max_length"""
    for length in range(min_length, max_length + 1):
        for first, second in (('a', 'b'), ('b', 'a')):
            for exps in itertools.product((1, -1), repeat=length):
                yield Word(tuple(((first, second)[i % 2], exp) for i, exp in enumerate(exps)))


def admissible_words(q, max_length, pairs=False):
    """
    Admissible string words over D_4q up to ``max_length`` letters.

    With ``pairs`` only one word of each {C, C⁻¹} is kept, the one with the
    smaller sort key.
    """
    words = [w for w in alternating_words(max_length) if admissible_string(w, q)]
    if pairs:
        words = [w for w in words if w.sort_key() <= w.inverse().sort_key()]
    return words


def _is_projective_band(word, q):
    target = Word((('a', 1), ('b', 1)) * q) + Word((('a', -1), ('b', -1)) * q)
    candidates = [word.rotate(k) for k in range(len(word))]
    candidates += [word.inverse().rotate(k) for k in range(len(word))]
    return any(c.letters == target.letters for c in candidates)


def band_admissibility(desc, q):
    """
    'b' when no power of the cyclic word contains (ab)^q, (ba)^q or their
    inverses, 'c' for the projective band (ab)^q(ba)^-q with φ = id on
    k, None otherwise.

    Every subword of length 2q of a power of C already occurs in C^k with
    k = ceil(2q / |C|) + 1, so scanning that power is complete.
    """
    word = desc.word
    k = -(-2 * q // len(word)) + 1
    direct, inverse = max_runs(word.power(k).letters)
    if direct < 2 * q and inverse < 2 * q:
        return 'b'
    if (desc.multiplicity == 1 and int(desc.auto[0, 0]) == 1 and _is_projective_band(word, q)):
        return 'c'
    return None


def extend_to_group(group, generator_mats, p, label='', certified=False):
    """
    Build every element action from generator matrices by breadth-first
    search, A(s g) = A(g) A(s); raises WordError when a relation fails.
    """
    d = next(iter(generator_mats.values())).shape[0]
    action = np.zeros((group.order, d, d), dtype=np.int64)
    known = np.zeros(group.order, dtype=bool)
    action[group.identity] = np.eye(d, dtype=np.int64)
    known[group.identity] = True
    frontier = [group.identity]
    while frontier:
        grown = []
        for g in frontier:
            for s, mat in generator_mats.items():
                h = int(group.mul[s, g])
                candidate = la.mat_mul(action[g], mat, p)
                if not known[h]:
                    action[h] = candidate
                    known[h] = True
                    grown.append(h)
                elif not np.array_equal(action[h], candidate):
                    raise WordError(f"{label or 'module'} does not satisfy the relations of {group.name}")
        frontier = grown
    return module_service.make_module(group, p, action, label=label, certified=certified, validate=False)


def _dihedral_q(group):
    if not group.name.startswith('dihedral'):
        raise WordError(f"{group.name} is not a dihedral 2-group")
    return group.order // 4


def to_dihedral(lm, group):
    """D_4q-module with x = 1 + X and y = 1 + Y"""
    _dihedral_q(group)
    eye = np.eye(lm.dim, dtype=np.int64)
    gens = {group.generator('x'): (eye + lm.x) % 2, group.generator('y'): (eye + lm.y) % 2}
    return extend_to_group(group, gens, 2, label=lm.label, certified=lm.certified_indecomposable)


def string_module(word, q=None, group=None, p=2):
    """
    M(C) as Λ-matrices, or over D_4q when q (or a dihedral group) is given.

    Returns:
        LambdaModule or GModule
    """
    if isinstance(word, str):
        word = parse_word(word, {'q': q} if q else None)
    lm = string_matrices(word, p)
    if group is None and q is None:
        return lm
    group = group or _dihedral_group(q)
    q = _dihedral_q(group)
    if not admissible_string(word, q):
        raise WordError(f"{word} contains (ab)^{q}, (ba)^{q} or an inverse of them")
    return to_dihedral(lm, group)


def band_module(desc, q=None, group=None):
    """
    M(C, φ) as Λ-matrices, or over D_4q when q (or a dihedral group) is given.

    Returns:
        LambdaModule or GModule
    """
    lm = band_matrices(desc, 2)
    if group is None and q is None:
        return lm
    group = group or _dihedral_group(q)
    q = _dihedral_q(group)
    if band_admissibility(desc, q) is None:
        raise WordError(f"band {desc.word} is not admissible for q={q}")
    return to_dihedral(lm, group)


def _dihedral_group(q):
    from services import group_service
    return group_service.build_group(f"dihedral({4 * q})")


def lambda_prime_module(obj, group, p=None):
    """
    A Λ'-module (XY = YX = 0) as a C_p x C_p-module with g1 = 1 + X, g2 = 1 + Y.

    Args:
        obj: Word, BandDescriptor or LambdaModule
        group: product of two cyclic groups of order p
    """
    p = p or group.prime
    if isinstance(obj, Word):
        lm = string_matrices(obj, p)
    elif isinstance(obj, BandDescriptor):
        lm = band_matrices(obj, p)
    else:
        lm = obj
    if np.any(la.mat_mul(lm.x, lm.y, p)) or np.any(la.mat_mul(lm.y, lm.x, p)):
        raise WordError(f"{lm.label} is not a Λ'-module: XY or YX is non-zero")
    factors = group.cyclic_factors
    if factors is None or len(factors) != 2 or any(order != p for _, order in factors):
        raise WordError(f"{group.name} is not C_{p} x C_{p}")
    eye = np.eye(lm.dim, dtype=np.int64)
    gens = {group.generator(factors[0][0]): (eye + lm.x) % p, group.generator(factors[1][0]): (eye + lm.y) % p}
    return extend_to_group(group, gens, p, label=lm.label, certified=lm.certified_indecomposable)


def canonical_form(obj, p=2):
    """
    Representative under C ~ C⁻¹ for strings and under rotation plus
    (C, φ) ~ (C⁻¹, φ⁻¹) for bands.

    Returns:
        Word or BandDescriptor
    """
    if isinstance(obj, Word):
        return min(obj, obj.inverse(), key=Word.sort_key)
    word, n = obj.word, len(obj.word)
    phi_inv = la.inverse(obj.auto % p, p)
    candidates = [(word.rotate(k), obj.auto) for k in range(n)]
    candidates += [(word.inverse().rotate(k), phi_inv) for k in range(n)]
    best_word, best_auto = min(candidates, key=lambda c: c[0].sort_key())
    return BandDescriptor(best_word, best_auto, obj.auto_certified)


def same_canonical_form(first, second, p=2):
    a, b = canonical_form(first, p), canonical_form(second, p)
    if isinstance(a, Word) or isinstance(b, Word):
        return isinstance(a, Word) and isinstance(b, Word) and a == b
    return a.word == b.word and np.array_equal(a.auto % p, b.auto % p)


def _string_cuts(word):
    """Vertices z_i with l_i direct and l_(i+1) inverse"""
    return [i for i in range(1, len(word)) if word.is_direct(i - 1) and not word.is_direct(i)]


def _split_string(word, d, p):
    """Inclusion M(C)^d -> ⊕ M(L_t)^d and the cokernel onto k^(d * cuts)"""
    cuts = _string_cuts(word)
    bounds = [0] + cuts + [len(word)]
    pieces = [Word(word.letters[start:end]) for start, end in zip(bounds, bounds[1:])]
    piece_modules = [string_matrices(piece, p, d) for piece in pieces]
    offsets = np.cumsum([0] + [(len(piece) + 1) * d for piece in pieces])
    total = int(offsets[-1])
    eye = np.eye(d, dtype=np.int64)
    incl = np.zeros(((len(word) + 1) * d, total), dtype=np.int64)
    for t, (start, end) in enumerate(zip(bounds, bounds[1:])):
        sign = (-1) ** t
        for v in range(start, end + 1):
            col = offsets[t] + (v - start) * d
            incl[v * d:(v + 1) * d, col:col + d] = sign * eye
    coker = np.zeros((total, len(cuts) * d), dtype=np.int64)
    for c in range(len(cuts)):
        end_row = offsets[c] + len(pieces[c]) * d
        start_row = offsets[c + 1]
        coker[end_row:end_row + d, c * d:(c + 1) * d] = ((-1) ** c) * eye
        coker[start_row:start_row + d, c * d:(c + 1) * d] = -((-1) ** (c + 1)) * eye
    return pieces, piece_modules, incl % p, coker % p


def _block_sum(modules, p):
    size = sum(m.dim for m in modules)
    x = np.zeros((size, size), dtype=np.int64)
    y = np.zeros((size, size), dtype=np.int64)
    offset = 0
    for m in modules:
        x[offset:offset + m.dim, offset:offset + m.dim] = m.x
        y[offset:offset + m.dim, offset:offset + m.dim] = m.y
        offset += m.dim
    label = ' ⊕ '.join(m.label for m in modules)
    return LambdaModule(p, x, y, label=label)


def _open_rotation(word):
    """Rotation with l_n direct and l_1 inverse, or None when the band has no peak"""
    n = len(word)
    for k in range(n):
        rotated = word.rotate(k)
        if rotated.is_direct(n - 1) and not rotated.is_direct(0):
            return rotated
    return None


def split_peaks(obj, p=2):
    """
    Break a string at its peaks ab⁻¹ and ba⁻¹, or open a band at a peak
    first and then break the resulting string.

    Returns:
        PeakSplit: exact at matrix level (see verify_split)
    """
    if isinstance(obj, str):
        obj = parse_word(obj)
    if isinstance(obj, Word):
        source = string_matrices(obj, p)
        pieces, piece_modules, incl, coker = _split_string(obj, 1, p)
        return PeakSplit(source, pieces, _block_sum(piece_modules, p), incl, coker)
    rotated = _open_rotation(obj.word)
    if rotated is None:
        raise WordError(f"band {obj.word} has no peak to open at")
    desc = BandDescriptor(rotated, obj.auto, obj.auto_certified)
    d, n = desc.multiplicity, len(rotated)
    source = band_matrices(desc, p)
    phi = desc.auto % p
    phi_inv = la.inverse(phi, p)
    eye = np.eye(d, dtype=np.int64)
    opening = np.zeros((n * d, (n + 1) * d), dtype=np.int64)
    opening[0:d, 0:d] = phi_inv
    opening[0:d, n * d:(n + 1) * d] = eye
    for i in range(1, n):
        opening[i * d:(i + 1) * d, i * d:(i + 1) * d] = eye
    pieces, piece_modules, incl, coker = _split_string(rotated, d, p)
    middle = _block_sum(piece_modules, p)
    last_sign = (-1) ** (len(pieces) - 1)
    opened = np.zeros((middle.dim, d), dtype=np.int64)
    opened[0:d, :] = phi
    opened[middle.dim - d:middle.dim, :] = -last_sign * eye
    full_coker = np.concatenate([opened % p, coker], axis=1)
    return PeakSplit(source, pieces, middle, la.mat_mul(opening, incl, p), full_coker, opened=rotated)


def verify_split(split):
    """Equivariance, injectivity, surjectivity onto a trivial module and exactness"""
    p = split.source.p
    src, mid, incl, coker = split.source, split.middle, split.incl, split.coker
    for a_src, a_mid in ((src.x, mid.x), (src.y, mid.y)):
        if not np.array_equal(la.mat_mul(a_src, incl, p), la.mat_mul(incl, a_mid, p)):
            return False
        if np.any(la.mat_mul(a_mid, coker, p)):
            return False
    if la.rank_of(incl, p) != src.dim:
        return False
    if coker.shape[1] and la.rank_of(coker, p) != coker.shape[1]:
        return False
    if np.any(la.mat_mul(incl, coker, p)):
        return False
    return src.dim + coker.shape[1] == mid.dim


def split_to_group(split, group):
    """
    The split as GMaps over a dihedral group.

    Returns:
        tuple: (incl: source -> middle, coker: middle -> k^c)
    """
    if not verify_split(split):
        raise ExactnessError("peak split is not exact")
    src = to_dihedral(split.source, group)
    mid = to_dihedral(split.middle, group)
    c = split.cokernel_dim
    trivial = np.zeros((c, c), dtype=np.int64)
    top = to_dihedral(LambdaModule(2, trivial, trivial, label=f"k^{c}"), group) if c else \
        module_service.zero_module(group, 2)
    incl = module_service.make_map(src, mid, split.incl)
    coker = module_service.make_map(mid, top, split.coker)
    return incl, coker
