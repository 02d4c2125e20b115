"""
Group construction and subgroup/quotient service
"""
import logging
import re
from functools import reduce

import numpy as np

from models.errors import GroupError
from models.group import FiniteGroup, SubgroupEmbedding

logger = logging.getLogger(__name__)

MAX_ORDER = 64

_group_cache = {}


def _prime_power(n):
    """Return (p, r) with n = p**r, or None"""
    if n == 1:
        return None, 0
    p = next(d for d in range(2, n + 1) if n % d == 0)
    r, m = 0, n
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise GroupError(f"order {n} is not a prime power")
    return p, r


def _inverse_table(mul):
    rows, cols = np.nonzero(mul == 0)
    inv = np.empty(mul.shape[0], dtype=np.int64)
    inv[rows] = cols
    return inv


def _closure(mul, gens):
    """Indices of the subgroup generated by gens, sorted"""
    elements = {0}
    frontier = [0]
    gens = [int(g) for g in gens]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = int(mul[a, g])
                if b not in elements:
                    elements.add(b)
                    new.append(b)
        frontier = new
    return sorted(elements)


def validate_group(mul, generators):
    """
    Exhaustively check the group axioms on a multiplication table.

    Args:
        mul: n x n table of element indices, element 0 the identity
        generators: list of (name, index)

    Returns:
        tuple: (prime or None, inverse table)
    """
    n = mul.shape[0]
    if n > MAX_ORDER:
        raise GroupError(f"group order {n} exceeds {MAX_ORDER}")
    idx = np.arange(n)
    if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
        raise GroupError("element 0 is not an identity")
    for row in mul:
        if len(set(row.tolist())) != n:
            raise GroupError("multiplication table is not a Latin square")
    left = mul[mul[:, :, None], idx[None, None, :]]
    right = mul[idx[:, None, None], mul[None, :, :]]
    if not np.array_equal(left, right):
        raise GroupError("multiplication is not associative")
    prime, _ = _prime_power(n)
    if len(_closure(mul, [g for _, g in generators])) != n:
        raise GroupError("generators do not generate the group")
    return prime, _inverse_table(mul)


def _make_group(name, mul, generators, labels, cyclic_factors=None):
    mul = np.asarray(mul, dtype=np.int64)
    prime, inv = validate_group(mul, generators)
    group = FiniteGroup(
        name=name,
        mul=mul,
        inv=inv,
        generators=tuple(generators),
        labels=tuple(labels),
        prime=prime,
        cyclic_factors=cyclic_factors,
    )
    logger.debug(f"Built group {name} of order {group.order}")
    return group


def cyclic_group(n):
    """C_n with generator g; element k is g^k"""
    n = int(n)
    if n < 1:
        raise GroupError(f"cyclic order must be positive, got {n}")
    _prime_power(n)
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    labels = ['1'] + [('g' if k == 1 else f"g^{k}") for k in range(1, n)]
    generators = [('g', 1 % n)] if n > 1 else []
    factors = (('g', n),) if n > 1 else ()
    return _make_group(f"cyclic({n})", mul, generators, labels, factors)


def product_group(*factors):
    """
    Direct product; generator names get the 1-based factor position as suffix.

    Element indices are row-major in the factor indices (last factor fastest).
    """
    if not factors:
        return cyclic_group(1)
    orders = tuple(f.order for f in factors)
    n = int(np.prod(orders))
    comps = np.unravel_index(np.arange(n), orders)
    parts = tuple(f.mul[c[:, None], c[None, :]] for f, c in zip(factors, comps))
    mul = np.ravel_multi_index(parts, orders)

    def embed(position, element):
        coords = [0] * len(factors)
        coords[position] = element
        return int(np.ravel_multi_index(tuple(coords), orders))

    generators = []
    cyclic = []
    for pos, f in enumerate(factors):
        for gen_name, g in f.generators:
            generators.append((f"{gen_name}{pos + 1}", embed(pos, g)))
        if f.cyclic_factors is not None and cyclic is not None:
            cyclic.extend((f"{gen_name}{pos + 1}", order) for gen_name, order in f.cyclic_factors)
        else:
            cyclic = None
    labels = []
    for a in range(n):
        coords = [int(c[a]) for c in comps]
        shown = [f.labels[c] for f, c in zip(factors, coords)]
        labels.append('1' if a == 0 else '(' + ', '.join(shown) + ')')
    name = 'product(' + ','.join(f.name for f in factors) + ')'
    return _make_group(name, mul, generators, labels, tuple(cyclic) if cyclic is not None else None)


def dihedral_group(order):
    """
    D_{4q} = <x, y | x^2 = y^2 = 1, (xy)^q = (yx)^q>.

    Elements are r^a s^e with r = xy, s = x, stored at index a + 2q*e.
    """
    order = int(order)
    if order % 4:
        raise GroupError(f"dihedral order must be 4q, got {order}")
    q = order // 4
    if q & (q - 1):
        raise GroupError(f"dihedral(4q) needs q a power of 2, got q={q}")
    m = 2 * q
    a = np.arange(order) % m
    e = np.arange(order) // m
    sign = np.where(e[:, None] == 1, -1, 1)
    rot = (a[:, None] + sign * a[None, :]) % m
    refl = (e[:, None] + e[None, :]) % 2
    mul = rot + m * refl
    labels = []
    for k in range(order):
        power = '' if a[k] == 0 else ('(xy)' if a[k] == 1 else f"(xy)^{a[k]}")
        labels.append((power + ('x' if e[k] else '')) or '1')
    generators = [('x', m), ('y', (m - 1) + m)]
    return _make_group(f"dihedral({order})", mul, generators, labels)


def quaternion_group():
    """Q_8 = {±1, ±i, ±j, ±ij}; index = unit + 4*(sign is -1), ε = -1 at index 4"""
    # unit products: (sign, unit) for 1, i, j, k
    table = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    mul = np.zeros((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sign, unit = table[(a % 4, b % 4)]
            sign = (sign + a // 4 + b // 4) % 2
            mul[a, b] = unit + 4 * sign
    labels = ['1', 'i', 'j', 'ij', 'ε', 'εi', 'εj', 'εij']
    return _make_group('quaternion8', mul, [('i', 1), ('j', 2)], labels)


_SHORTHAND = re.compile(r'^(C\d+(?:x\d+|xC\d+)*)$|^D(\d+)$|^Q8$')


def _expand_shorthand(text):
    if text == 'Q8':
        return 'quaternion8'
    if text.startswith('D') and text[1:].isdigit():
        return f"dihedral({text[1:]})"
    orders = [part.lstrip('C') for part in text.split('x')]
    if len(orders) == 1:
        return f"cyclic({orders[0]})"
    return 'product(' + ','.join(f"cyclic({o})" for o in orders) + ')'


def _split_args(text):
    args, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == ',' and depth == 0:
            args.append(text[start:k].strip())
            start = k + 1
    tail = text[start:].strip()
    if tail:
        args.append(tail)
    return args


def _parse(text):
    text = text.strip()
    if _SHORTHAND.match(text):
        text = _expand_shorthand(text)
    if text == 'quaternion8':
        return quaternion_group()
    match = re.match(r'^(cyclic|dihedral|product)\((.*)\)$', text)
    if not match:
        raise GroupError(f"cannot parse group expression {text!r}")
    head, body = match.groups()
    if head == 'product':
        return product_group(*[_parse(arg) for arg in _split_args(body)])
    if not body.strip().isdigit():
        raise GroupError(f"{head} expects an integer argument, got {body!r}")
    return cyclic_group(int(body)) if head == 'cyclic' else dihedral_group(int(body))


def build_group(expr):
    """
    Build a validated group from an expression.

    Args:
        expr: 'cyclic(n)', 'product(e, e, ...)', 'dihedral(4q)', 'quaternion8'
              or the shorthands 'C9', 'C3xC3', 'D8', 'Q8'

    Returns:
        FiniteGroup
    """
    key = re.sub(r'\s+', '', expr)
    if key not in _group_cache:
        _group_cache[key] = _parse(key)
    return _group_cache[key]


def center(g):
    """Indices of central elements"""
    return [z for z in g.elements if np.array_equal(g.mul[z, :], g.mul[:, z])]


def is_central(g, x):
    return bool(np.array_equal(g.mul[x, :], g.mul[:, x]))


def subgroup(g, gens):
    """
    Subgroup generated by ``gens`` with left-coset representatives.

    Returns:
        SubgroupEmbedding
    """
    gens = [int(x) for x in gens]
    elements = _closure(g.mul, gens)
    position = {a: k for k, a in enumerate(elements)}
    sub_mul = np.array([[position[int(g.mul[a, b])] for b in elements] for a in elements], dtype=np.int64)
    sub_gens = [(g.labels[x], position[x]) for x in gens if x != g.identity]
    labels = [g.labels[a] for a in elements]
    cyclic = None
    if len(sub_gens) == 1:
        cyclic = ((sub_gens[0][0], len(elements)),)
    name = f"{g.name}<{','.join(g.labels[x] for x in gens)}>"
    sub = _make_group(name, sub_mul, sub_gens, labels, cyclic)

    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps = []
    members = np.array(elements, dtype=np.int64)
    for a in g.elements:
        if coset_of[a] >= 0:
            continue
        coset = g.mul[a, members]
        coset_of[coset] = len(reps)
        reps.append(int(coset.min()))
    # reps are discovered in increasing order of their smallest element
    return SubgroupEmbedding(
        sub=sub,
        ambient=g,
        map=members,
        coset_reps=tuple(reps),
        coset_of=coset_of,
        sub_index=position,
    )


def is_normal(e):
    g = e.ambient
    members = set(e.map.tolist())
    for a in g.elements:
        for h in e.map:
            conj = int(g.mul[g.mul[a, h], g.inv[a]])
            if conj not in members:
                return False
    return True


def quotient(g, normal):
    """
    Quotient G/N for a normal subgroup N.

    Returns:
        tuple: (FiniteGroup, projection array from G indices to G/N indices)
    """
    if normal.ambient is not g:
        raise GroupError("subgroup does not belong to this group")
    if not is_normal(normal):
        raise GroupError(f"{normal.sub.name} is not normal in {g.name}")
    reps = normal.coset_reps
    projection = normal.coset_of.copy()
    mul = np.array([[projection[g.mul[a, b]] for b in reps] for a in reps], dtype=np.int64)
    generators = [(name, int(projection[x])) for name, x in g.generators if projection[x] != 0]
    labels = [g.labels[a] for a in reps]
    name = f"{g.name}/{normal.sub.name}"
    return _make_group(name, mul, generators, labels), projection


def element_from_word(g, text):
    """
    Parse a product of generator names, labels or powers such as 'g1^2*g2', 'xy', 'ε'.
    """
    text = text.strip().replace(' ', '')
    if text in ('1', 'e', ''):
        return g.identity
    if text in g.labels:
        return g.labels.index(text)
    names = sorted([name for name, _ in g.generators], key=len, reverse=True)
    token = re.compile('(' + '|'.join(re.escape(n) for n in names) + r'|ε)(?:\^(-?\d+))?') if names else None
    result, pos = g.identity, 0
    while pos < len(text):
        if text[pos] == '*':
            pos += 1
            continue
        match = token.match(text, pos) if token else None
        if not match:
            raise GroupError(f"cannot parse element {text!r} of {g.name}")
        name, exponent = match.groups()
        base = g.labels.index('ε') if name == 'ε' else g.generator(name)
        result = int(g.mul[result, g.power(base, int(exponent) if exponent else 1)])
        pos = match.end()
    return result


def element_product(g, elements):
    return reduce(lambda a, b: int(g.mul[a, b]), elements, g.identity)
