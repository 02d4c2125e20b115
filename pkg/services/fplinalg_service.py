"""
Exact linear algebra over F_p

Array-level helpers (suffix-free names taking ``(array, p)``) do the work;
``rref``, ``kernel_basis`` and ``solve`` wrap them for FpMatrix values.
All vectors are rows and matrices act on the right.
"""
import numpy as np

from models.matrix import FpMatrix


def as_array(a, p):
    """Copy ``a`` into a reduced int64 array"""
    return np.array(a, dtype=np.int64) % p


def as_rows(rows, d):
    """Rows as a (k, d) int64 array, also for empty input"""
    arr = np.asarray(rows, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, d), dtype=np.int64)
    return arr.reshape(-1, d)


def mat_mul(a, b, p):
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def mat_power(a, k, p):
    """a**k mod p by repeated squaring"""
    result = np.eye(a.shape[0], dtype=np.int64)
    base = as_array(a, p)
    while k > 0:
        if k & 1:
            result = mat_mul(result, base, p)
        base = mat_mul(base, base, p)
        k >>= 1
    return result


def row_reduce(a, p):
    """
    Reduced row echelon form.

    Args:
        a: 2-d array
        p: prime modulus

    Returns:
        tuple: (reduced array, rank, list of pivot columns)
    """
    a = as_array(a, p)
    if a.ndim != 2:
        a = a.reshape(0, 0) if a.size == 0 else a.reshape(1, -1)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        column = a[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            a[targets] = (a[targets] - np.outer(column[targets], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank_of(a, p):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return row_reduce(a, p)[1]


def row_basis(a, p):
    """Reduced basis of the row space (rows of the rref)"""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] == 0:
        cols = a.shape[1] if a.ndim == 2 else 0
        return np.zeros((0, cols), dtype=np.int64)
    reduced, rank, _ = row_reduce(a, p)
    return reduced[:rank]


def nullspace(a, p):
    """Rows spanning {x : a x^T = 0}"""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    reduced, rank, pivots = row_reduce(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if rank:
            basis[:, pivots] = (-reduced[:rank][:, free].T) % p
    return basis


def left_kernel(m, p):
    """Rows spanning {v : v m = 0}"""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[1] == 0:
        return np.eye(m.shape[0], dtype=np.int64)
    return nullspace(m.T, p)


def solve_left(a, b, p):
    """
    Solve x a = b.

    Returns:
        array or None: one solution, or None when the system is inconsistent
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.shape[0]
    if b.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    if n == 0:
        return np.zeros((b.shape[0], 0), dtype=np.int64) if not np.any(b % p) else None
    augmented = np.concatenate([a.T, b.T], axis=1)
    reduced, rank, pivots = row_reduce(augmented, p)
    if pivots and pivots[-1] >= n:
        return None
    x_t = np.zeros((n, b.shape[0]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x_t[c] = reduced[i, n:]
    return x_t.T % p


def inverse(a, p):
    """Inverse of a square matrix, or None when singular"""
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    reduced, rank, _ = row_reduce(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if rank < n or not np.array_equal(reduced[:, :n], np.eye(n, dtype=np.int64)):
        return None
    return reduced[:, n:]


def is_invertible(a, p):
    return a.shape[0] == a.shape[1] and rank_of(a, p) == a.shape[0]


def reduce_modulo(vectors, basis, p):
    """
    Remainders of ``vectors`` modulo the span of ``basis``.

    ``basis`` must be in reduced row echelon form (as from row_basis).
    """
    vectors = np.asarray(vectors, dtype=np.int64) % p
    if basis.shape[0] == 0:
        return vectors
    pivots = [int(np.nonzero(row)[0][0]) for row in basis]
    return (vectors - vectors[:, pivots] @ basis) % p


def in_span(vectors, basis, p):
    """True when every row of ``vectors`` lies in the row space of ``basis``"""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if vectors.shape[0] == 0:
        return True
    reduced = row_basis(basis, p)
    return not np.any(reduce_modulo(vectors, reduced, p))


def complement_rows(basis, n, p):
    """Unit rows completing the span of ``basis`` to F_p^n"""
    reduced = row_basis(basis, p) if basis.shape[0] else basis
    pivots = {int(np.nonzero(row)[0][0]) for row in reduced}
    free = [c for c in range(n) if c not in pivots]
    comp = np.zeros((len(free), n), dtype=np.int64)
    comp[np.arange(len(free)), free] = 1
    return comp


def intersect(a, b, p):
    """Basis of rowspace(a) ∩ rowspace(b)"""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    stacked = np.concatenate([a, b], axis=0)
    relations = left_kernel(stacked, p)
    if relations.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    return row_basis(mat_mul(relations[:, :a.shape[0]], a, p), p)


def rref(m):
    """Reduced row echelon form of an FpMatrix: (reduced, rank, pivot columns)"""
    reduced, rank, pivots = row_reduce(m.entries, m.p)
    return FpMatrix(m.p, reduced), rank, pivots


def kernel_basis(m):
    """Basis of {v : v m = 0} as the rows of an FpMatrix"""
    return FpMatrix(m.p, left_kernel(m.entries, m.p))


def solve(a, b):
    """Any x with x a = b, or None"""
    x = solve_left(a.entries, b.entries, a.p)
    if x is None:
        return None
    return FpMatrix(a.p, x)
