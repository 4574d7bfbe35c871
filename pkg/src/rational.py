from __future__ import print_function, division

from fractions import Fraction

import numpy as np


class SingularMatrix(ArithmeticError):
    pass


def as_fraction(x):
    """ exact conversion of ints, Fractions, "p/q" and decimal strings """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError('not a rational number: ' + repr(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        # go through the shortest repr so 0.1 means 1/10
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError('not a rational number: ' + repr(x))


def format_fraction(x):
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return '{}/{}'.format(x.numerator, x.denominator)


def fraction_vector(xs):
    return tuple(as_fraction(x) for x in xs)


def fraction_matrix(rows):
    rows = [[as_fraction(x) for x in row] for row in rows]
    n = len(rows)
    m = len(rows[0]) if n > 0 else 0
    M = np.empty((n, m), dtype=object)
    for i in range(n):
        if len(rows[i]) != m:
            raise ValueError('ragged matrix rows')
        M[i, :] = rows[i]
    return M


def zeros(n, m):
    M = np.empty((n, m), dtype=object)
    M.fill(Fraction(0))
    return M


def identity_matrix(n):
    M = zeros(n, n)
    for i in range(n):
        M[i, i] = Fraction(1)
    return M


def dot(u, v):
    s = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            s += a*b
    return s


def matmul(A, B):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    n, m = A.shape
    m2, p = B.shape
    assert m == m2
    C = zeros(n, p)
    for i in range(n):
        row = A[i]
        nz = [j for j in range(m) if row[j] != 0]
        for j in nz:
            a = row[j]
            C[i, :] += a*B[j, :]
    return C


def _integer_rows(M):
    """ scale each row by the lcm of its denominators, returns (int matrix, scale) """
    n = M.shape[0]
    A = np.empty(M.shape, dtype=object)
    scale = Fraction(1)
    for i in range(n):
        lcm = 1
        for x in M[i]:
            d = Fraction(x).denominator
            lcm = lcm*d//_gcd(lcm, d)
        A[i, :] = [int(Fraction(x)*lcm) for x in M[i]]
        scale *= lcm
    return A, scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss_determinant(M):
    """
    Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; every intermediate entry is then a minor
    of the scaled matrix, so all divisions below are exact.
    """
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError('determinant of a non-square matrix')
    if n == 0:
        return Fraction(1)

    A, scale = _integer_rows(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k, k] == 0:
            # pivot: first row below with a nonzero entry in column k
            nz = [i for i in range(k + 1, n) if A[i, k] != 0]
            if len(nz) == 0:
                return Fraction(0)
            i = nz[0]
            A[[k, i]] = A[[i, k]]
            sign = -sign
        pivot = A[k, k]
        sub = A[k+1:, k+1:]
        col = A[k+1:, k]
        row = A[k, k+1:]
        A[k+1:, k+1:] = (pivot*sub - np.multiply.outer(col, row)) // prev
        A[k+1:, k] = 0
        prev = pivot
    return Fraction(sign*A[n-1, n-1]) / scale


class LU:
    """ exact LU factorization with row pivoting, P A = L U """
    def __init__(self, L, U, perm, sign=1):
        self.L = L
        self.U = U
        self.perm = perm
        self.sign = sign
        self.n = len(perm)

    def determinant(self):
        d = Fraction(self.sign)
        for i in range(self.n):
            d *= self.U[i][i]
        return d

    def solve(self, b):
        return lu_solve(self, b)


def lu_factor(M):
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError('LU of a non-square matrix')
    U = [[Fraction(x) for x in M[i]] for i in range(n)]
    L = [dict() for _ in range(n)]
    perm = list(range(n))
    sign = 1
    for k in range(n):
        p = None
        for i in range(k, n):
            if U[i][k] != 0:
                p = i
                break
        if p is None:
            raise SingularMatrix('matrix is not invertible (no pivot in column {})'.format(k))
        if p != k:
            U[k], U[p] = U[p], U[k]
            L[k], L[p] = L[p], L[k]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        pivot = U[k][k]
        urow = U[k]
        cols = [j for j in range(k + 1, n) if urow[j] != 0]
        for i in range(k + 1, n):
            a = U[i][k]
            if a == 0:
                continue
            f = a / pivot
            L[i][k] = f
            row = U[i]
            row[k] = Fraction(0)
            for j in cols:
                row[j] -= f*urow[j]
    return LU(L, U, perm, sign)


def lu_solve(lu, b):
    """ solve A x = b for one right-hand side (sequence) or several (2-d array columns) """
    b = np.asarray(b, dtype=object)
    if b.ndim == 2:
        cols = [lu_solve(lu, b[:, j]) for j in range(b.shape[1])]
        X = zeros(lu.n, b.shape[1])
        for j, x in enumerate(cols):
            X[:, j] = x
        return X
    n = lu.n
    y = [Fraction(b[lu.perm[i]]) for i in range(n)]
    for i in range(n):
        for j, f in lu.L[i].items():
            if y[j] != 0:
                y[i] -= f*y[j]
    x = [Fraction(0)]*n
    for i in range(n - 1, -1, -1):
        s = y[i]
        row = lu.U[i]
        for j in range(i + 1, n):
            if row[j] != 0 and x[j] != 0:
                s -= row[j]*x[j]
        x[i] = s / row[i]
    return np.array(x, dtype=object)


def determinant(M):
    """ determinant through the sparse LU; cheap for block triangular matrices """
    try:
        return lu_factor(M).determinant()
    except SingularMatrix:
        return Fraction(0)


def inverse_matrix(M):
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    lu = lu_factor(M)
    return lu_solve(lu, identity_matrix(n))


def row_echelon(M):
    """
    Reduced row echelon form of a rational matrix.
    Returns (R, pivot columns, free columns).
    """
    m = [[Fraction(x) for x in row] for row in np.asarray(M, dtype=object)]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows > 0 else 0
    pivots = []
    free_vars = []
    piv_r = 0
    for piv_c in range(n_cols):
        i_row = None
        for i in range(piv_r, n_rows):
            if m[i][piv_c] != 0:
                i_row = i
                break
        if i_row is None:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        m[piv_r] = [x / fp for x in m[piv_r]]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [a - fr*b for a, b in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
    return m, pivots, free_vars


def null_space(M, n_cols=None):
    """ basis of {x : M x = 0}, one vector per free column of the RREF """
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        n = n_cols if n_cols is not None else M.shape[1]
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    R, pivots, free_vars = row_echelon(M)
    n = M.shape[1]
    basis = []
    for c in free_vars:
        x = [Fraction(0)]*n
        x[c] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -R[r][c]
        basis.append(tuple(x))
    return basis


def rank(M):
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    _, pivots, _ = row_echelon(M)
    return len(pivots)


def float_matrix(M):
    return np.array([[float(x) for x in row] for row in np.asarray(M, dtype=object)], dtype=np.float64)
