"""Exact integer and rational linear algebra.

Matrices are lists of rows of Python ints (or Fractions where noted).
Columns and vectors are tuples of ints.  Nothing here ever rounds.
"""
from fractions import Fraction
from math import gcd


class LinalgError(ValueError):
    pass


def xgcd(a, b):
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def content(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive_normalize(v):
    """Divide an integer vector by its content and make the leading entry positive.

    >>> primitive_normalize((2, -4, 6))
    (1, -2, 3)
    >>> primitive_normalize((0, 0, -5))
    (0, 0, 1)
    """
    g = content(v)
    if g == 0:
        raise LinalgError("zero column")
    out = [x // g for x in v]
    for x in out:
        if x:
            if x < 0:
                out = [-y for y in out]
            break
    return tuple(out)


def clear_denominators(v):
    """Scale a rational vector to a primitive-or-not integer vector with the same direction."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return tuple(int(Fraction(x) * den) for x in v)


# -- basic matrix helpers ------------------------------------------------------

def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def from_columns(cols):
    """Rows-of-ints matrix whose columns are ``cols``."""
    cols = list(cols)
    if not cols:
        raise LinalgError("no columns")
    return [list(row) for row in zip(*cols)]


def columns(M):
    return [tuple(col) for col in zip(*M)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[off + i][off:off + len(row)] = row
        off += len(b)
    return out


# -- rank / determinant ----------------------------------------------------------

def _fraction_echelon(M):
    """Row-reduce a copy of M over Q; return (reduced rows, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for j in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][j]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][j] != 0:
                f = A[i][j]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
        if r == nrows:
            break
    return A, pivots


def rank(M):
    """Exact rank over Q of a matrix given as rows."""
    if not M or not M[0]:
        return 0
    return len(_fraction_echelon(M)[1])


def rank_of_columns(cols):
    cols = list(cols)
    if not cols:
        return 0
    return rank(from_columns(cols))


def det(M):
    """Exact determinant as a Fraction (Bareiss elimination for integer input)."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise LinalgError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, int) for row in M for x in row):
        return Fraction(_bareiss(M))
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != j:
            A[j], A[p] = A[p], A[j]
            sign = -sign
        result *= A[j][j]
        for i in range(j + 1, n):
            f = A[i][j] / A[j][j]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[j])]
    return sign * result


def _bareiss(M):
    A = [list(row) for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse(M):
    """Exact inverse over Q; integer matrix returned when the inverse is integral."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = _fraction_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise LinalgError("singular matrix")
    inv = [row[n:] for row in R]
    if all(x.denominator == 1 for row in inv for x in row):
        return [[int(x) for x in row] for row in inv]
    return inv


def solve_in_basis(basis_cols, v):
    """Coordinates of v in the (independent) columns ``basis_cols``; None if v is outside their span."""
    k = len(basis_cols)
    aug = [list(row) for row in zip(*basis_cols, v)]
    R, pivots = _fraction_echelon(aug)
    if k in pivots:
        return None
    if pivots != list(range(k)):
        raise LinalgError("basis columns are dependent")
    return tuple(R[i][k] for i in range(k))


# -- Hermite normal form ---------------------------------------------------------

def echelon_transform(M):
    """Row-style Hermite reduction of an integer matrix of any rank.

    Returns ``(H, U, pivots)`` with ``U`` unimodular and ``U*M == H``; the
    nonzero rows of ``H`` come first, pivot entries are positive and the
    entries above each pivot lie in ``[0, pivot)``.
    """
    H = [list(row) for row in M]
    m = len(H)
    ncols = len(H[0]) if H else 0
    U = identity(m)
    pivots = []
    r = 0
    for j in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][j]
            if b == 0:
                continue
            a = H[r][j]
            if a == 0:
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
                # keep det bookkeeping honest: a swap is compensated by a sign
                H[i] = [-x for x in H[i]]
                U[i] = [-x for x in U[i]]
                continue
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [x * p + y * q for p, q in zip(Hr, Hi)]
            H[i] = [-bg * p + ag * q for p, q in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [x * p + y * q for p, q in zip(Ur, Ui)]
            U[i] = [-bg * p + ag * q for p, q in zip(Ur, Ui)]
        piv = H[r][j]
        if piv == 0:
            continue
        if piv < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for i in range(r):
            q = H[i][j] // piv
            if q:
                H[i] = [p - q * s for p, s in zip(H[i], H[r])]
                U[i] = [p - q * s for p, s in zip(U[i], U[r])]
        pivots.append(j)
        r += 1
    return H, U, pivots


def hnf(M):
    """Hermite normal form ``(H, U)`` of a full-row-rank integer matrix."""
    H, U, pivots = echelon_transform(M)
    if len(pivots) < len(M):
        raise LinalgError("matrix does not have full row rank")
    return H, U


def is_hnf(H):
    r = -1
    for i, row in enumerate(H):
        j = next((c for c, x in enumerate(row) if x), None)
        if j is None:
            if any(any(x for x in later) for later in H[i:]):
                return False
            return True
        if j <= r or row[j] <= 0:
            return False
        if any(not (0 <= H[k][j] < row[j]) for k in range(i)):
            return False
        r = j
    return True


# -- lattices ----------------------------------------------------------------------

def saturate_span(S):
    """Z-basis of span(S) ∩ Z^n for a nonempty list of integer columns S."""
    S = [tuple(v) for v in S]
    if not S or all(not any(v) for v in S):
        raise LinalgError("zero span")
    _, U, pivots = echelon_transform(from_columns(S))
    a = len(pivots)
    Uinv = inverse(U)
    return [primitive_normalize(tuple(Uinv[i][j] for i in range(len(Uinv)))) for j in range(a)]


def is_saturated(B):
    H, _, pivots = echelon_transform(from_columns(B))
    return all(H[i][p] == 1 for i, p in enumerate(pivots))


def complete_to_sl(B, n=None):
    """A matrix gamma in SL_n(Z) with gamma*b in span(e_1..e_a) for every b in B.

    ``B`` is a Z-basis of a saturated rank-a sublattice of Z^n.
    """
    B = [tuple(b) for b in B]
    if n is None:
        n = len(B[0])
    if not B:
        return identity(n)
    H, U, pivots = echelon_transform(from_columns(B))
    a = len(pivots)
    if a != len(B):
        raise LinalgError("basis vectors are dependent")
    if any(H[i][p] != 1 for i, p in enumerate(pivots)):
        raise LinalgError("not saturated")
    if a == n:
        return identity(n)
    if det(U) < 0:
        U[n - 1] = [-x for x in U[n - 1]]
    return U


def plying_matrix(S, n=None):
    """gamma in SL_n(Z) moving the span of the columns S onto span(e_1..e_a); returns (gamma, a)."""
    S = [tuple(v) for v in S]
    if n is None:
        n = len(S[0])
    _, U, pivots = echelon_transform(from_columns(S))
    a = len(pivots)
    if a < n and det(U) < 0:
        U[n - 1] = [-x for x in U[n - 1]]
    elif a == n:
        U = identity(n)
    return U, a
