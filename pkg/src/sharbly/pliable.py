"""Pliable subsets, plying matrices, shuffles and depth-charts."""
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import LinalgError, matmul, plying_matrix, rank_of_columns


@dataclass(frozen=True)
class PliableSubset:
    indices: tuple      # 0-based, increasing
    shuffle: tuple      # sigma as a tuple: selected indices, then the rest, each increasing
    shuffle_sign: int
    gamma: tuple        # rows of a plying matrix in SL_n(Z)

    def gamma_rows(self):
        return [list(r) for r in self.gamma]


def shuffle_of(indices, total):
    chosen = sorted(indices)
    rest = [i for i in range(total) if i not in set(chosen)]
    return tuple(chosen) + tuple(rest)


def shuffle_sign(indices):
    """Sign of the (k, m)-shuffle that brings the given positions to the front."""
    return -1 if sum(p - i for i, p in enumerate(sorted(indices))) % 2 else 1


class _IncrementalRank:
    """Rank of a growing list of vectors, kept as a rational echelon basis."""

    def __init__(self, basis=(), pivots=()):
        self.basis = list(basis)
        self.pivots = list(pivots)

    def reduce(self, v):
        w = [Fraction(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            if w[p]:
                f = w[p] / row[p]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def with_vector(self, v):
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return self, False
        return _IncrementalRank(self.basis + [w], self.pivots + [p]), True

    def __len__(self):
        return len(self.basis)


def _subsets_of_rank(columns, a, k):
    """k-subsets (as increasing index tuples) whose span has dimension exactly a.

    Depth-first over columns; a branch dies once its rank exceeds a or
    there are not enough columns left to reach size k.
    """
    m = len(columns)
    out = []

    def walk(start, chosen, space):
        if len(chosen) == k:
            if len(space) == a:
                out.append(tuple(chosen))
            return
        for i in range(start, m):
            if m - i < k - len(chosen):
                break
            nxt, grew = space.with_vector(columns[i])
            if grew and len(nxt) > a:
                continue
            chosen.append(i)
            walk(i + 1, chosen, nxt)
            chosen.pop()

    walk(0, [], _IncrementalRank())
    return out


def pliable_subsets(columns, a, k):
    """All k-subsets of ``columns`` spanning an a-dimensional subspace, with shuffles and plying matrices."""
    columns = [tuple(v) for v in columns]
    n = len(columns[0])
    if not 0 < a <= n:
        raise ValueError("need 0 < a <= n")
    gammas = {}
    out = []
    for idx in _subsets_of_rank(columns, a, k):
        S = [columns[i] for i in idx]
        span = _IncrementalRank()
        for v in S:
            span = span.with_vector(v)[0]
        flat = frozenset(i for i, v in enumerate(columns) if not any(span.reduce(v)))
        gamma = gammas.get(flat)
        if gamma is None:
            rows, rank_a = plying_matrix(S, n)
            assert rank_a == a
            gamma = gammas[flat] = tuple(tuple(r) for r in rows)
        out.append(PliableSubset(idx, shuffle_of(idx, len(columns)), shuffle_sign(idx), gamma))
    return out


def stabilizer_twist(gamma, a, rng):
    """Another plying matrix: gamma premultiplied by a random element of SL_n(Z) that stabilizes U."""
    n = len(gamma)
    alpha = [[int(i == j) for j in range(n)] for i in range(n)]
    # block upper-triangular product of elementary matrices plus a paired sign flip
    for _ in range(4 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j or (i >= a and j < a):
            continue
        c = rng.choice([-2, -1, 1, 2])
        alpha = [row[:] for row in alpha]
        alpha[i] = [x + c * y for x, y in zip(alpha[i], alpha[j])]
    if rng.random() < 0.5:
        alpha[0] = [-x for x in alpha[0]]
        alpha[n - 1] = [-x for x in alpha[n - 1]]
    return matmul(alpha, [list(r) for r in gamma])


# -- depth charts ----------------------------------------------------------------

@dataclass(frozen=True)
class DepthChart:
    p: int
    values: tuple

    def __call__(self, k):
        if 0 <= k <= self.p:
            return self.values[k]
        return 0


def flats(columns, r):
    """Closures (as frozensets of indices) of all rank-r subsets of the columns."""
    columns = [tuple(v) for v in columns]
    m = len(columns)
    seen = set()
    out = []

    def closure(space):
        return frozenset(i for i in range(m) if not any(space.reduce(columns[i])))

    def walk(start, space, depth):
        if depth == r:
            f = closure(space)
            if f not in seen:
                seen.add(f)
                out.append(f)
            return
        for i in range(start, m):
            nxt, grew = space.with_vector(columns[i])
            if grew:
                walk(i + 1, nxt, depth + 1)

    if r == 0:
        return [frozenset()]
    walk(0, _IncrementalRank(), 0)
    return out


def depth_chart(A, upto=None):
    """d_A(k) = least dimension spanned by k vectors of A, for k = 0..upto (default |A|).

    Computed through flats: d_A(k) <= r exactly when some rank-r flat holds
    at least k of the vectors, and ranks are scanned upward.
    """
    A = [tuple(v) for v in A]
    if not A or any(not any(v) for v in A):
        raise ValueError("depth chart needs nonzero vectors")
    p = len(A)
    upto = p if upto is None else min(upto, p)
    values = [0]
    r = 0
    biggest = 0
    while len(values) <= upto:
        r += 1
        biggest = max(len(f) for f in flats(A, r))
        while len(values) <= upto and len(values) <= biggest:
            values.append(r)
    return DepthChart(upto, tuple(values))


def brute_depth_chart(A):
    A = [tuple(v) for v in A]
    return tuple(min(rank_of_columns(S) for S in itertools.combinations(A, k)) if k else 0
                 for k in range(len(A) + 1))


def _check_direct_sum(A, B):
    ra, rb = rank_of_columns(A), rank_of_columns(B)
    if ra + rb != rank_of_columns(list(A) + list(B)):
        raise LinalgError("not a direct-sum configuration")


def min_dim_replace(A, B, i):
    """Least span dimension over sets made from A by swapping exactly i members for i members of B."""
    A = [tuple(v) for v in A]
    B = [tuple(v) for v in B]
    _check_direct_sum(A, B)
    p = len(A)
    if not 0 <= i <= p or i > len(B):
        raise ValueError("replacement count out of range")
    best = None
    for keep in itertools.combinations(range(p), p - i):
        base = [A[j] for j in keep]
        for extra in itertools.combinations(B, i):
            d = rank_of_columns(base + list(extra))
            if best is None or d < best:
                best = d
    return best


def replacement_table(A, B):
    return tuple(min_dim_replace(A, B, i) for i in range(min(len(A), len(B)) + 1))


def key_lemma_holds(A, B, a, k):
    """True when every mixed k-set (i = 1..k-1 vectors from B) spans more than a dimensions.

    Counts i larger than |B| give no sets and are skipped.
    """
    return all(min_dim_replace(A, B, i) > a for i in range(1, min(k, len(B) + 1)))


def palettes(columns, a, k=None):
    """Maximal subsets spanning exactly an a-dimensional subspace that hold a pliable k-subset.

    These are the rank-a flats with at least k members; k defaults to
    a(a+1)/2, the arity of the volume cocycle on SL_a(Z).
    """
    if k is None:
        k = a * (a + 1) // 2
    columns = [tuple(v) for v in columns]
    found = [tuple(sorted(f)) for f in flats(columns, a) if len(f) >= k]
    return sorted(found, key=lambda t: (len(t), t))
