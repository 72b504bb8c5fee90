"""Canonical forms for SL_n(Z)-orbits of basic sharblies and reduction of chains.

A basic sharbly is a configuration of primitive columns, taken up to
permutation (with sign), column sign changes and left multiplication by
GL_n(Z).  The canonical matrix of a configuration is built in two steps:

1. Split the columns into matroid components.  When the saturated lattices
   of the components add up to Z^n, the orbit is determined by the orbits
   of the components, so each is canonicalized in its own coordinates and
   the results are placed block-diagonally in a fixed order.
2. An irreducible component is written in the coordinates of each basis of
   least |det| among its columns, and the lexicographically least result,
   together with the superlattice that Z^n becomes, is kept.  Every choice
   that reaches the minimum is kept too, which enumerates the automorphisms.

Each automorphism contributes a pair (det, permutation sign).  Those pairs
decide whether the orbit splits into two SL_n(Z)-orbits (coset) and whether
the symbol equals its own negative in the coinvariants (self-negating).
"""
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .chains import SharblyError, boundary, normalize_symbol, permutation_sign
from .linalg import det, echelon_transform, from_columns, identity, inverse, matvec, saturate_span, solve_in_basis

PLUS = "plus"
MINUS = "minus"
BOTH = "both"

DEFAULT_MAX_NODES = 2_000_000


class BudgetExceeded(RuntimeError):
    """Canonicalization ran past its node or time budget; results would be unreliable."""


@dataclass
class Budget:
    seconds: float = None
    max_nodes: int = DEFAULT_MAX_NODES
    start: float = field(default_factory=time.monotonic)
    nodes: int = 0

    def charge(self, k=1):
        self.nodes += k
        if self.nodes > self.max_nodes:
            raise BudgetExceeded("canonicalization exceeded %d search nodes" % self.max_nodes)
        if self.seconds is not None and time.monotonic() - self.start > self.seconds:
            raise BudgetExceeded("canonicalization exceeded %.1f s" % self.seconds)


@dataclass(frozen=True)
class OrbitClass:
    """Identifier of one SL_n(Z)-orbit: canonical matrix (as columns) and coset."""

    matrix: tuple
    coset: str

    @property
    def n(self):
        return len(self.matrix[0])

    def rows(self):
        return [list(r) for r in zip(*self.matrix)]


@dataclass(frozen=True)
class CanonicalKey:
    """Canonical data of one basic sharbly.

    ``matrix`` is the canonical matrix given by its columns.  ``coset`` is
    ``plus`` when an element of SL_n(Z) carries the symbol to the canonical
    matrix, ``minus`` when only elements of determinant -1 do, ``both``
    when both happen.  ``sign`` relates the input symbol to the canonical
    representative of its SL-orbit: ``[matrix]`` for plus/both and
    ``[s_n * matrix]`` for minus.  ``twist`` is the sign t with
    ``[s_n * matrix] = t * [matrix]`` when the coset is ``both``.
    """

    matrix: tuple
    coset: str
    sign: int
    self_negating: bool
    twist: int = 0
    automorphisms: frozenset = frozenset()

    @property
    def orbit(self):
        return OrbitClass(self.matrix, MINUS if self.coset == MINUS else PLUS)

    def rows(self):
        return [list(r) for r in zip(*self.matrix)]

    def parity_factor(self, parity):
        """Factor f with mu(input) = f * mu([matrix]) for a cosharbly of the given parity.

        Zero when the symbol is forced to vanish under such cosharblies.
        """
        e = 1 if parity == "odd" else 0
        if self.self_negating:
            return 0
        if self.coset == BOTH and self.twist != (-1) ** e:
            return 0
        f = self.sign
        if self.coset == MINUS:
            f *= (-1) ** e
        return f


# -- irreducible pieces --------------------------------------------------------

@dataclass(frozen=True)
class _IrreducibleResult:
    matrix: tuple        # canonical columns in Z^k
    order: tuple         # local indices of the reference ordering
    det: int             # det of the reference transform
    automorphisms: frozenset


def _canon_single(Y):
    return _IrreducibleResult(((1,),), (0,), 1 if Y[0][0] > 0 else -1,
                              frozenset({(1, 1), (-1, 1)}))


def _min_det_bases(Y, n):
    """All n-subsets of columns whose |det| is the least nonzero value."""
    best = None
    found = []
    for S in itertools.combinations(range(len(Y)), n):
        d = abs(int(det(from_columns([Y[i] for i in S]))))
        if d == 0 or (best is not None and d > best):
            continue
        if best is None or d < best:
            best, found = d, []
        found.append(S)
    return best, found


def _normalized(row):
    """Row sign making the first nonzero entry negative; 0 for a zero row."""
    for x in row:
        if x:
            return -1 if x > 0 else 1
    return 0


def _sorted_rows(rows):
    keyed = []
    for i, row in enumerate(rows):
        e = _normalized(row) or 1
        keyed.append((tuple(e * x for x in row), i))
    keyed.sort()
    return keyed


def _projection_hnf(rows):
    """Lower-triangular Hermite form, as rows, of the lattice spanned by the columns of ``rows``.

    Its leading k x k block only depends on the first k rows, so it can be
    built one row at a time.
    """
    H, _, _ = echelon_transform([list(c) for c in zip(*rows)])
    k = len(rows)
    return tuple(tuple(H[j][i] for j in range(i + 1)) for i in range(k))


def _lattice_arrangements(rows, scaled, budget):
    """Least lattice form over the row orders and signs that keep the rows sorted and normalized.

    Returns the lattice rows and every (row, sign) arrangement reaching them.
    """
    keyed = _sorted_rows(rows)
    blocks = []
    for row, i in keyed:
        if blocks and blocks[-1][0] == row:
            blocks[-1][1].append(i)
        else:
            blocks.append((row, [i]))
    slots = [(row, members) for row, members in blocks for _ in members]
    frontier = [()]
    lattice = []
    for row, members in slots:
        best = None
        nxt = []
        for arr in frontier:
            used = {i for i, _ in arr}
            for i in members:
                if i in used:
                    continue
                for e in ((1, -1) if not any(row) else (_normalized(rows[i]),)):
                    budget.charge()
                    new = arr + ((i, e),)
                    last = _projection_hnf([[f * x for x in scaled[j]] for j, f in new])[-1]
                    if best is not None and last > best:
                        continue
                    if best is None or last < best:
                        best, nxt = last, []
                    nxt.append(new)
        frontier = nxt
        lattice.append(best)
    return tuple(lattice), frontier


def _canon_irreducible(Y, budget):
    """Canonical form of a full-rank configuration, keyed on its best bases.

    Fix a basis S of least |det|.  In S-coordinates the configuration is
    [I | T] and Z^n becomes a superlattice of index |det|.  Reordering and
    negating basis columns permutes and negates rows, so the smallest tail
    has sorted normalized rows; tail columns are chosen greedily, keeping
    every tie, and remaining ties between equal rows are broken by the
    superlattice.  The result is written in a basis of that superlattice.
    """
    m = len(Y)
    n = len(Y[0])
    if n == 1:
        return _canon_single(Y)
    d0, bases = _min_det_bases(Y, n)
    best = None
    terminals = []
    for S in bases:
        Sinv = inverse(from_columns([Y[i] for i in S]))
        scaled = [[int(Fraction(x) * d0) for x in row] for row in Sinv]
        rest = [c for c in range(m) if c not in S]
        T = {c: tuple(Fraction(x) for x in matvec(Sinv, Y[c])) for c in rest}
        frontier = [()]
        tail = []
        for _ in rest:
            step_best = None
            nxt = []
            for seq in frontier:
                used = {c for c, _ in seq}
                rows = [[sg * T[c][i] for c, sg in seq] for i in range(n)]
                for c in rest:
                    if c in used:
                        continue
                    for sg in (1, -1):
                        budget.charge()
                        col = tuple(r[-1] for r, _ in
                                    _sorted_rows([row + [sg * T[c][i]] for i, row in enumerate(rows)]))
                        if step_best is not None and col > step_best:
                            continue
                        if step_best is None or col < step_best:
                            step_best, nxt = col, []
                        nxt.append(seq + ((c, sg),))
            frontier = nxt
            tail.append(step_best)
            if best is not None and tuple(tail) > best[0][:len(tail)]:
                break
        else:
            for seq in frontier:
                rows = [[sg * T[c][i] for c, sg in seq] for i in range(n)]
                lattice, arrangements = _lattice_arrangements(rows, scaled, budget)
                key = (tuple(tail), lattice)
                if best is not None and key > best:
                    continue
                if best is None or key < best:
                    best, terminals = key, []
                for arrangement in arrangements:
                    order = tuple(S[i] for i, _ in arrangement)
                    d = int(det(from_columns([Y[i] for i in order])))
                    for _, e in arrangement:
                        d *= e
                    terminals.append((order + tuple(c for c, _ in seq), 1 if d > 0 else -1))

    tail, lattice = best
    L = [[Fraction(row[j], d0) if j < len(row) else 0 for j in range(n)] for row in lattice]
    Linv = inverse(L)
    columns = [tuple(int(i == j) for i in range(n)) for j in range(n)] + list(tail)
    matrix = tuple(tuple(int(x) for x in matvec(Linv, col)) for col in columns)
    ref_order, ref_det = terminals[0]
    ref_sign = permutation_sign(ref_order)
    auts = frozenset((d * ref_det, permutation_sign(o) * ref_sign) for o, d in terminals)
    return _IrreducibleResult(matrix, ref_order, ref_det, _close(auts))


def _close(pairs):
    group = {(1, 1)} | set(pairs)
    while True:
        new = {(a * c, b * d) for a, b in group for c, d in group} | group
        if new == group:
            return frozenset(group)
        group = new


# -- components -------------------------------------------------------------------

def matroid_components(cols):
    """Partition column indices into connected components of the column matroid."""
    m = len(cols)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    basis = []
    for i, v in enumerate(cols):
        if not basis:
            basis.append(i)
            continue
        coords = solve_in_basis([cols[j] for j in basis], v)
        if coords is None:
            basis.append(i)
            continue
        for j, x in zip(basis, coords):
            if x:
                parent[find(j)] = find(i)
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _split(cols, n):
    """Components with their integer coordinates, or a single component if Z^n does not split."""
    comps = matroid_components(cols)
    if len(comps) > 1:
        bases = [saturate_span([cols[i] for i in comp]) for comp in comps]
        P = from_columns([b for basis in bases for b in basis])
        detP = int(det(P))
        if abs(detP) == 1:
            Pinv = inverse(P)
            out = []
            off = 0
            for comp, basis in zip(comps, bases):
                k = len(basis)
                Y = [matvec(Pinv, cols[i])[off:off + k] for i in comp]
                out.append((comp, off, k, Y))
                off += k
            return out, detP
    # irreducible, or a non-split sum: canonicalize as one piece in the
    # coordinates of Z^n itself
    return [(list(range(len(cols))), 0, n, [tuple(v) for v in cols])], 1


_component_cache = {}
_key_cache = {}


def clear_caches():
    _component_cache.clear()
    _key_cache.clear()


def _component(Y, budget):
    key = tuple(Y)
    hit = _component_cache.get(key)
    if hit is None:
        hit = _canon_irreducible(list(Y), budget)
        _component_cache[key] = hit
    return hit


def canonical_form(b, n=None, budget=None):
    """Canonical key of a basic sharbly (a BasicSharbly, or a tuple of normalized sorted columns)."""
    if n is None:
        n, cols = b.n, tuple(b.columns)
    else:
        cols = tuple(b)
    hit = _key_cache.get(cols)
    if hit is not None:
        return hit
    if budget is None:
        budget = Budget()
    pieces, detP = _split(list(cols), n)
    results = [(_component(Y, budget), comp, off, k) for comp, off, k, Y in pieces]
    results.sort(key=lambda t: (t[3], len(t[1]), t[0].matrix))

    matrix = []
    global_order = []
    row_order = []
    det_g = detP
    row_off = 0
    gens = set()
    for idx, (res, comp, off, k) in enumerate(results):
        for col in res.matrix:
            matrix.append((0,) * row_off + col + (0,) * (n - row_off - k))
        global_order.extend(comp[i] for i in res.order)
        row_order.extend(range(off, off + k))
        det_g *= res.det
        gens |= res.automorphisms
        if idx and results[idx - 1][0].matrix == res.matrix and results[idx - 1][3] == k:
            gens.add(((-1) ** k, (-1) ** len(comp)))
        row_off += k
    det_g *= permutation_sign(row_order)
    auts = _close(gens)
    perm_sign = permutation_sign(global_order)
    self_negating = (1, -1) in auts
    det_minus = [s for d, s in auts if d == -1]
    twist = 0
    if det_minus and not self_negating:
        twist = det_minus[0]
    if det_g == 1:
        coset, sign = (BOTH if det_minus else PLUS), perm_sign
    elif det_minus:
        coset, sign = BOTH, perm_sign * det_minus[0]
    else:
        coset, sign = MINUS, perm_sign
    key = CanonicalKey(tuple(matrix), coset, sign, self_negating, twist, auts)
    _key_cache[cols] = key
    return key


def canonical_form_of(n, raw_cols, budget=None):
    """Canonicalize raw columns; returns (relator sign, key) or (0, None) for a zero symbol."""
    s, cols = normalize_symbol(n, raw_cols)
    if not s:
        return 0, None
    return s, canonical_form(cols, n, budget)


# -- chains in the coinvariants --------------------------------------------------

def reduce(z, budget=None):
    """Image of a chain in the coinvariants, as {OrbitClass: coefficient}."""
    out = {}
    for cols, c in z.terms.items():
        key = canonical_form(cols, z.n, budget)
        if key.self_negating:
            continue
        orbit = key.orbit
        v = out.get(orbit, 0) + c * key.sign
        if v:
            out[orbit] = v
        else:
            out.pop(orbit, None)
    return out


def is_cycle(z, budget=None):
    if z.degree < 1:
        raise SharblyError("cannot take boundary of a degree-0 chain")
    return not reduce(boundary(z), budget)


def sn_matrix(n):
    s = identity(n)
    s[0][0] = -1
    return s


def sn_act(z):
    """Apply s_n = diag(-1, 1, ..., 1) to every column."""
    return z.act(sn_matrix(z.n))


def parity_of_cycle(z, budget=None):
    """'even' if s_n z = z, 'odd' if s_n z = -z in the coinvariants, else None."""
    s = sn_act(z)
    if not reduce(s - z, budget):
        return "even"
    if not reduce(s + z, budget):
        return "odd"
    return None


def equivalent(x_cols, y_cols, n, budget=None):
    """Relative sign e with [x] = e [y] in the coinvariants, 0 if both vanish, None if unrelated."""
    sx, kx = canonical_form_of(n, x_cols, budget)
    sy, ky = canonical_form_of(n, y_cols, budget)
    zx = not sx or kx.self_negating
    zy = not sy or ky.self_negating
    if zx or zy:
        return 0 if zx and zy else None
    if kx.orbit != ky.orbit:
        return None
    return sx * kx.sign * sy * ky.sign
