"""Basic sharblies and finite chains modulo the permutation, spanning and scaling relators."""
import json
from dataclasses import dataclass
from fractions import Fraction

from .linalg import LinalgError, matvec, primitive_normalize, rank_of_columns


class SharblyError(ValueError):
    pass


def permutation_sign(seq):
    """Sign of the permutation that sorts ``seq`` (entries assumed distinct)."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=seq.__getitem__)
    # cycle decomposition of the sorting permutation
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class BasicSharbly:
    """One generator ``[v_1, ..., v_{n+k}]`` with normalized, sorted, spanning columns."""

    n: int
    columns: tuple

    @property
    def degree(self):
        return len(self.columns) - self.n

    def matrix(self):
        return [list(row) for row in zip(*self.columns)]


def normalize_symbol(n, cols):
    """Normalize raw columns of a symbol.

    Returns ``(sign, sorted_columns)`` or ``(0, None)`` when the symbol is
    zero modulo the relators (repeated column or non-spanning columns).
    """
    try:
        normed = [primitive_normalize(tuple(int(x) for x in c)) for c in cols]
    except LinalgError:
        raise SharblyError("zero vector in sharbly") from None
    if any(len(c) != n for c in normed):
        raise SharblyError("column length does not match n=%d" % n)
    if len(normed) < n:
        return 0, None
    if len(set(normed)) < len(normed):
        return 0, None
    if rank_of_columns(normed) < n:
        return 0, None
    return permutation_sign(normed), tuple(sorted(normed))


class Chain:
    """A finite Q-linear combination of basic sharblies of fixed (n, degree)."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n, degree, terms=None):
        if n < 1 or degree < 0:
            raise SharblyError("need n >= 1 and degree >= 0")
        self.n = n
        self.degree = degree
        self.terms = {}
        if terms:
            for cols, c in terms.items():
                self._add_term(cols, Fraction(c))

    def _add_term(self, cols, c):
        if not c:
            return
        v = self.terms.get(cols, 0) + c
        if v:
            self.terms[cols] = v
        else:
            self.terms.pop(cols, None)

    @classmethod
    def zero(cls, n, degree):
        return cls(n, degree)

    def copy(self):
        out = Chain(self.n, self.degree)
        out.terms = dict(self.terms)
        return out

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def basics(self):
        for cols, c in self.terms.items():
            yield BasicSharbly(self.n, cols), c

    def _check(self, other):
        if (self.n, self.degree) != (other.n, other.degree):
            raise SharblyError("chains live in different groups: (n, k) = (%d, %d) vs (%d, %d)"
                               % (self.n, self.degree, other.n, other.degree))

    def __add__(self, other):
        self._check(other)
        out = self.copy()
        for cols, c in other.terms.items():
            out._add_term(cols, c)
        return out

    def __neg__(self):
        out = Chain(self.n, self.degree)
        out.terms = {cols: -c for cols, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = Chain(self.n, self.degree)
        if scalar:
            out.terms = {cols: c * scalar for cols, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __repr__(self):
        return "Chain(n=%d, degree=%d, %d terms)" % (self.n, self.degree, len(self.terms))

    def act(self, g):
        """Left action of an integer matrix ``g`` on every column."""
        out = Chain(self.n, self.degree)
        for cols, c in self.terms.items():
            out += make_basic(self.n, [matvec(g, v) for v in cols], c)
        return out

    def boundary(self):
        return boundary(self)

    def to_json(self):
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [{"coeff": "%d/%d" % (c.numerator, c.denominator),
                       "cols": [list(v) for v in cols]}
                      for cols, c in sorted(self.terms.items())],
        }

    def dumps(self):
        return json.dumps(self.to_json())


def make_basic(n, cols, coeff=1):
    """The chain ``coeff * [cols]`` after applying the relators; possibly zero."""
    cols = list(cols)
    degree = len(cols) - n
    if degree < 0:
        raise SharblyError("a sharbly for n=%d needs at least %d columns" % (n, n))
    sign, key = normalize_symbol(n, cols)
    out = Chain(n, degree)
    if sign:
        out._add_term(key, Fraction(coeff) * sign)
    return out


def from_matrix(rows, coeff=1):
    """Chain of a single symbol given as a matrix (rows of ints)."""
    n = len(rows)
    return make_basic(n, list(zip(*rows)), coeff)


def boundary(z):
    """Alternating sum of faces, each face renormalized."""
    if z.degree < 1:
        raise SharblyError("cannot take boundary of a degree-0 chain")
    out = Chain(z.n, z.degree - 1)
    for cols, c in z.terms.items():
        for i in range(len(cols)):
            face = cols[:i] + cols[i + 1:]
            sign, key = normalize_symbol(z.n, face)
            if sign:
                out._add_term(key, c * (sign if i % 2 == 0 else -sign))
    return out


def compose(x, y):
    """Block juxtaposition ``[x|y]``: x in the first coordinates, y in the last ones."""
    a, b = x.n, y.n
    n = a + b
    out = Chain(n, x.degree + y.degree)
    pad_right = (0,) * b
    pad_left = (0,) * a
    for xcols, xc in x.terms.items():
        left = [v + pad_right for v in xcols]
        for ycols, yc in y.terms.items():
            right = [pad_left + w for w in ycols]
            out += make_basic(n, left + right, xc * yc)
    return out


def embed_columns(cols, offset, n):
    return [(0,) * offset + tuple(v) + (0,) * (n - offset - len(v)) for v in cols]


def chain_from_json(data):
    """Read the shared chain format; every term is renormalized on the way in."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = int(data["n"])
        degree = int(data["degree"])
        terms = data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SharblyError("malformed chain JSON: %s" % exc) from None
    out = Chain(n, degree)
    for term in terms:
        coeff = Fraction(str(term.get("coeff", "1")))
        cols = term["cols"]
        if len(cols) != n + degree:
            raise SharblyError("term has %d columns, expected %d" % (len(cols), n + degree))
        out += make_basic(n, cols, coeff)
    return out


def load_chain(path):
    with open(path) as fh:
        return chain_from_json(json.load(fh))


def save_chain(z, path):
    with open(path, "w") as fh:
        json.dump(z.to_json(), fh, indent=1)
