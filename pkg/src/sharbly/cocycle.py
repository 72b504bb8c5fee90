"""Cosharbly evaluators: the trivial cocycle, the volume cocycles and their products.

Exact evaluators return Fractions.  The volume cocycles return a
``NumericValue`` whose sign is exact (a rational determinant) and whose
magnitude comes from numerical integration with a reported error bound.
"""
import itertools
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy.integrate import cubature
from scipy.special import gammaln

from .chains import Chain, SharblyError, normalize_symbol
from .coinvariants import BudgetExceeded, canonical_form
from .linalg import det, matvec, primitive_normalize
from .pliable import pliable_subsets, stabilizer_twist

EVEN = "even"
ODD = "odd"


class InconclusiveValue(RuntimeError):
    """A numeric value could not be pinned down within the budget."""


@dataclass(frozen=True)
class NumericValue:
    estimate: float
    error: float
    method: str = ""
    samples: int = 0
    converged: bool = True

    def __post_init__(self):
        if self.error < 0 or math.isnan(self.error):
            raise ValueError("error bound must be nonnegative")

    def excludes_zero(self):
        return self.converged and abs(self.estimate) > self.error

    def sign(self):
        """+1 or -1 when the value is bounded away from zero, otherwise None."""
        if not self.excludes_zero():
            return None
        return 1 if self.estimate > 0 else -1

    def agrees_with(self, other):
        other = as_numeric(other)
        return abs(self.estimate - other.estimate) <= self.error + other.error

    def _join(self, other, estimate, error):
        return NumericValue(estimate, error, _merge(self.method, other.method),
                            self.samples + other.samples, self.converged and other.converged)

    def __add__(self, other):
        other = as_numeric(other)
        return self._join(other, self.estimate + other.estimate, self.error + other.error)

    __radd__ = __add__

    def __neg__(self):
        return NumericValue(-self.estimate, self.error, self.method, self.samples, self.converged)

    def __sub__(self, other):
        return self + (-as_numeric(other))

    def __rsub__(self, other):
        return as_numeric(other) - self

    def __mul__(self, other):
        other = as_numeric(other)
        a, b = self.estimate, other.estimate
        ea, eb = self.error, other.error
        return self._join(other, a * b, abs(a) * eb + abs(b) * ea + ea * eb)

    __rmul__ = __mul__

    def __str__(self):
        return "%.6g +/- %.2g" % (self.estimate, self.error)


def _merge(m1, m2):
    if not m1 or m1 == "exact":
        return m2
    if not m2 or m2 == "exact" or m1 == m2:
        return m1
    return m1 + "," + m2


def as_numeric(x):
    if isinstance(x, NumericValue):
        return x
    return NumericValue(float(x), 0.0, "exact")


class Cosharbly:
    """An SL_c(Z)-invariant functional on basic sharblies with c + degree columns.

    Subclasses implement ``_evaluate(cols)`` on primitive, spanning,
    pairwise distinct columns.  ``evaluate`` canonicalizes first and
    caches by canonical matrix, so each orbit is computed once.
    """

    c = 0
    degree = 0
    parity = EVEN
    kind = "exact"
    name = "mu"

    def __init__(self):
        self._cache = {}

    @property
    def arity(self):
        return self.c + self.degree

    def _check_arity(self, cols):
        if len(cols) != self.arity:
            raise SharblyError("wrong arity: %s takes %d columns, got %d"
                               % (self.name, self.arity, len(cols)))
        if any(len(v) != self.c for v in cols):
            raise SharblyError("wrong arity: %s takes columns in Q^%d" % (self.name, self.c))

    def _zero(self):
        return Fraction(0) if self.kind == "exact" else NumericValue(0.0, 0.0, "exact")

    def evaluate(self, cols):
        cols = [tuple(v) for v in cols]
        self._check_arity(cols)
        sign, key = normalize_symbol(self.c, cols)
        if not sign:
            return self._zero()
        canon = canonical_form(key, self.c)
        f = canon.parity_factor(self.parity) * sign
        if not f:
            return self._zero()
        value = self._cache.get(canon.matrix)
        if value is None:
            value = self._cache[canon.matrix] = self._evaluate(list(canon.matrix))
        return value if f == 1 else -value

    def evaluate_raw(self, cols):
        """Evaluate without canonicalization or caching (used to test invariance)."""
        cols = [tuple(v) for v in cols]
        self._check_arity(cols)
        sign, key = normalize_symbol(self.c, cols)
        if not sign:
            return self._zero()
        value = self._evaluate(list(key))
        return value if sign == 1 else -value

    def __call__(self, x):
        if isinstance(x, Chain):
            return pair(self, x)
        return self.evaluate(x)

    def _evaluate(self, cols):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class TrivialCocycle(Cosharbly):
    """mu_1: the cosharbly for SL_1(Z) with value 1 on [v] for every nonzero v."""

    c = 1
    degree = 0
    parity = EVEN
    kind = "exact"
    name = "mu1"

    def evaluate(self, cols):
        cols = [tuple(v) for v in cols]
        self._check_arity(cols)
        if not cols[0][0]:
            raise SharblyError("zero vector in sharbly")
        return Fraction(1)

    evaluate_raw = evaluate


def mu_trivial():
    return TrivialCocycle()


# -- the volume cocycles ---------------------------------------------------------------

def sym_coordinates(v):
    """Coordinates of v v^T: diagonal entries first, then the (i, j), i < j, in lexicographic order.

    This basis orientation makes mu_3(z_3) positive.
    """
    c = len(v)
    diag = tuple(v[i] * v[i] for i in range(c))
    return diag + tuple(v[i] * v[j] for i, j in itertools.combinations(range(c), 2))


def rank_one_matrix(cols):
    """The d x d matrix P whose columns are the coordinates of a_i a_i^T."""
    coords = [sym_coordinates(primitive_normalize(tuple(v))) for v in cols]
    return [list(row) for row in zip(*coords)]


def _gram_terms(cols, c):
    """Cauchy-Binet data: det(sum t_i a_i a_i^T) = sum_S w_S prod_{i in S} t_i over c-subsets S."""
    A = np.array(cols, dtype=float)
    subsets, weights = [], []
    for S in itertools.combinations(range(len(cols)), c):
        w = det([list(cols[i]) for i in S]) ** 2
        if w:
            subsets.append(S)
            weights.append(float(w))
    return A, np.array(subsets, dtype=int).reshape(-1, c), np.array(weights)


def _gram_det(T, subsets, weights):
    """Evaluate the Cauchy-Binet sum on the last axis of T; every term is nonnegative."""
    out = np.zeros(T.shape[:-1])
    for S, w in zip(subsets, weights):
        term = T[..., S[0]] * w
        for i in S[1:]:
            term = term * T[..., i]
        out += term
    return out


def ordered_region_integrand(cols, c, deadline=None):
    """Integrand on [0,1]^(d-1) whose integral is the simplex integral of det(...)^(-(c+1)/2).

    The simplex splits into d! regions by the order of the t_i.  In each
    region the integrand is homogeneous of degree -d, so the region can be
    replaced by its slice where the largest coordinate is 1, written as
    running products y_j = x_2 ... x_j with x_j = u_j^2.  Summed over
    orders this removes the blow-up at the vertices.
    """
    d = len(cols)
    _, subsets, weights = _gram_terms(cols, c)
    inverse_orders = np.argsort(np.array(list(itertools.permutations(range(d)))), axis=1)
    power = (c + 1) / 2.0
    exps = np.array([d - 2 - l for l in range(d - 1)], dtype=float)
    chunk = max(1, 200000 // (len(inverse_orders) * d))

    def f(u):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("time budget exhausted during quadrature")
        u = np.asarray(u, dtype=float)
        x = u * u
        m = x.shape[0]
        y = np.ones((m, d))
        y[:, 1:] = np.cumprod(x, axis=1)
        jac = np.prod(2.0 * u, axis=1) * np.prod(x ** exps, axis=1)
        total = np.zeros(m)
        for s in range(0, m, chunk):
            T = y[s:s + chunk][:, inverse_orders]
            D = _gram_det(T, subsets, weights)
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = D ** (-power)
            vals[~np.isfinite(vals)] = 0.0
            total[s:s + chunk] = vals.sum(axis=1)
        return total * jac

    return f


def simplex_integral_quadrature(cols, c, cells=400, rtol=1e-2, time_budget=None, workers=1):
    d = len(cols)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    f = ordered_region_integrand(cols, c, deadline)
    if d == 1:
        return NumericValue(float(f(np.zeros((1, 0)))[0]), 0.0, "quadrature", 1)
    # start from the 2^(d-1) half-cubes: a single Genz-Malik cell can badly
    # underestimate its own error and be accepted without refinement
    res = cubature(f, np.zeros(d - 1), np.ones(d - 1), rule="genz-malik", rtol=rtol,
                   atol=0.0, max_subdivisions=cells, workers=workers,
                   points=[np.full(d - 1, 0.5)])
    converged = res.status == "converged"
    return NumericValue(float(res.estimate), float(res.error), "quadrature",
                        int(res.subdivisions), converged)


def simplex_integral_monte_carlo(cols, c, samples=200000, seed=0, alpha=0.25, z=4.0):
    """Importance sampling from a Dirichlet(alpha) law, which piles mass near the vertices.

    The error bound is ``z`` standard errors.
    """
    d = len(cols)
    _, subsets, weights = _gram_terms(cols, c)
    rng = np.random.default_rng(seed)
    power = (c + 1) / 2.0
    log_norm = gammaln(d * alpha) - d * gammaln(alpha)
    total, total_sq, n = 0.0, 0.0, 0
    batch = 50000
    while n < samples:
        m = min(batch, samples - n)
        t = rng.dirichlet([alpha] * d, size=m)
        t = np.maximum(t, np.finfo(float).tiny)
        D = _gram_det(t, subsets, weights)
        log_density = log_norm + (alpha - 1) * np.log(t).sum(axis=1)
        w = np.exp(-power * np.log(D) - log_density)
        total += w.sum()
        total_sq += (w * w).sum()
        n += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return NumericValue(mean, z * math.sqrt(var / n), "monte-carlo", n)


class VolumeCocycle(Cosharbly):
    """mu_c for c = 2, 3: signed invariant volume of the cone on the rays a_i a_i^T.

    value = sign(det P) |det P| * integral over the simplex of
    det(sum t_i a_i a_i^T)^(-(c+1)/2).  The sign is exact.
    """

    kind = "numeric"

    def __init__(self, c, cells=400, rtol=1e-2, method="quadrature", samples=200000,
                 seed=0, time_budget=None, workers=1):
        super().__init__()
        if c not in (2, 3):
            raise ValueError("volume cocycles are implemented for c = 2 and 3")
        self.c = c
        self.degree = c * (c + 1) // 2 - c
        # the induced map on symmetric matrices has determinant det(g)^(c+1)
        self.parity = EVEN if c % 2 else ODD
        self.name = "mu%d" % c
        self.cells = cells
        self.rtol = rtol
        self.method = method
        self.samples = samples
        self.seed = seed
        self.time_budget = time_budget
        self.workers = workers

    def integral(self, cols, method=None):
        method = method or self.method
        if method == "quadrature":
            try:
                return simplex_integral_quadrature(cols, self.c, self.cells, self.rtol,
                                                   self.time_budget, self.workers)
            except BudgetExceeded as exc:
                raise InconclusiveValue("inconclusive value: %s" % exc) from None
        if method == "monte-carlo":
            return simplex_integral_monte_carlo(cols, self.c, self.samples, self.seed)
        raise ValueError("unknown integration method %r" % method)

    def _evaluate(self, cols, method=None):
        dp = det(rank_one_matrix(cols))
        if dp == 0:
            return NumericValue(0.0, 0.0, "exact")
        mag = self.integral(cols, method) * abs(float(dp))
        return mag if dp > 0 else -mag

    def evaluate_with(self, cols, method):
        """Uncached evaluation with a chosen integrator (for cross-checks)."""
        cols = [tuple(v) for v in cols]
        self._check_arity(cols)
        sign, key = normalize_symbol(self.c, cols)
        if not sign:
            return self._zero()
        value = self._evaluate(list(key), method)
        return value if sign == 1 else -value


def volume_cocycle(c, **options):
    return VolumeCocycle(c, **options)


# -- products ----------------------------------------------------------------------------

def _split_term(cols, subset, a):
    """Left block (first a coordinates of gamma*S) and right block (last coordinates of the rest)."""
    gamma = subset.gamma
    chosen = set(subset.indices)
    left = [matvec(gamma, cols[i])[:a] for i in subset.indices]
    right = [matvec(gamma, cols[i])[a:] for i in range(len(cols)) if i not in chosen]
    return left, right


class ProductCocycle(Cosharbly):
    """mu x nu: sum over pliable subsets of sign(shuffle) mu(left) nu(right)."""

    def __init__(self, mu, nu):
        super().__init__()
        if mu.parity != nu.parity:
            raise SharblyError("parity mismatch: %s is %s, %s is %s"
                               % (mu.name, mu.parity, nu.name, nu.parity))
        self.mu = mu
        self.nu = nu
        self.c = mu.c + nu.c
        self.degree = mu.degree + nu.degree
        self.parity = mu.parity
        self.kind = "exact" if mu.kind == nu.kind == "exact" else "numeric"
        self.name = "%s*%s" % (mu.name, _wrap(nu.name))

    def terms(self, cols, rng=None):
        """(shuffle sign, left columns, right columns) for every pliable subset.

        With ``rng`` each plying matrix is replaced by an independently
        chosen one (used to test that the value does not depend on it).
        """
        a = self.mu.c
        out = []
        for subset in pliable_subsets(cols, a, self.mu.arity):
            if rng is not None:
                subset = replace(subset, gamma=tuple(map(tuple, stabilizer_twist(subset.gamma, a, rng))))
            left, right = _split_term(cols, subset, a)
            out.append((subset.shuffle_sign, left, right))
        return out

    def _evaluate(self, cols, rng=None, raw=False):
        total = self._zero()
        for sign, left, right in self.terms(cols, rng):
            if any(not any(v) for v in right):
                continue  # nu is extended by zero
            if raw:
                value = self.mu.evaluate_raw(left) * self.nu.evaluate_raw(right)
            else:
                value = self.mu.evaluate(left) * self.nu.evaluate(right)
            total = total + (value if sign == 1 else -value)
        return total

    def evaluate_raw(self, cols, rng=None):
        """Evaluate without canonical caching, optionally with re-chosen plying matrices."""
        cols = [tuple(v) for v in cols]
        self._check_arity(cols)
        sign, key = normalize_symbol(self.c, cols)
        if not sign:
            return self._zero()
        value = self._evaluate(list(key), rng, raw=True)
        return value if sign == 1 else -value


def _wrap(name):
    return "(%s)" % name if "*" in name else name


def product(mu, nu):
    return ProductCocycle(mu, nu)


def parse_mu(spec, **options):
    """Parse 'mu1', 'mu2', 'mu3' or a right-nested product such as 'mu3*mu3*mu1'."""
    parts = [p.strip() for p in spec.replace("x", "*").split("*")]
    if not parts or any(p not in ("mu1", "mu2", "mu3") for p in parts):
        raise ValueError("unknown cosharbly spec %r" % spec)

    def base(p):
        return mu_trivial() if p == "mu1" else volume_cocycle(int(p[2]), **options)

    out = base(parts[-1])
    for p in reversed(parts[:-1]):
        out = product(base(p), out)
    return out


def parity_of_cosharbly(mu):
    return mu.parity


# -- pairing -------------------------------------------------------------------------------

def pair(mu, z):
    """<mu, z>: sum of coefficients times evaluations."""
    if z.n != mu.c or z.degree != mu.degree:
        raise SharblyError("wrong arity: %s pairs with (n, degree) = (%d, %d), chain has (%d, %d)"
                           % (mu.name, mu.c, mu.degree, z.n, z.degree))
    total = mu._zero()
    for cols, coeff in z:
        value = mu.evaluate(cols)
        if isinstance(value, NumericValue):
            total = total + value * float(coeff)
        else:
            total = total + value * coeff
    return total


@dataclass(frozen=True)
class SymbolicTerm:
    sign: int
    left: object        # CanonicalKey over SL_a(Z)
    right: object       # CanonicalKey over SL_b(Z)
    multiplicity: Fraction


@dataclass(frozen=True)
class SymbolicPairing:
    terms: tuple

    def __len__(self):
        return len(self.terms)

    def collapsed(self):
        """Map (left canonical matrix, right canonical matrix) to the total signed coefficient."""
        out = {}
        for t in self.terms:
            k = (t.left.matrix, t.right.matrix)
            out[k] = out.get(k, 0) + t.sign * t.multiplicity
        return {k: v for k, v in out.items() if v}

    def is_uniform(self):
        """True when all terms have sign +1 and the same pair of canonical arguments."""
        if not self.terms:
            return False
        first = self.terms[0]
        return all(t.sign == 1 and t.left.matrix == first.left.matrix
                   and t.right.matrix == first.right.matrix for t in self.terms)

    def total_multiplicity(self):
        return sum((t.sign * t.multiplicity for t in self.terms), Fraction(0))


def pair_symbolic(mu, nu, z):
    """Exact term list of <mu x nu, z> with every argument replaced by its canonical key.

    Signs already fold in the shuffle sign, the chain coefficient sign and
    the parity factors relating each argument to its canonical matrix.
    Terms forced to vanish (zero projections, repeated or non-spanning
    columns, self-negating orbits) are dropped.
    """
    if mu.parity != nu.parity:
        raise SharblyError("parity mismatch: %s is %s, %s is %s"
                           % (mu.name, mu.parity, nu.name, nu.parity))
    a, b = mu.c, nu.c
    if z.n != a + b or z.degree != mu.degree + nu.degree:
        raise SharblyError("wrong arity for the product pairing")
    terms = []
    for cols, coeff in z:
        for subset in pliable_subsets(list(cols), a, mu.arity):
            left, right = _split_term(list(cols), subset, a)
            if any(not any(v) for v in right):
                continue
            ls, lkey = normalize_symbol(a, left)
            rs, rkey = normalize_symbol(b, right)
            if not ls or not rs:
                continue
            lcanon = canonical_form(lkey, a)
            rcanon = canonical_form(rkey, b)
            f = lcanon.parity_factor(mu.parity) * rcanon.parity_factor(nu.parity)
            if not f:
                continue
            sign = subset.shuffle_sign * ls * rs * f * (1 if coeff > 0 else -1)
            terms.append(SymbolicTerm(sign, lcanon, rcanon, abs(coeff)))
    return SymbolicPairing(tuple(terms))
