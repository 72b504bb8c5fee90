import itertools
from fractions import Fraction

import pytest

from sharbly.linalg import (LinalgError, complete_to_sl, det, echelon_transform, hnf, identity,
                            inverse, is_hnf, is_saturated, matmul, matvec, plying_matrix,
                            primitive_normalize, rank, rank_of_columns, saturate_span,
                            solve_in_basis, xgcd)
from sharbly.named import Z3

from conftest import random_sl


def test_primitive_normalize_examples():
    assert primitive_normalize((2, -4, 6)) == (1, -2, 3)
    assert primitive_normalize((0, 0, -5)) == (0, 0, 1)
    assert primitive_normalize((-3, 6)) == (1, -2)


def test_primitive_normalize_zero():
    with pytest.raises(LinalgError, match="zero column"):
        primitive_normalize((0, 0))


def test_xgcd_bezout():
    for a, b in itertools.product(range(-12, 13), repeat=2):
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g >= 0


def test_det_and_rank_examples():
    assert det(identity(3)) == 1
    assert det([[1, 0, 1], [-1, 1, 0], [0, -1, -1]]) == 0
    assert rank(Z3) == 3


def _cofactor_det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _cofactor_det([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(len(M)))


def test_det_against_cofactor_expansion(rng):
    for n in range(1, 6):
        for _ in range(20):
            M = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            assert det(M) == _cofactor_det(M)
            F = [[Fraction(x, rng.randint(1, 3)) for x in row] for row in M]
            assert det(F) == det([[x * 6 for x in row] for row in F]) / 6 ** n


def test_inverse_roundtrip(rng):
    for n in range(1, 6):
        g = random_sl(n, rng)
        assert matmul(g, inverse(g)) == identity(n)


def test_hnf_examples():
    H, U = hnf(identity(4))
    assert H == identity(4) and U == identity(4)
    H, U = hnf([[0, 1], [1, 0]])
    assert H == identity(2)
    assert U == [[0, 1], [1, 0]] or matmul(U, [[0, 1], [1, 0]]) == H
    H, _ = hnf(Z3)
    assert [row[:3] for row in H] == identity(3)
    assert [tuple(row[j] for row in H) for j in range(3, 6)] == [(1, -1, 0), (0, 1, -1), (1, 0, -1)]


def test_hnf_rank_deficient():
    with pytest.raises(LinalgError):
        hnf([[1, 2], [2, 4]])


def test_echelon_transform_properties(rng):
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        H, U, pivots = echelon_transform(M)
        assert matmul(U, M) == H
        assert abs(det(U)) == 1
        assert is_hnf(H)
        assert len(pivots) == rank(M)


def test_saturate_span_examples():
    B = saturate_span([(2, 0), (0, 2)])
    assert abs(det([list(r) for r in zip(*B)])) == 1
    assert saturate_span([(1, 1, 0), (2, 2, 0)]) == [(1, 1, 0)]
    assert saturate_span([(2, 4)]) == [(1, 2)]
    with pytest.raises(LinalgError):
        saturate_span([(0, 0)])


def _in_lattice_span(B, v):
    coords = solve_in_basis(B, v)
    return coords is not None and all(c.denominator == 1 for c in coords)


def test_saturate_span_against_brute_force(rng):
    for _ in range(40):
        n = rng.randint(2, 4)
        S = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        if not any(any(v) for v in S):
            continue
        B = saturate_span(S)
        assert len(B) == rank_of_columns(S)
        # every small integer point of span(S) is an integer combination of B
        for v in itertools.product(range(-3, 4), repeat=n):
            if rank_of_columns(S + [v]) == len(B):
                assert _in_lattice_span(B, v)


def test_complete_to_sl_examples():
    e = identity(6)
    assert complete_to_sl([tuple(e[i]) for i in range(2)], 6) == identity(6)
    V = [tuple(e[i]) for i in (3, 4, 5)]
    g = complete_to_sl(V, 6)
    assert det(g) == 1
    assert all(not any(matvec(g, v)[3:]) for v in V)
    g = complete_to_sl([(1, 1)], 2)
    assert det(g) == 1 and matvec(g, (1, 1)) == (1, 0)
    with pytest.raises(LinalgError, match="not saturated"):
        complete_to_sl([(2, 0)], 2)


def test_small_sl2_brute_force_agrees():
    # every g in SL_2(Z) with entries in [-2, 2] sending (1, 1) to e_1
    found = []
    for a, b, c, d in itertools.product(range(-2, 3), repeat=4):
        g = [[a, b], [c, d]]
        if a * d - b * c == 1 and matvec(g, (1, 1)) == (1, 0):
            found.append(g)
    assert found
    g = complete_to_sl([(1, 1)], 2)
    assert any(matmul(h, inverse(g)) == [[1, x], [0, 1]] for h in found for x in range(-4, 5))


def test_plying_matrix_moves_span(rng):
    for _ in range(60):
        n = rng.randint(2, 5)
        a = rng.randint(1, n - 1)
        basis = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(a)]
        if rank_of_columns(basis) < a:
            continue
        coeffs = [rng.randint(-2, 2) for _ in basis]
        S = basis + [tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(n))]
        S = [v for v in S if any(v)]
        g, r = plying_matrix(S, n)
        assert r == a and det(g) == 1
        for v in S:
            assert not any(matvec(g, v)[a:])
        assert is_saturated(saturate_span(S))
