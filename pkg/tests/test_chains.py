import json

import pytest

from sharbly.chains import (Chain, SharblyError, boundary, chain_from_json, compose, from_matrix,
                            load_chain, make_basic, permutation_sign, save_chain)
from sharbly.named import Z3, z1, z2, z3

from conftest import random_columns


def test_permutation_sign():
    assert permutation_sign([1, 2, 3]) == 1
    assert permutation_sign([2, 1, 3]) == -1
    assert permutation_sign([3, 1, 2]) == 1
    assert permutation_sign([4, 3, 2, 1]) == 1


def test_make_basic_z3_single_term():
    z = from_matrix(Z3)
    assert len(z) == 1
    assert list(z.terms.values()) == [1]
    assert (z.n, z.degree) == (3, 3)


def test_make_basic_repeated_column_vanishes():
    assert not make_basic(2, [(1, 0), (2, 0), (0, 1)])


def test_make_basic_non_spanning_vanishes():
    assert not make_basic(3, [(1, 0, 0), (0, 1, 0), (2, 2, 0)])


def test_make_basic_zero_vector():
    with pytest.raises(SharblyError, match="zero vector in sharbly"):
        make_basic(2, [(1, 0), (0, 0)])


def test_relators_sign_and_scaling():
    a = make_basic(2, [(1, 0), (0, 1), (1, 1)])
    assert make_basic(2, [(0, 1), (1, 0), (1, 1)]) == -a
    assert make_basic(2, [(-3, 0), (0, 2), (5, 5)]) == a


def test_boundary_one_dimensional():
    assert not boundary(make_basic(1, [(1,), (-2,)]))


def test_boundary_of_degree_zero():
    with pytest.raises(SharblyError, match="cannot take boundary"):
        boundary(z1())


def test_boundary_of_z3_has_six_faces():
    d = z3().boundary()
    assert d.degree == 2 and len(d) == 6


def test_boundary_squared_on_random_chains(rng):
    for _ in range(30):
        n = rng.randint(1, 4)
        z = Chain(n, 2)
        for _ in range(3):
            z += make_basic(n, random_columns(n, n + 2, rng), rng.randint(-3, 3))
        assert not boundary(boundary(z))


def test_compose_z3_z1_is_displayed_matrix():
    expected = from_matrix([[1, 0, 0, 1, 0, 1, 0],
                            [0, 1, 0, -1, 1, 0, 0],
                            [0, 0, 1, 0, -1, -1, 0],
                            [0, 0, 0, 0, 0, 0, 1]])
    assert compose(z3(), z1()) == expected


def test_compose_z1_z1():
    assert compose(z1(), z1()) == make_basic(2, [(1, 0), (0, 1)])


def test_compose_z2_z2_nonzero_before_group_reduction():
    # it only vanishes in the coinvariants; see test_coinvariants
    assert len(compose(z2(), z2())) == 1


def test_arithmetic_and_group_mismatch():
    a, b = z2(), z2() * 3
    assert a + a + a == b
    assert not (b - 3 * a)
    with pytest.raises(SharblyError):
        a + z3()


def test_json_roundtrip(tmp_path):
    z = compose(z3(), z1()) * "2/3"
    assert chain_from_json(z.dumps()) == z
    path = tmp_path / "z.json"
    save_chain(z, path)
    assert load_chain(path) == z
    data = json.loads(path.read_text())
    assert data["terms"][0]["coeff"] == "2/3"


def test_json_wrong_column_count():
    with pytest.raises(SharblyError):
        chain_from_json({"n": 2, "degree": 1, "terms": [{"coeff": "1", "cols": [[1, 0], [0, 1]]}]})
