from property_suites import (boundary_squared, canonical_invariance, cocycle_residual,
                             product_independence)


def test_boundary_squared_sample():
    assert boundary_squared(40, seed=1) == []


def test_canonical_invariance_sample():
    assert canonical_invariance(20, max_n=5, seed=1) == []


def test_cocycle_residual_c2_sample():
    assert cocycle_residual(2, 10, seed=1) == []


def test_cocycle_residual_c3_sample():
    assert cocycle_residual(3, 3, seed=1) == []


def test_product_independence_sample():
    assert product_independence(9, seed=1) == []
