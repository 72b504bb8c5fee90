"""Exact sharbly complexes for SL_n(Z): chains, coinvariants, products of cosharblies."""
from .chains import BasicSharbly, Chain, SharblyError, boundary, compose, from_matrix, make_basic
from .cocycle import (NumericValue, SymbolicPairing, mu_trivial, pair, pair_symbolic,
                      parity_of_cosharbly, product, volume_cocycle)
from .coinvariants import canonical_form, is_cycle, parity_of_cycle, reduce
from .named import build_named
from .pliable import DepthChart, depth_chart, pliable_subsets

__all__ = [
    "BasicSharbly", "Chain", "SharblyError", "boundary", "compose", "from_matrix", "make_basic",
    "NumericValue", "SymbolicPairing", "mu_trivial", "pair", "pair_symbolic",
    "parity_of_cosharbly", "product", "volume_cocycle",
    "canonical_form", "is_cycle", "parity_of_cycle", "reduce",
    "build_named", "DepthChart", "depth_chart", "pliable_subsets",
]
