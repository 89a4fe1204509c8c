"""Sandpile groups and spanning trees of polygon chains, rings and twisted rings."""

import sys

from .graph import MultiGraph, PolygonSpec, SpecError, Topology, build
from .groups import (
    AbelianGroup,
    CrossCheckError,
    compare_methods,
    compute_group,
    sandpile_group,
    spanning_trees,
)
from .linalg import IntegerMatrix, determinant, determinant_divisors, snf
from .relations import UnsupportedError

# tree counts run to thousands of digits and are serialized as decimal strings
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
