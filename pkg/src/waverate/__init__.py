"""Numerical multiresolution-analysis toolkit.

Builds concrete wavelet families, evaluates their expansions and projection
kernels, and runs the convergence-rate and Sobolev-criterion experiments.
"""

from .grids import DecayHint, DyadicGrid, SampledFunction, default_level, sample
from .filters import FilterPair, daubechies_filter, haar_filter
from .families import (
    MRAFamily,
    cascade_scaling,
    check_family_invariants,
    derive_wavelet,
    evaluate_dilate,
    make_family,
    parse_family_spec,
)

__all__ = [
    "DecayHint",
    "DyadicGrid",
    "SampledFunction",
    "FilterPair",
    "MRAFamily",
    "cascade_scaling",
    "check_family_invariants",
    "daubechies_filter",
    "default_level",
    "derive_wavelet",
    "evaluate_dilate",
    "haar_filter",
    "make_family",
    "parse_family_spec",
    "sample",
]
